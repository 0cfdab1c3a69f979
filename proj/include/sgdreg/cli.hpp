// Copyright 2026 The sgdreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace sgdreg {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitDivergence = 4;

// Each subcommand derives its working seed as derive_seed(master, offset).
inline constexpr uint64_t kSeedOffsetGenerate = 0x10;
inline constexpr uint64_t kSeedOffsetTrain = 0x20;
inline constexpr uint64_t kSeedOffsetStability = 0x30;
inline constexpr uint64_t kSeedOffsetBounds = 0x40;
inline constexpr uint64_t kSeedOffsetSweep = 0x50;

int run_cli(int argc, char** argv);

}  // namespace sgdreg
