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

// JSON persistence: model checkpoints, dataset sidecars, reports and run
// manifests. Every document carries "schema_version": 1.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgdreg/data.hpp"
#include "sgdreg/model.hpp"
#include "sgdreg/sobolev.hpp"
#include "sgdreg/stability.hpp"

namespace sgdreg {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
const char* tool_version();

// "%a" rendering, parsed back with strtod.
std::string hex_double(double v);
double parse_hex_double(const std::string& s);

Json read_json(const std::string& path);
// Two-space indent, trailing newline.
void write_json(const std::string& path, const Json& doc);

// Layer shapes, activations and the flat parameter vector, both as decimal
// numbers and as hex-float strings (the loader uses the latter).
Json model_to_json(const MlpModel& model);
MlpModel model_from_json(const Json& doc);
void save_model(const std::string& path, const MlpModel& model);
MlpModel load_model(const std::string& path);

// <csv>.meta.json: {d, n, spec, seed}.
struct DatasetMeta {
  ManifoldSpec spec;
  int n = 0;
  uint64_t seed = 0;
};
std::string sidecar_path(const std::string& csv_path);
void write_dataset_sidecar(const std::string& csv_path, const DatasetMeta& meta);
// Throws ParseError when the sidecar is missing or malformed.
DatasetMeta read_dataset_sidecar(const std::string& csv_path);

Json to_json(const BoundReport& r);
Json to_json(const StabilityVerdict& v);
Json to_json(const K2ClosedForm& c);
Json to_json(const MomentBoundReport& m);
Json to_json(const HolderReport& h);

struct RunManifest {
  std::string command;
  Json config = Json::object();
  uint64_t seed = 0;
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;
};
Json to_json(const RunManifest& m);

}  // namespace sgdreg
