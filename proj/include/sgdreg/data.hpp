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

// Synthetic data on low-dimensional manifolds embedded in R^d, with noiseless
// targets, and strict CSV persistence.

#pragma once

#include <cstdint>
#include <string>

#include "sgdreg/common.hpp"

namespace sgdreg {

enum class ManifoldKind { kCircle, kTorus, kSmoothCurve };
enum class TargetKind { kLinear, kTrig, kCustom };

std::string to_string(ManifoldKind k);
std::string to_string(TargetKind t);
ManifoldKind manifold_kind_from_string(const std::string& s);
TargetKind target_kind_from_string(const std::string& s);

struct ManifoldSpec {
  int ambient_dim = 2;
  ManifoldKind kind = ManifoldKind::kCircle;
  // kCustom marks data whose targets come from a loaded table; it cannot be
  // generated.
  TargetKind target = TargetKind::kTrig;

  int intrinsic_dim() const { return kind == ManifoldKind::kTorus ? 2 : 1; }
};

struct Dataset {
  Matrix points;  // n x d
  Vector targets;
};

// A fixed embedded manifold and target f*. All randomness of the embedding
// (orthonormal frame, curve harmonics, linear coefficients) comes from the seed.
//
//   circle:       cos t q1 + sin t q2                               (||x|| = 1)
//   torus:        (cos s q1 + sin s q2 + cos t q3 + sin t q4)/sqrt2 (||x|| = 1)
//   smooth curve: sum_{j<=J} (cos jt q_{2j-1} + sin jt q_{2j}) / sqrt(J),
//                 J = min(5, d/2)                                   (||x|| = 1)
//
// Targets: linear c.x with ||c|| = 1; trig sin(a) + 0.5 cos(2a) in the chart
// angle a = atan2(q2.x, q1.x), plus 0.5 sin(b), b = atan2(q4.x, q3.x), on the torus.
class Manifold {
 public:
  Manifold(const ManifoldSpec& spec, uint64_t seed);

  const ManifoldSpec& spec() const { return spec_; }
  Vector sample(Rng& rng) const;
  double target(const Eigen::Ref<const Vector>& x) const;
  Vector target_gradient(const Eigen::Ref<const Vector>& x) const;
  const Matrix& frame() const { return frame_; }

 private:
  ManifoldSpec spec_;
  Matrix frame_;                 // d x d orthonormal
  Vector linear_;                // linear target coefficients
  int harmonics_ = 0;
};

// i.i.d. draws from the data distribution, independent of the training draw.
class FreshSampler {
 public:
  FreshSampler(Manifold manifold, uint64_t seed) : manifold_(std::move(manifold)), rng_(seed) {}
  Vector draw() { return manifold_.sample(rng_); }
  Dataset draw(int count);
  const Manifold& manifold() const { return manifold_; }

 private:
  Manifold manifold_;
  Rng rng_;
};

struct Generated {
  Dataset data;
  FreshSampler fresh;
};

// Training draw from stream 0 of the seed; the fresh sampler uses stream 1.
Generated generate(const ManifoldSpec& spec, int n, uint64_t seed);

enum class CsvFloatMode { kDecimal, kHex };

// One row per sample: d feature columns then the target; no header.
void save_csv(const std::string& path, const Dataset& data, CsvFloatMode mode = CsvFloatMode::kDecimal);
Dataset load_csv(const std::string& path);

// Plain numeric matrix (e.g. per-sample gradients), no header.
Matrix load_matrix_csv(const std::string& path);
void save_matrix_csv(const std::string& path, const Matrix& m, CsvFloatMode mode = CsvFloatMode::kDecimal);

}  // namespace sgdreg
