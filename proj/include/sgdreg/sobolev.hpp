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

// Sobolev seminorms of a trained model, the W1-perturbation construction,
// data-geometry probes (covering, scattering, union-of-balls volume) and the
// calculators that compare stability-derived upper bounds with measured
// quantities.
//
// The local smoothness constant C cannot be computed; every report uses a
// sampled lower estimate C_hat and is labeled "empirical-C".

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sgdreg/common.hpp"
#include "sgdreg/model.hpp"

namespace sgdreg {

// ((1/n) sum_i ||grad_x f(x_i)||_{2k}^{2k})^{1/(2k)}; the same number as
// g_norms(model, points, k).g_x.
double seminorm_finite(const MlpModel& model, const Matrix& points, int k);

// min_i ||x_i||_p over the rows of points.
double min_row_norm(const Matrix& points, double p);

// Minimal Frobenius-norm V with V x_star = W1 (x - x_star), i.e.
// V = W1 (x - x_star) x_star^T / ||x_star||^2.
Matrix perturbation_matrix(const Matrix& w1, const Vector& x_star, const Vector& x);

struct SmoothnessProbe {
  double c_hat = 0.0;
  double delta_approx = 0.0;
  int k = 1;
  int samples = 0;
  // Fraction of sampled W' whose ratio exceeds 1.
  double violation_rate = 0.0;
};

// Samples W' uniformly in the 2-norm ball of radius delta_approx around the
// full parameter vector and records
// max ||grad_W f(x_star, W')||_{2k} / (||grad_W f(x_star, W)||_{2k} + 1).
SmoothnessProbe smoothness_probe(const MlpModel& model, const Vector& x_star, double delta_approx, int k,
                                 int samples, uint64_t seed);

// Maximum of smoothness_probe over every row of points (seed split per row).
SmoothnessProbe smoothness_probe_all(const MlpModel& model, const Matrix& points, double delta_approx, int k,
                                     int samples, uint64_t seed);

struct CoveringEstimate {
  double eps_hat = 0.0;
  double wilson_lower = 0.0;  // 99% Wilson score interval
  double wilson_upper = 0.0;
  long trials = 0;
  long misses = 0;
};

// Fraction of sampler draws farther than delta from every training point.
CoveringEstimate covering_check(const Matrix& points, double delta, const std::function<Vector()>& sampler,
                                long trials);

struct UnionVolume {
  double volume = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
};

// Volume of a d-ball.
double ball_volume(int dim, double radius);

// Volume of the union of B(x_i, delta). Draws a center uniformly, a point
// uniformly in its ball, and averages n V_ball / kappa(x); sampling continues
// until the relative standard error is at most rel_target or max_samples.
UnionVolume union_volume(const Matrix& points, double delta, uint64_t seed, double rel_target = 0.02,
                         long min_samples = 10000, long max_samples = 1000000);

struct ScatterReport {
  int k_max = 0;           // largest kappa found
  double k_integral = 0.0;  // (1/V) int kappa = n V_ball / V
  bool exact = false;      // k_max came from the subset search (n <= 12)
  UnionVolume volume;
};

// Evaluates kappa at every point, every pairwise midpoint and uniform draws
// from the union; for n <= 12 additionally searches all subsets for a common
// point of their balls (Badoiu-Clarkson enclosing-ball iteration).
ScatterReport scattered_check(const Matrix& points, double delta, uint64_t seed, long uniform_draws = 10000);

struct BoundParams {
  double eta = 0.1;
  int batch = 1;
  int k = 1;
  double c_hat = 1.0;
  double delta = 0.0;
  double delta_approx = 0.0;
  int scatter_k = 1;      // K of the scattered condition
  double eps2 = -1.0;     // < 0: estimate from the sampler
  long samples = 10000;  // Monte-Carlo budget
  uint64_t seed = 0;
};

struct MonteCarloInfo {
  long samples = 0;
  double stderr_ = 0.0;
  uint64_t seed = 0;
};

struct BoundReport {
  std::string bound;
  double rhs = 0.0;
  double lhs = 0.0;
  bool satisfied = false;
  bool in_regime = true;
  std::string regime_note;
  std::string c_label;  // "empirical-C" when C_hat enters the bound
  std::vector<std::pair<std::string, double>> inputs;
  std::optional<MonteCarloInfo> mc;
  // Secondary comparisons (per-point forms, intermediate bounds).
  std::vector<std::pair<std::string, double>> extras;
};

// Stable SGD constant factor (m w / B)^{1/(2k)} sqrt(2B/eta).
double stability_factor(double multiplier, const BoundParams& p, std::size_t w);

BoundReport sobolev_emp_bound(const MlpModel& model, const Matrix& points, const BoundParams& p);

// Gradient bound on the union of delta-balls. lhs is the largest sampled
// ||grad_x f||_{2k}; extras carry the per-point form with each sample's
// own center.
BoundReport neighborhood_grad_bound(const MlpModel& model, const Matrix& points, const BoundParams& p);

// Seminorm on the union of delta-balls. Throws ArgumentError when the
// scattered check finds more than p.scatter_k overlapping balls.
BoundReport sob_neighborhood_bound(const MlpModel& model, const Matrix& points, const BoundParams& p);

struct TargetOracle {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

// Population error bound. M1, M2 are 1.5x the sampled maxima of |f|, |f*|
// and ||grad f*||_2 over the Monte-Carlo draws.
BoundReport generalization_bound(const MlpModel& model, const TargetOracle& target, const Matrix& points,
                                 const std::function<Vector()>& sampler, const BoundParams& p);

// Worst |f(x) - f(x_i)| over ||x - x_i|| <= delta, probed by random points
// and projected normalized-gradient ascent.
BoundReport robustness_bound(const MlpModel& model, const Matrix& points, const BoundParams& p,
                             int random_per_point = 16, int ascent_steps = 20);

// "sobolev-emp", "sob-2k", "neighbor-grad", "gen1", "robust".
const std::vector<std::string>& bound_tags();

}  // namespace sgdreg
