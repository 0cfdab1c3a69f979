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

// Linear stability of SGD around an interpolating minimum.
//
// With a_i the per-sample parameter gradients and H_i = a_i a_i^T, one step of
// the linearized dynamics is W <- M_J W, M_J = I - (eta/B) sum_{i in J} H_i,
// for a uniformly random B-subset J. The k-th moment E W^{(x)k} evolves under
// T_k = E_J M_J^{(x)k}; its spectral radius decides k-th order stability.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgdreg/common.hpp"
#include "sgdreg/tensor.hpp"

namespace sgdreg {

class GradientSet {
 public:
  // rows(i) = a_i; n x w.
  explicit GradientSet(Matrix rows);

  int n() const { return static_cast<int>(rows_.rows()); }
  int w() const { return static_cast<int>(rows_.cols()); }
  const Matrix& rows() const { return rows_; }
  // H = (1/n) sum_i a_i a_i^T.
  Matrix mean_hessian() const;

 private:
  Matrix rows_;
};

enum class SamplingMode { kExact, kMonteCarlo };

struct SgdConfig {
  double eta = 0.1;
  int batch = 1;
  int order = 2;
  uint64_t seed = 0;
  SamplingMode mode = SamplingMode::kExact;
  long num_batches = 10'000;
  double enumeration_cap = 1e5;
  CompressOptions compression{};
};

void validate(const GradientSet& g, const SgdConfig& cfg);

// v - (eta/B) sum_{i in batch} (a_i . v) a_i.
Vector apply_batch_matrix(const GradientSet& g, std::span<const int> batch, double eta,
                          const Eigen::Ref<const Vector>& v);

// Maps every term (c, v) to (c, M_J v).
SymTensor apply_batch_operator(const GradientSet& g, std::span<const int> batch, const SymTensor& a,
                               const SgdConfig& cfg);

// The batches the expected operator averages over, with weights summing to 1.
// Exact mode enumerates all C(n, B) subsets; Monte-Carlo mode draws
// cfg.num_batches subsets from cfg.seed and merges repeats into weights.
struct BatchSet {
  std::vector<std::vector<int>> batches;
  std::vector<double> weights;
};
BatchSet batch_set(const GradientSet& g, const SgdConfig& cfg);

struct ExpectedApplication {
  SymTensor tensor;
  double compression_residual = 0.0;
};

// T_k A. Exact mode compresses only when the rank exceeds the term budget;
// Monte-Carlo mode always compresses (best effort, residual reported).
ExpectedApplication apply_expected_operator(const GradientSet& g, const SymTensor& a,
                                            const SgdConfig& cfg);
ExpectedApplication apply_expected_operator(const GradientSet& g, const SymTensor& a,
                                            const SgdConfig& cfg, const BatchSet& batches);

// Entry cap for the explicit w^k x w^k operator (w^k <= 4096).
inline constexpr std::size_t kDefaultOperatorCap = std::size_t{1} << 24;

// E_J M_J^{(x)k} as a dense matrix in row-major multi-index order.
Matrix dense_operator(const GradientSet& g, const SgdConfig& cfg,
                      std::size_t cap = kDefaultOperatorCap);

// Orthonormal basis of the symmetric subspace of (R^w)^{(x)k}: one column per
// multiset of indices, entries 1/sqrt(#distinct permutations).
Matrix symmetric_basis(int dim, int order);

struct DenseSpectrum {
  double radius = 0.0;             // max |eig| on the symmetric subspace
  double full_space_radius = 0.0;  // max |eig| on all of (R^w)^{(x)k}
  std::vector<double> dominant;    // unit eigentensor for `radius`, w^k entries
};
DenseSpectrum dense_spectrum(const GradientSet& g, const SgdConfig& cfg,
                             std::size_t cap = kDefaultOperatorCap);

enum class StabilityMethod { kDenseOracle, kPowerIteration, kMonteCarlo };
std::string to_string(StabilityMethod m);

struct StabilityOptions {
  StabilityMethod method = StabilityMethod::kDenseOracle;
  double stable_tol = 1e-9;
  double convergence_tol = 1e-10;
  int max_iterations = 5000;
  std::size_t operator_cap = kDefaultOperatorCap;
};

struct StabilityVerdict {
  double spectral_radius_estimate = 0.0;
  bool stable = true;
  StabilityMethod method = StabilityMethod::kDenseOracle;
  int iterations_used = 0;
  double tolerance = 1e-9;
  bool inconclusive = false;
  std::optional<double> full_space_radius;
  // Even k only: whether the dominant eigentensor passes the membership test
  // for sums of nonnegative rank-one powers (k = 2: exact PSD test; k >= 4:
  // sampled sign test of the form, a necessary condition).
  std::optional<bool> dominant_in_cone;
  double max_compression_residual = 0.0;
};

// kMonteCarlo runs power iteration on the operator averaged over a fixed
// seeded sample of batches.
StabilityVerdict check_stability(const GradientSet& g, const SgdConfig& cfg,
                                 const StabilityOptions& options = {});

struct K2ClosedForm {
  double radius_kron = 0.0;
  double radius_wu = 0.0;
  double sharpness = 0.0;
  double nonuniformity = 0.0;
};
K2ClosedForm k2_closed_form(const GradientSet& g, double eta, int batch,
                            std::size_t cap = kDefaultOperatorCap);

struct MomentBoundReport {
  std::vector<double> per_coordinate;  // (1/n) sum_i a_{ij}^{2k}
  double rhs_theorem = 0.0;            // 2^k B^{k-1} / eta^k
  double rhs_proof = 0.0;              // 2 (2B)^{k-1} / eta^k
  double summed_lhs = 0.0;
  double summed_rhs = 0.0;             // 2 w (2B)^{k-1} / eta^k
  bool satisfied = true;               // every coordinate <= rhs_proof
};
MomentBoundReport moment_bound_check(const GradientSet& g, double eta, int batch, int k);

struct HolderReport {
  double lhs = 0.0;  // (1/n) sum_i ||a_i||_{2k}
  double rhs = 0.0;  // (w/B)^{1/(2k)} sqrt(2B/eta)
};
HolderReport holder_corollary(const GradientSet& g, double eta, int batch, int k);

struct InitialDistribution {
  enum class Kind { kPointMass, kGaussian, kRademacher };
  Kind kind = Kind::kPointMass;
  Vector point;                  // kPointMass
  double scale = 1.0;            // kGaussian: N(0, scale^2 I)
  std::vector<Vector> vectors;   // kRademacher: W0 = sum_j s_j v_j, s_j = +-1
};

struct SimulationResult {
  // Plug-in estimate ||(1/R) sum_r W_r^{(x)k}||_F per step, t = 0..steps.
  std::vector<double> norms;
  // Unbiased estimate of ||E W^{(x)k}||_F (drops the r = s diagonal of the
  // Gram sum); NaN where the unbiased squared norm is negative.
  std::vector<double> unbiased_norms;
  bool diverged = false;
};

SimulationResult simulate_linearized(const GradientSet& g, const SgdConfig& cfg,
                                     const InitialDistribution& init, int horizon, int replicas);

// Least-squares slope of log(values) over the last half of the sequence.
double log_growth_rate(std::span<const double> values);

}  // namespace sgdreg
