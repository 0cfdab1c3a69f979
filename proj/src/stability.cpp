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

#include "sgdreg/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <Eigen/Dense>

namespace sgdreg {

namespace {

constexpr double kDivergence = 1e300;
// Seed streams; fixed so that verdicts are reproducible across releases.
constexpr uint64_t kStreamBatches = 0x4d43;
constexpr uint64_t kStreamPowerStart = 0x5057;
constexpr uint64_t kStreamConeTest = 0x434f;

double max_abs_eig(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix batch_matrix(const GradientSet& g, std::span<const int> batch, double eta) {
  Matrix m = Matrix::Identity(g.w(), g.w());
  const double s = eta / static_cast<double>(batch.size());
  for (int i : batch) m.noalias() -= s * g.rows().row(i).transpose() * g.rows().row(i);
  return m;
}

// Kronecker power M^{(x)k} in row-major multi-index order.
Matrix kron_power(const Matrix& m, int k) {
  Matrix out = m;
  for (int p = 1; p < k; ++p) {
    Matrix next(out.rows() * m.rows(), out.cols() * m.cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        next.block(i * m.rows(), j * m.cols(), m.rows(), m.cols()) = out(i, j) * m;
    out.swap(next);
  }
  return out;
}

void check_batch(const GradientSet& g, std::span<const int> batch) {
  if (batch.empty()) throw ArgumentError("batch is empty");
  std::vector<int> sorted(batch.begin(), batch.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ArgumentError("batch has repeated indices");
  if (sorted.front() < 0 || sorted.back() >= g.n()) throw ArgumentError("batch index out of range");
}

}  // namespace

GradientSet::GradientSet(Matrix rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) throw DimensionError("GradientSet: need n >= 1, w >= 1");
  if (!rows_.allFinite()) throw ArgumentError("GradientSet: non-finite gradient entry");
}

Matrix GradientSet::mean_hessian() const {
  return rows_.transpose() * rows_ / static_cast<double>(rows_.rows());
}

void validate(const GradientSet& g, const SgdConfig& cfg) {
  if (!(cfg.eta > 0.0) || !std::isfinite(cfg.eta)) throw ArgumentError("eta must be > 0");
  if (cfg.batch < 1 || cfg.batch > g.n()) throw ArgumentError("batch must satisfy 1 <= B <= n");
  if (cfg.order < 1) throw ArgumentError("order must be >= 1");
  if (cfg.mode == SamplingMode::kMonteCarlo && cfg.num_batches < 1)
    throw ArgumentError("num_batches must be >= 1");
}

Vector apply_batch_matrix(const GradientSet& g, std::span<const int> batch, double eta,
                          const Eigen::Ref<const Vector>& v) {
  Vector out = v;
  const double s = eta / static_cast<double>(batch.size());
  for (int i : batch) {
    const auto a = g.rows().row(i);
    out.noalias() -= (s * a.dot(v)) * a.transpose();
  }
  return out;
}

SymTensor apply_batch_operator(const GradientSet& g, std::span<const int> batch, const SymTensor& a,
                               const SgdConfig& cfg) {
  validate(g, cfg);
  if (a.order() != cfg.order || a.dim() != g.w())
    throw DimensionError("apply_batch_operator: tensor order/dim do not match config/gradients");
  check_batch(g, batch);
  std::vector<RankOneTerm> out;
  out.reserve(a.rank());
  for (const auto& t : a.terms()) out.push_back({t.coeff, apply_batch_matrix(g, batch, cfg.eta, t.vec)});
  return SymTensor(a.order(), a.dim(), std::move(out));
}

BatchSet batch_set(const GradientSet& g, const SgdConfig& cfg) {
  validate(g, cfg);
  BatchSet set;
  if (cfg.mode == SamplingMode::kExact) {
    const double count = binomial(g.n(), cfg.batch);
    if (count > cfg.enumeration_cap) {
      throw CapacityError("C(" + std::to_string(g.n()) + "," + std::to_string(cfg.batch) +
                          ") batches exceed the enumeration cap; use monte-carlo mode");
    }
    for_each_combination(g.n(), cfg.batch, [&](const std::vector<int>& b) { set.batches.push_back(b); });
    set.weights.assign(set.batches.size(), 1.0 / static_cast<double>(set.batches.size()));
    return set;
  }
  Rng rng(derive_seed(cfg.seed, kStreamBatches));
  std::map<std::vector<int>, long> counts;
  for (long i = 0; i < cfg.num_batches; ++i) ++counts[rng.subset(g.n(), cfg.batch)];
  for (const auto& [b, c] : counts) {
    set.batches.push_back(b);
    set.weights.push_back(static_cast<double>(c) / static_cast<double>(cfg.num_batches));
  }
  return set;
}

ExpectedApplication apply_expected_operator(const GradientSet& g, const SymTensor& a,
                                            const SgdConfig& cfg) {
  return apply_expected_operator(g, a, cfg, batch_set(g, cfg));
}

ExpectedApplication apply_expected_operator(const GradientSet& g, const SymTensor& a,
                                            const SgdConfig& cfg, const BatchSet& batches) {
  validate(g, cfg);
  if (a.order() != cfg.order || a.dim() != g.w())
    throw DimensionError("apply_expected_operator: tensor order/dim do not match config/gradients");

  const std::size_t nb = batches.batches.size();
  std::vector<std::vector<RankOneTerm>> parts(nb);
  parallel_for(nb, [&](std::size_t j) {
    auto& part = parts[j];
    part.reserve(a.rank());
    for (const auto& t : a.terms())
      part.push_back({t.coeff * batches.weights[j],
                      apply_batch_matrix(g, batches.batches[j], cfg.eta, t.vec)});
  });

  const CompressOptions& copt = cfg.compression;
  const bool chunked = cfg.mode == SamplingMode::kMonteCarlo && a.order() >= 3;
  if (!chunked) {
    std::vector<RankOneTerm> all;
    all.reserve(nb * a.rank());
    for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(all));
    SymTensor full(a.order(), a.dim(), std::move(all));
    if (cfg.mode == SamplingMode::kExact && full.rank() <= static_cast<std::size_t>(copt.max_terms))
      return {std::move(full), 0.0};
    CompressResult r = compress_best_effort(full, copt);
    return {std::move(r.tensor), r.relative_residual};
  }

  // Higher-order Monte-Carlo averages are folded in chunk by chunk so a single
  // greedy pass never sees the full C x rank term list.
  const std::size_t chunk = std::max<std::size_t>(256, 4 * static_cast<std::size_t>(copt.max_terms));
  SymTensor running(a.order(), a.dim());
  double worst = 0.0;
  std::vector<RankOneTerm> pending;
  auto flush = [&] {
    std::vector<RankOneTerm> merged = running.terms();
    std::move(pending.begin(), pending.end(), std::back_inserter(merged));
    pending.clear();
    CompressResult r = compress_best_effort(SymTensor(a.order(), a.dim(), std::move(merged)), copt);
    worst = std::max(worst, r.relative_residual);
    running = std::move(r.tensor);
  };
  for (auto& p : parts) {
    std::move(p.begin(), p.end(), std::back_inserter(pending));
    if (pending.size() >= chunk) flush();
  }
  if (!pending.empty() || running.rank() > static_cast<std::size_t>(copt.max_terms)) flush();
  return {std::move(running), worst};
}

Matrix dense_operator(const GradientSet& g, const SgdConfig& cfg, std::size_t cap) {
  validate(g, cfg);
  const std::size_t n = dense_size(g.w(), cfg.order);
  if (n == std::numeric_limits<std::size_t>::max() || n > cap / n) {
    throw CapacityError("dense_operator: (" + std::to_string(g.w()) + "^" + std::to_string(cfg.order) +
                        ")^2 entries exceed cap " + std::to_string(cap));
  }
  const BatchSet set = batch_set(g, cfg);
  const auto dim = static_cast<Eigen::Index>(n);
  Matrix t = Matrix::Zero(dim, dim);
  for (std::size_t j = 0; j < set.batches.size(); ++j)
    t.noalias() += set.weights[j] * kron_power(batch_matrix(g, set.batches[j], cfg.eta), cfg.order);
  return t;
}

Matrix symmetric_basis(int dim, int order) {
  const std::size_t n = dense_size(dim, order);
  std::map<std::vector<int>, std::vector<std::size_t>> classes;
  std::vector<int> idx(static_cast<std::size_t>(order));
  for (std::size_t f = 0; f < n; ++f) {
    std::size_t rem = f;
    for (int p = order - 1; p >= 0; --p) {
      idx[static_cast<std::size_t>(p)] = static_cast<int>(rem % static_cast<std::size_t>(dim));
      rem /= static_cast<std::size_t>(dim);
    }
    std::vector<int> key = idx;
    std::sort(key.begin(), key.end());
    classes[key].push_back(f);
  }
  Matrix q = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(classes.size()));
  Eigen::Index col = 0;
  for (const auto& [key, members] : classes) {
    const double v = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (std::size_t f : members) q(static_cast<Eigen::Index>(f), col) = v;
    ++col;
  }
  return q;
}

DenseSpectrum dense_spectrum(const GradientSet& g, const SgdConfig& cfg, std::size_t cap) {
  const Matrix t = dense_operator(g, cfg, cap);
  const Matrix q = symmetric_basis(g.w(), cfg.order);
  Matrix ts = q.transpose() * t * q;
  ts = 0.5 * (ts + ts.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(ts);
  Eigen::Index best = 0;
  eig.eigenvalues().cwiseAbs().maxCoeff(&best);
  DenseSpectrum out;
  out.radius = std::abs(eig.eigenvalues()[best]);
  const Vector dom = q * eig.eigenvectors().col(best);
  out.dominant.assign(dom.data(), dom.data() + dom.size());
  out.full_space_radius = max_abs_eig(0.5 * (t + t.transpose()));
  return out;
}

std::string to_string(StabilityMethod m) {
  switch (m) {
    case StabilityMethod::kDenseOracle: return "dense-oracle";
    case StabilityMethod::kPowerIteration: return "power-iteration";
    case StabilityMethod::kMonteCarlo: return "monte-carlo";
  }
  return "unknown";
}

namespace {

// Membership test of a dense symmetric tensor in the cone of nonnegative
// (or, up to sign, nonpositive) rank-one power sums.
bool dense_in_cone(const std::vector<double>& entries, int w, int k, uint64_t seed) {
  if (k == 2) {
    Matrix m = Eigen::Map<const Matrix>(entries.data(), w, w);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
    const Vector& ev = eig.eigenvalues();
    const double slack = 1e-9 * ev.cwiseAbs().maxCoeff();
    return ev.minCoeff() >= -slack || ev.maxCoeff() <= slack;
  }
  Rng rng(seed);
  double lo = 0.0, hi = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const Vector x = rng.normal_vector(w).normalized();
    std::vector<double> cur = entries;
    for (int p = 0; p < k; ++p) {
      std::vector<double> next(cur.size() / static_cast<std::size_t>(w), 0.0);
      for (std::size_t i = 0; i < next.size(); ++i)
        for (int l = 0; l < w; ++l) next[i] += cur[i * static_cast<std::size_t>(w) + static_cast<std::size_t>(l)] * x[l];
      cur.swap(next);
    }
    lo = std::min(lo, cur[0]);
    hi = std::max(hi, cur[0]);
  }
  const double slack = 1e-9 * std::max(std::abs(lo), std::abs(hi));
  return lo >= -slack || hi <= slack;
}

StabilityVerdict power_iteration(const GradientSet& g, const SgdConfig& cfg, const StabilityOptions& opt) {
  StabilityVerdict v;
  v.method = opt.method;
  v.tolerance = opt.stable_tol;
  const BatchSet batches = batch_set(g, cfg);
  const int k = cfg.order;
  const bool even = k % 2 == 0;

  Rng rng(derive_seed(cfg.seed, kStreamPowerStart));
  std::vector<RankOneTerm> start;
  const int r0 = std::min(cfg.compression.max_terms, 8);
  for (int i = 0; i < r0; ++i) {
    const double c = even ? rng.uniform(0.5, 1.5) : rng.normal();
    start.push_back({c, rng.normal_vector(g.w())});
  }
  SymTensor a(k, g.w(), std::move(start));
  double nrm = frob_norm(a);
  if (nrm == 0.0) throw NumericError("power iteration: degenerate random start");
  a = a.scaled(1.0 / nrm);

  double prev = -1.0;
  v.inconclusive = true;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    ExpectedApplication next = apply_expected_operator(g, a, cfg, batches);
    v.max_compression_residual = std::max(v.max_compression_residual, next.compression_residual);
    SymTensor b = std::move(next.tensor);
    if (even) {
      std::vector<RankOneTerm> kept;
      for (const auto& t : b.terms())
        if (t.coeff > 0.0) kept.push_back(t);
      b = SymTensor(k, g.w(), std::move(kept));
    }
    const double ratio = frob_norm(b);
    v.iterations_used = it;
    v.spectral_radius_estimate = ratio;
    if (!std::isfinite(ratio)) throw NumericError("power iteration: non-finite norm");
    if (ratio == 0.0) {
      v.inconclusive = false;
      break;
    }
    if (prev >= 0.0 && std::abs(ratio - prev) <= opt.convergence_tol * ratio) {
      v.inconclusive = false;
      break;
    }
    prev = ratio;
    a = b.scaled(1.0 / ratio);
  }
  v.stable = v.spectral_radius_estimate <= 1.0 + opt.stable_tol;
  return v;
}

}  // namespace

StabilityVerdict check_stability(const GradientSet& g, const SgdConfig& cfg, const StabilityOptions& options) {
  validate(g, cfg);
  if (options.method == StabilityMethod::kDenseOracle) {
    const DenseSpectrum s = dense_spectrum(g, cfg, options.operator_cap);
    StabilityVerdict v;
    v.method = options.method;
    v.tolerance = options.stable_tol;
    v.spectral_radius_estimate = s.radius;
    v.full_space_radius = s.full_space_radius;
    v.stable = s.radius <= 1.0 + options.stable_tol;
    if (cfg.order % 2 == 0)
      v.dominant_in_cone = dense_in_cone(s.dominant, g.w(), cfg.order, derive_seed(cfg.seed, kStreamConeTest));
    return v;
  }
  SgdConfig c = cfg;
  if (options.method == StabilityMethod::kMonteCarlo) c.mode = SamplingMode::kMonteCarlo;
  return power_iteration(g, c, options);
}

K2ClosedForm k2_closed_form(const GradientSet& g, double eta, int batch, std::size_t cap) {
  const int n = g.n();
  const int w = g.w();
  if (n < 2) throw ArgumentError("k2_closed_form: need n >= 2");
  if (batch < 1 || batch > n) throw ArgumentError("k2_closed_form: need 1 <= B <= n");
  if (!(eta > 0.0)) throw ArgumentError("k2_closed_form: eta must be > 0");
  const std::size_t w2 = static_cast<std::size_t>(w) * static_cast<std::size_t>(w);
  if (w2 > cap / w2) throw CapacityError("k2_closed_form: w^2 x w^2 operator exceeds cap");

  const Matrix h = g.mean_hessian();
  const Matrix id = Matrix::Identity(w, w);
  const double c = static_cast<double>(n - batch) / (static_cast<double>(batch) * (n - 1));

  Matrix sigma = -h * h;
  Matrix noise = Matrix::Zero(static_cast<Eigen::Index>(w2), static_cast<Eigen::Index>(w2));
  for (int i = 0; i < n; ++i) {
    const Vector a = g.rows().row(i).transpose();
    const Matrix hi = a * a.transpose();
    sigma += a.squaredNorm() * hi / static_cast<double>(n);
    noise += kron_power(hi, 2);
  }
  noise = noise / static_cast<double>(n) - kron_power(h, 2);
  const Matrix t = kron_power(id - eta * h, 2) + c * eta * eta * noise;

  K2ClosedForm out;
  out.radius_kron = max_abs_eig(0.5 * (t + t.transpose()));
  const Matrix m = id - eta * h;
  const Matrix wu = m * m + eta * eta * c * sigma;
  Eigen::SelfAdjointEigenSolver<Matrix> wu_eig(0.5 * (wu + wu.transpose()), Eigen::EigenvaluesOnly);
  out.radius_wu = wu_eig.eigenvalues().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> h_eig(h, Eigen::EigenvaluesOnly);
  out.sharpness = h_eig.eigenvalues().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> s_eig(0.5 * (sigma + sigma.transpose()), Eigen::EigenvaluesOnly);
  out.nonuniformity = s_eig.eigenvalues().maxCoeff();
  return out;
}

MomentBoundReport moment_bound_check(const GradientSet& g, double eta, int batch, int k) {
  if (!(eta > 0.0) || batch < 1 || k < 1) throw ArgumentError("moment_bound_check: invalid eta/batch/k");
  MomentBoundReport r;
  const double bk = static_cast<double>(batch);
  r.rhs_theorem = std::pow(2.0, k) * std::pow(bk, k - 1) / std::pow(eta, k);
  r.rhs_proof = 2.0 * std::pow(2.0 * bk, k - 1) / std::pow(eta, k);
  r.summed_rhs = g.w() * r.rhs_proof;
  r.per_coordinate.assign(static_cast<std::size_t>(g.w()), 0.0);
  for (int j = 0; j < g.w(); ++j) {
    r.per_coordinate[static_cast<std::size_t>(j)] = pnorm_pow(g.rows().col(j), 2.0 * k) / g.n();
    r.summed_lhs += r.per_coordinate[static_cast<std::size_t>(j)];
    if (r.per_coordinate[static_cast<std::size_t>(j)] > r.rhs_proof) r.satisfied = false;
  }
  return r;
}

HolderReport holder_corollary(const GradientSet& g, double eta, int batch, int k) {
  if (!(eta > 0.0) || batch < 1 || k < 1) throw ArgumentError("holder_corollary: invalid eta/batch/k");
  HolderReport r;
  for (int i = 0; i < g.n(); ++i) r.lhs += pnorm(g.rows().row(i).transpose(), 2.0 * k);
  r.lhs /= g.n();
  r.rhs = std::pow(static_cast<double>(g.w()) / batch, 1.0 / (2.0 * k)) * std::sqrt(2.0 * batch / eta);
  return r;
}

SimulationResult simulate_linearized(const GradientSet& g, const SgdConfig& cfg,
                                     const InitialDistribution& init, int horizon, int replicas) {
  validate(g, cfg);
  if (horizon < 1 || replicas < 1) throw ArgumentError("simulate_linearized: horizon and replicas must be >= 1");
  const int w = g.w();
  const int k = cfg.order;
  const auto r_count = static_cast<std::size_t>(replicas);

  std::vector<Rng> rngs;
  rngs.reserve(r_count);
  for (std::size_t r = 0; r < r_count; ++r) rngs.emplace_back(derive_seed(cfg.seed, r));

  Matrix state(w, replicas);
  for (std::size_t r = 0; r < r_count; ++r) {
    const auto col = static_cast<Eigen::Index>(r);
    switch (init.kind) {
      case InitialDistribution::Kind::kPointMass:
        if (init.point.size() != w) throw DimensionError("simulate_linearized: point has wrong length");
        state.col(col) = init.point;
        break;
      case InitialDistribution::Kind::kGaussian:
        state.col(col) = init.scale * rngs[r].normal_vector(w);
        break;
      case InitialDistribution::Kind::kRademacher: {
        if (init.vectors.empty()) throw ArgumentError("simulate_linearized: empty rademacher set");
        Vector v = Vector::Zero(w);
        for (const auto& u : init.vectors) {
          if (u.size() != w) throw DimensionError("simulate_linearized: vector has wrong length");
          v += (rngs[r].uniform() < 0.5 ? -1.0 : 1.0) * u;
        }
        state.col(col) = v;
        break;
      }
    }
  }

  const std::size_t dense_n = dense_size(w, k);
  const bool use_dense = dense_n <= (std::size_t{1} << 16);
  SimulationResult out;

  auto estimate = [&](double& plug, double& unbiased) {
    long double diag = 0.0L;
    long double total = 0.0L;
    for (std::size_t r = 0; r < r_count; ++r)
      diag += std::pow(static_cast<long double>(state.col(static_cast<Eigen::Index>(r)).squaredNorm()), k);
    if (use_dense) {
      std::vector<long double> sum(dense_n, 0.0L);
      std::vector<double> cur, next;
      for (std::size_t r = 0; r < r_count; ++r) {
        const auto col = state.col(static_cast<Eigen::Index>(r));
        cur.assign(1, 1.0);
        for (int p = 0; p < k; ++p) {
          next.resize(cur.size() * static_cast<std::size_t>(w));
          for (std::size_t i = 0; i < cur.size(); ++i)
            for (int l = 0; l < w; ++l) next[i * static_cast<std::size_t>(w) + static_cast<std::size_t>(l)] = cur[i] * col[l];
          cur.swap(next);
        }
        for (std::size_t i = 0; i < dense_n; ++i) sum[i] += cur[i];
      }
      for (long double s : sum) total += s * s;
    } else {
      std::vector<long double> rows(r_count, 0.0L);
      parallel_for(r_count, [&](std::size_t r) {
        const Vector dots = state.transpose() * state.col(static_cast<Eigen::Index>(r));
        long double s = 0.0L;
        for (Eigen::Index j = 0; j < dots.size(); ++j) s += std::pow(static_cast<long double>(dots[j]), k);
        rows[r] = s;
      });
      for (long double s : rows) total += s;
    }
    const long double rr = static_cast<long double>(replicas);
    plug = std::sqrt(static_cast<double>(std::max(total, 0.0L))) / replicas;
    const long double u = replicas > 1 ? (total - diag) / (rr * (rr - 1.0L)) : total;
    unbiased = u >= 0.0L ? std::sqrt(static_cast<double>(u)) : std::numeric_limits<double>::quiet_NaN();
  };

  for (int t = 0; t <= horizon; ++t) {
    if (!state.allFinite()) {
      out.diverged = true;
      break;
    }
    double plug = 0.0, unbiased = 0.0;
    estimate(plug, unbiased);
    if (!std::isfinite(plug) || plug > kDivergence) {
      out.diverged = true;
      break;
    }
    out.norms.push_back(plug);
    out.unbiased_norms.push_back(unbiased);
    if (t == horizon) break;
    parallel_for(r_count, [&](std::size_t r) {
      const std::vector<int> batch = rngs[r].subset(g.n(), cfg.batch);
      const auto col = static_cast<Eigen::Index>(r);
      state.col(col) = apply_batch_matrix(g, batch, cfg.eta, state.col(col));
    });
  }
  return out;
}

double log_growth_rate(std::span<const double> values) {
  if (values.size() < 2) throw ArgumentError("log_growth_rate: need at least two values");
  const std::size_t start = values.size() / 2;
  const std::size_t m = values.size() - start;
  if (m < 2) throw ArgumentError("log_growth_rate: need at least two values in the last half");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = static_cast<double>(i);
    const double y = std::log(values[start + i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double dm = static_cast<double>(m);
  return (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
}

}  // namespace sgdreg
