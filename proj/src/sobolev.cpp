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

#include "sgdreg/sobolev.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

namespace sgdreg {

namespace {

constexpr uint64_t kStreamNeighbor = 0x4e47;
constexpr uint64_t kStreamVolume = 0x564f;
constexpr uint64_t kStreamScatter = 0x5343;
constexpr uint64_t kStreamSob = 0x5332;
constexpr uint64_t kStreamRobust = 0x5242;
constexpr double kMarginFactor = 1.5;
constexpr double kWilsonZ99 = 2.5758293035489004;
constexpr long kMinGenSamples = 10000;

// Rows of points mapped through the model's effective input (x, or [x; 1]).
Matrix effective_points(const MlpModel& model, const Matrix& points) {
  if (points.rows() < 1) throw ArgumentError("need at least one point");
  if (points.cols() != model.input_dim()) throw DimensionError("point width != model input_dim");
  if (!model.folded_bias()) return points;
  Matrix out(points.rows(), points.cols() + 1);
  out.leftCols(points.cols()) = points;
  out.col(points.cols()).setOnes();
  return out;
}

int kappa(const Matrix& points, const Vector& x, double delta) {
  const double d2 = delta * delta;
  int c = 0;
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    if ((points.row(i).transpose() - x).squaredNorm() <= d2) ++c;
  return c;
}

struct FirstLayerFacts {
  NormInterval w1t;     // ||W1^T||_{2k}
  double w1_spectral;   // ||W1||_2
  double min_norm_2k;   // min_i ||x_i||_{2k} over effective inputs
  double min_norm_2;
};

FirstLayerFacts first_layer_facts(const MlpModel& model, const Matrix& eff, int k) {
  FirstLayerFacts f;
  f.w1t = operator_pnorm(model.first_layer().transpose(), 2.0 * k);
  f.w1_spectral = spectral_norm(model.first_layer());
  f.min_norm_2k = min_row_norm(eff, 2.0 * k);
  f.min_norm_2 = min_row_norm(eff, 2.0);
  if (!(f.min_norm_2k > 0.0)) throw ArgumentError("bound needs min_i ||x_i||_{2k} > 0");
  return f;
}

void validate(const BoundParams& p) {
  if (!(p.eta > 0.0) || !std::isfinite(p.eta)) throw ArgumentError("bound: eta must be finite and > 0");
  if (p.batch < 1) throw ArgumentError("bound: batch must be >= 1");
  if (p.k < 1) throw ArgumentError("bound: k must be >= 1");
  if (!(p.c_hat >= 0.0)) throw ArgumentError("bound: C_hat must be >= 0");
  if (!(p.delta >= 0.0)) throw ArgumentError("bound: delta must be >= 0");
  if (!(p.delta_approx >= 0.0)) throw ArgumentError("bound: delta_approx must be >= 0");
  if (p.samples < 1) throw ArgumentError("bound: samples must be >= 1");
}

void add_common_inputs(BoundReport& r, const MlpModel& model, const Matrix& eff, const BoundParams& p,
                       const FirstLayerFacts& f) {
  r.inputs = {{"eta", p.eta},
              {"batch", static_cast<double>(p.batch)},
              {"k", static_cast<double>(p.k)},
              {"w", static_cast<double>(model.parameter_count())},
              {"n", static_cast<double>(eff.rows())},
              {"d", static_cast<double>(model.input_dim())},
              {"w1t_2k_lower", f.w1t.lower},
              {"w1t_2k_upper", f.w1t.upper},
              {"w1_spectral", f.w1_spectral},
              {"min_norm_2k", f.min_norm_2k}};
}

// delta <= delta_approx * min_i ||x_i||_2 / ||W1||_2.
void check_regime(BoundReport& r, const BoundParams& p, const FirstLayerFacts& f) {
  const double limit = f.w1_spectral > 0.0 ? p.delta_approx * f.min_norm_2 / f.w1_spectral
                                           : std::numeric_limits<double>::infinity();
  r.inputs.emplace_back("c_hat", p.c_hat);
  r.inputs.emplace_back("delta", p.delta);
  r.inputs.emplace_back("delta_approx", p.delta_approx);
  r.inputs.emplace_back("delta_limit", limit);
  r.c_label = "empirical-C";
  r.in_regime = p.delta <= limit;
  if (!r.in_regime) {
    r.regime_note = "delta exceeds delta_approx * min ||x_i||_2 / ||W1||_2; the smoothness probe does not "
                    "cover the perturbations this bound relies on";
  }
}

}  // namespace

double seminorm_finite(const MlpModel& model, const Matrix& points, int k) {
  return g_norms(model, points, k).g_x;
}

double min_row_norm(const Matrix& points, double p) {
  if (points.rows() < 1) throw ArgumentError("min_row_norm: no points");
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < points.rows(); ++i) m = std::min(m, pnorm(points.row(i).transpose(), p));
  return m;
}

Matrix perturbation_matrix(const Matrix& w1, const Vector& x_star, const Vector& x) {
  if (x_star.size() != w1.cols() || x.size() != w1.cols()) throw DimensionError("perturbation_matrix: length mismatch");
  const double s2 = x_star.squaredNorm();
  if (!(s2 > 0.0)) throw ArgumentError("perturbation_matrix: x_star must be nonzero");
  return (w1 * (x - x_star)) * (x_star.transpose() / s2);
}

SmoothnessProbe smoothness_probe(const MlpModel& model, const Vector& x_star, double delta_approx, int k,
                                 int samples, uint64_t seed) {
  if (samples < 1) throw ArgumentError("smoothness_probe: samples must be >= 1");
  if (k < 1) throw ArgumentError("smoothness_probe: k must be >= 1");
  if (!(delta_approx >= 0.0)) throw ArgumentError("smoothness_probe: delta_approx must be >= 0");
  const double p = 2.0 * k;
  const double base = pnorm(backward(model, x_star).grad_w, p) + 1.0;
  const Vector theta = model.parameters();
  std::vector<double> ratio(static_cast<std::size_t>(samples));
  parallel_for(ratio.size(), [&](std::size_t s) {
    Rng rng(derive_seed(seed, s));
    MlpModel perturbed = model;
    perturbed.set_parameters(theta + rng.uniform_in_ball(theta.size(), delta_approx));
    ratio[s] = pnorm(backward(perturbed, x_star).grad_w, p) / base;
  });
  SmoothnessProbe out{0.0, delta_approx, k, samples, 0.0};
  long over = 0;
  for (double r : ratio) {
    out.c_hat = std::max(out.c_hat, r);
    if (r > 1.0) ++over;
  }
  out.violation_rate = static_cast<double>(over) / samples;
  return out;
}

SmoothnessProbe smoothness_probe_all(const MlpModel& model, const Matrix& points, double delta_approx, int k,
                                     int samples, uint64_t seed) {
  if (points.rows() < 1) throw ArgumentError("smoothness_probe_all: no points");
  SmoothnessProbe out{0.0, delta_approx, k, 0, 0.0};
  double over = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const SmoothnessProbe s = smoothness_probe(model, points.row(i).transpose(), delta_approx, k, samples,
                                               derive_seed(seed, static_cast<uint64_t>(i)));
    out.c_hat = std::max(out.c_hat, s.c_hat);
    out.samples += s.samples;
    over += s.violation_rate * s.samples;
  }
  out.violation_rate = over / out.samples;
  return out;
}

CoveringEstimate covering_check(const Matrix& points, double delta, const std::function<Vector()>& sampler,
                                long trials) {
  if (trials < 1) throw ArgumentError("covering_check: trials must be >= 1");
  if (points.rows() < 1) throw ArgumentError("covering_check: no points");
  CoveringEstimate e;
  e.trials = trials;
  const double d2 = delta * delta;
  for (long t = 0; t < trials; ++t) {
    const Vector x = sampler();
    if (x.size() != points.cols()) throw DimensionError("covering_check: sampler dimension mismatch");
    const double nearest = (points.rowwise() - x.transpose()).rowwise().squaredNorm().minCoeff();
    if (nearest > d2) ++e.misses;
  }
  const double nt = static_cast<double>(trials);
  const double ph = static_cast<double>(e.misses) / nt;
  const double z2 = kWilsonZ99 * kWilsonZ99;
  const double denom = 1.0 + z2 / nt;
  const double center = (ph + z2 / (2.0 * nt)) / denom;
  const double half = kWilsonZ99 * std::sqrt(ph * (1.0 - ph) / nt + z2 / (4.0 * nt * nt)) / denom;
  e.eps_hat = ph;
  e.wilson_lower = std::max(0.0, center - half);
  e.wilson_upper = std::min(1.0, center + half);
  return e;
}

double ball_volume(int dim, double radius) {
  if (dim < 1) throw ArgumentError("ball_volume: dim must be >= 1");
  if (radius <= 0.0) return 0.0;
  const double h = 0.5 * dim;
  return std::exp(h * std::log(std::numbers::pi) - std::lgamma(h + 1.0) + dim * std::log(radius));
}

UnionVolume union_volume(const Matrix& points, double delta, uint64_t seed, double rel_target, long min_samples,
                         long max_samples) {
  if (points.rows() < 1) throw ArgumentError("union_volume: no points");
  if (!(delta > 0.0)) throw ArgumentError("union_volume: delta must be > 0");
  if (min_samples < 2 || max_samples < min_samples) throw ArgumentError("union_volume: bad sample limits");
  const auto n = static_cast<uint64_t>(points.rows());
  const auto dim = static_cast<int>(points.cols());
  const double scale = static_cast<double>(n) * ball_volume(dim, delta);

  double sum = 0.0, sum2 = 0.0;
  long done = 0;
  std::vector<double> inv;
  while (done < max_samples) {
    const long chunk = std::min(done == 0 ? min_samples : std::max(min_samples / 4, 1L), max_samples - done);
    inv.assign(static_cast<std::size_t>(chunk), 0.0);
    parallel_for(inv.size(), [&](std::size_t j) {
      Rng rng(derive_seed(seed, static_cast<uint64_t>(done) + j));
      const auto i = static_cast<Eigen::Index>(rng.uniform_index(n));
      const Vector x = points.row(i).transpose() + rng.uniform_in_ball(dim, delta);
      inv[j] = 1.0 / std::max(1, kappa(points, x, delta));
    });
    for (double v : inv) {
      sum += v;
      sum2 += v * v;
    }
    done += chunk;
    const double mean = sum / done;
    const double var = std::max(0.0, sum2 / done - mean * mean) / (done - 1);
    if (std::sqrt(var) <= rel_target * mean) break;
  }
  const double mean = sum / done;
  const double var = std::max(0.0, sum2 / done - mean * mean) / (done - 1);
  return {scale * mean, scale * std::sqrt(var), done};
}

ScatterReport scattered_check(const Matrix& points, double delta, uint64_t seed, long uniform_draws) {
  if (points.rows() < 1) throw ArgumentError("scattered_check: no points");
  if (!(delta > 0.0)) throw ArgumentError("scattered_check: delta must be > 0");
  const auto n = static_cast<int>(points.rows());
  const auto dim = static_cast<int>(points.cols());
  ScatterReport r;

  for (int i = 0; i < n; ++i) {
    r.k_max = std::max(r.k_max, kappa(points, points.row(i).transpose(), delta));
    for (int j = 0; j < i; ++j) {
      const Vector mid = 0.5 * (points.row(i) + points.row(j)).transpose();
      r.k_max = std::max(r.k_max, kappa(points, mid, delta));
    }
  }

  // Uniform draws in the union: mixture draw accepted with probability 1/kappa.
  Rng rng(derive_seed(seed, kStreamScatter));
  long accepted = 0, attempts = 0;
  const long attempt_cap = 1000 * std::max(uniform_draws, 1L);
  while (accepted < uniform_draws && attempts < attempt_cap) {
    ++attempts;
    const auto i = static_cast<Eigen::Index>(rng.uniform_index(static_cast<uint64_t>(n)));
    const Vector x = points.row(i).transpose() + rng.uniform_in_ball(dim, delta);
    const int c = std::max(1, kappa(points, x, delta));
    if (rng.uniform() * c < 1.0) {
      ++accepted;
      r.k_max = std::max(r.k_max, c);
    }
  }

  if (n <= 12) {
    // feasible[S]: some point lies within delta of every member of S. A subset
    // is only tried when S minus its lowest member is feasible.
    const uint32_t full = 1u << n;
    std::vector<char> feasible(full, 0);
    feasible[0] = 1;
    constexpr int kIterations = 2000;
    for (uint32_t s = 1; s < full; ++s) {
      const uint32_t rest = s & (s - 1);
      if (!feasible[rest]) continue;
      const int count = std::popcount(s);
      if (count == 1) {
        feasible[s] = 1;
        continue;
      }
      std::vector<int> members;
      for (int i = 0; i < n; ++i)
        if (s & (1u << i)) members.push_back(i);
      Vector c = points.row(members.front()).transpose();
      double best = std::numeric_limits<double>::infinity();
      for (int it = 1; it <= kIterations; ++it) {
        int far = members.front();
        double far_d = -1.0;
        for (int i : members) {
          const double dd = (points.row(i).transpose() - c).squaredNorm();
          if (dd > far_d) {
            far_d = dd;
            far = i;
          }
        }
        best = std::min(best, far_d);
        if (best <= delta * delta) break;
        c += (points.row(far).transpose() - c) / (it + 1.0);
      }
      if (best <= delta * delta) {
        feasible[s] = 1;
        r.k_max = std::max(r.k_max, count);
      }
    }
    r.exact = true;
  }

  r.volume = union_volume(points, delta, derive_seed(seed, kStreamVolume));
  r.k_integral = r.volume.volume > 0.0 ? n * ball_volume(dim, delta) / r.volume.volume : 0.0;
  return r;
}

double stability_factor(double multiplier, const BoundParams& p, std::size_t w) {
  return std::pow(multiplier * static_cast<double>(w) / p.batch, 1.0 / (2.0 * p.k)) *
         std::sqrt(2.0 * p.batch / p.eta);
}

BoundReport sobolev_emp_bound(const MlpModel& model, const Matrix& points, const BoundParams& p) {
  validate(p);
  const Matrix eff = effective_points(model, points);
  const FirstLayerFacts f = first_layer_facts(model, eff, p.k);
  const std::size_t w = model.parameter_count();
  const GNorms g = g_norms(model, points, p.k);

  BoundReport r;
  r.bound = "sobolev-emp";
  add_common_inputs(r, model, eff, p, f);
  const double transfer = f.w1t.upper / f.min_norm_2k;
  r.rhs = transfer * stability_factor(1.0, p, w);
  r.lhs = g.g_x;
  r.satisfied = r.lhs <= r.rhs;
  const double cor = transfer * g.g_w;
  r.extras = {{"g_w", g.g_w}, {"corollary_rhs", cor}, {"corollary_satisfied", r.lhs <= cor ? 1.0 : 0.0}};
  return r;
}

BoundReport neighborhood_grad_bound(const MlpModel& model, const Matrix& points, const BoundParams& p) {
  validate(p);
  const Matrix eff = effective_points(model, points);
  const FirstLayerFacts f = first_layer_facts(model, eff, p.k);
  const double q = 2.0 * p.k;
  const auto n = static_cast<std::size_t>(points.rows());
  const auto dim = points.cols();

  BoundReport r;
  r.bound = "neighbor-grad";
  add_common_inputs(r, model, eff, p, f);
  check_regime(r, p, f);
  r.rhs = p.c_hat * f.w1t.upper / f.min_norm_2k * (stability_factor(2.0 * static_cast<double>(n), p, model.parameter_count()) + 1.0);

  // Per-center data for the single-point form.
  std::vector<double> center_rhs(n);
  parallel_for(n, [&](std::size_t i) {
    const GradPair gp = backward(model, points.row(static_cast<Eigen::Index>(i)).transpose());
    center_rhs[i] = p.c_hat * f.w1t.upper / pnorm(eff.row(static_cast<Eigen::Index>(i)).transpose(), q) *
                    (pnorm(gp.grad_w, q) + 1.0);
  });

  // The first n samples are the training points themselves.
  const std::size_t total = n + static_cast<std::size_t>(p.samples);
  std::vector<double> lhs(total), ratio(total), excess(total);
  const uint64_t seed = derive_seed(p.seed, kStreamNeighbor);
  const Matrix& w1 = model.first_layer();
  const std::size_t m1 = model.first_layer_parameter_count();
  parallel_for(total, [&](std::size_t j) {
    std::size_t i = j;
    Vector x = points.row(static_cast<Eigen::Index>(j % n)).transpose();
    if (j >= n) {
      Rng rng(derive_seed(seed, j));
      i = rng.uniform_index(n);
      x = points.row(static_cast<Eigen::Index>(i)).transpose() + rng.uniform_in_ball(dim, p.delta);
    }
    const GradPair gx = backward(model, x);
    lhs[j] = pnorm(gx.grad_x, q);
    ratio[j] = lhs[j] / center_rhs[i];
    // The construction itself: W1 + V evaluated at the center reproduces W1 x.
    const Vector xs = eff.row(static_cast<Eigen::Index>(i)).transpose();
    const Matrix v = perturbation_matrix(w1, xs, model.effective_input(x));
    MlpModel moved(w1 + v, model.first_activation(), model.hidden(), model.head(), model.folded_bias());
    const GradPair gm = backward(moved, points.row(static_cast<Eigen::Index>(i)).transpose());
    const double built = f.w1t.upper / pnorm(xs, q) * pnorm(gm.grad_w.head(static_cast<Eigen::Index>(m1)), q);
    excess[j] = lhs[j] - built;
  });
  r.lhs = *std::max_element(lhs.begin(), lhs.end());
  r.satisfied = r.lhs <= r.rhs;
  const double worst_ratio = *std::max_element(ratio.begin(), ratio.end());
  const double worst_excess = *std::max_element(excess.begin(), excess.end());
  r.extras = {{"pointwise_max_ratio", worst_ratio},
              {"pointwise_satisfied", worst_ratio <= 1.0 ? 1.0 : 0.0},
              {"construction_max_excess", worst_excess}};
  r.mc = MonteCarloInfo{static_cast<long>(total), 0.0, seed};
  return r;
}

BoundReport sob_neighborhood_bound(const MlpModel& model, const Matrix& points, const BoundParams& p) {
  validate(p);
  if (!(p.delta > 0.0)) throw ArgumentError("sob-2k: delta must be > 0");
  const Matrix eff = effective_points(model, points);
  const FirstLayerFacts f = first_layer_facts(model, eff, p.k);
  const uint64_t seed = derive_seed(p.seed, kStreamSob);
  const ScatterReport sc = scattered_check(points, p.delta, seed);
  if (sc.k_max > p.scatter_k) {
    throw ArgumentError("sob-2k: points are not (delta, K)-scattered: found " + std::to_string(sc.k_max) +
                        " overlapping balls, K = " + std::to_string(p.scatter_k));
  }
  const double q = 2.0 * p.k;
  const auto n = static_cast<std::size_t>(points.rows());
  const auto dim = static_cast<int>(points.cols());

  BoundReport r;
  r.bound = "sob-2k";
  add_common_inputs(r, model, eff, p, f);
  check_regime(r, p, f);
  r.inputs.emplace_back("K", static_cast<double>(p.scatter_k));
  r.inputs.emplace_back("k_max_found", static_cast<double>(sc.k_max));
  r.inputs.emplace_back("k_integral", sc.k_integral);
  r.inputs.emplace_back("volume", sc.volume.volume);
  r.inputs.emplace_back("volume_stderr", sc.volume.stderr_);
  r.rhs = std::pow(p.scatter_k * sc.volume.volume, 1.0 / q) * 2.0 * p.c_hat * f.w1t.upper / f.min_norm_2k *
          (stability_factor(1.0, p, model.parameter_count()) + 1.0);

  // int_X g = n V_ball E[g / kappa] under the center-mixture draw.
  const auto samples = static_cast<std::size_t>(p.samples);
  std::vector<double> val(samples);
  parallel_for(samples, [&](std::size_t j) {
    Rng rng(derive_seed(seed, j));
    const auto i = static_cast<Eigen::Index>(rng.uniform_index(n));
    const Vector x = points.row(i).transpose() + rng.uniform_in_ball(dim, p.delta);
    val[j] = pnorm_pow(backward(model, x).grad_x, q) / std::max(1, kappa(points, x, p.delta));
  });
  double sum = 0.0, sum2 = 0.0;
  for (double v : val) {
    sum += v;
    sum2 += v * v;
  }
  const double ns = static_cast<double>(samples);
  const double mean = sum / ns;
  const double se = samples > 1 ? std::sqrt(std::max(0.0, sum2 / ns - mean * mean) / (ns - 1.0)) : 0.0;
  const double scale = static_cast<double>(n) * ball_volume(dim, p.delta);
  r.lhs = std::pow(scale * mean, 1.0 / q);
  r.satisfied = r.lhs <= r.rhs;
  const double lhs_se = mean > 0.0 ? r.lhs / q * se / mean : 0.0;
  r.mc = MonteCarloInfo{static_cast<long>(samples), lhs_se, seed};
  return r;
}

BoundReport generalization_bound(const MlpModel& model, const TargetOracle& target, const Matrix& points,
                                 const std::function<Vector()>& sampler, const BoundParams& p) {
  validate(p);
  if (!target.value || !target.gradient) throw ArgumentError("gen1: target oracle incomplete");
  const Matrix eff = effective_points(model, points);
  const FirstLayerFacts f = first_layer_facts(model, eff, p.k);
  const auto n = static_cast<std::size_t>(points.rows());
  const long samples = std::max(p.samples, kMinGenSamples);

  BoundReport r;
  r.bound = "gen1";
  add_common_inputs(r, model, eff, p, f);
  check_regime(r, p, f);

  double eps2 = p.eps2;
  if (eps2 < 0.0) {
    const CoveringEstimate c = covering_check(points, p.delta, sampler, samples);
    eps2 = c.wilson_upper;
    r.extras.emplace_back("eps2_hat", c.eps_hat);
  }

  std::vector<Vector> xs(static_cast<std::size_t>(samples));
  for (auto& x : xs) x = sampler();
  std::vector<double> sq(xs.size()), fabs(xs.size()), gnorm(xs.size());
  parallel_for(xs.size(), [&](std::size_t j) {
    const double fv = forward(model, xs[j]);
    const double tv = target.value(xs[j]);
    sq[j] = (fv - tv) * (fv - tv);
    fabs[j] = std::max(std::abs(fv), std::abs(tv));
    gnorm[j] = target.gradient(xs[j]).norm();
  });
  double sum = 0.0, sum2 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    sum += sq[j];
    sum2 += sq[j] * sq[j];
    m1 = std::max(m1, fabs[j]);
    m2 = std::max(m2, gnorm[j]);
  }
  m1 *= kMarginFactor;
  m2 *= kMarginFactor;
  const double ns = static_cast<double>(samples);
  const double mean = sum / ns;
  const double se = std::sqrt(std::max(0.0, sum2 / ns - mean * mean) / (ns - 1.0));

  const double d = model.input_dim();
  const double transfer = p.c_hat * f.w1t.upper / f.min_norm_2k;
  const double inner = stability_factor(2.0 * static_cast<double>(n), p, model.parameter_count()) + 1.0;
  r.rhs = 2.0 * d * transfer * transfer * inner * inner * p.delta * p.delta + 2.0 * m2 * m2 * p.delta * p.delta +
          4.0 * m1 * m1 * eps2;
  r.lhs = mean;
  r.satisfied = r.lhs <= r.rhs;
  r.inputs.emplace_back("M1", m1);
  r.inputs.emplace_back("M2", m2);
  r.inputs.emplace_back("margin_factor", kMarginFactor);
  r.inputs.emplace_back("eps2", eps2);
  r.mc = MonteCarloInfo{samples, se, p.seed};
  return r;
}

BoundReport robustness_bound(const MlpModel& model, const Matrix& points, const BoundParams& p,
                             int random_per_point, int ascent_steps) {
  validate(p);
  if (random_per_point < 0 || ascent_steps < 0) throw ArgumentError("robust: negative probe counts");
  const Matrix eff = effective_points(model, points);
  const FirstLayerFacts f = first_layer_facts(model, eff, p.k);
  const auto n = static_cast<std::size_t>(points.rows());
  const auto dim = points.cols();
  const uint64_t seed = derive_seed(p.seed, kStreamRobust);

  BoundReport r;
  r.bound = "robust";
  add_common_inputs(r, model, eff, p, f);
  check_regime(r, p, f);
  r.rhs = p.c_hat * std::sqrt(static_cast<double>(model.input_dim())) * f.w1t.upper / f.min_norm_2k *
          (stability_factor(2.0 * static_cast<double>(n), p, model.parameter_count()) + 1.0) * p.delta;

  std::vector<double> worst(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const Vector xi = points.row(static_cast<Eigen::Index>(i)).transpose();
    const GradPair gi = backward(model, xi);
    const double fi = gi.value;
    double best = 0.0;
    auto project = [&](Vector x) {
      const Vector dx = x - xi;
      const double nrm = dx.norm();
      return nrm > p.delta ? Vector(xi + dx * (p.delta / nrm)) : x;
    };
    auto ascend = [&](Vector x) {
      for (int s = 0; s < ascent_steps; ++s) {
        const GradPair g = backward(model, x);
        best = std::max(best, std::abs(g.value - fi));
        const double gn = g.grad_x.norm();
        if (!(gn > 0.0)) return;
        const double dir = g.value >= fi ? 1.0 : -1.0;
        x = project(x + (dir * 0.25 * p.delta / gn) * g.grad_x);
      }
      best = std::max(best, std::abs(forward(model, x) - fi));
    };
    if (p.delta == 0.0) return;
    Rng rng(derive_seed(seed, i));
    Vector best_start = xi;
    double best_start_gap = -1.0;
    for (int s = 0; s < random_per_point; ++s) {
      const Vector x = xi + rng.uniform_in_ball(dim, p.delta);
      const double gap = std::abs(forward(model, x) - fi);
      best = std::max(best, gap);
      if (gap > best_start_gap) {
        best_start_gap = gap;
        best_start = x;
      }
    }
    const double gn = gi.grad_x.norm();
    if (gn > 0.0) {
      ascend(xi + (p.delta / gn) * gi.grad_x);
      ascend(xi - (p.delta / gn) * gi.grad_x);
    }
    if (random_per_point > 0) ascend(best_start);
    worst[i] = best;
  });
  r.lhs = *std::max_element(worst.begin(), worst.end());
  r.satisfied = r.lhs <= r.rhs;
  r.mc = MonteCarloInfo{static_cast<long>(n) * (random_per_point + 3 * ascent_steps), 0.0, seed};
  return r;
}

const std::vector<std::string>& bound_tags() {
  static const std::vector<std::string> tags{"sobolev-emp", "sob-2k", "neighbor-grad", "gen1", "robust"};
  return tags;
}

}  // namespace sgdreg
