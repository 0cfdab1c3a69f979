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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Pass criterion numbers as arguments to run
// a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sgdreg/cli.hpp"
#include "sgdreg/data.hpp"
#include "sgdreg/model.hpp"
#include "sgdreg/sobolev.hpp"
#include "sgdreg/stability.hpp"
#include "sgdreg/train.hpp"

namespace sgdreg {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

GradientSet random_gradients(int n, int w, Rng& rng) {
  Matrix a(n, w);
  for (int i = 0; i < n; ++i) a.row(i) = rng.normal_vector(w).transpose();
  return GradientSet(a);
}

SgdConfig sgd(double eta, int batch, int order, uint64_t seed = 0) {
  SgdConfig c;
  c.eta = eta;
  c.batch = batch;
  c.order = order;
  c.seed = seed;
  return c;
}

double mean_sq_norm(const GradientSet& g) { return g.rows().rowwise().squaredNorm().mean(); }

// ---------------------------------------------------------------------------

Outcome k2_equivalence() {
  Stopwatch clock;
  Rng rng(0xc1);
  const double etas[] = {0.05, 0.5, 1.5};
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int w = 1 + static_cast<int>(rng.uniform_index(4));
    const int n = 2 + static_cast<int>(rng.uniform_index(4));
    const int b = 1 + static_cast<int>(rng.uniform_index(static_cast<uint64_t>(n)));
    const GradientSet g = random_gradients(n, w, rng);
    const double eta = etas[i % 3];
    const double closed = k2_closed_form(g, eta, b).radius_kron;
    Eigen::SelfAdjointEigenSolver<Matrix> es(dense_operator(g, sgd(eta, b, 2)));
    const double dense = es.eigenvalues().cwiseAbs().maxCoeff();
    worst = std::max(worst, std::abs(closed - dense) / dense);
  }
  const double t = clock.seconds();
  return {worst <= 1e-10 && t < 10.0, "50 instances, max rel diff " + fmt("%.2e", worst) + ", " + fmt("%.2f", t) + " s"};
}

Outcome moment_bound() {
  Stopwatch clock;
  Rng rng(0xc2);
  int stable = 0, violations = 0;
  for (int i = 0; i < 200; ++i) {
    const int w = 1 + static_cast<int>(rng.uniform_index(4));
    const int n = 1 + static_cast<int>(rng.uniform_index(5));
    const int b = 1 + static_cast<int>(rng.uniform_index(static_cast<uint64_t>(n)));
    const GradientSet g = random_gradients(n, w, rng);
    const double eta = rng.uniform(0.05, 3.0) / mean_sq_norm(g);
    for (int k = 1; k <= 3; ++k) {
      if (!check_stability(g, sgd(eta, b, k)).stable) continue;
      ++stable;
      if (!moment_bound_check(g, eta, b, k).satisfied) ++violations;
    }
  }
  const double t = clock.seconds();
  return {violations == 0 && stable > 0 && t < 60.0,
          std::to_string(stable) + " stable (instance, k) pairs, " + std::to_string(violations) + " violations, " +
              fmt("%.2f", t) + " s"};
}

// Best rank-one direction of a dense order-k tensor (higher-order power
// method with restarts).
Vector dense_rank_one(const std::vector<double>& x, int w, int k, Rng& rng) {
  const Eigen::Map<const Vector> flat(x.data(), static_cast<Eigen::Index>(x.size()));
  if (k == 1) return flat.normalized();
  auto contract = [&](const Vector& v) {
    // All but the last index contracted with v.
    Vector out = Vector::Zero(w);
    for (std::size_t f = 0; f < x.size(); ++f) {
      std::size_t rem = f;
      const int last = static_cast<int>(rem % static_cast<std::size_t>(w));
      rem /= static_cast<std::size_t>(w);
      double p = x[f];
      for (int j = 0; j < k - 1; ++j) {
        p *= v[static_cast<Eigen::Index>(rem % static_cast<std::size_t>(w))];
        rem /= static_cast<std::size_t>(w);
      }
      out[last] += p;
    }
    return out;
  };
  Vector best;
  double best_val = -1.0;
  for (int s = 0; s < 20; ++s) {
    Vector v = rng.normal_vector(w).normalized();
    for (int it = 0; it < 500; ++it) {
      const Vector y = contract(v);
      if (y.norm() == 0.0) break;
      v = y.normalized();
    }
    const double val = std::abs(contract(v).dot(v));
    if (val > best_val) {
      best_val = val;
      best = v;
    }
  }
  return best;
}

Outcome dynamics() {
  Stopwatch clock;
  const int replicas = 100000;
  Rng rng(0xc3);
  std::string detail;
  bool pass = true;
  for (int k = 1; k <= 3; ++k) {
    int tested = 0, matched = 0;
    double worst = 0.0;
    while (tested < 20) {
      const int w = 2 + static_cast<int>(rng.uniform_index(2));
      const int n = w + static_cast<int>(rng.uniform_index(static_cast<uint64_t>(6 - w)));
      const int b = 1 + static_cast<int>(rng.uniform_index(static_cast<uint64_t>(n)));
      const GradientSet g = random_gradients(n, w, rng);
      const double eta = rng.uniform(0.05, 2.0) / mean_sq_norm(g);
      const DenseSpectrum s = dense_spectrum(g, sgd(eta, b, k));
      const double rho = s.radius;
      if ((rho >= 0.95 && rho <= 1.05) || rho > 3.0 || rho < 0.3) continue;
      // Replica noise grows like sqrt(rho_2k)^t against the rho_k^t signal;
      // stop while the expected relative noise is still small.
      const double rho2 = dense_spectrum(g, sgd(eta, b, 2 * k)).radius;
      const double noise = std::sqrt(rho2) / rho;
      int horizon = 60;
      if (noise > 1.0001) horizon = static_cast<int>(std::log(0.05 * std::sqrt(static_cast<double>(replicas))) / std::log(noise));
      horizon = std::clamp(horizon, 4, 60);

      InitialDistribution init;
      init.point = dense_rank_one(s.dominant, w, k, rng);
      const SimulationResult sim = simulate_linearized(g, sgd(eta, b, k, rng.next_u64()), init, horizon, replicas);
      ++tested;
      if (sim.diverged) continue;
      const double want = std::log(rho);
      const double err = std::abs(log_growth_rate(sim.norms) - want) / std::abs(want);
      worst = std::max(worst, err);
      if (err <= 0.1) ++matched;
    }
    pass = pass && matched == tested;
    detail += "k=" + std::to_string(k) + ": " + std::to_string(matched) + "/" + std::to_string(tested) +
              " (worst rel err " + fmt("%.3f", worst) + ")  ";
  }
  return {pass, detail + "R=" + std::to_string(replicas) + ", " + fmt("%.1f", clock.seconds()) + " s"};
}

MlpModel tanh_net(int d, std::vector<int> widths, uint64_t seed, double gain = 1.0, bool folded = false) {
  Architecture a;
  a.input_dim = d;
  a.widths = std::move(widths);
  a.init_gain = gain;
  a.folded_bias = folded;
  return MlpModel::random(a, seed);
}

Outcome gradient_correctness() {
  Rng rng(0xc4);
  double worst_w = 0.0, worst_x = 0.0, worst_block = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + static_cast<int>(rng.uniform_index(4));
    std::vector<int> widths{3 + static_cast<int>(rng.uniform_index(5))};
    if (t % 2 == 0) widths.push_back(3 + static_cast<int>(rng.uniform_index(4)));
    const MlpModel m = tanh_net(d, widths, rng.next_u64(), 1.5, t % 3 == 0);
    const Vector x = rng.normal_vector(d);
    const GradPair g = backward(m, x);
    const double h = 1e-5;
    MlpModel p = m;
    const Vector theta = m.parameters();
    Vector fd_w(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      Vector a = theta;
      a[i] += h;
      p.set_parameters(a);
      const double fp = forward(p, x);
      a[i] -= 2 * h;
      p.set_parameters(a);
      fd_w[i] = (fp - forward(p, x)) / (2 * h);
    }
    Vector fd_x(d);
    for (int i = 0; i < d; ++i) {
      Vector a = x, b = x;
      a[i] += h;
      b[i] -= h;
      fd_x[i] = (forward(m, a) - forward(m, b)) / (2 * h);
    }
    worst_w = std::max(worst_w, (g.grad_w - fd_w).norm() / g.grad_w.norm());
    worst_x = std::max(worst_x, (g.grad_x - fd_x).norm() / g.grad_x.norm());
    const Vector xe = m.effective_input(x);
    const Matrix outer = g.first_signal * xe.transpose();
    for (Eigen::Index r = 0; r < outer.rows(); ++r)
      for (Eigen::Index c = 0; c < outer.cols(); ++c)
        worst_block = std::max(worst_block, std::abs(g.grad_w[r * outer.cols() + c] - outer(r, c)));
  }
  return {worst_w <= 1e-5 && worst_x <= 1e-5 && worst_block <= 1e-12,
          "100 nets: grad_W rel " + fmt("%.1e", worst_w) + ", grad_x rel " + fmt("%.1e", worst_x) +
              ", W1 block " + fmt("%.1e", worst_block)};
}

Outcome pnorm_transfer() {
  Rng rng(0xc5);
  long evaluations = 0, violations = 0;
  double tightest = 0.0;
  for (int t = 0; t < 1250; ++t) {
    const int d = 2 + static_cast<int>(rng.uniform_index(5));
    const MlpModel m = tanh_net(d, {2 + static_cast<int>(rng.uniform_index(6)), 4}, rng.next_u64(), 1.5);
    NormInterval op[3];
    for (int k = 1; k <= 3; ++k) op[k - 1] = operator_pnorm(m.first_layer().transpose(), 2.0 * k);
    for (int s = 0; s < 8; ++s) {
      const Vector x = rng.normal_vector(d);
      const GradPair g = backward(m, x);
      for (int k = 1; k <= 3; ++k) {
        const double p = 2.0 * k;
        const double lhs = pnorm_pow(g.grad_x, p);
        const double rhs = std::pow(op[k - 1].upper, p) / pnorm_pow(x, p) * pnorm_pow(g.grad_w, p);
        ++evaluations;
        if (lhs > rhs) ++violations;
        tightest = std::max(tightest, lhs / rhs);
      }
    }
  }
  return {violations == 0 && evaluations >= 10000,
          std::to_string(evaluations) + " evaluations, " + std::to_string(violations) + " violations, max lhs/rhs " +
              fmt("%.3f", tightest)};
}

Outcome flatness_identity() {
  ManifoldSpec spec;
  spec.kind = ManifoldKind::kCircle;
  spec.ambient_dim = 2;
  int solutions = 0, violations = 0, fd_checked = 0, fd_bad = 0;
  double worst_fd = 0.0;
  for (uint64_t seed = 1; seed <= 40 && solutions < 12; ++seed) {
    const Generated gen = generate(spec, 5, seed);
    const Matrix& x = gen.data.points;
    const Vector& y = gen.data.targets;
    const MlpModel init = tanh_net(2, {8}, derive_seed(seed, 1), 2.0, true);
    TrainConfig tc;
    tc.eta = 0.5;
    tc.batch = 5;
    tc.iterations = 60000;
    tc.interp_tol = 1e-5;
    tc.record_every = 1000;
    tc.seed = seed;
    const TrainResult r = sgd_train(init, x, y, tc);
    if (!r.interpolated) continue;
    ++solutions;
    const MlpModel& m = r.final_model;
    const FlatnessReport fl = flatness(m, x, y, 1e-5);
    double gx = 0.0, minx = INFINITY;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      gx += backward(m, x.row(i).transpose()).grad_x.squaredNorm() / static_cast<double>(x.rows());
      minx = std::min(minx, m.effective_input(x.row(i).transpose()).squaredNorm());
    }
    const double w1 = spectral_norm(m.first_layer());
    if (gx > w1 * w1 / minx * fl.flatness) ++violations;

    if (m.parameter_count() > 50) continue;
    const Vector theta = m.parameters();
    MlpModel p = m;
    auto loss = [&](const Vector& t) {
      p.set_parameters(t);
      return empirical_loss(p, x, y);
    };
    const double h = 1e-4, l0 = loss(theta);
    double trace = 0.0;
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      Vector a = theta, b = theta;
      a[j] += h;
      b[j] -= h;
      trace += (loss(a) - 2 * l0 + loss(b)) / (h * h);
    }
    const double err = std::abs(fl.flatness - trace) / trace;
    worst_fd = std::max(worst_fd, err);
    ++fd_checked;
    if (err > 0.05) ++fd_bad;
  }
  return {solutions >= 10 && violations == 0 && fd_checked > 0 && fd_bad == 0,
          std::to_string(solutions) + " interpolating solutions, " + std::to_string(violations) +
              " chain violations, flatness vs FD trace worst " + fmt("%.2e", worst_fd) + " on " +
              std::to_string(fd_checked) + " nets"};
}

// ---------------------------------------------------------------------------
// Criteria 7, 8 and 10 share one desk-scale sweep.

struct DeskRun {
  double eta = 0.0;
  int batch = 0;
  int rep = 0;
  TrainResult result;
  double g_w = 0.0, g_x = 0.0;
};

struct DeskSweep {
  Generated data;
  double interp_tol = 1e-5;
  long iterations = 0;
  std::vector<DeskRun> runs;
};

const DeskSweep& desk_sweep() {
  static const DeskSweep sweep = [] {
    DeskSweep s{generate(ManifoldSpec{10, ManifoldKind::kSmoothCurve, TargetKind::kTrig}, 100, 0xf1), 1e-5, 100000, {}};
    std::vector<std::pair<double, int>> cells;
    for (double eta : {0.01, 0.02, 0.05, 0.1, 0.2}) cells.emplace_back(eta, 5);
    for (int b : {2, 10, 20}) cells.emplace_back(0.1, b);
    Stopwatch clock;
    for (std::size_t c = 0; c < cells.size(); ++c)
      for (int rep = 0; rep < 5; ++rep) {
        const uint64_t run_seed = derive_seed(derive_seed(0xf7, c), static_cast<uint64_t>(rep));
        const MlpModel init = tanh_net(10, {64, 64}, derive_seed(run_seed, 0));
        TrainConfig tc;
        tc.eta = cells[c].first;
        tc.batch = cells[c].second;
        tc.iterations = s.iterations;
        tc.interp_tol = s.interp_tol;
        tc.record_every = 1000;
        tc.seed = run_seed;
        DeskRun run{tc.eta, tc.batch, rep, sgd_train(init, s.data.data.points, s.data.data.targets, tc), 0, 0};
        const GNorms g = g_norms(run.result.final_model, s.data.data.points, 1);
        run.g_w = g.g_w;
        run.g_x = g.g_x;
        std::printf("  run eta=%.2f B=%d rep=%d residual=%.3e interpolated=%d g_W=%.4f g_x=%.4f (%.0f s)\n", run.eta,
                    run.batch, rep, run.result.final_max_residual, run.result.interpolated ? 1 : 0, run.g_w, run.g_x,
                    clock.seconds());
        std::fflush(stdout);
        s.runs.push_back(std::move(run));
      }
    return s;
  }();
  return sweep;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = 0.5 * static_cast<double>(i + j);
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) { return pearson(ranks(a), ranks(b)); }

struct Correlations {
  std::size_t runs = 0;
  double r_log = NAN, rho_w = NAN, rho_x = NAN;
};

Correlations correlations(const std::function<bool(const DeskRun&)>& keep) {
  Correlations c;
  std::vector<double> lw, lx;
  for (const auto& r : desk_sweep().runs)
    if (keep(r)) {
      lw.push_back(std::log(r.g_w));
      lx.push_back(std::log(r.g_x));
    }
  c.runs = lw.size();
  if (lw.size() >= 3) c.r_log = pearson(lw, lx);
  // Cell means along the eta axis (B = 5).
  std::vector<double> etas, mw, mx;
  for (double eta : {0.01, 0.02, 0.05, 0.1, 0.2}) {
    double sw = 0.0, sx = 0.0;
    int cnt = 0;
    for (const auto& r : desk_sweep().runs)
      if (r.batch == 5 && r.eta == eta && keep(r)) {
        sw += r.g_w;
        sx += r.g_x;
        ++cnt;
      }
    if (cnt == 0) continue;
    etas.push_back(eta);
    mw.push_back(sw / cnt);
    mx.push_back(sx / cnt);
  }
  if (etas.size() >= 3) {
    c.rho_w = spearman(etas, mw);
    c.rho_x = spearman(etas, mx);
  }
  return c;
}

std::string describe(const Correlations& c) {
  return std::to_string(c.runs) + " runs, pearson(log g_W, log g_x) " + fmt("%.3f", c.r_log) + ", spearman(eta, g_W) " +
         fmt("%.3f", c.rho_w) + ", spearman(eta, g_x) " + fmt("%.3f", c.rho_x);
}

Outcome desk_reproduction() {
  const Correlations c = correlations([](const DeskRun& r) { return r.result.interpolated; });
  const bool pass = c.runs >= 3 && c.r_log >= 0.7 && c.rho_w <= -0.6 && c.rho_x <= -0.6;
  const Correlations diag = correlations([](const DeskRun& r) { return !r.result.diverged; });
  double best = INFINITY;
  for (const auto& r : desk_sweep().runs) best = std::min(best, r.result.final_max_residual);
  return {pass, "interpolated (tol 1e-5): " + describe(c) + " | diagnostic, all non-diverged: " + describe(diag) +
                    " | smallest max residual " + fmt("%.2e", best)};
}

double tail_change(const std::vector<double>& trace) {
  const std::size_t start = trace.size() * 4 / 5;
  const double ref = trace[start];
  double worst = 0.0;
  for (std::size_t i = start; i < trace.size(); ++i) worst = std::max(worst, std::abs(trace[i] - ref) / ref);
  return worst;
}

Outcome w1_norm_shape() {
  int interpolated = 0, flat = 0, all = 0, all_flat = 0;
  for (const auto& r : desk_sweep().runs) {
    if (r.result.diverged || r.result.w1_norm_trace.size() < 5) continue;
    const bool ok = tail_change(r.result.w1_norm_trace) < 0.05;
    ++all;
    all_flat += ok;
    if (!r.result.interpolated) continue;
    ++interpolated;
    flat += ok;
  }
  const bool pass = interpolated > 0 && flat >= 0.8 * interpolated;
  return {pass, std::to_string(flat) + "/" + std::to_string(interpolated) +
                    " interpolated runs with < 5% change over the last 20% | diagnostic, all non-diverged: " +
                    std::to_string(all_flat) + "/" + std::to_string(all)};
}

Outcome perturbation_identities() {
  Rng rng(0xc9);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int m = 1 + static_cast<int>(rng.uniform_index(8)), d = 1 + static_cast<int>(rng.uniform_index(8));
    Matrix w1(m, d);
    for (int i = 0; i < m; ++i) w1.row(i) = rng.normal_vector(d).transpose();
    const Vector xs = rng.normal_vector(d), x = rng.normal_vector(d);
    const Matrix v = perturbation_matrix(w1, xs, x);
    const Vector want = w1 * (x - xs);
    worst = std::max(worst, (v * xs - want).norm() / want.norm());
    worst = std::max(worst, std::abs(v.norm() - want.norm() / xs.norm()) / (want.norm() / xs.norm()));
  }
  return {worst <= 1e-12, "1000 instances, max rel error " + fmt("%.2e", worst)};
}

struct BoundTally {
  int reports = 0, in_regime = 0, violations = 0;
  std::string notes;
};

BoundTally evaluate_bounds(const DeskRun& run) {
  const DeskSweep& s = desk_sweep();
  const MlpModel& m = run.result.final_model;
  const Matrix& x = s.data.data.points;
  const double delta = 0.02, delta_approx = 0.1;
  BoundParams p;
  p.eta = run.eta;
  p.batch = run.batch;
  p.k = 1;
  p.delta = delta;
  p.delta_approx = delta_approx;
  p.samples = 4000;
  p.seed = derive_seed(0xb0, static_cast<uint64_t>(run.rep));
  p.c_hat = smoothness_probe_all(m, x, delta_approx, p.k, 32, p.seed).c_hat;
  p.scatter_k = scattered_check(x, delta, p.seed).k_max;
  FreshSampler fresh = s.data.fresh;
  const Manifold manifold = fresh.manifold();
  const TargetOracle target{[&](const Vector& v) { return manifold.target(v); },
                            [&](const Vector& v) { return manifold.target_gradient(v); }};
  std::vector<BoundReport> reports{sobolev_emp_bound(m, x, p), neighborhood_grad_bound(m, x, p),
                                   sob_neighborhood_bound(m, x, p),
                                   generalization_bound(m, target, x, [&] { return fresh.draw(); }, p),
                                   robustness_bound(m, x, p)};
  BoundTally t;
  for (const auto& r : reports) {
    ++t.reports;
    if (!r.in_regime) continue;
    ++t.in_regime;
    if (!r.satisfied) {
      ++t.violations;
      t.notes += " " + r.bound + "(lhs " + fmt("%.3g", r.lhs) + " > rhs " + fmt("%.3g", r.rhs) + ")";
    }
  }
  return t;
}

Outcome bound_soundness() {
  BoundTally total;
  int runs = 0;
  for (const auto& r : desk_sweep().runs) {
    if (!r.result.interpolated) continue;
    ++runs;
    const BoundTally t = evaluate_bounds(r);
    total.reports += t.reports;
    total.in_regime += t.in_regime;
    total.violations += t.violations;
    total.notes += t.notes;
  }
  // Diagnostic only: the closest-to-interpolation run of each cell.
  std::string diag;
  if (runs == 0) {
    BoundTally d;
    std::set<std::pair<double, int>> seen;
    for (const auto& r : desk_sweep().runs) {
      if (r.result.diverged || !seen.insert({r.eta, r.batch}).second) continue;
      const BoundTally t = evaluate_bounds(r);
      d.reports += t.reports;
      d.in_regime += t.in_regime;
      d.violations += t.violations;
      d.notes += t.notes;
    }
    diag = " | diagnostic on non-interpolated runs (one per cell): " + std::to_string(d.in_regime) + "/" +
           std::to_string(d.reports) + " in regime, " + std::to_string(d.violations) + " violated" + d.notes;
  }
  const bool pass = runs > 0 && total.in_regime > 0 && total.violations == 0;
  return {pass, std::to_string(runs) + " interpolated runs, " + std::to_string(total.in_regime) + "/" +
                    std::to_string(total.reports) + " reports in regime, " + std::to_string(total.violations) +
                    " violated" + total.notes + diag};
}

Outcome power_split_lemma() {
  Rng rng(0xcb);
  long violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double t = rng.uniform(0.0, 10.0);
    for (int k = 1; k <= 6; ++k)
      if (std::pow(t, k) > std::pow(2.0, k - 1) * (std::pow(t - 1.0, k) + 1.0) + 1e-12) ++violations;
  }
  return {violations == 0, "60000 (t, k) samples, " + std::to_string(violations) + " violations"};
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sgdreg");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "sgdreg_acceptance_cli";
  fs::remove_all(root);
  std::vector<std::string> primary;
  int failures = 0;
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    auto at = [&](const std::string& f) { return (dir / f).string(); };
    {
      std::ofstream g(at("g.csv"));
      g << "0.5,0.1,-0.2\n0.3,-0.4,0.6\n-0.1,0.2,0.9\n0.7,0.7,0.0\n";
    }
    const std::vector<std::vector<std::string>> commands{
        {"generate", "--manifold", "torus", "--d", "5", "--n", "12", "--seed", "3", "--hex", "--out", at("d.csv")},
        {"train", "--data", at("d.csv"), "--widths", "8", "--eta", "0.1", "--batch", "3", "--iterations", "2000",
         "--seed", "5", "--out", at("m.json"), "--trace", at("trace.csv")},
        {"stability", "--model", at("m.json"), "--data", at("d.csv"), "--eta", "0.1", "--batch", "3", "--k", "1",
         "--mode", "dense", "--horizon", "10", "--replicas", "100", "--seed", "2", "--out", at("s1.json")},
        {"stability", "--gradients", at("g.csv"), "--eta", "0.3", "--batch", "2", "--k", "2", "--mode", "power",
         "--seed", "4", "--out", at("s2.json")},
        {"stability", "--gradients", at("g.csv"), "--eta", "0.2", "--batch", "2", "--k", "3", "--mode", "mc",
         "--mc-batches", "300", "--max-iterations", "300", "--seed", "6", "--out", at("s3.json")},
        {"bounds", "--theorem", "sobolev-emp,sob-2k,neighbor-grad,gen1,robust", "--model", at("m.json"), "--data",
         at("d.csv"), "--eta", "0.1", "--batch", "3", "--k", "2", "--delta", "0.01", "--K", "12", "--samples",
         "1000", "--probe-samples", "4", "--seed", "8", "--out-dir", at("bounds")},
        {"sweep", "--etas", "0.05,0.1", "--batches", "2,4", "--reps", "2", "--n", "8", "--d", "4", "--widths", "6",
         "--iterations", "300", "--seed", "1", "--out", at("sweep.csv"), "--traces", at("traces.csv")},
    };
    for (const auto& c : commands)
      if (cli(c) != 0) ++failures;
    if (primary.empty())
      for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().filename().string().find("manifest") == std::string::npos)
          primary.push_back(fs::relative(e.path(), dir).string());
  }
  int differ = 0;
  for (const auto& rel : primary)
    if (!fs::exists(root / "b" / rel) || slurp(root / "a" / rel) != slurp(root / "b" / rel)) ++differ;
  fs::remove_all(root);
  return {failures == 0 && differ == 0 && primary.size() >= 15,
          std::to_string(primary.size()) + " primary files compared, " + std::to_string(differ) + " differ, " +
              std::to_string(failures) + " command failures"};
}

}  // namespace
}  // namespace sgdreg

int main(int argc, char** argv) {
  using namespace sgdreg;
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion all[] = {
      {1, "k=2 construction equivalence", k2_equivalence},
      {2, "stability implies moment bound", moment_bound},
      {3, "dynamics consistency", dynamics},
      {4, "gradient correctness", gradient_correctness},
      {5, "p-norm transfer inequality", pnorm_transfer},
      {6, "flatness identity", flatness_identity},
      {7, "desk-scale g_W / g_x reproduction", desk_reproduction},
      {8, "first-layer norm stabilizes", w1_norm_shape},
      {9, "perturbation construction", perturbation_identities},
      {10, "bound-report soundness", bound_soundness},
      {11, "power split lemma", power_split_lemma},
      {12, "CLI determinism", cli_determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %2d  %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
