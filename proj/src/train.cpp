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

#include "sgdreg/train.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace sgdreg {

namespace {
constexpr double kDivergedLoss = 1e100;
constexpr uint64_t kStreamInit = 0;
constexpr uint64_t kStreamBatches = 1;
}  // namespace

double empirical_loss(const MlpModel& model, const Matrix& data, const Vector& targets) {
  if (targets.size() != data.rows()) throw DimensionError("empirical_loss: target count mismatch");
  double s = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const double r = forward(model, data.row(i).transpose()) - targets[i];
    s += 0.5 * r * r;
  }
  return s / static_cast<double>(data.rows());
}

double max_residual(const MlpModel& model, const Matrix& data, const Vector& targets) {
  if (targets.size() != data.rows()) throw DimensionError("max_residual: target count mismatch");
  double m = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    m = std::max(m, std::abs(forward(model, data.row(i).transpose()) - targets[i]));
  return m;
}

TrainResult sgd_train(const MlpModel& model, const Matrix& data, const Vector& targets, const TrainConfig& cfg) {
  const auto n = static_cast<int>(data.rows());
  if (targets.size() != data.rows()) throw DimensionError("sgd_train: target count mismatch");
  if (data.cols() != model.input_dim()) throw DimensionError("sgd_train: data width != model input_dim");
  if (cfg.iterations < 1) throw ArgumentError("sgd_train: iterations must be >= 1");
  if (cfg.batch < 1 || cfg.batch > n) throw ArgumentError("sgd_train: need 1 <= batch <= n");
  if (cfg.record_every < 1) throw ArgumentError("sgd_train: record_every must be >= 1");
  if (!(cfg.eta >= 0.0) || !std::isfinite(cfg.eta)) throw ArgumentError("sgd_train: eta must be finite and >= 0");

  TrainResult r{model, {}, {}, {}, false, false, 0.0, 0};
  MlpModel& m = r.final_model;
  Vector theta = m.parameters();
  Rng rng(derive_seed(cfg.seed, kStreamBatches));

  auto record = [&](long t) {
    r.recorded_steps.push_back(t);
    r.loss_trace.push_back(empirical_loss(m, data, targets));
    r.w1_norm_trace.push_back(spectral_norm(m.first_layer()));
  };
  record(0);

  Vector grad(theta.size());
  for (long t = 1; t <= cfg.iterations; ++t) {
    const std::vector<int> batch = rng.subset(n, cfg.batch);
    grad.setZero();
    double batch_loss = 0.0;
    for (int i : batch) {
      const GradPair gp = backward(m, data.row(i).transpose());
      const double res = gp.value - targets[i];
      batch_loss += 0.5 * res * res;
      grad.noalias() += res * gp.grad_w;
    }
    batch_loss /= cfg.batch;
    if (!std::isfinite(batch_loss) || batch_loss > kDivergedLoss) {
      r.diverged = true;
      break;
    }
    theta.noalias() -= (cfg.eta / cfg.batch) * grad;
    m.set_parameters(theta);
    r.iterations_run = t;
    if (t % cfg.record_every == 0) {
      record(t);
      if (!std::isfinite(r.loss_trace.back()) || r.loss_trace.back() > kDivergedLoss) {
        r.diverged = true;
        break;
      }
    }
  }
  r.final_max_residual = max_residual(m, data, targets);
  if (!std::isfinite(r.final_max_residual)) r.diverged = true;
  r.interpolated = !r.diverged && r.final_max_residual <= cfg.interp_tol;
  return r;
}

std::vector<SweepRow> sweep(const SweepConfig& cfg, const Matrix& data, const Vector& targets,
                            const std::vector<SweepCell>& grid, int reps) {
  if (grid.empty()) throw ArgumentError("sweep: empty grid");
  if (reps < 1) throw ArgumentError("sweep: reps must be >= 1");
  const std::size_t total = grid.size() * static_cast<std::size_t>(reps);
  std::vector<SweepRow> rows(total);
  parallel_for(total, [&](std::size_t job) {
    const std::size_t cell = job / static_cast<std::size_t>(reps);
    const int rep = static_cast<int>(job % static_cast<std::size_t>(reps));
    const uint64_t run_seed = derive_seed(derive_seed(cfg.seed, cell), static_cast<uint64_t>(rep));
    const MlpModel init = MlpModel::random(cfg.architecture, derive_seed(run_seed, kStreamInit));
    TrainConfig tc;
    tc.eta = grid[cell].eta;
    tc.batch = grid[cell].batch;
    tc.iterations = cfg.iterations;
    tc.seed = run_seed;
    tc.interp_tol = cfg.interp_tol;
    tc.record_every = cfg.record_every;
    const TrainResult tr = sgd_train(init, data, targets, tc);

    SweepRow& row = rows[job];
    row.eta = tc.eta;
    row.batch = tc.batch;
    row.rep = rep;
    row.interpolated = tr.interpolated;
    row.diverged = tr.diverged;
    row.max_residual = tr.final_max_residual;
    row.w1_norm_trace = tr.w1_norm_trace;
    if (tr.diverged) {
      for (int k = 0; k < 3; ++k) row.g_w[k] = row.g_x[k] = std::nan("");
      row.flatness = row.w1_norm = std::nan("");
      return;
    }
    for (int k = 1; k <= 3; ++k) {
      const GNorms g = g_norms(tr.final_model, data, k);
      row.g_w[k - 1] = g.g_w;
      row.g_x[k - 1] = g.g_x;
    }
    row.flatness = flatness(tr.final_model, data, targets, cfg.interp_tol).flatness;
    row.w1_norm = spectral_norm(tr.final_model.first_layer());
  });
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "eta,batch,rep,interpolated,gw1,gx1,gw2,gx2,gw3,gx3,flatness,w1norm\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    out << num(r.eta) << ',' << r.batch << ',' << r.rep << ',' << (r.interpolated ? 1 : 0);
    for (int k = 0; k < 3; ++k) out << ',' << num(r.g_w[k]) << ',' << num(r.g_x[k]);
    out << ',' << num(r.flatness) << ',' << num(r.w1_norm) << '\n';
  }
  return out.str();
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << sweep_csv(rows);
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace sgdreg
