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

// Mini-batch SGD on the square loss L_i = (f(x_i) - y_i)^2 / 2. Each
// iteration draws a fresh uniform B-subset; there are no epochs.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgdreg/common.hpp"
#include "sgdreg/model.hpp"

namespace sgdreg {

struct TrainConfig {
  double eta = 0.1;
  int batch = 1;
  long iterations = 1000;
  uint64_t seed = 0;
  double interp_tol = 1e-6;
  long record_every = 100;
};

struct TrainResult {
  MlpModel final_model;
  // Recorded at t = 0, r, 2r, ... <= iterations (r = record_every).
  std::vector<long> recorded_steps;
  std::vector<double> loss_trace;      // (1/n) sum_i L_i
  std::vector<double> w1_norm_trace;   // spectral norm of W1
  bool interpolated = false;
  bool diverged = false;               // loss > 1e100 or non-finite; training stopped
  double final_max_residual = 0.0;
  long iterations_run = 0;
};

double empirical_loss(const MlpModel& model, const Matrix& data, const Vector& targets);
double max_residual(const MlpModel& model, const Matrix& data, const Vector& targets);

TrainResult sgd_train(const MlpModel& model, const Matrix& data, const Vector& targets, const TrainConfig& cfg);

struct SweepCell {
  double eta = 0.1;
  int batch = 1;
};

struct SweepRow {
  double eta = 0.0;
  int batch = 0;
  int rep = 0;
  bool interpolated = false;
  bool diverged = false;
  double g_w[3] = {0, 0, 0};  // k = 1, 2, 3
  double g_x[3] = {0, 0, 0};
  double flatness = 0.0;
  double w1_norm = 0.0;
  double max_residual = 0.0;
  std::vector<double> w1_norm_trace;
};

struct SweepConfig {
  Architecture architecture;
  long iterations = 20000;
  double interp_tol = 1e-6;
  long record_every = 100;
  uint64_t seed = 0;
};

// Runs every (cell, rep) with its own initialization and batch seeds derived
// from (seed, cell index, rep); rows come back in (cell, rep) order.
std::vector<SweepRow> sweep(const SweepConfig& cfg, const Matrix& data, const Vector& targets,
                            const std::vector<SweepCell>& grid, int reps);

// Header: eta,batch,rep,interpolated,gw1,gx1,gw2,gx2,gw3,gx3,flatness,w1norm
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace sgdreg
