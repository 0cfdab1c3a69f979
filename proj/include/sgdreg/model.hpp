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

// Scalar-output MLP whose first layer is a bare matrix product, f(x, W) =
// g(W1 x, W2). Because W1 x is formed before any nonlinearity, the same
// backpropagated signal s = df/d(W1 x) gives both grad_{W1} f = s x^T and
// grad_x f = W1^T s.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgdreg/common.hpp"

namespace sgdreg {

enum class Activation { kRelu, kTanh, kLinear };
std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;    // out
  Activation activation = Activation::kTanh;
};

struct ScalarHead {
  Vector weight;
  double bias = 0.0;
};

struct Architecture {
  int input_dim = 1;
  // widths[0] is the first-layer width m; each further entry adds a hidden
  // layer with bias.
  std::vector<int> widths{16};
  Activation activation = Activation::kTanh;
  bool head = true;
  // Appends a constant-1 input so the first layer can carry a bias; ||x||
  // then includes that coordinate.
  bool folded_bias = false;
  // Weights and biases start Uniform(-gain/sqrt(fan_in), gain/sqrt(fan_in)).
  double init_gain = 1.0;
};

struct GradPair {
  double value = 0.0;
  Vector grad_w;        // flattened, same order as MlpModel::parameters()
  Vector grad_x;        // length input_dim
  Vector first_signal;  // df/d(W1 x), length m
};

class MlpModel {
 public:
  // Without a head the last layer must have width 1 and its output is f.
  MlpModel(Matrix first_layer, Activation first_activation, std::vector<DenseLayer> hidden,
           std::optional<ScalarHead> head, bool folded_bias = false);

  static MlpModel random(const Architecture& arch, uint64_t seed);

  int input_dim() const;
  int first_width() const { return static_cast<int>(first_.rows()); }
  bool folded_bias() const { return folded_bias_; }
  Activation first_activation() const { return first_activation_; }
  const Matrix& first_layer() const { return first_; }
  const std::vector<DenseLayer>& hidden() const { return hidden_; }
  const std::optional<ScalarHead>& head() const { return head_; }

  std::size_t parameter_count() const;
  // W1 row-major, then each hidden layer's weight (row-major) and bias, then
  // the head weight and bias.
  Vector parameters() const;
  void set_parameters(const Eigen::Ref<const Vector>& theta);
  // Number of leading entries of parameters() that belong to W1.
  std::size_t first_layer_parameter_count() const { return static_cast<std::size_t>(first_.size()); }

  // The input actually multiplied by W1 (x, or [x; 1] in folded mode).
  Vector effective_input(const Eigen::Ref<const Vector>& x) const;

 private:
  Matrix first_;
  Activation first_activation_;
  std::vector<DenseLayer> hidden_;
  std::optional<ScalarHead> head_;
  bool folded_bias_;
};

double forward(const MlpModel& model, const Eigen::Ref<const Vector>& x);
GradPair backward(const MlpModel& model, const Eigen::Ref<const Vector>& x);

struct GNorms {
  double g_w = 0.0;  // ((1/n) sum_i ||grad_W f(x_i)||_{2k}^{2k})^{1/(2k)}
  double g_x = 0.0;  // ((1/n) sum_i ||grad_x f(x_i)||_{2k}^{2k})^{1/(2k)}
};
// data is n x d, one sample per row.
GNorms g_norms(const MlpModel& model, const Matrix& data, int k);

struct FlatnessReport {
  double flatness = 0.0;  // (1/n) sum_i ||grad_W f(x_i)||_2^2
  double max_residual = 0.0;
  bool interpolated = false;  // max_residual <= interp_tol
};
FlatnessReport flatness(const MlpModel& model, const Matrix& data, const Vector& targets,
                        double interp_tol = 1e-6);

struct NormInterval {
  double lower = 0.0;
  double upper = 0.0;
};

// Induced operator norm sup ||A x||_p / ||x||_p for p >= 2. Exact for p = 2
// and for single-row or single-column A; otherwise a nonlinear power-method
// lower bound and the smaller of two Riesz-Thorin interpolation upper bounds.
NormInterval operator_pnorm(const Matrix& a, double p, uint64_t seed = 0x9e37, int restarts = 8);

// Largest singular value.
double spectral_norm(const Matrix& a);

}  // namespace sgdreg
