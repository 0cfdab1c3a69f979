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

#include "sgdreg/model.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace sgdreg {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kLinear: return "linear";
  }
  return "unknown";
}

Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "tanh") return Activation::kTanh;
  if (s == "linear") return Activation::kLinear;
  throw ArgumentError("unknown activation '" + s + "'");
}

namespace {

Vector activate(Activation a, const Vector& z) {
  switch (a) {
    case Activation::kRelu: return z.cwiseMax(0.0);
    case Activation::kTanh: return z.array().tanh().matrix();
    case Activation::kLinear: return z;
  }
  return z;
}

// Derivative at z; relu'(0) is taken as 0.
Vector activate_grad(Activation a, const Vector& z) {
  switch (a) {
    case Activation::kRelu: return (z.array() > 0.0).cast<double>().matrix();
    case Activation::kTanh: return (1.0 - z.array().tanh().square()).matrix();
    case Activation::kLinear: return Vector::Ones(z.size());
  }
  return Vector::Ones(z.size());
}

}  // namespace

MlpModel::MlpModel(Matrix first_layer, Activation first_activation, std::vector<DenseLayer> hidden,
                   std::optional<ScalarHead> head, bool folded_bias)
    : first_(std::move(first_layer)),
      first_activation_(first_activation),
      hidden_(std::move(hidden)),
      head_(std::move(head)),
      folded_bias_(folded_bias) {
  if (first_.rows() < 1 || first_.cols() < (folded_bias_ ? 2 : 1))
    throw DimensionError("MlpModel: empty first layer");
  Eigen::Index width = first_.rows();
  for (const auto& l : hidden_) {
    if (l.weight.cols() != width || l.weight.rows() < 1 || l.bias.size() != l.weight.rows())
      throw DimensionError("MlpModel: hidden layer shapes do not chain");
    width = l.weight.rows();
  }
  if (head_) {
    if (head_->weight.size() != width) throw DimensionError("MlpModel: head width mismatch");
  } else if (width != 1) {
    throw DimensionError("MlpModel: without a head the last layer must have width 1");
  }
}

MlpModel MlpModel::random(const Architecture& arch, uint64_t seed) {
  if (arch.input_dim < 1 || arch.widths.empty()) throw ArgumentError("Architecture: need d >= 1 and a first width");
  for (int w : arch.widths)
    if (w < 1) throw ArgumentError("Architecture: widths must be >= 1");
  if (!(arch.init_gain >= 0.0) || !std::isfinite(arch.init_gain)) throw ArgumentError("Architecture: bad init_gain");
  Rng rng(seed);
  auto fill = [&](Eigen::Index rows, Eigen::Index cols, Eigen::Index fan_in) {
    const double s = arch.init_gain / std::sqrt(static_cast<double>(fan_in));
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-s, s);
    return m;
  };
  const int d_eff = arch.input_dim + (arch.folded_bias ? 1 : 0);
  Matrix w1 = fill(arch.widths[0], d_eff, d_eff);
  std::vector<DenseLayer> hidden;
  for (std::size_t l = 1; l < arch.widths.size(); ++l) {
    const int in = arch.widths[l - 1];
    const int out = arch.widths[l];
    Matrix w = fill(out, in, in);
    Vector b = fill(out, 1, in).col(0);
    hidden.push_back({std::move(w), std::move(b), arch.activation});
  }
  std::optional<ScalarHead> head;
  if (arch.head) {
    const int in = arch.widths.back();
    Vector w = fill(in, 1, in).col(0);
    const double b = fill(1, 1, in)(0, 0);
    head = ScalarHead{std::move(w), b};
  }
  return MlpModel(std::move(w1), arch.activation, std::move(hidden), std::move(head), arch.folded_bias);
}

int MlpModel::input_dim() const { return static_cast<int>(first_.cols()) - (folded_bias_ ? 1 : 0); }

std::size_t MlpModel::parameter_count() const {
  std::size_t n = static_cast<std::size_t>(first_.size());
  for (const auto& l : hidden_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  if (head_) n += static_cast<std::size_t>(head_->weight.size()) + 1;
  return n;
}

Vector MlpModel::parameters() const {
  Vector theta(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index pos = 0;
  auto put_matrix = [&](const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) theta[pos++] = m(i, j);
  };
  put_matrix(first_);
  for (const auto& l : hidden_) {
    put_matrix(l.weight);
    theta.segment(pos, l.bias.size()) = l.bias;
    pos += l.bias.size();
  }
  if (head_) {
    theta.segment(pos, head_->weight.size()) = head_->weight;
    pos += head_->weight.size();
    theta[pos++] = head_->bias;
  }
  return theta;
}

void MlpModel::set_parameters(const Eigen::Ref<const Vector>& theta) {
  if (static_cast<std::size_t>(theta.size()) != parameter_count())
    throw DimensionError("set_parameters: wrong parameter count");
  Eigen::Index pos = 0;
  auto get_matrix = [&](Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = theta[pos++];
  };
  get_matrix(first_);
  for (auto& l : hidden_) {
    get_matrix(l.weight);
    l.bias = theta.segment(pos, l.bias.size());
    pos += l.bias.size();
  }
  if (head_) {
    head_->weight = theta.segment(pos, head_->weight.size());
    pos += head_->weight.size();
    head_->bias = theta[pos++];
  }
}

Vector MlpModel::effective_input(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != input_dim()) throw DimensionError("model input has wrong length");
  if (!folded_bias_) return x;
  Vector xe(x.size() + 1);
  xe.head(x.size()) = x;
  xe[x.size()] = 1.0;
  return xe;
}

double forward(const MlpModel& model, const Eigen::Ref<const Vector>& x) {
  Vector h = activate(model.first_activation(), model.first_layer() * model.effective_input(x));
  for (const auto& l : model.hidden()) h = activate(l.activation, l.weight * h + l.bias);
  if (model.head()) return model.head()->weight.dot(h) + model.head()->bias;
  return h[0];
}

GradPair backward(const MlpModel& model, const Eigen::Ref<const Vector>& x) {
  const Vector xe = model.effective_input(x);
  const auto& hidden = model.hidden();
  std::vector<Vector> pre;   // pre-activations, first layer first
  std::vector<Vector> post;  // activations
  pre.push_back(model.first_layer() * xe);
  post.push_back(activate(model.first_activation(), pre.back()));
  for (const auto& l : hidden) {
    pre.push_back(l.weight * post.back() + l.bias);
    post.push_back(activate(l.activation, pre.back()));
  }

  GradPair g;
  g.grad_w.resize(static_cast<Eigen::Index>(model.parameter_count()));
  Eigen::Index tail = g.grad_w.size();

  Vector dh;
  if (model.head()) {
    g.value = model.head()->weight.dot(post.back()) + model.head()->bias;
    g.grad_w[--tail] = 1.0;
    tail -= model.head()->weight.size();
    g.grad_w.segment(tail, model.head()->weight.size()) = post.back();
    dh = model.head()->weight;
  } else {
    g.value = post.back()[0];
    dh = Vector::Ones(1);
  }

  for (std::size_t li = hidden.size(); li-- > 0;) {
    const auto& l = hidden[li];
    const Vector dz = dh.cwiseProduct(activate_grad(l.activation, pre[li + 1]));
    tail -= l.bias.size();
    g.grad_w.segment(tail, l.bias.size()) = dz;
    const Vector& in = post[li];
    tail -= l.weight.size();
    for (Eigen::Index i = 0; i < l.weight.rows(); ++i)
      g.grad_w.segment(tail + i * l.weight.cols(), l.weight.cols()) = dz[i] * in;
    dh = l.weight.transpose() * dz;
  }

  g.first_signal = dh.cwiseProduct(activate_grad(model.first_activation(), pre[0]));
  const Matrix& w1 = model.first_layer();
  for (Eigen::Index i = 0; i < w1.rows(); ++i)
    g.grad_w.segment(i * w1.cols(), w1.cols()) = g.first_signal[i] * xe;
  g.grad_x = (w1.transpose() * g.first_signal).head(model.input_dim());
  return g;
}

GNorms g_norms(const MlpModel& model, const Matrix& data, int k) {
  if (data.rows() < 1) throw ArgumentError("g_norms: empty data");
  if (k < 1) throw ArgumentError("g_norms: k must be >= 1");
  const double p = 2.0 * k;
  const auto n = static_cast<std::size_t>(data.rows());
  std::vector<double> sw(n), sx(n);
  parallel_for(n, [&](std::size_t i) {
    const GradPair gp = backward(model, data.row(static_cast<Eigen::Index>(i)).transpose());
    sw[i] = pnorm_pow(gp.grad_w, p);
    sx[i] = pnorm_pow(gp.grad_x, p);
  });
  double tw = 0.0, tx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tw += sw[i];
    tx += sx[i];
  }
  return {std::pow(tw / static_cast<double>(n), 1.0 / p), std::pow(tx / static_cast<double>(n), 1.0 / p)};
}

FlatnessReport flatness(const MlpModel& model, const Matrix& data, const Vector& targets, double interp_tol) {
  if (data.rows() < 1) throw ArgumentError("flatness: empty data");
  if (targets.size() != data.rows()) throw DimensionError("flatness: target count mismatch");
  FlatnessReport r;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const GradPair gp = backward(model, data.row(i).transpose());
    r.flatness += gp.grad_w.squaredNorm();
    r.max_residual = std::max(r.max_residual, std::abs(gp.value - targets[i]));
  }
  r.flatness /= static_cast<double>(data.rows());
  r.interpolated = r.max_residual <= interp_tol;
  return r;
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()[0];
}

namespace {

// Unit vector in the dual norm: sign(y)|y|^{r-1} / ||y||_r^{r-1}.
Vector dual_map(const Vector& y, double r) {
  const double m = y.cwiseAbs().maxCoeff();
  if (m == 0.0) return Vector::Zero(y.size());
  Vector s(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double t = std::abs(y[i]) / m;
    s[i] = std::copysign(std::pow(t, r - 1.0), y[i]);
  }
  return s / std::pow(pnorm(y / m, r), r - 1.0);
}

}  // namespace

NormInterval operator_pnorm(const Matrix& a, double p, uint64_t seed, int restarts) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw ArgumentError("operator_pnorm: need finite p >= 2");
  if (a.size() == 0) throw DimensionError("operator_pnorm: empty matrix");
  if (!a.allFinite()) throw ArgumentError("operator_pnorm: non-finite entries");
  const double two = spectral_norm(a);
  if (p == 2.0) return {two, two};
  const double q = p / (p - 1.0);
  if (a.cols() == 1) {
    const double v = pnorm(a.col(0), p);
    return {v, v};
  }
  if (a.rows() == 1) {
    const double v = pnorm(a.row(0).transpose(), q);
    return {v, v};
  }

  const double inf_norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  const double one_norm = a.cwiseAbs().colwise().sum().maxCoeff();
  const double upper = std::min(std::pow(two, 2.0 / p) * std::pow(inf_norm, 1.0 - 2.0 / p),
                                std::pow(one_norm, 1.0 / p) * std::pow(inf_norm, 1.0 - 1.0 / p));

  std::vector<Vector> starts;
  for (Eigen::Index j = 0; j < a.cols(); ++j) starts.push_back(Vector::Unit(a.cols(), j));
  {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinV);
    starts.push_back(svd.matrixV().col(0));
  }
  Rng rng(seed);
  for (int r = 0; r < std::max(restarts, 8); ++r) starts.push_back(rng.normal_vector(a.cols()));

  double lower = 0.0;
  for (Vector x : starts) {
    double nx = pnorm(x, p);
    if (nx == 0.0) continue;
    x /= nx;
    double val = pnorm(a * x, p);
    for (int it = 0; it < 1000; ++it) {
      const Vector y = a * x;
      if (y.isZero(0.0)) break;
      Vector z = a.transpose() * dual_map(y, p);
      if (z.isZero(0.0)) break;
      Vector xn = dual_map(z, q);
      nx = pnorm(xn, p);
      xn /= nx;
      const double vn = pnorm(a * xn, p);
      x = std::move(xn);
      const bool done = std::abs(vn - val) <= 1e-15 * vn;
      val = std::max(val, vn);
      if (done) break;
    }
    lower = std::max(lower, val);
  }
  return {lower, upper};
}

}  // namespace sgdreg
