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

#include "sgdreg/data.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include <Eigen/QR>

namespace sgdreg {

namespace {
constexpr uint64_t kStreamTrain = 0;
constexpr uint64_t kStreamFresh = 1;
constexpr uint64_t kStreamEmbedding = 2;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

std::string to_string(ManifoldKind k) {
  switch (k) {
    case ManifoldKind::kCircle: return "circle";
    case ManifoldKind::kTorus: return "torus";
    case ManifoldKind::kSmoothCurve: return "smooth-curve";
  }
  return "unknown";
}

std::string to_string(TargetKind t) {
  switch (t) {
    case TargetKind::kLinear: return "linear";
    case TargetKind::kTrig: return "trig";
    case TargetKind::kCustom: return "custom";
  }
  return "unknown";
}

ManifoldKind manifold_kind_from_string(const std::string& s) {
  if (s == "circle") return ManifoldKind::kCircle;
  if (s == "torus") return ManifoldKind::kTorus;
  if (s == "smooth-curve") return ManifoldKind::kSmoothCurve;
  throw ArgumentError("unknown manifold kind '" + s + "'");
}

TargetKind target_kind_from_string(const std::string& s) {
  if (s == "linear") return TargetKind::kLinear;
  if (s == "trig") return TargetKind::kTrig;
  if (s == "custom") return TargetKind::kCustom;
  throw ArgumentError("unknown target kind '" + s + "'");
}

Manifold::Manifold(const ManifoldSpec& spec, uint64_t seed) : spec_(spec) {
  const int d = spec.ambient_dim;
  const int need = spec.kind == ManifoldKind::kCircle ? 2 : 4;
  if (d < need) {
    throw ArgumentError(to_string(spec.kind) + " needs ambient dimension >= " + std::to_string(need));
  }
  Rng rng(derive_seed(seed, kStreamEmbedding));
  Matrix g(d, d);
  for (int j = 0; j < d; ++j) g.col(j) = rng.normal_vector(d);
  Eigen::HouseholderQR<Matrix> qr(g);
  frame_ = qr.householderQ() * Matrix::Identity(d, d);

  linear_ = rng.normal_vector(d);
  linear_ /= linear_.norm();

  if (spec.kind == ManifoldKind::kSmoothCurve) harmonics_ = std::min(5, d / 2);
}

Vector Manifold::sample(Rng& rng) const {
  const double t = kTwoPi * rng.uniform();
  switch (spec_.kind) {
    case ManifoldKind::kCircle:
      return std::cos(t) * frame_.col(0) + std::sin(t) * frame_.col(1);
    case ManifoldKind::kTorus: {
      const double s = kTwoPi * rng.uniform();
      return (std::cos(t) * frame_.col(0) + std::sin(t) * frame_.col(1) + std::cos(s) * frame_.col(2) +
              std::sin(s) * frame_.col(3)) /
             std::numbers::sqrt2;
    }
    case ManifoldKind::kSmoothCurve: {
      Vector x = Vector::Zero(spec_.ambient_dim);
      for (int j = 1; j <= harmonics_; ++j)
        x += std::cos(j * t) * frame_.col(2 * j - 2) + std::sin(j * t) * frame_.col(2 * j - 1);
      return x / std::sqrt(static_cast<double>(harmonics_));
    }
  }
  return Vector();
}

namespace {

// Angle of x in the plane (qa, qb) and its gradient with respect to x.
double chart_angle(const Matrix& frame, int a, int b, const Eigen::Ref<const Vector>& x, Vector* grad) {
  const double u = frame.col(a).dot(x);
  const double v = frame.col(b).dot(x);
  if (grad) {
    const double r2 = u * u + v * v;
    *grad = r2 > 0.0 ? Vector((u * frame.col(b) - v * frame.col(a)) / r2) : Vector::Zero(x.size());
  }
  return std::atan2(v, u);
}

}  // namespace

double Manifold::target(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != spec_.ambient_dim) throw DimensionError("target: wrong input length");
  switch (spec_.target) {
    case TargetKind::kLinear: return linear_.dot(x);
    case TargetKind::kTrig: {
      const double a = chart_angle(frame_, 0, 1, x, nullptr);
      double f = std::sin(a) + 0.5 * std::cos(2.0 * a);
      if (spec_.kind == ManifoldKind::kTorus) f += 0.5 * std::sin(chart_angle(frame_, 2, 3, x, nullptr));
      return f;
    }
    case TargetKind::kCustom: break;
  }
  throw ArgumentError("custom targets are table-defined and have no generator");
}

Vector Manifold::target_gradient(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != spec_.ambient_dim) throw DimensionError("target_gradient: wrong input length");
  switch (spec_.target) {
    case TargetKind::kLinear: return linear_;
    case TargetKind::kTrig: {
      Vector ga;
      const double a = chart_angle(frame_, 0, 1, x, &ga);
      Vector g = (std::cos(a) - std::sin(2.0 * a)) * ga;
      if (spec_.kind == ManifoldKind::kTorus) {
        Vector gb;
        const double b = chart_angle(frame_, 2, 3, x, &gb);
        g += 0.5 * std::cos(b) * gb;
      }
      return g;
    }
    case TargetKind::kCustom: break;
  }
  throw ArgumentError("custom targets are table-defined and have no generator");
}

Dataset FreshSampler::draw(int count) {
  if (count < 0) throw ArgumentError("draw: negative count");
  Dataset out{Matrix(count, manifold_.spec().ambient_dim), Vector(count)};
  for (int i = 0; i < count; ++i) {
    const Vector x = draw();
    out.points.row(i) = x.transpose();
    out.targets[i] = manifold_.target(x);
  }
  return out;
}

Generated generate(const ManifoldSpec& spec, int n, uint64_t seed) {
  if (n < 1) throw ArgumentError("generate: n must be >= 1");
  if (spec.target == TargetKind::kCustom) throw ArgumentError("generate: custom targets cannot be generated");
  Manifold m(spec, seed);
  FreshSampler train(m, derive_seed(seed, kStreamTrain));
  Dataset data = train.draw(n);
  return {std::move(data), FreshSampler(std::move(m), derive_seed(seed, kStreamFresh))};
}

namespace {

std::string format_double(double v, CsvFloatMode mode) {
  char buf[64];
  std::snprintf(buf, sizeof buf, mode == CsvFloatMode::kHex ? "%a" : "%.17g", v);
  return buf;
}

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw ParseError(path + ":" + std::to_string(lineno) + ": empty line", lineno);
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      std::string field = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      const auto first = field.find_first_not_of(" \t");
      const auto last = field.find_last_not_of(" \t");
      field = first == std::string::npos ? std::string() : field.substr(first, last - first + 1);
      if (field.empty()) throw ParseError(path + ":" + std::to_string(lineno) + ": empty field", lineno);
      errno = 0;
      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (end != field.c_str() + field.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": not a finite number '" + field + "'", lineno);
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(rows.front().size()) +
                           " columns, found " + std::to_string(row.size()),
                       lineno);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": empty file", 1);
  return rows;
}

void write_rows(const std::string& path, const Matrix& m, CsvFloatMode mode) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j), mode);
    }
    out << '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << out.str();
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace

Matrix load_matrix_csv(const std::string& path) {
  const auto rows = read_rows(path);
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

void save_matrix_csv(const std::string& path, const Matrix& m, CsvFloatMode mode) { write_rows(path, m, mode); }

Dataset load_csv(const std::string& path) {
  const Matrix m = load_matrix_csv(path);
  if (m.cols() < 2) throw ParseError(path + ": need at least one feature column and a target column", 1);
  return {m.leftCols(m.cols() - 1), m.col(m.cols() - 1)};
}

void save_csv(const std::string& path, const Dataset& data, CsvFloatMode mode) {
  if (data.targets.size() != data.points.rows()) throw DimensionError("save_csv: target count mismatch");
  Matrix m(data.points.rows(), data.points.cols() + 1);
  m.leftCols(data.points.cols()) = data.points;
  m.col(data.points.cols()) = data.targets;
  write_rows(path, m, mode);
}

}  // namespace sgdreg
