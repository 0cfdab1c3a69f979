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

#include "sgdreg/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include <Eigen/Dense>

namespace sgdreg {

namespace {

using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

long double ipow(long double x, int k) {
  long double r = 1.0L;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

long double dot_ld(const Vector& a, const Vector& b) {
  long double s = 0.0L;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    s += static_cast<long double>(a[i]) * static_cast<long double>(b[i]);
  return s;
}

void check_compatible(const SymTensor& a, const SymTensor& b, const char* op) {
  if (a.order() != b.order() || a.dim() != b.dim()) {
    throw DimensionError(std::string(op) + ": order/dim mismatch (" +
                         std::to_string(a.order()) + "," + std::to_string(a.dim()) + ") vs (" +
                         std::to_string(b.order()) + "," + std::to_string(b.dim()) + ")");
  }
}

long double inner_ld(const SymTensor& a, const SymTensor& b) {
  const int k = a.order();
  long double s = 0.0L;
  for (const auto& ta : a.terms()) {
    long double row = 0.0L;
    for (const auto& tb : b.terms())
      row += static_cast<long double>(tb.coeff) * ipow(dot_ld(ta.vec, tb.vec), k);
    s += static_cast<long double>(ta.coeff) * row;
  }
  return s;
}

// Scale used for the clipping tolerance of ||A||^2: (sum |c_i| ||v_i||^k)^2.
double magnitude_scale(const SymTensor& a) {
  double s = 0.0;
  for (const auto& t : a.terms()) s += std::abs(t.coeff) * std::pow(t.vec.norm(), a.order());
  return s * s;
}

double clipped_sqrt(long double sq, double scale) {
  if (sq >= 0.0L) return std::sqrt(static_cast<double>(sq));
  if (static_cast<double>(-sq) <= 1e-12 * scale) return 0.0;
  throw NumericError("frob_norm: squared norm " + std::to_string(static_cast<double>(sq)) +
                     " is negative beyond round-off");
}

}  // namespace

SymTensor::SymTensor(int order, int dim) : order_(order), dim_(dim) {
  if (order < 1) throw ArgumentError("SymTensor: order must be >= 1");
  if (dim < 1) throw ArgumentError("SymTensor: dim must be >= 1");
}

SymTensor::SymTensor(int order, int dim, std::vector<RankOneTerm> terms)
    : SymTensor(order, dim) {
  for (const auto& t : terms) {
    if (t.vec.size() != dim) {
      throw DimensionError("SymTensor: term vector of length " + std::to_string(t.vec.size()) +
                           ", expected " + std::to_string(dim));
    }
  }
  terms_ = std::move(terms);
}

SymTensor SymTensor::scaled(double s) const {
  std::vector<RankOneTerm> out = terms_;
  for (auto& t : out) t.coeff *= s;
  return SymTensor(order_, dim_, std::move(out));
}

SymTensor operator+(const SymTensor& a, const SymTensor& b) {
  check_compatible(a, b, "operator+");
  std::vector<RankOneTerm> out = a.terms_;
  out.insert(out.end(), b.terms_.begin(), b.terms_.end());
  return SymTensor(a.order_, a.dim_, std::move(out));
}

SymTensor operator-(const SymTensor& a, const SymTensor& b) { return a + b.scaled(-1.0); }

std::size_t dense_size(int dim, int order) {
  std::size_t n = 1;
  for (int i = 0; i < order; ++i) {
    if (n > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(dim))
      return std::numeric_limits<std::size_t>::max();
    n *= static_cast<std::size_t>(dim);
  }
  return n;
}

DenseTensor::DenseTensor(int order, int dim, std::vector<double> entries, std::size_t cap)
    : order_(order), dim_(dim), entries_(std::move(entries)) {
  if (order < 1 || dim < 1) throw ArgumentError("DenseTensor: order and dim must be >= 1");
  const std::size_t n = dense_size(dim, order);
  if (n > cap) {
    throw CapacityError("DenseTensor: " + std::to_string(dim) + "^" + std::to_string(order) +
                        " entries exceed cap " + std::to_string(cap));
  }
  if (entries_.size() != n) throw DimensionError("DenseTensor: entry count != dim^order");
}

double DenseTensor::at(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != order_) throw DimensionError("DenseTensor::at: index rank");
  std::size_t flat = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw DimensionError("DenseTensor::at: index out of range");
    flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return entries_[flat];
}

double DenseTensor::frob_norm() const {
  long double s = 0.0L;
  for (double e : entries_) s += static_cast<long double>(e) * e;
  return std::sqrt(static_cast<double>(s));
}

double DenseTensor::dot(const DenseTensor& other) const {
  if (other.order_ != order_ || other.dim_ != dim_) throw DimensionError("DenseTensor::dot");
  long double s = 0.0L;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    s += static_cast<long double>(entries_[i]) * other.entries_[i];
  return static_cast<double>(s);
}

SymTensor rank_one(std::span<const double> coeffs, std::span<const Vector> vectors, int order) {
  if (order < 1) throw ArgumentError("rank_one: order must be >= 1");
  if (coeffs.empty() || vectors.empty()) throw ArgumentError("rank_one: need at least one term");
  if (coeffs.size() != vectors.size())
    throw DimensionError("rank_one: coefficient and vector counts differ");
  const auto dim = vectors[0].size();
  if (dim < 1) throw DimensionError("rank_one: empty vector");
  std::vector<RankOneTerm> terms;
  terms.reserve(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (vectors[i].size() != dim) throw DimensionError("rank_one: vectors have different lengths");
    terms.push_back({coeffs[i], vectors[i]});
  }
  return SymTensor(order, static_cast<int>(dim), std::move(terms));
}

double inner(const SymTensor& a, const SymTensor& b) {
  check_compatible(a, b, "inner");
  return static_cast<double>(inner_ld(a, b));
}

double frob_norm(const SymTensor& a) { return clipped_sqrt(inner_ld(a, a), magnitude_scale(a)); }

double frob_distance(const SymTensor& a, const SymTensor& b) {
  check_compatible(a, b, "frob_distance");
  const long double sq = inner_ld(a, a) - 2.0L * inner_ld(a, b) + inner_ld(b, b);
  const double scale = std::sqrt(magnitude_scale(a)) + std::sqrt(magnitude_scale(b));
  return clipped_sqrt(sq, scale * scale);
}

DenseTensor to_dense(const SymTensor& a, std::size_t cap) {
  const std::size_t n = dense_size(a.dim(), a.order());
  if (n > cap) {
    throw CapacityError("to_dense: " + std::to_string(a.dim()) + "^" + std::to_string(a.order()) +
                        " entries exceed cap " + std::to_string(cap));
  }
  const auto w = static_cast<std::size_t>(a.dim());
  std::vector<double> out(n, 0.0);
  std::vector<double> cur, next;
  for (const auto& t : a.terms()) {
    cur.assign(1, t.coeff);
    for (int j = 0; j < a.order(); ++j) {
      next.resize(cur.size() * w);
      for (std::size_t i = 0; i < cur.size(); ++i)
        for (std::size_t l = 0; l < w; ++l) next[i * w + l] = cur[i] * t.vec[static_cast<Eigen::Index>(l)];
      cur.swap(next);
    }
    for (std::size_t i = 0; i < n; ++i) out[i] += cur[i];
  }
  return DenseTensor(a.order(), a.dim(), std::move(out), cap);
}

double evaluate_form(const SymTensor& a, const Eigen::Ref<const Vector>& x) {
  if (x.size() != a.dim()) throw DimensionError("evaluate_form: length mismatch");
  double s = 0.0;
  for (const auto& t : a.terms()) s += t.coeff * std::pow(t.vec.dot(x), a.order());
  return s;
}

Vector contract_all_but_one(const SymTensor& a, const Eigen::Ref<const Vector>& x) {
  if (x.size() != a.dim()) throw DimensionError("contract_all_but_one: length mismatch");
  Vector g = Vector::Zero(a.dim());
  for (const auto& t : a.terms()) g += (t.coeff * std::pow(t.vec.dot(x), a.order() - 1)) * t.vec;
  return g;
}

RankOneApprox best_rank_one(const SymTensor& a, uint64_t seed, int max_iterations) {
  const int k = a.order();
  const Eigen::Index w = a.dim();
  RankOneApprox best{0.0, Vector::Unit(w, 0)};
  if (a.rank() == 0) return best;

  if (k == 1) {
    Vector s = Vector::Zero(w);
    for (const auto& t : a.terms()) s += t.coeff * t.vec;
    const double nrm = s.norm();
    if (nrm > 0.0) best = {nrm, s / nrm};
    return best;
  }

  std::vector<Vector> starts;
  {
    std::vector<std::size_t> order(a.rank());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> weight(a.rank());
    for (std::size_t i = 0; i < a.rank(); ++i)
      weight[i] = std::abs(a.terms()[i].coeff) * std::pow(a.terms()[i].vec.norm(), k);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return weight[l] > weight[r]; });
    for (std::size_t i = 0; i < std::min<std::size_t>(4, order.size()); ++i) {
      const Vector& v = a.terms()[order[i]].vec;
      if (v.norm() > 0.0) starts.push_back(v.normalized());
    }
    Rng rng(seed);
    for (int i = 0; i < 2; ++i) starts.push_back(rng.normal_vector(w).normalized());
  }

  const std::vector<double> signs = (k % 2 == 0) ? std::vector<double>{1.0, -1.0}
                                                 : std::vector<double>{1.0};
  for (double sign : signs) {
    for (const Vector& start : starts) {
      Vector x = start;
      double f = sign * evaluate_form(a, x);
      double shift = 0.0;
      for (int it = 0; it < max_iterations; ++it) {
        const Vector g = sign * contract_all_but_one(a, x);
        Vector y = g + shift * x;
        const double ny = y.norm();
        if (ny == 0.0) break;
        Vector xn = y / ny;
        const double fn = sign * evaluate_form(a, xn);
        if (fn < f - 1e-14 * std::abs(f)) {
          // Non-ascent step: raise the shift (convexifies the iteration).
          shift = 2.0 * shift + g.norm() + 1e-300;
          continue;
        }
        const double step = (xn - x).norm();
        x = std::move(xn);
        const bool settled = std::abs(fn - f) <= 1e-16 * std::abs(fn) || step <= 1e-13;
        f = fn;
        if (settled) break;
      }
      const double value = evaluate_form(a, x);
      if (std::abs(value) > std::abs(best.value)) best = {value, x};
    }
  }
  return best;
}

namespace {

// Exact merge of identical directions; v and -v are the same direction up to
// the sign (-1)^k folded into the coefficient.
SymTensor merge_duplicates(const SymTensor& a) {
  const int k = a.order();
  std::map<std::vector<double>, std::size_t> index;
  std::vector<RankOneTerm> out;
  for (const auto& t : a.terms()) {
    if (t.coeff == 0.0 || t.vec.isZero(0.0)) continue;
    // Unit vectors with a positive leading entry, so parallel terms share a key.
    const double nrm = t.vec.norm();
    Vector v = t.vec / nrm;
    double c = static_cast<double>(t.coeff * ipow(nrm, k));
    Eigen::Index first = 0;
    while (v[first] == 0.0) ++first;
    if (v[first] < 0.0) {
      v = -v;
      if (k % 2 == 1) c = -c;
    }
    std::vector<double> key(v.data(), v.data() + v.size());
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(std::move(key), out.size());
      out.push_back({c, std::move(v)});
    } else {
      out[it->second].coeff += c;
    }
  }
  std::erase_if(out, [](const RankOneTerm& t) { return t.coeff == 0.0; });
  return SymTensor(a.order(), a.dim(), std::move(out));
}

CompressResult compress_order_two(const SymTensor& a, double norm_a, const CompressOptions& opt) {
  const Eigen::Index w = a.dim();
  Matrix s = Matrix::Zero(w, w);
  for (const auto& t : a.terms()) s.noalias() += t.coeff * t.vec * t.vec.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  const Vector& vals = eig.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(w));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
    return std::abs(vals[l]) > std::abs(vals[r]);
  });
  // tail[m] = sum of squared eigenvalues not kept when keeping m terms.
  std::vector<long double> tail(static_cast<std::size_t>(w) + 1, 0.0L);
  for (Eigen::Index m = w - 1; m >= 0; --m) {
    const long double v = vals[order[static_cast<std::size_t>(m)]];
    tail[static_cast<std::size_t>(m)] = tail[static_cast<std::size_t>(m) + 1] + v * v;
  }
  const long double total = tail[0];
  const long double allowed = static_cast<long double>(opt.tol) * opt.tol * total;
  std::size_t keep = 0;
  while (keep < static_cast<std::size_t>(w) && tail[keep] > allowed) ++keep;
  const bool ok = keep <= static_cast<std::size_t>(opt.max_terms);
  keep = std::min<std::size_t>(keep, static_cast<std::size_t>(opt.max_terms));
  std::vector<RankOneTerm> terms;
  for (std::size_t i = 0; i < keep; ++i) {
    const Eigen::Index j = order[i];
    if (vals[j] == 0.0) continue;
    terms.push_back({vals[j], eig.eigenvectors().col(j)});
  }
  const double rel = total > 0.0L ? std::sqrt(static_cast<double>(tail[keep] / total)) : 0.0;
  (void)norm_a;
  return {SymTensor(2, a.dim(), std::move(terms)), rel, ok};
}

CompressResult compress_greedy(const SymTensor& a, double norm_a, const CompressOptions& opt) {
  const int k = a.order();
  const long double norm2 = static_cast<long double>(norm_a) * norm_a;
  std::vector<Vector> kept;
  LongMatrix gram(0, 0);
  LongVector rhs(0);
  Vector coeffs(0);
  CompressResult best{SymTensor(k, a.dim()), 1.0, false};

  for (int step = 0; step < opt.max_terms; ++step) {
    std::vector<RankOneTerm> resid_terms = a.terms();
    for (std::size_t i = 0; i < kept.size(); ++i)
      resid_terms.push_back({-coeffs[static_cast<Eigen::Index>(i)], kept[i]});
    const SymTensor residual(k, a.dim(), std::move(resid_terms));
    const RankOneApprox dir = best_rank_one(residual, derive_seed(opt.seed, static_cast<uint64_t>(step)));
    if (dir.value == 0.0) break;

    const Vector& x = dir.direction;
    const auto m = static_cast<Eigen::Index>(kept.size());
    gram.conservativeResize(m + 1, m + 1);
    rhs.conservativeResize(m + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
      const long double g = ipow(dot_ld(kept[static_cast<std::size_t>(i)], x), k);
      gram(i, m) = g;
      gram(m, i) = g;
    }
    gram(m, m) = ipow(dot_ld(x, x), k);
    long double b = 0.0L;
    for (const auto& t : a.terms()) b += static_cast<long double>(t.coeff) * ipow(dot_ld(t.vec, x), k);
    rhs[m] = b;
    kept.push_back(x);

    const LongVector sol = gram.completeOrthogonalDecomposition().solve(rhs);
    coeffs = sol.cast<double>();
    const LongVector c = coeffs.cast<long double>();
    const long double res2 = norm2 - 2.0L * rhs.dot(c) + c.dot(gram * c);
    const double rel = res2 > 0.0L ? std::sqrt(static_cast<double>(res2)) / norm_a : 0.0;
    if (rel < best.relative_residual || best.tensor.rank() == 0) {
      std::vector<RankOneTerm> terms;
      for (std::size_t i = 0; i < kept.size(); ++i)
        terms.push_back({coeffs[static_cast<Eigen::Index>(i)], kept[i]});
      best = {SymTensor(k, a.dim(), std::move(terms)), rel, rel <= opt.tol};
    }
    if (rel <= opt.tol) break;
  }
  return best;
}

}  // namespace

CompressResult compress_best_effort(const SymTensor& a, const CompressOptions& options) {
  if (options.max_terms < 1) throw ArgumentError("compress: max_terms must be >= 1");
  const SymTensor merged = merge_duplicates(a);
  if (merged.rank() <= static_cast<std::size_t>(options.max_terms)) return {merged, 0.0, true};
  const double norm_a = frob_norm(merged);
  if (norm_a == 0.0) return {SymTensor(a.order(), a.dim()), 0.0, true};

  if (merged.order() == 1) {
    Vector s = Vector::Zero(merged.dim());
    for (const auto& t : merged.terms()) s += t.coeff * t.vec;
    return {SymTensor(1, merged.dim(), {{1.0, s}}), 0.0, true};
  }
  // For k = 2 the best rank-one subtraction is the dominant eigenpair, so the
  // greedy deflation is exactly a truncated eigendecomposition.
  if (merged.order() == 2 && merged.dim() <= 2048) return compress_order_two(merged, norm_a, options);
  return compress_greedy(merged, norm_a, options);
}

SymTensor compress(const SymTensor& a, const CompressOptions& options) {
  CompressResult r = compress_best_effort(a, options);
  if (!r.within_tolerance) {
    throw CompressionError("compress: relative residual " + std::to_string(r.relative_residual) +
                               " exceeds tol with " + std::to_string(options.max_terms) + " terms",
                           r.relative_residual);
  }
  return std::move(r.tensor);
}

}  // namespace sgdreg
