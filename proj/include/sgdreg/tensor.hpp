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

// Symmetric tensors held as sums of rank-one powers, sum_i c_i v_i^{(x)k}.
//
// Everything the stability analysis needs (inner products, Frobenius norms,
// contractions with x^{k-1}) reduces to dot products between the stored
// vectors, so no w^k array is ever formed outside the explicit dense oracle.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sgdreg/common.hpp"

namespace sgdreg {

struct RankOneTerm {
  double coeff = 0.0;
  Vector vec;
};

class SymTensor {
 public:
  // Zero tensor (no terms).
  SymTensor(int order, int dim);
  SymTensor(int order, int dim, std::vector<RankOneTerm> terms);

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t rank() const { return terms_.size(); }
  const std::vector<RankOneTerm>& terms() const { return terms_; }

  SymTensor scaled(double s) const;
  // Term-list concatenation; the result has rank() == a.rank() + b.rank().
  friend SymTensor operator+(const SymTensor& a, const SymTensor& b);
  friend SymTensor operator-(const SymTensor& a, const SymTensor& b);

 private:
  int order_;
  int dim_;
  std::vector<RankOneTerm> terms_;
};

inline constexpr std::size_t kDefaultDenseCap = 1'000'000;

class DenseTensor {
 public:
  DenseTensor(int order, int dim, std::vector<double> entries,
              std::size_t cap = kDefaultDenseCap);

  int order() const { return order_; }
  int dim() const { return dim_; }
  const std::vector<double>& entries() const { return entries_; }
  // Row-major multi-index: idx[0] is the slowest-varying position.
  double at(std::span<const int> idx) const;
  double frob_norm() const;
  double dot(const DenseTensor& other) const;

 private:
  int order_;
  int dim_;
  std::vector<double> entries_;
};

// dim^order, or SIZE_MAX when it overflows.
std::size_t dense_size(int dim, int order);

SymTensor rank_one(std::span<const double> coeffs, std::span<const Vector> vectors, int order);

// sum_ij a_i b_j (u_i . v_j)^k, accumulated in extended precision.
double inner(const SymTensor& a, const SymTensor& b);
double frob_norm(const SymTensor& a);
// Same as frob_norm(a - b) without building the concatenation.
double frob_distance(const SymTensor& a, const SymTensor& b);

DenseTensor to_dense(const SymTensor& a, std::size_t cap = kDefaultDenseCap);

// sum_i c_i (v_i . x)^k, the associated homogeneous form.
double evaluate_form(const SymTensor& a, const Eigen::Ref<const Vector>& x);
// sum_i c_i (v_i . x)^{k-1} v_i, i.e. the tensor contracted with x on all but one slot.
Vector contract_all_but_one(const SymTensor& a, const Eigen::Ref<const Vector>& x);

struct RankOneApprox {
  double value = 0.0;  // A . x^k at the returned unit vector
  Vector direction;
};

// Local maximizer of |A . x^k| on the unit sphere by shifted symmetric power
// iteration, started from the dominant stored terms plus seeded random starts.
RankOneApprox best_rank_one(const SymTensor& a, uint64_t seed = 0x5eed, int max_iterations = 500);

struct CompressOptions {
  int max_terms = 64;
  double tol = 1e-8;
  uint64_t seed = 0x5eed;
};

class CompressionError : public std::runtime_error {
 public:
  CompressionError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  // Achieved ||A - A'||_F / ||A||_F.
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct CompressResult {
  SymTensor tensor;
  double relative_residual = 0.0;
  bool within_tolerance = true;
};

// Greedy deflation: exact merge of duplicate directions, then repeated best
// rank-one subtraction with a least-squares refit of all kept coefficients.
// Throws CompressionError when tol cannot be met within max_terms.
SymTensor compress(const SymTensor& a, const CompressOptions& options = {});
// Same algorithm; returns the best tensor found even when tol is missed.
CompressResult compress_best_effort(const SymTensor& a, const CompressOptions& options = {});

}  // namespace sgdreg
