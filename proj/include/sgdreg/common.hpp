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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sgdreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error taxonomy shared by all modules. The CLI maps these onto exit codes.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error(what), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

uint64_t splitmix64(uint64_t x);

// Deterministic child seed. Streams with distinct ids never share a seed for a
// fixed master, and the mapping is identical on every platform.
uint64_t derive_seed(uint64_t master, uint64_t stream);

// xoshiro256** with hand-rolled distributions. std:: distributions are
// implementation-defined, which would break byte-identical reruns across
// toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform on {0, ..., n-1}; unbiased (Lemire rejection).
  uint64_t uniform_index(uint64_t n);
  double normal();
  Vector normal_vector(Eigen::Index n);
  // Uniformly random size-b subset of {0..n-1}, returned sorted (Floyd).
  std::vector<int> subset(int n, int b);
  // Uniform point in the Euclidean ball of the given radius.
  Vector uniform_in_ball(Eigen::Index dim, double radius);

 private:
  uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Number of worker threads; SGDREG_THREADS overrides hardware_concurrency.
int worker_count();

// Runs body(i) for i in [0, count) on a fixed contiguous partition. Bodies
// must write only to slots owned by index i; callers reduce afterwards in
// index order so results do not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// C(n, b) as a double (exact below 2^53).
double binomial(int n, int b);

// Calls fn on every sorted b-subset of {0..n-1} in lexicographic order.
void for_each_combination(int n, int b,
                          const std::function<void(const std::vector<int>&)>& fn);

// Vector p-norm for finite p >= 1, and sum |v_i|^p.
double pnorm(const Eigen::Ref<const Vector>& v, double p);
double pnorm_pow(const Eigen::Ref<const Vector>& v, double p);

}  // namespace sgdreg
