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


#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "sgdreg/data.hpp"
#include "sgdreg/sobolev.hpp"

namespace sgdreg {
namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("sgdreg_test_" + name)).string();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

ManifoldSpec spec(ManifoldKind kind, int d, TargetKind target = TargetKind::kTrig) {
  ManifoldSpec s;
  s.kind = kind;
  s.ambient_dim = d;
  s.target = target;
  return s;
}

TEST(Generate, CircleInPlane) {
  const Generated g = generate(spec(ManifoldKind::kCircle, 2), 4, 7);
  ASSERT_EQ(g.data.points.rows(), 4);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(g.data.points.row(i).norm(), 1.0, 1e-14);
}

TEST(Generate, NormWindowAndExactTargets) {
  for (ManifoldKind kind : {ManifoldKind::kCircle, ManifoldKind::kTorus, ManifoldKind::kSmoothCurve})
    for (TargetKind target : {TargetKind::kLinear, TargetKind::kTrig})
      for (int d : {4, 7, 10}) {
        const Generated g = generate(spec(kind, d, target), 50, 3);
        Manifold m(spec(kind, d, target), 3);
        for (int i = 0; i < 50; ++i) {
          const Vector x = g.data.points.row(i).transpose();
          EXPECT_GE(x.norm(), 0.5);
          EXPECT_LE(x.norm(), 2.0);
          EXPECT_EQ(g.data.targets[i], m.target(x));
        }
      }
}

TEST(Generate, Deterministic) {
  const Generated a = generate(spec(ManifoldKind::kTorus, 6), 20, 99);
  const Generated b = generate(spec(ManifoldKind::kTorus, 6), 20, 99);
  EXPECT_TRUE(a.data.points == b.data.points);
  EXPECT_TRUE(a.data.targets == b.data.targets);
  const Generated c = generate(spec(ManifoldKind::kTorus, 6), 20, 100);
  EXPECT_FALSE(a.data.points == c.data.points);
}

TEST(Generate, FreshDrawsAreIndependentOfTraining) {
  Generated g = generate(spec(ManifoldKind::kCircle, 3), 5, 1);
  const Dataset fresh = g.fresh.draw(5);
  EXPECT_FALSE(fresh.points == g.data.points);
  EXPECT_EQ(fresh.points.cols(), 3);
}

TEST(Generate, TorusNeedsFourDimensions) {
  EXPECT_THROW(generate(spec(ManifoldKind::kTorus, 3), 5, 1), ArgumentError);
  EXPECT_THROW(generate(spec(ManifoldKind::kCircle, 1), 5, 1), ArgumentError);
  EXPECT_THROW(generate(spec(ManifoldKind::kCircle, 3), 0, 1), ArgumentError);
  EXPECT_THROW(generate(spec(ManifoldKind::kCircle, 3, TargetKind::kCustom), 3, 1), ArgumentError);
}

TEST(Target, LinearGradientIsConstant) {
  Manifold m(spec(ManifoldKind::kSmoothCurve, 6, TargetKind::kLinear), 4);
  Rng rng(1);
  const Vector g0 = m.target_gradient(m.sample(rng));
  EXPECT_NEAR(g0.norm(), 1.0, 1e-14);
  for (int i = 0; i < 5; ++i) EXPECT_TRUE(m.target_gradient(m.sample(rng)) == g0);
}

TEST(Target, GradientMatchesFiniteDifferences) {
  for (ManifoldKind kind : {ManifoldKind::kCircle, ManifoldKind::kTorus, ManifoldKind::kSmoothCurve}) {
    Manifold m(spec(kind, 5), 8);
    Rng rng(2);
    for (int t = 0; t < 10; ++t) {
      const Vector x = m.sample(rng);
      const Vector g = m.target_gradient(x);
      Vector fd(5);
      for (int j = 0; j < 5; ++j) {
        Vector a = x, b = x;
        a[j] += 1e-6;
        b[j] -= 1e-6;
        fd[j] = (m.target(a) - m.target(b)) / 2e-6;
      }
      EXPECT_LT((g - fd).norm(), 1e-6 * (1 + g.norm()));
    }
  }
}

TEST(Covering, MissRateFallsWithSampleSize) {
  const ManifoldSpec s = spec(ManifoldKind::kTorus, 8);
  double prev = 2.0;
  for (int n : {50, 400}) {
    Generated g = generate(s, n, 5);
    const CoveringEstimate c = covering_check(g.data.points, 0.4, [&] { return g.fresh.draw(); }, 4000);
    EXPECT_LT(c.eps_hat, prev);
    prev = c.eps_hat;
  }
}

TEST(Csv, HexRoundTripIsBitExact) {
  const Generated g = generate(spec(ManifoldKind::kSmoothCurve, 6), 30, 12);
  const std::string path = temp_path("hex.csv");
  save_csv(path, g.data, CsvFloatMode::kHex);
  const Dataset back = load_csv(path);
  EXPECT_TRUE(back.points == g.data.points);
  EXPECT_TRUE(back.targets == g.data.targets);
  std::remove(path.c_str());
}

TEST(Csv, DecimalRoundTripIsBitExact) {
  const Generated g = generate(spec(ManifoldKind::kCircle, 3), 1, 12);
  const std::string path = temp_path("dec.csv");
  save_csv(path, g.data);
  const Dataset back = load_csv(path);
  EXPECT_TRUE(back.points == g.data.points);
  EXPECT_TRUE(back.targets == g.data.targets);
  std::remove(path.c_str());
}

TEST(Csv, Errors) {
  const std::string path = temp_path("bad.csv");
  write_file(path, "");
  EXPECT_THROW(load_csv(path), ParseError);
  write_file(path, "1,2,3\n4,5\n");
  try {
    load_csv(path);
    FAIL() << "ragged rows accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  write_file(path, "1,2\n3,4\n5,abc\n");
  try {
    load_csv(path);
    FAIL() << "non-numeric accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  write_file(path, "1,2\n3,4x\n");
  EXPECT_THROW(load_csv(path), ParseError);
  write_file(path, "5\n");
  EXPECT_THROW(load_csv(path), ParseError);
  EXPECT_THROW(load_csv(temp_path("does-not-exist.csv")), ParseError);
  std::remove(path.c_str());
}

TEST(Csv, MatrixRoundTrip) {
  Matrix m(2, 3);
  m << 0.1, -2.5, 1e-300, 3.0, 4.0 / 3.0, -0.0;
  const std::string path = temp_path("m.csv");
  save_matrix_csv(path, m, CsvFloatMode::kHex);
  EXPECT_TRUE(load_matrix_csv(path) == m);
  std::remove(path.c_str());
}

}  // namespace
}  // namespace sgdreg
