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
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "sgdreg/io.hpp"

namespace sgdreg {
namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("sgdreg_io_" + name)).string();
}

TEST(HexDouble, RoundTrip) {
  for (double v : {0.0, -0.0, 1.0, 0.1, -3.0e-310, 1.7976931348623157e308, std::numbers::pi}) {
    const double back = parse_hex_double(hex_double(v));
    EXPECT_EQ(std::signbit(back), std::signbit(v));
    EXPECT_EQ(back, v);
  }
  EXPECT_THROW(parse_hex_double("0x1.8p+1z"), ParseError);
  EXPECT_THROW(parse_hex_double(""), ParseError);
}

TEST(ModelJson, RoundTripIsBitExact) {
  Architecture a;
  a.input_dim = 3;
  a.widths = {5, 4};
  a.folded_bias = true;
  const MlpModel m = MlpModel::random(a, 12);
  const std::string path = temp_path("model.json");
  save_model(path, m);
  const MlpModel back = load_model(path);
  EXPECT_TRUE(back.parameters() == m.parameters());
  EXPECT_EQ(back.folded_bias(), true);
  EXPECT_EQ(back.input_dim(), 3);
  EXPECT_EQ(back.hidden().size(), 1u);
  const Vector x = Vector::LinSpaced(3, -1, 1);
  EXPECT_EQ(forward(back, x), forward(m, x));
  std::filesystem::remove(path);
}

TEST(ModelJson, HeadlessLinear) {
  const MlpModel m(Matrix::Constant(1, 2, 0.5), Activation::kLinear, {}, std::nullopt);
  const MlpModel back = model_from_json(model_to_json(m));
  EXPECT_FALSE(back.head().has_value());
  EXPECT_EQ(back.first_activation(), Activation::kLinear);
}

TEST(ModelJson, RejectsBadDocuments) {
  Architecture a;
  a.input_dim = 2;
  a.widths = {3};
  Json doc = model_to_json(MlpModel::random(a, 1));
  Json bad = doc;
  bad["schema_version"] = 2;
  EXPECT_THROW(model_from_json(bad), ParseError);
  bad = doc;
  bad["parameters_hex"].erase(0);
  EXPECT_THROW(model_from_json(bad), ParseError);
  bad = doc;
  bad.erase("kind");
  EXPECT_THROW(model_from_json(bad), ParseError);
  EXPECT_THROW(load_model(temp_path("absent.json")), ParseError);
}

TEST(Sidecar, RoundTrip) {
  const std::string csv = temp_path("data.csv");
  DatasetMeta meta;
  meta.spec.ambient_dim = 8;
  meta.spec.kind = ManifoldKind::kTorus;
  meta.spec.target = TargetKind::kLinear;
  meta.n = 40;
  meta.seed = 0xfedcba9876543210ull;
  write_dataset_sidecar(csv, meta);
  const DatasetMeta back = read_dataset_sidecar(csv);
  EXPECT_EQ(back.spec.ambient_dim, 8);
  EXPECT_EQ(back.spec.kind, ManifoldKind::kTorus);
  EXPECT_EQ(back.spec.target, TargetKind::kLinear);
  EXPECT_EQ(back.n, 40);
  EXPECT_EQ(back.seed, meta.seed);
  const Json doc = read_json(sidecar_path(csv));
  EXPECT_EQ(doc["spec"]["intrinsic_dim"], 2);
  std::filesystem::remove(sidecar_path(csv));
}

TEST(ReportJson, BoundReportFields) {
  BoundReport r;
  r.bound = "robust";
  r.rhs = std::numeric_limits<double>::infinity();
  r.lhs = 0.5;
  r.satisfied = true;
  r.c_label = "empirical-C";
  r.inputs = {{"eta", 0.1}, {"w", 12}};
  const Json a = to_json(r);
  EXPECT_TRUE(a["rhs"].is_null());
  EXPECT_EQ(a["lhs"], 0.5);
  EXPECT_EQ(a["inputs"]["w"], 12.0);
  EXPECT_TRUE(a["mc"].is_null());
  r.mc = MonteCarloInfo{100, 0.01, 7};
  EXPECT_EQ(to_json(r)["mc"]["samples"], 100);
  // Key order is stable, so reports are byte-reproducible.
  EXPECT_EQ(to_json(r).dump(), to_json(r).dump());
  EXPECT_EQ(a.begin().key(), "schema_version");
}

TEST(ReportJson, Verdict) {
  StabilityVerdict v;
  v.spectral_radius_estimate = 1.25;
  v.stable = false;
  v.full_space_radius = 1.3;
  const Json j = to_json(v);
  EXPECT_EQ(j["method"], "dense-oracle");
  EXPECT_EQ(j["full_space_radius"], 1.3);
  EXPECT_TRUE(j["dominant_in_cone"].is_null());
}

TEST(WriteJson, TrailingNewline) {
  const std::string path = temp_path("x.json");
  write_json(path, Json{{"a", 1}});
  std::ifstream f(path);
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "{\n  \"a\": 1\n}\n");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace sgdreg
