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

#include "sgdreg/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sgdreg {

namespace {

Json shape_json(Eigen::Index rows, Eigen::Index cols, Activation a) {
  return Json{{"rows", rows}, {"cols", cols}, {"activation", to_string(a)}};
}

template <typename T>
T field(const Json& doc, const char* key, const std::string& where) {
  if (!doc.is_object() || !doc.contains(key)) throw ParseError(where + ": missing field '" + key + "'", 0);
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(where + ": bad field '" + key + "': " + e.what(), 0);
  }
}

void check_version(const Json& doc, const std::string& where) {
  if (field<int>(doc, "schema_version", where) != kSchemaVersion)
    throw ParseError(where + ": unsupported schema_version", 0);
}

// NaN and infinities have no JSON literal; they are written as null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json named_values(const std::vector<std::pair<std::string, double>>& values) {
  Json out = Json::object();
  for (const auto& [k, v] : values) out[k] = number(v);
  return out;
}

}  // namespace

const char* tool_version() { return "0.1.0"; }

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex_double(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw ParseError("not a floating-point literal '" + s + "'", 0);
  return v;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

void write_json(const std::string& path, const Json& doc) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << doc.dump(2) << '\n';
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

Json model_to_json(const MlpModel& model) {
  Json hidden = Json::array();
  for (const auto& l : model.hidden()) hidden.push_back(shape_json(l.weight.rows(), l.weight.cols(), l.activation));
  const Vector theta = model.parameters();
  Json dec = Json::array(), hex = Json::array();
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    dec.push_back(theta[i]);
    hex.push_back(hex_double(theta[i]));
  }
  return Json{{"schema_version", kSchemaVersion},
              {"kind", "mlp"},
              {"input_dim", model.input_dim()},
              {"folded_bias", model.folded_bias()},
              {"first_layer", shape_json(model.first_layer().rows(), model.first_layer().cols(),
                                         model.first_activation())},
              {"hidden", hidden},
              {"head", model.head().has_value()},
              {"parameter_count", model.parameter_count()},
              {"parameters", dec},
              {"parameters_hex", hex}};
}

MlpModel model_from_json(const Json& doc) {
  const std::string where = "model";
  check_version(doc, where);
  if (field<std::string>(doc, "kind", where) != "mlp") throw ParseError("model: kind must be 'mlp'", 0);
  const bool folded = field<bool>(doc, "folded_bias", where);
  const Json first = field<Json>(doc, "first_layer", where);
  Matrix w1 = Matrix::Zero(field<int>(first, "rows", where), field<int>(first, "cols", where));
  const Activation a1 = activation_from_string(field<std::string>(first, "activation", where));
  std::vector<DenseLayer> hidden;
  for (const auto& h : field<Json>(doc, "hidden", where)) {
    const int rows = field<int>(h, "rows", where);
    hidden.push_back({Matrix::Zero(rows, field<int>(h, "cols", where)), Vector::Zero(rows),
                      activation_from_string(field<std::string>(h, "activation", where))});
  }
  std::optional<ScalarHead> head;
  if (field<bool>(doc, "head", where)) {
    const auto width = hidden.empty() ? w1.rows() : hidden.back().weight.rows();
    head = ScalarHead{Vector::Zero(width), 0.0};
  }
  MlpModel model(std::move(w1), a1, std::move(hidden), std::move(head), folded);
  if (field<int>(doc, "input_dim", where) != model.input_dim()) throw ParseError("model: input_dim mismatch", 0);

  const auto hex = field<std::vector<std::string>>(doc, "parameters_hex", where);
  if (hex.size() != model.parameter_count()) throw ParseError("model: parameter count mismatch", 0);
  Vector theta(static_cast<Eigen::Index>(hex.size()));
  for (std::size_t i = 0; i < hex.size(); ++i) theta[static_cast<Eigen::Index>(i)] = parse_hex_double(hex[i]);
  model.set_parameters(theta);
  return model;
}

void save_model(const std::string& path, const MlpModel& model) { write_json(path, model_to_json(model)); }

MlpModel load_model(const std::string& path) {
  try {
    return model_from_json(read_json(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

std::string sidecar_path(const std::string& csv_path) { return csv_path + ".meta.json"; }

void write_dataset_sidecar(const std::string& csv_path, const DatasetMeta& meta) {
  const Json doc{{"schema_version", kSchemaVersion},
                 {"d", meta.spec.ambient_dim},
                 {"n", meta.n},
                 {"spec",
                  {{"kind", to_string(meta.spec.kind)},
                   {"intrinsic_dim", meta.spec.intrinsic_dim()},
                   {"target", to_string(meta.spec.target)}}},
                 {"seed", meta.seed}};
  write_json(sidecar_path(csv_path), doc);
}

DatasetMeta read_dataset_sidecar(const std::string& csv_path) {
  const std::string path = sidecar_path(csv_path);
  const Json doc = read_json(path);
  check_version(doc, path);
  DatasetMeta m;
  m.spec.ambient_dim = field<int>(doc, "d", path);
  m.n = field<int>(doc, "n", path);
  m.seed = field<uint64_t>(doc, "seed", path);
  const Json spec = field<Json>(doc, "spec", path);
  try {
    m.spec.kind = manifold_kind_from_string(field<std::string>(spec, "kind", path));
    m.spec.target = target_kind_from_string(field<std::string>(spec, "target", path));
  } catch (const ArgumentError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
  return m;
}

Json to_json(const BoundReport& r) {
  Json doc{{"schema_version", kSchemaVersion},
           {"bound", r.bound},
           {"rhs", number(r.rhs)},
           {"lhs", number(r.lhs)},
           {"satisfied", r.satisfied},
           {"in_regime", r.in_regime},
           {"regime_note", r.regime_note},
           {"c_label", r.c_label},
           {"inputs", named_values(r.inputs)},
           {"extras", named_values(r.extras)}};
  if (r.mc) {
    doc["mc"] = Json{{"samples", r.mc->samples}, {"stderr", number(r.mc->stderr_)}, {"seed", r.mc->seed}};
  } else {
    doc["mc"] = nullptr;
  }
  return doc;
}

Json to_json(const StabilityVerdict& v) {
  Json doc{{"spectral_radius_estimate", number(v.spectral_radius_estimate)},
           {"stable", v.stable},
           {"method", to_string(v.method)},
           {"iterations_used", v.iterations_used},
           {"tolerance", v.tolerance},
           {"inconclusive", v.inconclusive},
           {"max_compression_residual", number(v.max_compression_residual)}};
  doc["full_space_radius"] = v.full_space_radius ? number(*v.full_space_radius) : Json(nullptr);
  doc["dominant_in_cone"] = v.dominant_in_cone ? Json(*v.dominant_in_cone) : Json(nullptr);
  return doc;
}

Json to_json(const K2ClosedForm& c) {
  return Json{{"radius_kron", number(c.radius_kron)},
              {"radius_wu", number(c.radius_wu)},
              {"sharpness", number(c.sharpness)},
              {"nonuniformity", number(c.nonuniformity)}};
}

Json to_json(const MomentBoundReport& m) {
  Json per = Json::array();
  for (double v : m.per_coordinate) per.push_back(number(v));
  return Json{{"per_coordinate", per},         {"rhs_theorem", number(m.rhs_theorem)},
              {"rhs_proof", number(m.rhs_proof)}, {"summed_lhs", number(m.summed_lhs)},
              {"summed_rhs", number(m.summed_rhs)}, {"satisfied", m.satisfied}};
}

Json to_json(const HolderReport& h) { return Json{{"lhs", number(h.lhs)}, {"rhs", number(h.rhs)}}; }

Json to_json(const RunManifest& m) {
  return Json{{"schema_version", kSchemaVersion},
              {"command", m.command},
              {"tool_version", tool_version()},
              {"seed", m.seed},
              {"config", m.config},
              {"outputs", m.outputs},
              {"wall_seconds", m.wall_seconds}};
}

}  // namespace sgdreg
