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

#include "sgdreg/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sgdreg/data.hpp"
#include "sgdreg/io.hpp"
#include "sgdreg/model.hpp"
#include "sgdreg/sobolev.hpp"
#include "sgdreg/stability.hpp"
#include "sgdreg/train.hpp"

namespace sgdreg {

namespace {

class Divergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

// Flag values as given on the command line, defaults filled in.
Json config_snapshot(const CLI::App& app) {
  Json cfg = Json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (opt->get_expected_max() > 1) {
        cfg[name] = res;
      } else if (opt->get_type_size_max() == 0) {
        cfg[name] = true;
      } else {
        cfg[name] = res.empty() ? std::string() : res.back();
      }
    } else {
      cfg[name] = opt->get_type_size_max() == 0 ? Json(false) : Json(opt->get_default_str());
    }
  }
  return cfg;
}

void finish(const CLI::App& app, const std::string& command, uint64_t seed, const std::vector<std::string>& outputs,
            const std::string& manifest_path, Clock::time_point start) {
  RunManifest m;
  m.command = command;
  m.config = config_snapshot(app);
  m.seed = seed;
  m.outputs = outputs;
  m.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  write_json(manifest_path, to_json(m));
}

Matrix per_sample_gradients(const MlpModel& model, const Matrix& points) {
  Matrix g(points.rows(), static_cast<Eigen::Index>(model.parameter_count()));
  parallel_for(static_cast<std::size_t>(points.rows()), [&](std::size_t i) {
    const auto r = static_cast<Eigen::Index>(i);
    g.row(r) = backward(model, points.row(r).transpose()).grad_w.transpose();
  });
  return g;
}

Architecture make_architecture(int input_dim, const std::vector<int>& widths, const std::string& activation,
                               bool folded, double gain) {
  Architecture a;
  a.input_dim = input_dim;
  a.widths = widths;
  a.activation = activation_from_string(activation);
  a.folded_bias = folded;
  a.init_gain = gain;
  return a;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string manifold = "circle";
  std::string target = "trig";
  int d = 2;
  int n = 100;
  uint64_t seed = 0;
  bool hex = false;
  std::string out;
  std::string manifest;
};

int cmd_generate(const CLI::App& app, const GenerateArgs& a) {
  const auto start = Clock::now();
  ManifoldSpec spec{a.d, manifold_kind_from_string(a.manifold), target_kind_from_string(a.target)};
  const uint64_t seed = derive_seed(a.seed, kSeedOffsetGenerate);
  const Generated g = generate(spec, a.n, seed);
  save_csv(a.out, g.data, a.hex ? CsvFloatMode::kHex : CsvFloatMode::kDecimal);
  write_dataset_sidecar(a.out, {spec, a.n, seed});
  const std::string manifest = a.manifest.empty() ? a.out + ".manifest.json" : a.manifest;
  finish(app, "generate", a.seed, {a.out, sidecar_path(a.out)}, manifest, start);
  return kExitOk;
}

// ------------------------------------------------------------------- train

struct TrainArgs {
  std::string data;
  std::vector<int> widths{64, 64};
  std::string activation = "tanh";
  bool folded = false;
  double init_gain = 1.0;
  double eta = 0.1;
  int batch = 5;
  long iterations = 20000;
  long record_every = 100;
  double interp_tol = 1e-6;
  uint64_t seed = 0;
  std::string out;
  std::string trace;
  std::string manifest;
};

int cmd_train(const CLI::App& app, const TrainArgs& a) {
  const auto start = Clock::now();
  const Dataset data = load_csv(a.data);
  const uint64_t seed = derive_seed(a.seed, kSeedOffsetTrain);
  const Architecture arch =
      make_architecture(static_cast<int>(data.points.cols()), a.widths, a.activation, a.folded, a.init_gain);
  const MlpModel init = MlpModel::random(arch, derive_seed(seed, 0));
  TrainConfig tc;
  tc.eta = a.eta;
  tc.batch = a.batch;
  tc.iterations = a.iterations;
  tc.seed = seed;
  tc.interp_tol = a.interp_tol;
  tc.record_every = a.record_every;
  const TrainResult r = sgd_train(init, data.points, data.targets, tc);

  std::vector<std::string> outputs;
  const std::string summary_path = a.out + ".train.json";
  Json summary{{"schema_version", kSchemaVersion},
               {"iterations_run", r.iterations_run},
               {"diverged", r.diverged},
               {"interpolated", r.interpolated},
               {"final_max_residual", std::isfinite(r.final_max_residual) ? Json(r.final_max_residual) : Json()},
               {"final_loss", std::isfinite(r.loss_trace.back()) ? Json(r.loss_trace.back()) : Json()}};
  if (!r.diverged) {
    const FlatnessReport fl = flatness(r.final_model, data.points, data.targets, a.interp_tol);
    summary["flatness"] = fl.flatness;
    summary["w1_spectral"] = spectral_norm(r.final_model.first_layer());
    save_model(a.out, r.final_model);
    outputs.push_back(a.out);
  }
  write_json(summary_path, summary);
  outputs.push_back(summary_path);
  if (!a.trace.empty()) {
    std::ofstream f(a.trace, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + a.trace + "'");
    f << "step,loss,w1norm\n";
    for (std::size_t i = 0; i < r.recorded_steps.size(); ++i)
      f << r.recorded_steps[i] << ',' << format_number(r.loss_trace[i]) << ',' << format_number(r.w1_norm_trace[i])
        << '\n';
    outputs.push_back(a.trace);
  }
  const std::string manifest = a.manifest.empty() ? a.out + ".manifest.json" : a.manifest;
  finish(app, "train", a.seed, outputs, manifest, start);
  if (r.diverged) throw Divergence("training diverged after " + std::to_string(r.iterations_run) + " iterations");
  return kExitOk;
}

// --------------------------------------------------------------- stability

struct StabilityArgs {
  std::string gradients;
  std::string model;
  std::string data;
  double eta = 0.1;
  int batch = 1;
  int k = 2;
  std::string mode = "dense";
  long mc_batches = 10000;
  int max_terms = 64;
  double compress_tol = 1e-8;
  int max_iterations = 5000;
  int horizon = 0;
  int replicas = 2000;
  uint64_t seed = 0;
  std::string out;
  std::string manifest;
};

int cmd_stability(const CLI::App& app, const StabilityArgs& a) {
  const auto start = Clock::now();
  Matrix rows;
  if (!a.gradients.empty()) {
    rows = load_matrix_csv(a.gradients);
  } else {
    if (a.model.empty() || a.data.empty()) throw ArgumentError("stability: give --gradients or both --model and --data");
    rows = per_sample_gradients(load_model(a.model), load_csv(a.data).points);
  }
  const GradientSet g(rows);
  SgdConfig cfg;
  cfg.eta = a.eta;
  cfg.batch = a.batch;
  cfg.order = a.k;
  cfg.seed = derive_seed(a.seed, kSeedOffsetStability);
  cfg.num_batches = a.mc_batches;
  cfg.compression.max_terms = a.max_terms;
  cfg.compression.tol = a.compress_tol;
  StabilityOptions opt;
  opt.max_iterations = a.max_iterations;
  if (a.mode == "dense") {
    opt.method = StabilityMethod::kDenseOracle;
  } else if (a.mode == "power") {
    opt.method = StabilityMethod::kPowerIteration;
  } else {
    opt.method = StabilityMethod::kMonteCarlo;
    cfg.mode = SamplingMode::kMonteCarlo;
  }
  validate(g, cfg);

  Json report{{"schema_version", kSchemaVersion},
              {"command", "stability"},
              {"inputs",
               {{"n", g.n()},
                {"w", g.w()},
                {"eta", a.eta},
                {"batch", a.batch},
                {"k", a.k},
                {"mode", a.mode},
                {"mc_batches", a.mc_batches},
                {"seed", a.seed}}}};
  report["verdict"] = to_json(check_stability(g, cfg, opt));
  if (a.k == 2 && g.n() >= 2 && dense_size(g.w(), 2) <= 4096) {
    report["k2_closed_form"] = to_json(k2_closed_form(g, a.eta, a.batch));
  } else {
    report["k2_closed_form"] = nullptr;
  }
  report["moment_bound"] = to_json(moment_bound_check(g, a.eta, a.batch, a.k));
  report["holder"] = to_json(holder_corollary(g, a.eta, a.batch, a.k));
  if (a.horizon > 0) {
    InitialDistribution init;
    const Vector a0 = g.rows().row(0).transpose();
    init.point = a0.norm() > 0.0 ? Vector(a0 / a0.norm()) : Vector(Vector::Unit(g.w(), 0));
    const SimulationResult sim = simulate_linearized(g, cfg, init, a.horizon, a.replicas);
    Json norms = Json::array();
    for (double v : sim.norms) norms.push_back(std::isfinite(v) ? Json(v) : Json());
    report["simulation"] = {{"horizon", a.horizon},
                            {"replicas", a.replicas},
                            {"diverged", sim.diverged},
                            {"norms", norms},
                            {"log_growth_rate", sim.diverged ? Json() : Json(log_growth_rate(sim.norms))}};
  } else {
    report["simulation"] = nullptr;
  }
  write_json(a.out, report);
  const std::string manifest = a.manifest.empty() ? a.out + ".manifest.json" : a.manifest;
  finish(app, "stability", a.seed, {a.out}, manifest, start);
  return kExitOk;
}

// ------------------------------------------------------------------ bounds

struct BoundsArgs {
  std::vector<std::string> theorems;
  std::string model;
  std::string data;
  double eta = 0.1;
  int batch = 1;
  int k = 1;
  double delta = 0.05;
  double delta_approx = 0.1;
  int scatter_k = 1;
  double eps2 = -1.0;
  double c_hat = -1.0;
  int probe_samples = 32;
  long samples = 10000;
  uint64_t seed = 0;
  std::string out_dir;
};

int cmd_bounds(const CLI::App& app, const BoundsArgs& a) {
  const auto start = Clock::now();
  const MlpModel model = load_model(a.model);
  const Dataset data = load_csv(a.data);
  const uint64_t seed = derive_seed(a.seed, kSeedOffsetBounds);
  std::filesystem::create_directories(a.out_dir);

  BoundParams p;
  p.eta = a.eta;
  p.batch = a.batch;
  p.k = a.k;
  p.delta = a.delta;
  p.delta_approx = a.delta_approx;
  p.scatter_k = a.scatter_k;
  p.eps2 = a.eps2;
  p.samples = a.samples;
  p.seed = seed;

  Json probe = nullptr;
  if (a.c_hat >= 0.0) {
    p.c_hat = a.c_hat;
  } else {
    const SmoothnessProbe s =
        smoothness_probe_all(model, data.points, a.delta_approx, a.k, a.probe_samples, derive_seed(seed, 1));
    p.c_hat = s.c_hat;
    probe = {{"c_hat", s.c_hat},
             {"delta_approx", s.delta_approx},
             {"k", s.k},
             {"samples", s.samples},
             {"violation_rate", s.violation_rate}};
  }

  std::vector<std::string> outputs;
  for (const std::string& tag : a.theorems) {
    BoundReport r;
    if (tag == "sobolev-emp") {
      r = sobolev_emp_bound(model, data.points, p);
    } else if (tag == "sob-2k") {
      r = sob_neighborhood_bound(model, data.points, p);
    } else if (tag == "neighbor-grad") {
      r = neighborhood_grad_bound(model, data.points, p);
    } else if (tag == "gen1") {
      const DatasetMeta meta = read_dataset_sidecar(a.data);
      if (meta.spec.target == TargetKind::kCustom) throw ArgumentError("gen1: custom targets have no oracle");
      Generated gen = generate(meta.spec, meta.n, meta.seed);
      const Manifold& m = gen.fresh.manifold();
      TargetOracle oracle{[&m](const Vector& x) { return m.target(x); },
                          [&m](const Vector& x) { return m.target_gradient(x); }};
      r = generalization_bound(model, oracle, data.points, [&gen]() { return gen.fresh.draw(); }, p);
    } else if (tag == "robust") {
      r = robustness_bound(model, data.points, p);
    } else {
      throw ArgumentError("unknown theorem tag '" + tag + "'");
    }
    Json doc = to_json(r);
    doc["smoothness_probe"] = probe;
    const std::string path = (std::filesystem::path(a.out_dir) / ("bound-" + tag + ".json")).string();
    write_json(path, doc);
    outputs.push_back(path);
  }
  finish(app, "bounds", a.seed, outputs, (std::filesystem::path(a.out_dir) / "manifest.json").string(), start);
  return kExitOk;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  std::vector<double> etas;
  std::vector<int> batches;
  int reps = 5;
  std::string data;
  std::string manifold = "smooth-curve";
  std::string target = "trig";
  int d = 10;
  int n = 100;
  std::vector<int> widths{64, 64};
  std::string activation = "tanh";
  double init_gain = 1.0;
  long iterations = 20000;
  long record_every = 100;
  double interp_tol = 1e-6;
  uint64_t seed = 0;
  std::string out;
  std::string traces;
  std::string manifest;
};

int cmd_sweep(const CLI::App& app, const SweepArgs& a) {
  const auto start = Clock::now();
  const uint64_t seed = derive_seed(a.seed, kSeedOffsetSweep);
  Dataset data;
  if (!a.data.empty()) {
    data = load_csv(a.data);
  } else {
    const ManifoldSpec spec{a.d, manifold_kind_from_string(a.manifold), target_kind_from_string(a.target)};
    data = generate(spec, a.n, derive_seed(seed, 0)).data;
  }
  SweepConfig sc;
  sc.architecture =
      make_architecture(static_cast<int>(data.points.cols()), a.widths, a.activation, false, a.init_gain);
  sc.iterations = a.iterations;
  sc.interp_tol = a.interp_tol;
  sc.record_every = a.record_every;
  sc.seed = derive_seed(seed, 1);
  std::vector<SweepCell> grid;
  for (double eta : a.etas)
    for (int b : a.batches) grid.push_back({eta, b});
  const std::vector<SweepRow> rows = sweep(sc, data.points, data.targets, grid, a.reps);
  write_sweep_csv(a.out, rows);
  std::vector<std::string> outputs{a.out};
  if (!a.traces.empty()) {
    std::ofstream f(a.traces, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + a.traces + "'");
    f << "eta,batch,rep,step,w1norm\n";
    for (const auto& r : rows)
      for (std::size_t i = 0; i < r.w1_norm_trace.size(); ++i)
        f << format_number(r.eta) << ',' << r.batch << ',' << r.rep << ',' << i * a.record_every << ','
          << format_number(r.w1_norm_trace[i]) << '\n';
    outputs.push_back(a.traces);
  }
  const std::string manifest = a.manifest.empty() ? a.out + ".manifest.json" : a.manifest;
  finish(app, "sweep", a.seed, outputs, manifest, start);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"sgdreg: linear stability of SGD and Sobolev regularization of trained networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  GenerateArgs ga;
  CLI::App* gen = app.add_subcommand("generate", "Sample a synthetic manifold dataset to CSV");
  gen->add_option("--manifold", ga.manifold, "circle | torus | smooth-curve")
      ->check(CLI::IsMember({"circle", "torus", "smooth-curve"}))
      ->capture_default_str();
  gen->add_option("--target", ga.target, "linear | trig")->check(CLI::IsMember({"linear", "trig"}))->capture_default_str();
  gen->add_option("--d", ga.d, "Ambient dimension")->capture_default_str();
  gen->add_option("--n", ga.n, "Number of samples")->capture_default_str();
  gen->add_option("--seed", ga.seed, "Master seed")->capture_default_str();
  gen->add_flag("--hex", ga.hex, "Write hex-float columns (bit-exact)");
  gen->add_option("--out", ga.out, "Output CSV")->required();
  gen->add_option("--manifest", ga.manifest, "Manifest path (default <out>.manifest.json)");

  TrainArgs ta;
  CLI::App* tr = app.add_subcommand("train", "Train an MLP with minibatch SGD");
  tr->add_option("--data", ta.data, "Dataset CSV")->required();
  tr->add_option("--widths", ta.widths, "Layer widths, first layer first")->delimiter(',')->capture_default_str();
  tr->add_option("--activation", ta.activation, "tanh | relu | linear")
      ->check(CLI::IsMember({"tanh", "relu", "linear"}))
      ->capture_default_str();
  tr->add_flag("--folded-bias", ta.folded, "Append a constant-1 input for a first-layer bias");
  tr->add_option("--init-gain", ta.init_gain, "Initialization scale")->capture_default_str();
  tr->add_option("--eta", ta.eta, "Learning rate")->capture_default_str();
  tr->add_option("--batch", ta.batch, "Batch size")->capture_default_str();
  tr->add_option("--iterations", ta.iterations, "SGD steps")->capture_default_str();
  tr->add_option("--record-every", ta.record_every, "Trace interval")->capture_default_str();
  tr->add_option("--interp-tol", ta.interp_tol, "Max residual counted as interpolation")->capture_default_str();
  tr->add_option("--seed", ta.seed, "Master seed")->capture_default_str();
  tr->add_option("--out", ta.out, "Model checkpoint JSON")->required();
  tr->add_option("--trace", ta.trace, "Loss and ||W1||_2 trace CSV");
  tr->add_option("--manifest", ta.manifest, "Manifest path (default <out>.manifest.json)");

  StabilityArgs sa;
  CLI::App* st = app.add_subcommand("stability", "Linear stability of SGD at a minimum");
  st->add_option("--gradients", sa.gradients, "Per-sample gradient CSV (n rows, w columns)");
  st->add_option("--model", sa.model, "Model checkpoint (with --data)");
  st->add_option("--data", sa.data, "Dataset CSV (with --model)");
  st->add_option("--eta", sa.eta, "Learning rate")->required();
  st->add_option("--batch", sa.batch, "Batch size")->required();
  st->add_option("--k", sa.k, "Moment order")->capture_default_str();
  st->add_option("--mode", sa.mode, "dense | power | mc")->check(CLI::IsMember({"dense", "power", "mc"}))->capture_default_str();
  st->add_option("--mc-batches", sa.mc_batches, "Sampled batches in mc mode")->capture_default_str();
  st->add_option("--max-terms", sa.max_terms, "Rank budget of the power iteration")->capture_default_str();
  st->add_option("--compress-tol", sa.compress_tol, "Relative compression tolerance")->capture_default_str();
  st->add_option("--max-iterations", sa.max_iterations, "Power iteration cap")->capture_default_str();
  st->add_option("--horizon", sa.horizon, "Simulate the linearized dynamics for this many steps (0: off)")
      ->capture_default_str();
  st->add_option("--replicas", sa.replicas, "Simulation replicas")->capture_default_str();
  st->add_option("--seed", sa.seed, "Master seed")->capture_default_str();
  st->add_option("--out", sa.out, "Report JSON")->required();
  st->add_option("--manifest", sa.manifest, "Manifest path (default <out>.manifest.json)");

  BoundsArgs ba;
  CLI::App* bo = app.add_subcommand("bounds", "Evaluate stability-derived Sobolev and generalization bounds");
  bo->add_option("--theorem", ba.theorems, "sobolev-emp, sob-2k, neighbor-grad, gen1, robust")
      ->delimiter(',')
      ->required()
      ->check(CLI::IsMember(bound_tags()));
  bo->add_option("--model", ba.model, "Model checkpoint")->required();
  bo->add_option("--data", ba.data, "Training data CSV")->required();
  bo->add_option("--eta", ba.eta, "Learning rate")->required();
  bo->add_option("--batch", ba.batch, "Batch size")->required();
  bo->add_option("--k", ba.k, "Moment order")->capture_default_str();
  bo->add_option("--delta", ba.delta, "Neighborhood radius")->capture_default_str();
  bo->add_option("--delta-approx", ba.delta_approx, "Parameter-space probe radius")->capture_default_str();
  bo->add_option("--K", ba.scatter_k, "Scattered-condition overlap bound")->capture_default_str();
  bo->add_option("--eps2", ba.eps2, "Covering miss probability (< 0: estimate)")->capture_default_str();
  bo->add_option("--c-hat", ba.c_hat, "Smoothness constant (< 0: probe)")->capture_default_str();
  bo->add_option("--probe-samples", ba.probe_samples, "Probe draws per training point")->capture_default_str();
  bo->add_option("--samples", ba.samples, "Monte-Carlo budget")->capture_default_str();
  bo->add_option("--seed", ba.seed, "Master seed")->capture_default_str();
  bo->add_option("--out-dir", ba.out_dir, "Directory for bound-<tag>.json files")->required();

  SweepArgs wa;
  CLI::App* sw = app.add_subcommand("sweep", "Train over an (eta, batch) grid and tabulate g_W, g_x");
  sw->add_option("--etas", wa.etas, "Learning rates")->delimiter(',')->required();
  sw->add_option("--batches", wa.batches, "Batch sizes")->delimiter(',')->required();
  sw->add_option("--reps", wa.reps, "Repetitions per cell")->capture_default_str();
  sw->add_option("--data", wa.data, "Dataset CSV (default: generate one)");
  sw->add_option("--manifold", wa.manifold, "Manifold for the generated dataset")
      ->check(CLI::IsMember({"circle", "torus", "smooth-curve"}))
      ->capture_default_str();
  sw->add_option("--target", wa.target, "Target for the generated dataset")
      ->check(CLI::IsMember({"linear", "trig"}))
      ->capture_default_str();
  sw->add_option("--d", wa.d, "Ambient dimension of the generated dataset")->capture_default_str();
  sw->add_option("--n", wa.n, "Size of the generated dataset")->capture_default_str();
  sw->add_option("--widths", wa.widths, "Layer widths")->delimiter(',')->capture_default_str();
  sw->add_option("--activation", wa.activation, "tanh | relu | linear")
      ->check(CLI::IsMember({"tanh", "relu", "linear"}))
      ->capture_default_str();
  sw->add_option("--init-gain", wa.init_gain, "Initialization scale")->capture_default_str();
  sw->add_option("--iterations", wa.iterations, "SGD steps per run")->capture_default_str();
  sw->add_option("--record-every", wa.record_every, "Trace interval")->capture_default_str();
  sw->add_option("--interp-tol", wa.interp_tol, "Max residual counted as interpolation")->capture_default_str();
  sw->add_option("--seed", wa.seed, "Master seed")->capture_default_str();
  sw->add_option("--out", wa.out, "Output CSV")->required();
  sw->add_option("--traces", wa.traces, "||W1||_2 trace CSV");
  sw->add_option("--manifest", wa.manifest, "Manifest path (default <out>.manifest.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(*gen, ga);
    if (*tr) return cmd_train(*tr, ta);
    if (*st) return cmd_stability(*st, sa);
    if (*bo) return cmd_bounds(*bo, ba);
    if (*sw) return cmd_sweep(*sw, wa);
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const CompressionError& e) {
    std::cerr << "error: " << e.what() << " (raise --max-terms or use --mode mc)\n";
    return kExitCapacity;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const Divergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sgdreg
