// Copyright 2026 The cavarray Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavarray/circuit.hpp"
#include "cavarray/config.hpp"
#include "cavarray/dynamics.hpp"
#include "cavarray/error.hpp"
#include "cavarray/observables.hpp"
#include "cavarray/oracle.hpp"
#include "cavarray/sweep.hpp"

namespace cavarray::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
  std::string command;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  bool acknowledge_signs = false;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpace:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::InvalidInput:
    case ErrorKind::DimensionCap:
    case ErrorKind::Io:
      return kInvalidConfig;
    case ErrorKind::Inconclusive:
      return kInconclusive;
    default:
      return kNumericalFailure;
  }
}

int report(std::ostream& err, std::string_view kind, const std::string& message, int code) {
  err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
  return code;
}

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidInput, msg); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& context) {
  if (!j.is_object()) invalid(context + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) invalid(context + ": unknown key '" + key + "'");
  }
}

template <typename T>
T value_or(const json& j, const char* key, T fallback, const std::string& context) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(context + ": bad value for '" + key + "'");
  }
}

json load_config(const Options& opt) {
  std::ifstream in(opt.config_path);
  if (!in) invalid("cannot read config file '" + opt.config_path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    invalid(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) invalid("config must be a JSON object");
  if (j.contains("mode") && j.at("mode") != opt.command) {
    invalid("config mode '" + j.at("mode").dump() + "' does not match subcommand '" +
            opt.command + "'");
  }
  return j;
}

int resolve_workers(int configured, const Options& opt) {
  int workers = configured;
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      std::size_t used = 0;
      workers = std::stoi(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      invalid(std::string(kWorkersEnv) + " must be an integer");
    }
  }
  if (opt.workers) workers = *opt.workers;
  if (workers < 0) invalid("worker count must be >= 0");
  return workers;
}

fs::path output_dir(const Options& opt) {
  const fs::path dir = opt.out_dir.value_or(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + dir.string() + "'");
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  return out;
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

json provenance(const json& config) {
  return {{"config", config}, {"version", CAVARRAY_VERSION}};
}

// Point runs ---------------------------------------------------------------

const std::set<std::string> kPointKeys = {"mode",       "model",      "seed",      "t_final",
                                          "integrator", "classifier", "truncation"};

struct PointConfig {
  ModelParams model;
  Seed seed = AsymmetricCoherent{};
  double t_final = 300.0;
  IntegratorControls integrator;
  ClassifierControls classifier;
  TruncationPolicy truncation;

  json to_json(const std::string& mode) const {
    return {{"mode", mode},
            {"model", cavarray::to_json(model)},
            {"seed", cavarray::to_json(seed)},
            {"t_final", t_final},
            {"integrator", cavarray::to_json(integrator)},
            {"classifier", cavarray::to_json(classifier)},
            {"truncation", cavarray::to_json(truncation)}};
  }
};

PointConfig point_from_json(const json& j) {
  PointConfig c;
  if (j.contains("model")) c.model = model_from_json(j.at("model"));
  if (j.contains("seed")) c.seed = seed_from_json(j.at("seed"));
  c.t_final = value_or(j, "t_final", c.t_final, "config");
  if (j.contains("integrator")) c.integrator = integrator_from_json(j.at("integrator"));
  if (j.contains("classifier")) c.classifier = classifier_from_json(j.at("classifier"));
  if (j.contains("truncation")) c.truncation = truncation_from_json(j.at("truncation"));
  if (!(c.t_final > 0.0)) invalid("t_final must be positive");
  return c;
}

struct PointOutcome {
  PointResult result;
  std::optional<PhaseLabel> label;
  std::optional<Error> failure;
  double t_final_used = 0.0;
};

/// Simulates and classifies, retrying once with doubled t_final when the
/// classification is inconclusive.
PointOutcome run_point(const PointConfig& c) {
  PointOutcome o;
  o.t_final_used = c.t_final;
  for (int attempt = 0; attempt < 2; ++attempt) {
    o.result = simulate(c.model, c.seed, o.t_final_used, c.integrator, c.truncation);
    try {
      o.label = classify(o.result.trajectory, c.classifier);
      o.failure.reset();
      return o;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Inconclusive) throw;
      o.failure = e;
      if (attempt == 0) o.t_final_used *= 2.0;
    }
  }
  return o;
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  out << "t,re_a_A,im_a_A,re_a_B,im_a_B,n_A,n_B,residual,top_population,"
         "trace_deviation,hermiticity_residual,min_eigenvalue\n";
  out.precision(12);
  for (const auto& s : traj.samples) {
    out << s.t << ',' << s.a_A.real() << ',' << s.a_A.imag() << ',' << s.a_B.real() << ','
        << s.a_B.imag() << ',' << s.n_A << ',' << s.n_B << ',' << s.residual << ','
        << s.top_population << ',' << s.diagnostics.trace_deviation << ','
        << s.diagnostics.hermiticity_residual << ',' << s.diagnostics.min_eigenvalue << '\n';
  }
}

json label_json(const PointOutcome& o) {
  json j = o.label ? to_json(*o.label) : json{{"phase", "Inconclusive"}};
  j["n_max_used"] = o.result.n_max_used;
  j["t_final_used"] = o.t_final_used;
  return j;
}

int cmd_run(const Options& opt, const json& j, std::ostream& out, std::ostream& err) {
  check_keys(j, kPointKeys, "run config");
  const PointConfig c = point_from_json(j);
  const json resolved = c.to_json("run");
  const PointOutcome o = run_point(c);
  const fs::path dir = output_dir(opt);
  {
    auto f = open_output(dir / "trajectory.csv");
    write_trajectory(f, o.result.trajectory);
  }
  json meta = provenance(resolved);
  meta["result"] = label_json(o);
  write_json(dir / "trajectory.json", meta);
  out << meta.dump(2) << '\n';
  if (o.failure) return report(err, to_string(o.failure->kind()), o.failure->what(), kInconclusive);
  return kOk;
}

// Wigner dumps -------------------------------------------------------------

struct GridConfig {
  double x_min = -5.0, x_max = 5.0;
  int n_x = 101;
  double p_min = -5.0, p_max = 5.0;
  int n_p = 101;
};

GridConfig grid_from_json(const json& j) {
  check_keys(j, {"x_min", "x_max", "n_x", "p_min", "p_max", "n_p"}, "grid");
  GridConfig g;
  g.x_min = value_or(j, "x_min", g.x_min, "grid");
  g.x_max = value_or(j, "x_max", g.x_max, "grid");
  g.n_x = value_or(j, "n_x", g.n_x, "grid");
  g.p_min = value_or(j, "p_min", g.p_min, "grid");
  g.p_max = value_or(j, "p_max", g.p_max, "grid");
  g.n_p = value_or(j, "n_p", g.n_p, "grid");
  if (g.n_x < 2 || g.n_p < 2 || !(g.x_max > g.x_min) || !(g.p_max > g.p_min)) {
    invalid("grid needs min < max and at least two points per axis");
  }
  return g;
}

int cmd_wigner(const Options& opt, const json& j, std::ostream& out, std::ostream& err) {
  std::set<std::string> keys = kPointKeys;
  keys.insert({"grid", "cycle_samples"});
  check_keys(j, keys, "wigner config");
  const PointConfig c = point_from_json(j);
  const GridConfig g = j.contains("grid") ? grid_from_json(j.at("grid")) : GridConfig{};
  const int cycle_samples = value_or(j, "cycle_samples", 1, "wigner config");
  if (cycle_samples < 1) invalid("cycle_samples must be >= 1");
  json resolved = c.to_json("wigner");
  resolved["grid"] = {{"x_min", g.x_min}, {"x_max", g.x_max}, {"n_x", g.n_x},
                      {"p_min", g.p_min}, {"p_max", g.p_max}, {"n_p", g.n_p}};
  resolved["cycle_samples"] = cycle_samples;

  const PointOutcome o = run_point(c);
  if (o.failure) return report(err, to_string(o.failure->kind()), o.failure->what(), kInconclusive);

  // Snapshots over one cycle for a limit cycle, otherwise the final state.
  std::vector<std::pair<double, MeanFieldState>> snapshots;
  MeanFieldState state = o.result.trajectory.final_state;
  snapshots.emplace_back(state.t, state);
  if (o.label->kind == PhaseKind::Oscillating && o.label->period && cycle_samples > 1) {
    ModelParams p = c.model;
    p.n_max = o.result.n_max_used;
    IntegratorControls ic = c.integrator;
    const double step = *o.label->period / cycle_samples;
    ic.sample_interval = std::min(ic.sample_interval, step);
    ic.dt = std::min(ic.dt, ic.sample_interval);
    for (int k = 1; k < cycle_samples; ++k) {
      state = evolve(state, p, step, ic).final_state;
      snapshots.emplace_back(state.t, state);
    }
  }

  const fs::path dir = output_dir(opt);
  const auto xs = linspace(g.x_min, g.x_max, g.n_x);
  const auto ps = linspace(g.p_min, g.p_max, g.n_p);
  json grids = json::array();
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    const auto& [t, s] = snapshots[k];
    for (const auto& [name, rho] : {std::pair{"A", &s.rho_A}, std::pair{"B", &s.rho_B}}) {
      const WignerGrid w = wigner(*rho, xs, ps);
      const std::string file = std::string("wigner_") + name + "_" + std::to_string(k) + ".csv";
      auto f = open_output(dir / file);
      write_csv(f, w);
      grids.push_back({{"file", file},
                       {"sublattice", name},
                       {"t", t},
                       {"min", w.min()},
                       {"max", w.max()},
                       {"integral", w.integral()}});
    }
  }
  json meta = provenance(resolved);
  meta["result"] = label_json(o);
  meta["grids"] = grids;
  write_json(dir / "wigner.json", meta);
  out << meta.dump(2) << '\n';
  return kOk;
}

// Sweeps ---------------------------------------------------------------------

int cmd_sweep(const Options& opt, json j, std::ostream& out, std::ostream&) {
  j.erase("mode");
  SweepSpec spec = sweep_from_json(j);
  spec.workers = resolve_workers(spec.workers, opt);
  json resolved = to_json(spec);
  resolved["mode"] = "sweep";

  const PhaseTable table = run_sweep(spec);
  const fs::path dir = output_dir(opt);
  {
    auto f = open_output(dir / "sweep.csv");
    write_csv(f, table);
  }
  std::map<std::string, int> counts;
  json failures = json::array();
  for (const auto& r : table.rows) {
    ++counts[r.kind ? std::string(to_string(*r.kind)) : "Inconclusive"];
    if (!r.kind) {
      failures.push_back({{"axis1", r.axis1},
                          {"axis2", r.axis2 ? json(*r.axis2) : json(nullptr)},
                          {"detail", r.detail}});
    }
  }
  json meta = provenance(resolved);
  meta["axis1"] = table.axis1_name;
  meta["axis2"] = table.axis2_name ? json(*table.axis2_name) : json(nullptr);
  meta["counts"] = counts;
  meta["inconclusive"] = failures;
  if (table.axis2_name) {
    const Boundaries b = extract_boundary(table, spec.classifier.eps_crystal);
    auto lines = [](const std::vector<Polyline>& ls) {
      json arr = json::array();
      for (const auto& l : ls) {
        json pts = json::array();
        for (const auto& p : l) pts.push_back({p.axis1, p.axis2});
        arr.push_back(pts);
      }
      return arr;
    };
    meta["boundaries"] = {{"epsilon", spec.classifier.eps_crystal},
                          {"crystal", lines(b.crystal)},
                          {"oscillating", lines(b.oscillating)}};
  } else if (const auto tr = first_crystal_transition(table)) {
    meta["transition"] = *tr;
  }
  write_json(dir / "sweep.json", meta);
  json summary = {{"rows", table.rows.size()}, {"counts", counts}, {"csv", (dir / "sweep.csv").string()}};
  if (meta.contains("transition")) summary["transition"] = meta["transition"];
  out << summary.dump(2) << '\n';
  return kOk;
}

// Exact oracle ---------------------------------------------------------------

Geometry geometry_from(const std::string& s) {
  if (s == "open") return Geometry::OpenChain;
  if (s == "periodic") return Geometry::PeriodicChain;
  invalid("lattice.geometry must be 'open' or 'periodic'");
}

json couplings_json(const LatticeCouplings& c) {
  return {{"delta", c.delta}, {"omega", c.omega}, {"J", c.J},         {"U", c.U},
          {"V", c.V},         {"t_ch", c.t_ch},   {"kappa", c.kappa}, {"hard_core", c.hard_core}};
}

LatticeCouplings couplings_from_json(const json& j) {
  check_keys(j, {"delta", "omega", "J", "U", "V", "t_ch", "kappa", "hard_core"}, "couplings");
  LatticeCouplings c;
  c.delta = value_or(j, "delta", c.delta, "couplings");
  c.omega = value_or(j, "omega", c.omega, "couplings");
  c.J = value_or(j, "J", c.J, "couplings");
  c.U = value_or(j, "U", c.U, "couplings");
  c.V = value_or(j, "V", c.V, "couplings");
  c.t_ch = value_or(j, "t_ch", c.t_ch, "couplings");
  c.kappa = value_or(j, "kappa", c.kappa, "couplings");
  c.hard_core = value_or(j, "hard_core", c.hard_core, "couplings");
  if (!(c.kappa > 0.0)) invalid("couplings.kappa must be positive");
  return c;
}

int cmd_oracle(const Options& opt, const json& j, std::ostream& out, std::ostream&) {
  check_keys(j, {"mode", "lattice", "model", "z", "couplings", "method", "reference", "steady_state"},
             "oracle config");
  if (!j.contains("lattice")) invalid("oracle config: missing 'lattice'");
  const json& lj = j.at("lattice");
  check_keys(lj, {"n_sites", "geometry", "n_max", "dim_cap"}, "lattice");
  LatticeSpec spec;
  spec.n_sites = value_or(lj, "n_sites", spec.n_sites, "lattice");
  spec.geometry = geometry_from(value_or<std::string>(lj, "geometry", "open", "lattice"));
  spec.n_max = value_or(lj, "n_max", spec.n_max, "lattice");
  spec.dim_cap = value_or(lj, "dim_cap", spec.dim_cap, "lattice");
  spec.validate();

  if (j.contains("model") == j.contains("couplings")) {
    invalid("oracle config needs exactly one of 'model' (z-scaled) or 'couplings' (per bond)");
  }
  const int z = value_or(j, "z", 2, "oracle config");
  if (z < 1) invalid("z must be >= 1");
  LatticeCouplings bare;
  json scaled;
  if (j.contains("model")) {
    ModelParams m = model_from_json(j.at("model"));
    if (m.n_max && *m.n_max != spec.n_max) invalid("model.n_max disagrees with lattice.n_max");
    bare = LatticeCouplings::from_scaled(m, z);
  } else {
    bare = couplings_from_json(j.at("couplings"));
  }
  scaled = {{"delta", bare.delta}, {"omega", bare.omega}, {"zJ", bare.J * z}, {"U", bare.U},
            {"zV", bare.V * z},    {"t_ch", bare.t_ch * z}, {"kappa", bare.kappa},
            {"hard_core", bare.hard_core}};
  if (bare.hard_core && spec.n_max != 1) invalid("hard-core lattices need n_max = 1");

  SteadyStateControls controls;
  if (j.contains("steady_state")) {
    const json& sj = j.at("steady_state");
    check_keys(sj, {"residual_tol", "t_max", "kernel_tol", "nullspace_dim_cap"}, "steady_state");
    controls.residual_tol = value_or(sj, "residual_tol", controls.residual_tol, "steady_state");
    controls.t_max = value_or(sj, "t_max", controls.t_max, "steady_state");
    controls.kernel_tol = value_or(sj, "kernel_tol", controls.kernel_tol, "steady_state");
    controls.nullspace_dim_cap =
        value_or(sj, "nullspace_dim_cap", controls.nullspace_dim_cap, "steady_state");
  }
  controls.workers = std::max(1, resolve_workers(1, opt));

  const std::string method_name = value_or<std::string>(j, "method", "auto", "oracle config");
  SteadyStateMethod method;
  if (method_name == "NullSpace") method = SteadyStateMethod::NullSpace;
  else if (method_name == "LongTime") method = SteadyStateMethod::LongTime;
  else if (method_name == "auto") {
    method = spec.dim() <= controls.nullspace_dim_cap ? SteadyStateMethod::NullSpace
                                                      : SteadyStateMethod::LongTime;
  } else {
    invalid("method must be 'auto', 'NullSpace' or 'LongTime'");
  }
  const int reference = value_or(j, "reference", (spec.n_sites - 1) / 2, "oracle config");
  if (reference < 0 || reference >= spec.n_sites) invalid("reference site out of range");

  json resolved = {
      {"mode", "oracle"},
      {"lattice",
       {{"n_sites", spec.n_sites},
        {"geometry", spec.geometry == Geometry::OpenChain ? "open" : "periodic"},
        {"n_max", spec.n_max},
        {"dim_cap", spec.dim_cap}}},
      {"z", z},
      {"couplings", couplings_json(bare)},
      {"model", scaled},
      {"method", method == SteadyStateMethod::NullSpace ? "NullSpace" : "LongTime"},
      {"reference", reference},
      {"steady_state",
       {{"residual_tol", controls.residual_tol},
        {"t_max", controls.t_max},
        {"kernel_tol", controls.kernel_tol},
        {"nullspace_dim_cap", controls.nullspace_dim_cap}}}};

  const LatticeState state = steady_state(spec, bare, method, controls);
  const auto occ = site_occupations(state);
  const fs::path dir = output_dir(opt);
  {
    auto f = open_output(dir / "occupations.csv");
    f << "site,n\n";
    f.precision(12);
    for (int i = 0; i < spec.n_sites; ++i) f << i << ',' << occ[i] << '\n';
  }
  const auto rows = g2_table(state, reference);
  {
    auto f = open_output(dir / "g2.csv");
    write_csv(f, rows);
  }
  json meta = provenance(resolved);
  meta["residual"] = state.residual;
  meta["occupations"] = occ;
  meta["g2_by_distance"] = g2_by_distance(state);
  write_json(dir / "oracle.json", meta);
  out << meta.dump(2) << '\n';
  return kOk;
}

// Circuit mapping ------------------------------------------------------------

int cmd_circuit(const Options& opt, const json& j, std::ostream& out, std::ostream& err) {
  check_keys(j, {"mode", "circuit", "cancellation"}, "circuit config");
  if (j.contains("circuit") == j.contains("cancellation")) {
    invalid("circuit config needs exactly one of 'circuit' or 'cancellation'");
  }
  if (!opt.acknowledge_signs) {
    return report(err, "sign-acknowledgement-required",
                  "derived U and V are negative while phase diagrams use positive U, V; "
                  "rerun with --acknowledge-signs",
                  kInvalidConfig);
  }
  circuit::CircuitParams params;
  json resolved = {{"mode", "circuit"}};
  if (j.contains("circuit")) {
    params = circuit::circuit_from_json(j.at("circuit"));
  } else {
    const json& cj = j.at("cancellation");
    check_keys(cj, {"C", "L", "z", "target", "fixed"}, "cancellation");
    for (const char* key : {"C", "L", "target", "fixed"}) {
      if (!cj.contains(key)) invalid(std::string("cancellation: missing '") + key + "'");
    }
    const std::string target = value_or<std::string>(cj, "target", "", "cancellation");
    if (target != "E_J" && target != "C_J") invalid("cancellation.target must be 'E_J' or 'C_J'");
    params = circuit::solve_cancellation(
        value_or(cj, "C", 0.0, "cancellation"), value_or(cj, "L", 0.0, "cancellation"),
        value_or(cj, "z", 2, "cancellation"),
        target == "E_J" ? circuit::CancellationTarget::E_J : circuit::CancellationTarget::C_J,
        value_or(cj, "fixed", 0.0, "cancellation"));
    resolved["cancellation"] = cj;
  }
  resolved["circuit"] = circuit::to_json(params);
  const circuit::CircuitDerived d = circuit::derive(params);
  json meta = provenance(resolved);
  meta["derived"] = circuit::to_json(d, params.z);
  if (opt.out_dir) write_json(output_dir(opt) / "circuit.json", meta);
  out << meta.dump(2) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Driven-dissipative cavity array simulator", "cavarray"};
  app.require_subcommand(1);
  Options opt;
  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", opt.config_path, "JSON configuration file")->required();
    sub->add_option("-o,--out", opt.out_dir, "Output directory");
    sub->add_option("-w,--workers", opt.workers, "Worker count (overrides config and environment)");
    return sub;
  };
  add("run", "Simulate and classify one parameter point");
  add("sweep", "Phase diagram over a parameter grid");
  add("oracle", "Exact steady state of a small chain");
  add("wigner", "Wigner functions of the asymptotic sublattice states");
  add("circuit", "Map circuit elements to model couplings")
      ->add_flag("--acknowledge-signs", opt.acknowledge_signs,
                 "Accept that derived U and V carry negative signs");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report(err, "invalid-arguments", e.what(), kInvalidConfig);
  }
  opt.command = app.get_subcommands().front()->get_name();

  try {
    const json config = load_config(opt);
    if (opt.command == "run") return cmd_run(opt, config, out, err);
    if (opt.command == "sweep") return cmd_sweep(opt, config, out, err);
    if (opt.command == "oracle") return cmd_oracle(opt, config, out, err);
    if (opt.command == "wigner") return cmd_wigner(opt, config, out, err);
    return cmd_circuit(opt, config, out, err);
  } catch (const Error& e) {
    return report(err, to_string(e.kind()), e.what(), exit_code(e.kind()));
  } catch (const std::exception& e) {
    return report(err, "internal", e.what(), kNumericalFailure);
  }
}

}  // namespace cavarray::cli
