// Copyright 2026 qnewton contributors
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
//
// Batch front-end: single solves, Newton runs, parameter sweeps and resource
// tables, all emitting deterministic CSV artifacts plus a JSON run manifest
// that the `replay` subcommand re-executes bit-identically.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qnewton/qnewton.hpp"

namespace {

using nlohmann::json;
using namespace qnewton;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

struct RunConfig {
  std::string command;
  std::string problem;
  int n = 8;
  int m = 4;
  std::string solver = "model";
  std::string mode = "auto";
  std::uint64_t shots = 10000;
  std::uint64_t seed = 1;
  bool prescale = true;
  bool sampled = false;
  int gs_iters = 25;
  double tol = 1e-6;
  int max_iters = 100;
  std::string vary = "m";
  std::vector<int> values;
  int repeat = 1;
  double n_unknowns = 0;
  double epsilon = 0;
  bool equation_form = false;
  bool timing = false;
  std::string out_dir;
  std::string prefix;

  json to_json() const {
    return {{"command", command}, {"problem", problem}, {"n", n},
            {"m", m}, {"solver", solver}, {"mode", mode},
            {"shots", shots}, {"seed", seed}, {"prescale", prescale},
            {"sampled", sampled}, {"gs_iters", gs_iters}, {"tol", tol},
            {"max_iters", max_iters}, {"vary", vary}, {"values", values},
            {"repeat", repeat}, {"n_unknowns", n_unknowns}, {"epsilon", epsilon},
            {"equation_form", equation_form}, {"timing", timing}, {"prefix", prefix}};
  }
  static RunConfig from_json(const json& j) {
    RunConfig c;
    c.command = j.at("command");
    c.problem = j.at("problem");
    c.n = j.at("n");
    c.m = j.at("m");
    c.solver = j.at("solver");
    c.mode = j.at("mode");
    c.shots = j.at("shots");
    c.seed = j.at("seed");
    c.prescale = j.at("prescale");
    c.sampled = j.at("sampled");
    c.gs_iters = j.at("gs_iters");
    c.tol = j.at("tol");
    c.max_iters = j.at("max_iters");
    c.vary = j.at("vary");
    c.values = j.at("values").get<std::vector<int>>();
    c.repeat = j.at("repeat");
    c.n_unknowns = j.at("n_unknowns");
    c.epsilon = j.at("epsilon");
    c.equation_form = j.at("equation_form");
    c.timing = j.at("timing");
    c.prefix = j.at("prefix");
    return c;
  }
};

std::filesystem::path resolve_out_dir(const RunConfig& cfg) {
  std::string dir = cfg.out_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("QNEWTON_OUT_DIR")) dir = env;
  }
  if (dir.empty()) dir = ".";
  std::filesystem::create_directories(dir);
  return dir;
}

void write_manifest(const RunConfig& cfg, const std::filesystem::path& dir,
                    const std::string& prefix) {
  json m = {{"schema", "qnewton-run-manifest-v1"},
            {"artifact_version", kArtifactVersion},
            {"timestamp", utc_timestamp()},
            {"config", cfg.to_json()}};
  write_file(dir / (prefix + "_manifest.json"), m.dump(2) + "\n");
}

EncodingMode resolve_mode(const RunConfig& cfg) {
  if (cfg.mode != "auto") return encoding_mode_from_string(cfg.mode);
  if (cfg.problem == "poisson") return EncodingMode::HermitianPD;
  if (cfg.problem == "burgers") return EncodingMode::Dilation;
  return EncodingMode::NormalEquations;  // advdiff, random
}

QLSSConfig qlss_config(const RunConfig& cfg, std::uint64_t seed) {
  QLSSConfig q;
  q.m = cfg.m;
  q.mode = resolve_mode(cfg);
  q.readout = cfg.sampled ? ReadoutMode::Sampled : ReadoutMode::ExactAmplitude;
  q.shots = cfg.shots;
  q.seed = seed;
  q.prescale = cfg.prescale;
  return q;
}

LinearSolverFn make_solver(const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.solver == "direct") return make_direct_solver();
  if (cfg.solver == "gauss-seidel") return make_gauss_seidel_solver(cfg.gs_iters);
  if (cfg.solver == "model") return make_model_qlss_solver(qlss_config(cfg, seed));
  if (cfg.solver == "gate") return make_gate_qlss_solver(qlss_config(cfg, seed));
  throw ConfigError("unknown solver: " + cfg.solver);
}

LinearProblem make_linear_problem(const RunConfig& cfg) {
  if (cfg.problem == "advdiff") return advection_diffusion_system(cfg.n);
  if (cfg.problem == "random") return random_spd_problem(cfg.n, cfg.seed);
  throw ConfigError("solve-linear supports problems: advdiff, random");
}

NonlinearProblem make_nonlinear_problem(const std::string& name, int n) {
  if (name == "poisson") return nonlinear_poisson(n);
  if (name == "burgers") return burgers_space_time(n);
  throw ConfigError("solve-newton supports problems: poisson, burgers");
}

int run_solve_linear(const RunConfig& cfg) {
  const LinearProblem p = make_linear_problem(cfg);
  const std::filesystem::path dir = resolve_out_dir(cfg);
  const std::string prefix = cfg.prefix.empty() ? "solve_linear" : cfg.prefix;

  RVector x;
  double success = 0, kappa = 0, prescale_factor = 1;
  std::uint64_t attempts = 0;
  int violations = 0;
  if (cfg.solver == "direct") {
    x = p.reference_solution;
  } else if (cfg.solver == "gauss-seidel") {
    x = gauss_seidel(p.a, p.b, RVector(p.b.size(), 0.0), cfg.gs_iters);
  } else {
    const QLSSConfig q = qlss_config(cfg, cfg.seed);
    const QLSSResult r =
        cfg.solver == "gate" ? run_qlss(p.a, p.b, q) : model_qlss_solve(p.a, p.b, q);
    x = r.solution_real();
    success = r.success_probability;
    kappa = r.diagnostics.kappa;
    prescale_factor = r.diagnostics.prescale_factor;
    attempts = r.postselect_attempts;
    violations = r.diagnostics.range_violations;
  }

  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - p.reference_solution[i]) * (x[i] - p.reference_solution[i]);
    den += p.reference_solution[i] * p.reference_solution[i];
  }
  const double rel_error = std::sqrt(num / den);

  std::ostringstream summary;
  summary << "# qnewton solve-linear summary v1\n"
          << "problem,n,m,solver,mode,shots,seed,prescale,rel_error,success_probability,"
             "postselect_attempts,kappa,prescale_factor,range_violations\n"
          << cfg.problem << ',' << cfg.n << ',' << cfg.m << ',' << cfg.solver << ','
          << to_string(resolve_mode(cfg)) << ',' << (cfg.sampled ? cfg.shots : 0) << ','
          << cfg.seed << ',' << (cfg.prescale ? 1 : 0) << ',' << fmt17(rel_error) << ','
          << fmt17(success) << ',' << attempts << ',' << fmt17(kappa) << ','
          << fmt17(prescale_factor) << ',' << violations << '\n';
  write_file(dir / (prefix + "_summary.csv"), summary.str());

  std::ostringstream sol;
  sol << "# qnewton solution v1\nindex,x,x_ref\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    sol << i << ',' << fmt17(x[i]) << ',' << fmt17(p.reference_solution[i]) << '\n';
  write_file(dir / (prefix + "_solution.csv"), sol.str());
  write_manifest(cfg, dir, prefix);

  std::cout << "rel_error=" << fmt17(rel_error) << " success_probability=" << fmt17(success)
            << "\n";
  return 0;
}

std::string convergence_csv(const ConvergenceRecord& rec, bool timing) {
  std::ostringstream out;
  out << "# qnewton convergence v1\niteration,residual,solver_diag,ms\n";
  for (const IterationEntry& e : rec.entries)
    out << e.iteration << ',' << fmt17(e.residual) << ',' << fmt17(e.solver_diagnostic) << ','
        << (timing ? std::to_string(static_cast<long long>(e.wall_ms + 0.5)) : std::string("0"))
        << '\n';
  return out.str();
}

int run_solve_newton(const RunConfig& cfg) {
  const NonlinearProblem p = make_nonlinear_problem(cfg.problem, cfg.n);
  const std::filesystem::path dir = resolve_out_dir(cfg);
  const std::string prefix = cfg.prefix.empty() ? "solve_newton" : cfg.prefix;

  StopCriteria stop;
  stop.residual_threshold = cfg.tol;
  stop.max_iterations = cfg.max_iters;
  const NewtonResult res = newton_solve(p, make_solver(cfg, cfg.seed), stop);

  write_file(dir / (prefix + "_convergence.csv"), convergence_csv(res.record, cfg.timing));

  std::ostringstream summary;
  summary << "# qnewton solve-newton summary v1\n"
          << "problem,n,m,solver,mode,tol,max_iters,stop_reason,final_residual,"
             "iterations_to_tol\n"
          << cfg.problem << ',' << cfg.n << ',' << cfg.m << ',' << cfg.solver << ','
          << to_string(resolve_mode(cfg)) << ',' << fmt17(cfg.tol) << ',' << cfg.max_iters << ','
          << to_string(res.record.stop_reason) << ',' << fmt17(res.record.final_residual()) << ','
          << res.record.iterations_to(cfg.tol) << '\n';
  write_file(dir / (prefix + "_summary.csv"), summary.str());
  write_manifest(cfg, dir, prefix);

  std::cout << "stop_reason=\"" << to_string(res.record.stop_reason)
            << "\" final_residual=" << fmt17(res.record.final_residual())
            << " iterations_to_tol=" << res.record.iterations_to(cfg.tol) << "\n";
  return res.record.stop_reason == StopReason::Diverged ? 3 : 0;
}

int run_sweep(const RunConfig& cfg) {
  if (cfg.values.empty()) throw ConfigError("sweep needs a non-empty --values list");
  if (cfg.vary != "m" && cfg.vary != "n") throw ConfigError("--vary must be m or n");
  const std::filesystem::path dir = resolve_out_dir(cfg);
  const std::string prefix = cfg.prefix.empty() ? "sweep" : cfg.prefix;

  std::ostringstream out;
  out << "# qnewton sweep v1\n"
      << "vary,value,repeats,iters_to_tol_median,iters_to_tol_min,iters_to_tol_max,"
         "final_residual_median,final_residual_min,final_residual_max\n";
  for (std::size_t vi = 0; vi < cfg.values.size(); ++vi) {
    const int value = cfg.values[vi];
    std::vector<int> iters;
    std::vector<double> finals;
    for (int rep = 0; rep < cfg.repeat; ++rep) {
      RunConfig cell = cfg;
      if (cfg.vary == "m") cell.m = value; else cell.n = value;
      const std::uint64_t cell_seed = derive_seed(cfg.seed, vi * 1000 + static_cast<std::size_t>(rep));
      const NonlinearProblem p = make_nonlinear_problem(cell.problem, cell.n);
      StopCriteria stop;
      stop.residual_threshold = cell.tol;
      stop.max_iterations = cell.max_iters;
      const NewtonResult res = newton_solve(p, make_solver(cell, cell_seed), stop);
      iters.push_back(res.record.iterations_to(cell.tol));
      finals.push_back(res.record.final_residual());
    }
    std::sort(iters.begin(), iters.end());
    std::sort(finals.begin(), finals.end());
    const std::size_t mid = (iters.size() - 1) / 2;  // lower median
    out << cfg.vary << ',' << value << ',' << cfg.repeat << ',' << iters[mid] << ','
        << iters.front() << ',' << iters.back() << ',' << fmt17(finals[mid]) << ','
        << fmt17(finals.front()) << ',' << fmt17(finals.back()) << '\n';
  }
  write_file(dir / (prefix + "_sweep.csv"), out.str());
  write_manifest(cfg, dir, prefix);
  std::cout << "sweep complete: " << cfg.values.size() << " values x " << cfg.repeat
            << " repeats\n";
  return 0;
}

int run_estimate(const RunConfig& cfg) {
  const ResourceEstimate e = estimate_resources(cfg.n_unknowns, cfg.epsilon, cfg.equation_form);
  std::printf("| N | n | epsilon | m | Q_total |\n|---|---|---------|---|---------|\n");
  std::printf("| %.0e | %d | %.0e | %d | %d |\n", e.n_unknowns, e.n, e.epsilon, e.m, e.q_total());
  std::printf("depth: %s\n", e.depth_order.c_str());
  if (!cfg.out_dir.empty() || std::getenv("QNEWTON_OUT_DIR")) {
    const std::filesystem::path dir = resolve_out_dir(cfg);
    const std::string prefix = cfg.prefix.empty() ? "resources" : cfg.prefix;
    std::ostringstream out;
    out << "# qnewton resources v1\nN,n,epsilon,m,Q_total\n"
        << fmt17(e.n_unknowns) << ',' << e.n << ',' << fmt17(e.epsilon) << ',' << e.m << ','
        << e.q_total() << '\n';
    write_file(dir / (prefix + "_resources.csv"), out.str());
    write_manifest(cfg, dir, prefix);
  }
  return 0;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.command == "solve-linear") return run_solve_linear(cfg);
  if (cfg.command == "solve-newton") return run_solve_newton(cfg);
  if (cfg.command == "sweep") return run_sweep(cfg);
  if (cfg.command == "estimate-resources") return run_estimate(cfg);
  throw ConfigError("unknown command in manifest: " + cfg.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Comparison-based quantum linear system solver workbench"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string manifest_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_dir, "output directory (default $QNEWTON_OUT_DIR or .)");
    sub->add_option("--prefix", cfg.prefix, "output file prefix");
  };
  auto add_solver_opts = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "grid points per dimension")->check(CLI::PositiveNumber);
    sub->add_option("--m", cfg.m, "clock-register bits")->check(CLI::PositiveNumber);
    sub->add_option("--solver", cfg.solver, "gate|model|direct|gauss-seidel");
    sub->add_option("--mode", cfg.mode, "hermitian-pd|normal-equations|dilation|auto");
    sub->add_option("--shots", cfg.shots, "shots for sampled read-out");
    sub->add_flag("--sampled", cfg.sampled, "sampled read-out instead of exact amplitudes");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_flag("!--no-prescale", cfg.prescale, "disable spectral prescaling");
    sub->add_option("--gs-iters", cfg.gs_iters, "Gauss-Seidel sweeps per solve");
  };

  CLI::App* lin = app.add_subcommand("solve-linear", "solve one linear PDE/system instance");
  lin->add_option("--problem", cfg.problem, "advdiff|random")->required();
  add_solver_opts(lin);
  add_common(lin);

  CLI::App* newt = app.add_subcommand("solve-newton", "Newton run on a nonlinear problem");
  newt->add_option("--problem", cfg.problem, "poisson|burgers")->required();
  add_solver_opts(newt);
  newt->add_option("--tol", cfg.tol, "residual threshold");
  newt->add_option("--max-iters", cfg.max_iters, "iteration cap")->check(CLI::PositiveNumber);
  newt->add_flag("--timing", cfg.timing, "emit wall-clock ms (non-deterministic output)");
  add_common(newt);

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over m or N");
  sweep->add_option("--problem", cfg.problem, "poisson|burgers")->required();
  sweep->add_option("--vary", cfg.vary, "m|n")->required();
  sweep->add_option("--values", cfg.values, "list of swept values")->delimiter(',');
  sweep->add_option("--repeat", cfg.repeat, "repeats per cell")->check(CLI::PositiveNumber);
  add_solver_opts(sweep);
  sweep->add_option("--tol", cfg.tol, "residual threshold");
  sweep->add_option("--max-iters", cfg.max_iters, "iteration cap")->check(CLI::PositiveNumber);
  add_common(sweep);

  CLI::App* est = app.add_subcommand("estimate-resources", "qubit-count estimate");
  est->add_option("--n-unknowns", cfg.n_unknowns, "problem unknowns N")->required();
  est->add_option("--epsilon", cfg.epsilon, "target accuracy")->required();
  est->add_flag("--equation-form", cfg.equation_form, "include the dilation qubit (n+4m+4)");
  add_common(est);

  CLI::App* rep = app.add_subcommand("replay", "re-execute a run from its manifest");
  rep->add_option("--manifest", manifest_path, "manifest JSON path")->required();
  rep->add_option("--out", cfg.out_dir, "output directory override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints help/error
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (rep->parsed()) {
      std::ifstream in(manifest_path);
      if (!in) throw ConfigError("cannot read manifest " + manifest_path);
      json j;
      in >> j;
      RunConfig replayed = RunConfig::from_json(j.at("config"));
      replayed.out_dir = cfg.out_dir;
      return dispatch(replayed);
    }
    cfg.command = app.get_subcommands().front()->get_name();
    return dispatch(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const WidthExceededError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  }
}
