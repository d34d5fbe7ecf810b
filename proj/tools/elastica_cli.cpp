// Copyright 2026 The elastica-learn Authors
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


// elastica: train, predict, cv, benchmark, surface and moons subcommands.
//
// Exit status: 0 success, 1 user or data error, 2 internal error. Failures
// print exactly one line on stderr:
//   error code=<code> message="<text>"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "elastica/data_io.hpp"
#include "elastica/errors.hpp"
#include "elastica/evaluation.hpp"
#include "elastica/learners.hpp"
#include "elastica/predictor_io.hpp"
#include "elastica/solvers.hpp"
#include "elastica/synthetic.hpp"
#include "elastica/version.hpp"

namespace {

using namespace elastica;
using nlohmann::json;

struct DataArgs {
  std::string path;
  std::string format = "auto";
  std::string task = "auto";
};

struct SolverArgs {
  std::string mode = "lr";
  std::string solver = "auto";
  double lambda = 1.0;
  double a = 1.0;
  double b = 0.01;
  double c = 1.0;
  std::optional<double> eta;
  double tau = 0.1;
  int max_iter = 40;
  double eps_grad = 1e-8;
  double tol = 1e-6;
};

struct GridArgs {
  double base = 2.0;
  std::optional<std::string> range;
  double c_scale = 1.0;
};

struct CommonArgs {
  std::uint64_t seed = 1;
  std::size_t workers = default_workers();
  std::string out;
  int verbose = 0;
};

void add_data_flags(CLI::App* app, DataArgs& d, bool required = true) {
  auto* opt = app->add_option("--data", d.path, "dataset file (libsvm or CSV)");
  if (required) opt->required()->check(CLI::ExistingFile);
  app->add_option("--format", d.format, "csv, libsvm or auto (from the extension)")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "csv", "libsvm"}));
  app->add_option("--task", d.task, "binary, multiclass, regression or auto")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "binary", "multiclass", "regression"}));
}

void add_solver_flags(CLI::App* app, SolverArgs& s) {
  app->add_option("--mode", s.mode, "regularizer")->capture_default_str()->check(
      CLI::IsMember({"lr", "tv", "ee"}));
  app->add_option("--solver", s.solver, "direct, gd, lagle; auto = direct for lr, gd otherwise")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "direct", "gd", "lagle"}));
  app->add_option("--lambda", s.lambda, "regularization weight")->capture_default_str();
  app->add_option("--a", s.a, "elastica length weight")->capture_default_str();
  app->add_option("--b", s.b, "elastica curvature weight")->capture_default_str();
  app->add_option("--c", s.c, "Gaussian width c in exp(-c r^2)")->capture_default_str();
  app->add_option("--eta", s.eta, "ridge parameter (default 1 for direct, 1e-3 otherwise)");
  app->add_option("--tau", s.tau, "initial GD step")->capture_default_str();
  app->add_option("--max-iter", s.max_iter, "iteration cap")->capture_default_str();
  app->add_option("--eps-grad", s.eps_grad, "gradient-norm floor")->capture_default_str();
  app->add_option("--tol", s.tol, "relative weight-change stopping tolerance")
      ->capture_default_str();
}

void add_grid_flags(CLI::App* app, GridArgs& g) {
  app->add_option("--grid-base", g.base, "exponent base of the (c, lambda) grid")
      ->capture_default_str()
      ->check(CLI::IsMember({2.0, 10.0}));
  app->add_option("--grid-range", g.range,
                  "exponent range lo:hi:step for both parameters "
                  "(default -10:10:2, multiclass -10:10:1)");
  app->add_option("--c-scale", g.c_scale, "multiplier applied to every grid value of c")
      ->capture_default_str();
}

void add_common_flags(CLI::App* app, CommonArgs& c) {
  app->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  app->add_option("--workers", c.workers, "worker threads (env ELASTICA_WORKERS)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_flag("-v,--verbose", c.verbose, "progress on stderr");
}

Mode mode_of(const SolverArgs& s) { return parse_mode(s.mode); }

Method method_of(const SolverArgs& s) {
  if (s.solver == "auto") return mode_of(s) == Mode::lr ? Method::direct : Method::gd;
  return parse_method(s.solver);
}

SolverConfig solver_config(const SolverArgs& s, std::uint64_t seed) {
  SolverConfig cfg = SolverConfig::make(mode_of(s), method_of(s));
  cfg.elastica.lambda = s.lambda;
  cfg.elastica.a = s.a;
  cfg.elastica.b = s.b;
  cfg.elastica.eps_grad = s.eps_grad;
  if (s.eta) cfg.eta = *s.eta;
  cfg.tau = s.tau;
  cfg.max_iter = s.max_iter;
  cfg.tol = s.tol;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

DataFormat format_of(const DataArgs& d) {
  return d.format == "auto" ? guess_format(d.path) : parse_format(d.format);
}

std::optional<Task> task_of(const DataArgs& d) {
  if (d.task == "auto") return std::nullopt;
  return parse_task(d.task);
}

Dataset load(const DataArgs& d) {
  const auto task = task_of(d);
  const bool categorical = !task || *task != Task::regression;
  Dataset ds = load_dataset(d.path, format_of(d), categorical);
  if (!task && ds.label_map && ds.label_map->size() > 16) {
    // many distinct numeric targets: treat as regression
    ds.label_map.reset();
  }
  return ds;
}

std::string header_line(const std::string& what, const json& config) {
  return "# elastica " + std::string(kVersion) + " " + what + " " + config.dump();
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  return out;
}

json trace_json(const FitTrace& t) {
  return {{"initial_energy", t.initial_energy},
          {"energy", t.energy_per_iter},
          {"weight_change", t.weight_change_per_iter},
          {"residual", t.residual_per_iter},
          {"iterations", t.iterations_run},
          {"converged", t.converged},
          {"status", to_string(t.status)},
          {"final_tau", t.final_tau},
          {"halvings", t.halvings},
          {"seconds", t.wall_time.count()}};
}

json report_json(const CvReport& r) {
  json folds = json::array();
  for (const auto& f : r.folds) {
    json j = {{"repeat", f.repeat}, {"fold", f.fold}, {"ok", f.ok}, {"seconds", f.seconds}};
    j["score"] = f.ok ? json(f.score) : json(nullptr);
    if (!f.ok) j["error"] = f.error;
    folds.push_back(j);
  }
  json j = {{"point", r.point.to_json()},
            {"metric", metric_name(r.task)},
            {"k", r.k},
            {"repeats", r.repeats},
            {"seed", r.seed},
            {"failed", r.failed},
            {"seconds", r.seconds},
            {"folds", folds}};
  j["mean"] = std::isfinite(r.mean) ? json(r.mean) : json(nullptr);
  j["sd"] = std::isfinite(r.sd) ? json(r.sd) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------

int cmd_train(const DataArgs& data, const SolverArgs& solver, const CommonArgs& common,
              std::string trace_path) {
  const SolverConfig cfg = solver_config(solver, common.seed);
  const Dataset ds = load(data);
  TrainOptions opts;
  opts.task = task_of(data);
  Predictor pred = train(ds, solver.c, cfg, opts);

  const json config = {{"command", "train"}, {"data", data.path}, {"c", solver.c},
                       {"solver", config_json(cfg)}};
  pred.metadata = {{"version", kVersion}, {"config", config}};
  const std::filesystem::path model_path = common.out.empty() ? "model.elst" : common.out;
  {
    auto out = open_out(model_path);
    write_predictor(out, pred);
  }
  if (trace_path.empty()) trace_path = model_path.string() + ".trace.jsonl";
  auto trace = open_out(trace_path);
  trace << header_line("train", config) << "\n";
  for (std::size_t m = 0; m < pred.traces.size(); ++m) {
    json j = trace_json(pred.traces[m]);
    j["model"] = m;
    trace << j.dump() << "\n";
  }
  if (common.verbose) {
    std::cerr << "trained " << pred.models.size() << " model(s) on " << ds.size() << " x "
              << ds.dim() << " -> " << model_path.string() << "\n";
  }
  return 0;
}

bool blank_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  char ch = 0;
  while (in.get(ch)) {
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

/// Features of a prediction input. CSV rows may carry a trailing target
/// column (d + 1 fields) or not (d fields).
Matrix prediction_features(const DataArgs& data, std::size_t d) {
  const DataFormat fmt = format_of(data);
  std::ifstream in(data.path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + data.path);
  if (fmt == DataFormat::libsvm) return parse_libsvm(in, d, true).features;
  CsvOptions opts;
  opts.has_target = false;
  opts.categorical = false;
  Dataset ds = parse_csv(in, opts);
  const auto cols = static_cast<std::size_t>(ds.features.cols());
  if (cols == d + 1) return ds.features.leftCols(static_cast<Eigen::Index>(d));
  detail::require_dims(d, cols, "predict input");
  return ds.features;
}

int cmd_predict(const std::string& model_path, const DataArgs& data, const CommonArgs& common) {
  const Predictor pred = load_predictor(model_path);
  if (!std::filesystem::exists(data.path)) {
    throw Error(ErrorCode::io_error, "cannot open " + data.path);
  }
  std::ofstream file;
  if (!common.out.empty()) {
    file = open_out(common.out);
    file << header_line("predict", {{"model", model_path}, {"data", data.path}}) << "\n";
  }
  std::ostream& out = common.out.empty() ? std::cout : file;
  if (blank_file(data.path)) return 0;
  const Matrix x = prediction_features(data, pred.dim());
  const Vector y = predict(pred, x);
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < y.size(); ++i) out << y[i] << "\n";
  return 0;
}

int cmd_cv(const DataArgs& data, const SolverArgs& solver, const GridArgs& grid_args,
           const CommonArgs& common, std::size_t folds, std::size_t repeats, bool search,
           bool per_fold) {
  Dataset ds = load(data);
  const Task task = task_of(data).value_or(detail::infer_task(ds));
  CvSetup setup;
  setup.task = task;
  setup.config = solver_config(solver, common.seed);
  setup.scaling = per_fold ? ScalingMode::per_fold : ScalingMode::whole;
  setup.k = folds;
  setup.repeats = repeats;
  setup.seed = common.seed;
  setup.workers = common.workers;
  if (!per_fold) ds = apply_scaling(fit_scaling(ds), ds);
  if (task == Task::regression) ds = scale_targets(ds);

  GridPoint point{0, 0, solver.c, solver.lambda};
  json config = {{"command", "cv"},   {"data", data.path},       {"task", to_string(task)},
                 {"folds", folds},    {"repeats", repeats},      {"seed", common.seed},
                 {"search", search},  {"scaling", per_fold ? "per_fold" : "whole"},
                 {"solver", config_json(setup.config)}};
  json result = json::object();
  if (search) {
    Protocol proto;
    proto.grid_base = grid_args.base;
    if (grid_args.range) proto.grid_range = ExpRange::parse(*grid_args.range);
    proto.c_scale = grid_args.c_scale;
    const GridSpec grid = proto.grid_for(task);
    config["grid"] = grid.to_json();
    CvSetup s1 = setup;
    s1.repeats = 1;
    const GridResult gr = grid_search(ds, s1, grid);
    point = gr.best;
    json table = json::array();
    for (const auto& rep : gr.table) {
      table.push_back({{"point", rep.point.to_json()},
                       {"mean", std::isfinite(rep.mean) ? json(rep.mean) : json(nullptr)},
                       {"failed", rep.failed}});
    }
    result["grid"] = table;
  }
  const CvReport report = cross_validate(ds, setup, point);
  result["report"] = report_json(report);

  std::ofstream file;
  if (!common.out.empty()) file = open_out(common.out);
  std::ostream& out = common.out.empty() ? std::cout : file;
  out << header_line("cv", config) << "\n" << result.dump() << "\n";
  if (common.verbose || !common.out.empty()) {
    std::cerr << metric_name(task) << " " << report.mean << " (sd " << report.sd << ", "
              << report.failed << " failed folds) at c=" << point.c << " lambda=" << point.lambda
              << "\n";
  }
  return 0;
}

int cmd_benchmark(const std::string& manifest_path, const std::vector<std::string>& method_names,
                  const SolverArgs& solver, const GridArgs& grid, const CommonArgs& common,
                  std::size_t folds, std::size_t repeats, std::optional<std::string> only_dataset,
                  std::optional<std::string> only_method, bool no_resume,
                  const std::vector<std::string>& overridden) {
  const Manifest manifest = load_manifest(manifest_path);
  detail::require(!manifest.datasets.empty(), ErrorCode::format_error,
                  "manifest " + manifest_path + " lists no datasets");
  std::vector<MethodSpec> methods;
  for (const auto& m : method_names) methods.push_back(MethodSpec::parse(m));
  if (methods.empty()) methods = default_methods(manifest.datasets.front().task);

  Protocol proto;
  proto.folds = folds;
  proto.repeats = repeats;
  proto.grid_base = grid.base;
  if (grid.range) proto.grid_range = ExpRange::parse(*grid.range);
  proto.c_scale = grid.c_scale;
  proto.seed = common.seed;
  proto.workers = common.workers;
  auto was_set = [&](const std::string& flag) {
    return std::find(overridden.begin(), overridden.end(), flag) != overridden.end();
  };
  if (solver.eta) proto.overrides.eta = solver.eta;
  if (was_set("--tau")) proto.overrides.tau = solver.tau;
  if (was_set("--a")) proto.overrides.a = solver.a;
  if (was_set("--b")) proto.overrides.b = solver.b;
  if (was_set("--eps-grad")) proto.overrides.eps_grad = solver.eps_grad;
  if (was_set("--max-iter")) proto.overrides.max_iter = solver.max_iter;
  if (was_set("--tol")) proto.overrides.tol = solver.tol;

  BenchmarkOptions opts;
  opts.out_dir = common.out.empty() ? "bench_out" : common.out;
  opts.only_dataset = std::move(only_dataset);
  opts.only_method = std::move(only_method);
  opts.resume = !no_resume;
  opts.log = common.verbose ? &std::cerr : nullptr;
  const BenchmarkReport report = benchmark_run(manifest, methods, proto, opts);
  std::cout << render_table(manifest, methods, report.cells, proto);
  std::size_t computed = 0;
  for (const auto& c : report.cells) computed += c.resumed ? 0 : 1;
  std::cerr << "cells: " << report.cells.size() << " (" << computed << " computed, "
            << report.cells.size() - computed << " resumed); records "
            << report.records_path.string() << "\n";
  return 0;
}

/// Bounds "x1lo:x1hi:x2lo:x2hi" in the original feature space.
std::array<double, 4> parse_bounds(const std::string& s) {
  std::array<double, 4> b{};
  std::istringstream in(s);
  std::string tok;
  std::size_t i = 0;
  while (std::getline(in, tok, ':')) {
    detail::require(i < 4, ErrorCode::invalid_argument, "bounds must be x1lo:x1hi:x2lo:x2hi");
    try {
      b[i++] = std::stod(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "bad bounds '" + s + "'");
    }
  }
  detail::require(i == 4 && b[0] < b[1] && b[2] < b[3], ErrorCode::invalid_argument,
                  "bounds must be x1lo:x1hi:x2lo:x2hi with lo < hi");
  return b;
}

int cmd_surface(const std::string& model_path, const std::string& bounds_str,
                std::size_t resolution, const CommonArgs& common) {
  const Predictor pred = load_predictor(model_path);
  detail::require(pred.dim() == 2, ErrorCode::dimension_mismatch,
                  "surface needs a 2-D model, got dimension " + std::to_string(pred.dim()));
  detail::require(pred.kind != Task::multiclass, ErrorCode::invalid_argument,
                  "surface needs a binary or regression model");
  detail::require(resolution >= 2, ErrorCode::invalid_argument, "resolution must be >= 2");
  const auto b = parse_bounds(bounds_str);
  std::ofstream file;
  if (!common.out.empty()) file = open_out(common.out);
  std::ostream& out = common.out.empty() ? std::cout : file;
  out << header_line("surface", {{"model", model_path},
                                 {"bounds", bounds_str},
                                 {"resolution", resolution},
                                 {"columns", {"x1", "x2", "u"}}})
      << "\n";
  out << std::setprecision(10);
  const double n1 = static_cast<double>(resolution - 1);
  Vector x(2);
  for (std::size_t i = 0; i < resolution; ++i) {
    x[1] = b[2] + (b[3] - b[2]) * static_cast<double>(i) / n1;
    for (std::size_t j = 0; j < resolution; ++j) {
      x[0] = b[0] + (b[1] - b[0]) * static_cast<double>(j) / n1;
      out << x[0] << "," << x[1] << "," << predict_value(pred, x) << "\n";
    }
  }
  return 0;
}

int cmd_moons(std::size_t n, double noise, const CommonArgs& common) {
  const Dataset ds = make_two_moons(n, noise, common.seed);
  std::ofstream file;
  if (!common.out.empty()) file = open_out(common.out);
  std::ostream& out = common.out.empty() ? std::cout : file;
  write_csv(out, ds);
  return 0;
}

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
    if (ch == '"') ch = '\'';
  }
  return s;
}

int fail(std::string_view code, const std::string& message, int status) {
  std::cerr << "error code=" << code << " message=\"" << one_line(message) << "\"\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"elastica " + std::string(kVersion) +
               ": RBF learners with Laplacian, total-variation and elastica regularizers"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  DataArgs data;
  SolverArgs solver;
  GridArgs grid;
  CommonArgs common;
  std::string trace_path;
  std::string model_path;
  std::size_t folds = 5;
  std::size_t repeats = 10;
  bool search = false;
  bool per_fold = false;
  std::string manifest;
  std::vector<std::string> methods;
  std::optional<std::string> only_dataset;
  std::optional<std::string> only_method;
  bool no_resume = false;
  std::string bounds = "0:1:0:1";
  std::size_t resolution = 100;
  std::size_t moons_n = 500;
  double moons_noise = 0.1;

  auto* train_cmd = app.add_subcommand("train", "fit a predictor and write the model file");
  add_data_flags(train_cmd, data);
  add_solver_flags(train_cmd, solver);
  add_common_flags(train_cmd, common);
  train_cmd->add_option("--out", common.out, "model file")->default_str("model.elst");
  train_cmd->add_option("--trace", trace_path, "fit trace file")->default_str("<out>.trace.jsonl");

  auto* predict_cmd = app.add_subcommand("predict", "one label or value per input row");
  predict_cmd->add_option("--model", model_path, "model file")->required();
  add_data_flags(predict_cmd, data, false);
  predict_cmd->get_option("--data")->required();
  predict_cmd->add_option("--out", common.out, "output file")->default_str("stdout");

  auto* cv_cmd = app.add_subcommand("cv", "repeated k-fold cross-validation");
  add_data_flags(cv_cmd, data);
  add_solver_flags(cv_cmd, solver);
  add_grid_flags(cv_cmd, grid);
  add_common_flags(cv_cmd, common);
  cv_cmd->add_option("--folds", folds, "k")->capture_default_str()->check(CLI::Range(2, 1 << 30));
  cv_cmd->add_option("--repeats", repeats, "CV repeats")->capture_default_str()->check(
      CLI::PositiveNumber);
  cv_cmd->add_flag("--search", search, "grid-search (c, lambda) first, with one repeat");
  cv_cmd->add_flag("--per-fold-scaling", per_fold, "fit feature scaling on each training split");
  cv_cmd->add_option("--out", common.out, "report file")->default_str("stdout");

  auto* bench_cmd = app.add_subcommand("benchmark", "grid search + repeated CV over a manifest");
  bench_cmd->add_option("--manifest", manifest, "dataset manifest (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("--methods", methods, "LR, TV-GD, TV-lagLE, EE-GD, EE-lagLE")
      ->delimiter(',')
      ->default_str("all for the task");
  bench_cmd->add_option("--only-dataset", only_dataset, "compute a single dataset row");
  bench_cmd->add_option("--only-method", only_method, "compute a single method column");
  bench_cmd->add_flag("--no-resume", no_resume, "recompute cells already in the record file");
  add_solver_flags(bench_cmd, solver);
  add_grid_flags(bench_cmd, grid);
  add_common_flags(bench_cmd, common);
  bench_cmd->add_option("--folds", folds, "k")->capture_default_str()->check(
      CLI::Range(2, 1 << 30));
  bench_cmd->add_option("--repeats", repeats, "CV repeats for the final score")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", common.out, "output directory")->default_str("bench_out");

  auto* surface_cmd = app.add_subcommand("surface", "dump u on a regular 2-D grid");
  surface_cmd->add_option("--model", model_path, "model file")->required();
  surface_cmd->add_option("--bounds", bounds, "x1lo:x1hi:x2lo:x2hi")->capture_default_str();
  surface_cmd->add_option("--resolution", resolution, "points per axis")->capture_default_str();
  surface_cmd->add_option("--out", common.out, "output file")->default_str("stdout");

  auto* moons_cmd = app.add_subcommand("moons", "write a two-moons CSV");
  moons_cmd->add_option("--n", moons_n, "points")->capture_default_str();
  moons_cmd->add_option("--noise", moons_noise, "Gaussian noise sd")->capture_default_str();
  moons_cmd->add_option("--seed", common.seed, "RNG seed")->capture_default_str();
  moons_cmd->add_option("--out", common.out, "output file")->default_str("stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 1);
  }

  try {
    if (*train_cmd) return cmd_train(data, solver, common, trace_path);
    if (*predict_cmd) return cmd_predict(model_path, data, common);
    if (*cv_cmd) return cmd_cv(data, solver, grid, common, folds, repeats, search, per_fold);
    if (*bench_cmd) {
      std::vector<std::string> overridden;
      for (const char* flag : {"--tau", "--a", "--b", "--eps-grad", "--max-iter", "--tol"}) {
        if (bench_cmd->count(flag) > 0) overridden.emplace_back(flag);
      }
      return cmd_benchmark(manifest, methods, solver, grid, common, folds, repeats, only_dataset,
                           only_method, no_resume, overridden);
    }
    if (*surface_cmd) return cmd_surface(model_path, bounds, resolution, common);
    if (*moons_cmd) return cmd_moons(moons_n, moons_noise, common);
  } catch (const elastica::Error& e) {
    return fail(to_string(e.code()), e.what(), 1);
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("io_error", e.what(), 1);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 2);
  }
  return fail("internal", "no subcommand handled", 2);
}
