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

#pragma once

// Metrics, repeated k-fold cross-validation, (c, lambda) grid search and the
// benchmark harness with resumable record files.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "elastica/data_io.hpp"
#include "elastica/errors.hpp"
#include "elastica/learners.hpp"
#include "elastica/parallel.hpp"
#include "elastica/solvers.hpp"
#include "elastica/synthetic.hpp"
#include "elastica/types.hpp"
#include "elastica/version.hpp"

namespace elastica {

// ---------------------------------------------------------------------------
// metrics

inline double accuracy(std::span<const double> predicted, std::span<const double> truth) {
  detail::require(predicted.size() == truth.size() && !truth.empty(),
                  ErrorCode::dimension_mismatch, "accuracy: length mismatch or empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

inline double mse(std::span<const double> predicted, std::span<const double> truth) {
  detail::require(predicted.size() == truth.size() && !truth.empty(),
                  ErrorCode::dimension_mismatch, "mse: length mismatch or empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double r = predicted[i] - truth[i];
    acc += r * r;
  }
  return acc / static_cast<double>(truth.size());
}

inline std::string_view metric_name(Task task) {
  return task == Task::regression ? "mse" : "accuracy";
}

/// Larger accuracy or smaller MSE.
inline bool metric_better(double a, double b, Task task) {
  return task == Task::regression ? a < b : a > b;
}

// ---------------------------------------------------------------------------
// methods and grids

struct MethodSpec {
  Mode mode = Mode::lr;
  Method method = Method::direct;

  std::string name() const {
    if (mode == Mode::lr) return "LR";
    return std::string(mode == Mode::tv ? "TV" : "EE") + (method == Method::gd ? "-GD" : "-lagLE");
  }

  /// "LR", "TV-GD", "ee-lagle", ...; a bare "TV"/"EE" means the GD solver.
  static MethodSpec parse(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "lr" || lower == "lr-direct") return {Mode::lr, Method::direct};
    const auto dash = lower.find('-');
    const Mode mode = parse_mode(lower.substr(0, dash));
    detail::require(mode != Mode::lr, ErrorCode::invalid_argument, "unknown method '" + lower + "'");
    const Method method = dash == std::string::npos ? Method::gd : parse_method(lower.substr(dash + 1));
    detail::require(method != Method::direct, ErrorCode::invalid_argument,
                    "unknown method '" + lower + "'");
    return {mode, method};
  }

  bool operator==(const MethodSpec&) const = default;
};

inline std::vector<MethodSpec> default_methods(Task task) {
  if (task == Task::regression) {
    return {{Mode::lr, Method::direct}, {Mode::tv, Method::gd}, {Mode::ee, Method::gd}};
  }
  return {{Mode::lr, Method::direct}, {Mode::tv, Method::gd}, {Mode::tv, Method::lagle},
          {Mode::ee, Method::gd}, {Mode::ee, Method::lagle}};
}

/// Integer exponents lo, lo + step, ..., <= hi.
struct ExpRange {
  int lo = -10;
  int hi = 10;
  int step = 2;

  std::vector<int> values() const {
    detail::require(step >= 1 && lo <= hi, ErrorCode::invalid_argument,
                    "grid range must satisfy lo <= hi and step >= 1");
    std::vector<int> out;
    for (int e = lo; e <= hi; e += step) out.push_back(e);
    return out;
  }

  /// "lo:hi:step" or "lo:hi" (step 1).
  static ExpRange parse(std::string_view s) {
    std::vector<int> parts;
    std::string token;
    std::istringstream in{std::string(s)};
    while (std::getline(in, token, ':')) {
      try {
        std::size_t used = 0;
        parts.push_back(std::stoi(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw Error(ErrorCode::invalid_argument, "bad grid range '" + std::string(s) + "'");
      }
    }
    detail::require(parts.size() == 2 || parts.size() == 3, ErrorCode::invalid_argument,
                    "grid range must be lo:hi[:step], got '" + std::string(s) + "'");
    ExpRange r{parts[0], parts[1], parts.size() == 3 ? parts[2] : 1};
    r.values();
    return r;
  }

  std::string str() const {
    return std::to_string(lo) + ":" + std::to_string(hi) + ":" + std::to_string(step);
  }
};

struct GridPoint {
  int c_exp = 0;
  int lambda_exp = 0;
  double c = 1.0;
  double lambda = 1.0;

  nlohmann::json to_json() const {
    return {{"c_exp", c_exp}, {"lambda_exp", lambda_exp}, {"c", c}, {"lambda", lambda}};
  }
};

/// Log grid over (c, lambda): c = c_scale * base^e_c, lambda = base^e_lambda.
/// c_scale = 0.5 reads the grid in the exp(-c r^2 / 2) kernel convention.
struct GridSpec {
  double base = 2.0;
  ExpRange c_exps;
  ExpRange lambda_exps;
  double c_scale = 1.0;

  void validate() const {
    detail::require(base > 1.0 && std::isfinite(base), ErrorCode::invalid_argument,
                    "grid base must be > 1");
    detail::require(c_scale > 0.0, ErrorCode::invalid_argument, "c_scale must be > 0");
    c_exps.values();
    lambda_exps.values();
  }

  GridPoint point(int c_exp, int lambda_exp) const {
    return {c_exp, lambda_exp, c_scale * std::pow(base, c_exp), std::pow(base, lambda_exp)};
  }

  std::vector<GridPoint> points() const {
    validate();
    std::vector<GridPoint> out;
    for (int ce : c_exps.values()) {
      for (int le : lambda_exps.values()) out.push_back(point(ce, le));
    }
    return out;
  }

  nlohmann::json to_json() const {
    return {{"base", base}, {"c", c_exps.str()}, {"lambda", lambda_exps.str()}, {"c_scale", c_scale}};
  }
};

// ---------------------------------------------------------------------------
// cross-validation

struct FoldRecord {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  double score = std::numeric_limits<double>::quiet_NaN();
  bool ok = true;
  std::string error;
  double seconds = 0.0;
  int iterations = 0;
};

struct CvReport {
  GridPoint point;
  Task task = Task::binary;
  std::size_t k = 5;
  std::size_t repeats = 1;
  std::uint64_t seed = 0;
  std::vector<FoldRecord> folds;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();
  std::size_t failed = 0;
  double seconds = 0.0;

  bool ok() const { return failed < folds.size(); }
};

struct CvSetup {
  Task task = Task::binary;
  SolverConfig config;
  ScalingMode scaling = ScalingMode::whole;
  std::size_t k = 5;
  std::size_t repeats = 1;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

namespace detail {

/// Mean and sample standard deviation over the successful folds.
inline void aggregate(CvReport& report) {
  double sum = 0.0;
  std::size_t ok = 0;
  report.failed = 0;
  for (const auto& f : report.folds) {
    if (f.ok) {
      sum += f.score;
      ++ok;
    } else {
      ++report.failed;
    }
  }
  if (ok == 0) return;
  report.mean = sum / static_cast<double>(ok);
  double ss = 0.0;
  for (const auto& f : report.folds) {
    if (f.ok) ss += (f.score - report.mean) * (f.score - report.mean);
  }
  report.sd = ok > 1 ? std::sqrt(ss / static_cast<double>(ok - 1)) : 0.0;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Trains on one fold split and scores the held-out part. With per-fold
/// scaling the scaling is fitted on the training rows only.
inline FoldRecord run_fold(const Dataset& data, const CvSetup& setup, const GridPoint& point,
                           std::span<const std::size_t> train_rows,
                           std::span<const std::size_t> test_rows) {
  const auto t0 = std::chrono::steady_clock::now();
  FoldRecord rec;
  try {
    const Dataset train_set = data.subset(train_rows);
    const Dataset test_set = data.subset(test_rows);
    SolverConfig cfg = setup.config;
    cfg.elastica.lambda = point.lambda;
    TrainOptions opts;
    opts.task = setup.task;
    opts.fit_scaling = setup.scaling == ScalingMode::per_fold;
    const Predictor pred = train(train_set, point.c, cfg, opts);
    const Vector out = predict(pred, test_set.features);
    const std::span<const double> p(out.data(), static_cast<std::size_t>(out.size()));
    const std::span<const double> t(test_set.targets.data(),
                                    static_cast<std::size_t>(test_set.targets.size()));
    rec.score = setup.task == Task::regression ? mse(p, t) : accuracy(p, t);
    for (const auto& tr : pred.traces) rec.iterations = std::max(rec.iterations, tr.iterations_run);
  } catch (const Error& e) {
    rec.ok = false;
    rec.error = std::string(to_string(e.code())) + ": " + e.what();
  }
  rec.seconds = detail::seconds_since(t0);
  return rec;
}

/// Repeated k-fold CV at one grid point. Repeat r shuffles with seed + r.
/// A failing fold is recorded, flagged, and left out of the mean.
inline CvReport cross_validate(const Dataset& data, const CvSetup& setup, const GridPoint& point) {
  const auto t0 = std::chrono::steady_clock::now();
  data.validate();
  detail::require(setup.repeats >= 1, ErrorCode::invalid_argument, "repeats must be >= 1");
  CvReport report;
  report.point = point;
  report.task = setup.task;
  report.k = setup.k;
  report.repeats = setup.repeats;
  report.seed = setup.seed;

  std::vector<std::vector<std::vector<std::size_t>>> splits;
  for (std::size_t r = 0; r < setup.repeats; ++r) {
    splits.push_back(kfold_indices(data.size(), setup.k, setup.seed + r));
  }
  report.folds.resize(setup.repeats * setup.k);
  parallel_for(report.folds.size(), setup.workers, [&](std::size_t item) {
    const std::size_t r = item / setup.k;
    const std::size_t f = item % setup.k;
    std::vector<std::size_t> train_rows;
    for (std::size_t g = 0; g < setup.k; ++g) {
      if (g != f) train_rows.insert(train_rows.end(), splits[r][g].begin(), splits[r][g].end());
    }
    FoldRecord rec = run_fold(data, setup, point, train_rows, splits[r][f]);
    rec.repeat = r;
    rec.fold = f;
    report.folds[item] = std::move(rec);
  });
  detail::aggregate(report);
  report.seconds = detail::seconds_since(t0);
  return report;
}

struct GridResult {
  GridPoint best;
  CvReport best_report;
  std::vector<CvReport> table;
  double seconds = 0.0;
};

class GridSearchError : public Error {
 public:
  explicit GridSearchError(std::vector<CvReport> table)
      : Error(ErrorCode::non_convergence, "grid search: every grid point failed"),
        table_(std::move(table)) {}
  const std::vector<CvReport>& table() const { return table_; }

 private:
  std::vector<CvReport> table_;
};

/// Cross-validates every grid point and keeps the best mean metric. Ties go
/// to the smaller lambda, then the smaller c.
inline GridResult grid_search(const Dataset& data, const CvSetup& setup, const GridSpec& grid) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto points = grid.points();
  detail::require(!points.empty(), ErrorCode::invalid_argument, "grid search: empty grid");
  GridResult result;
  result.table.resize(points.size());
  CvSetup inner = setup;
  inner.workers = 1;
  parallel_for(points.size(), setup.workers,
               [&](std::size_t i) { result.table[i] = cross_validate(data, inner, points[i]); });

  const CvReport* best = nullptr;
  for (const auto& rep : result.table) {
    if (!rep.ok() || !std::isfinite(rep.mean)) continue;
    if (best == nullptr || metric_better(rep.mean, best->mean, setup.task)) {
      best = &rep;
    } else if (rep.mean == best->mean &&
               (rep.point.lambda < best->point.lambda ||
                (rep.point.lambda == best->point.lambda && rep.point.c < best->point.c))) {
      best = &rep;
    }
  }
  if (best == nullptr) throw GridSearchError(std::move(result.table));
  result.best = best->point;
  result.best_report = *best;
  result.seconds = detail::seconds_since(t0);
  return result;
}

// ---------------------------------------------------------------------------
// benchmark harness

/// Optional overrides of the per-method solver defaults.
struct SolverOverrides {
  std::optional<double> eta;
  std::optional<double> tau;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> eps_grad;
  std::optional<int> max_iter;
  std::optional<double> tol;

  void apply(SolverConfig& cfg) const {
    if (eta) cfg.eta = *eta;
    if (tau) cfg.tau = *tau;
    if (a) cfg.elastica.a = *a;
    if (b) cfg.elastica.b = *b;
    if (eps_grad) cfg.elastica.eps_grad = *eps_grad;
    if (max_iter) cfg.max_iter = *max_iter;
    if (tol) cfg.tol = *tol;
  }
};

struct Protocol {
  std::size_t folds = 5;
  std::size_t repeats = 10;         // final score
  std::size_t search_repeats = 1;   // inside the grid search
  double grid_base = 2.0;
  std::optional<ExpRange> grid_range;  // default: -10:10:2, multiclass -10:10:1
  double c_scale = 1.0;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  SolverOverrides overrides;

  GridSpec grid_for(Task task) const {
    GridSpec g;
    g.base = grid_base;
    g.c_scale = c_scale;
    const ExpRange r = grid_range.value_or(ExpRange{-10, 10, task == Task::multiclass ? 1 : 2});
    g.c_exps = r;
    g.lambda_exps = r;
    return g;
  }

  /// a = 1 and b = 0.01 are fixed and never searched. The direct LR solve
  /// uses eta = 1 for classification and 1e-3 for regression targets.
  SolverConfig config_for(const MethodSpec& m, Task task = Task::binary) const {
    SolverConfig cfg = SolverConfig::make(m.mode, m.method);
    if (m.method == Method::direct && task == Task::regression) cfg.eta = 1e-3;
    cfg.elastica.a = 1.0;
    cfg.elastica.b = 0.01;
    overrides.apply(cfg);
    return cfg;
  }

  nlohmann::json to_json() const {
    nlohmann::json j = {{"folds", folds},
                        {"repeats", repeats},
                        {"search_repeats", search_repeats},
                        {"grid_base", grid_base},
                        {"grid_range", grid_range ? grid_range->str() : "default"},
                        {"c_scale", c_scale},
                        {"seed", seed}};
    nlohmann::json o = nlohmann::json::object();
    if (overrides.eta) o["eta"] = *overrides.eta;
    if (overrides.tau) o["tau"] = *overrides.tau;
    if (overrides.a) o["a"] = *overrides.a;
    if (overrides.b) o["b"] = *overrides.b;
    if (overrides.eps_grad) o["eps_grad"] = *overrides.eps_grad;
    if (overrides.max_iter) o["max_iter"] = *overrides.max_iter;
    if (overrides.tol) o["tol"] = *overrides.tol;
    j["overrides"] = o;
    return j;
  }

  std::string fingerprint() const { return to_json().dump(); }
};

inline nlohmann::json config_json(const SolverConfig& cfg) {
  return {{"mode", to_string(cfg.mode)},   {"solver", to_string(cfg.method)},
          {"lambda", cfg.elastica.lambda}, {"a", cfg.elastica.a},
          {"b", cfg.elastica.b},           {"eps_grad", cfg.elastica.eps_grad},
          {"eta", cfg.eta},                {"tau", cfg.tau},
          {"max_iter", cfg.max_iter},      {"tol", cfg.tol},
          {"max_halvings", cfg.max_halvings}, {"seed", cfg.seed}};
}

/// Reads a manifest entry and applies whole-dataset scaling when requested.
inline Dataset load_entry(const ManifestEntry& e) {
  Dataset ds;
  if (e.format == "two_moons") {
    ds = make_two_moons(e.extra.value("n", std::size_t{500}), e.extra.value("noise", 0.1),
                        e.extra.value("seed", std::uint64_t{0}));
  } else {
    ds = load_dataset(e.path, parse_format(e.format), e.task != Task::regression, e.dim);
  }
  ds.name = e.name;
  if (e.scaling == ScalingMode::whole) ds = apply_scaling(fit_scaling(ds), ds);
  if (e.scale_targets) ds = scale_targets(ds);
  return ds;
}

struct CellResult {
  std::string dataset;
  std::string method;
  Task task = Task::binary;
  std::size_t dim = 0;
  std::size_t num = 0;
  bool stretch = false;
  std::optional<double> reference;  // display units
  bool ok = false;
  std::string error;
  double mean = std::numeric_limits<double>::quiet_NaN();  // raw metric
  double sd = std::numeric_limits<double>::quiet_NaN();
  std::size_t failed_folds = 0;
  GridPoint best;
  double seconds = 0.0;
  bool resumed = false;

  /// Accuracy in percent, MSE in units of 1e-3, the published tables' scale.
  double display() const { return task == Task::regression ? mean * 1e3 : mean * 100.0; }
};

struct BenchmarkOptions {
  std::filesystem::path out_dir = "bench_out";
  std::optional<std::string> only_dataset;
  std::optional<std::string> only_method;
  bool resume = true;
  std::ostream* log = nullptr;
};

struct BenchmarkReport {
  std::vector<CellResult> cells;
  std::filesystem::path records_path;
  std::filesystem::path table_path;
};

namespace detail {

inline std::string cell_key(const std::string& dataset, const std::string& method,
                            const Protocol& protocol) {
  return dataset + "|" + method + "|" + protocol.fingerprint();
}

inline std::map<std::string, nlohmann::json> read_finished_cells(const std::filesystem::path& path) {
  std::map<std::string, nlohmann::json> done;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) continue;  // torn last line of an interrupted run
    if (j.value("type", "") == "cell") done[j.value("key", "")] = j;
  }
  return done;
}

inline std::string fmt(double v, int precision) {
  if (!std::isfinite(v)) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

}  // namespace detail

/// Plain-text tables in the published layout: measured, reference, delta.
inline std::string render_table(const Manifest& manifest, const std::vector<MethodSpec>& methods,
                                const std::vector<CellResult>& cells, const Protocol& protocol) {
  std::ostringstream out;
  out << "# elastica " << kVersion << " benchmark " << manifest.name
      << " protocol=" << protocol.to_json().dump() << "\n";
  std::map<std::pair<std::string, std::string>, const CellResult*> by_key;
  for (const auto& c : cells) by_key[{c.dataset, c.method}] = &c;
  const bool regression =
      !manifest.datasets.empty() && manifest.datasets.front().task == Task::regression;
  const int prec = regression ? 3 : 2;

  auto section = [&](const std::string& title, auto value_of) {
    out << "\n" << title << "\n";
    out << std::left << std::setw(18) << "DATA" << std::right << std::setw(5) << "DIM"
        << std::setw(6) << "NUM";
    for (const auto& m : methods) out << std::setw(10) << m.name();
    out << "\n";
    for (const auto& e : manifest.datasets) {
      std::size_t dim = 0;
      std::size_t num = 0;
      for (const auto& m : methods) {
        auto it = by_key.find({e.name, m.name()});
        if (it != by_key.end() && it->second->dim) {
          dim = it->second->dim;
          num = it->second->num;
        }
      }
      out << std::left << std::setw(18) << (e.name + (e.stretch ? "*" : "")) << std::right
          << std::setw(5) << (dim ? std::to_string(dim) : "-") << std::setw(6)
          << (num ? std::to_string(num) : "-");
      for (const auto& m : methods) {
        auto it = by_key.find({e.name, m.name()});
        const auto ref = e.reference.find(m.name());
        const double* r = ref == e.reference.end() ? nullptr : &ref->second;
        out << std::setw(10) << value_of(it == by_key.end() ? nullptr : it->second, r);
      }
      out << "\n";
    }
  };
  const std::string unit = regression ? "MSE (1e-3)" : "accuracy (%)";
  section("Measured " + unit + ", mean over " + std::to_string(protocol.repeats) + " x " +
              std::to_string(protocol.folds) + "-fold CV",
          [&](const CellResult* c, const double*) {
            if (c == nullptr) return std::string("-");
            return c->ok ? detail::fmt(c->display(), prec) : std::string("FAIL");
          });
  section("Reference " + unit, [&](const CellResult*, const double* r) {
    return r ? detail::fmt(*r, prec) : std::string("-");
  });
  section("Delta (measured - reference)", [&](const CellResult* c, const double* r) {
    if (c == nullptr || !c->ok || !r) return std::string("-");
    const double d = c->display() - *r;
    return (d >= 0 ? "+" : "") + detail::fmt(d, prec);
  });
  out << "\n(* stretch dataset)\n";
  return out.str();
}

/// Runs grid search plus the final repeated CV for every dataset x method
/// cell. Every fold and every finished cell is appended to records.jsonl as
/// it completes; with resume on, cells already present for the same protocol
/// are read back instead of recomputed. A failing cell is recorded and the
/// run continues.
inline BenchmarkReport benchmark_run(const Manifest& manifest, const std::vector<MethodSpec>& methods,
                                     const Protocol& protocol, const BenchmarkOptions& opts) {
  std::filesystem::create_directories(opts.out_dir);
  BenchmarkReport report;
  report.records_path = opts.out_dir / "records.jsonl";
  report.table_path = opts.out_dir / "table.txt";

  std::map<std::string, nlohmann::json> finished;
  if (opts.resume) finished = detail::read_finished_cells(report.records_path);
  const bool fresh = !opts.resume || !std::filesystem::exists(report.records_path);
  std::ofstream records(report.records_path, fresh ? std::ios::trunc : std::ios::app);
  if (!records) throw Error(ErrorCode::io_error, "cannot write " + report.records_path.string());
  if (fresh) {
    records << nlohmann::json{{"schema", "elastica.bench.v1"},
                              {"type", "header"},
                              {"version", kVersion},
                              {"manifest", manifest.name},
                              {"protocol", protocol.to_json()}}
                   .dump()
            << "\n";
  }

  for (const auto& entry : manifest.datasets) {
    if (opts.only_dataset && *opts.only_dataset != entry.name) continue;
    std::optional<Dataset> data;
    std::string load_error;
    for (const auto& m : methods) {
      if (opts.only_method && MethodSpec::parse(*opts.only_method) != m) continue;
      CellResult cell;
      cell.dataset = entry.name;
      cell.method = m.name();
      cell.task = entry.task;
      cell.stretch = entry.stretch;
      if (auto ref = entry.reference.find(m.name()); ref != entry.reference.end()) {
        cell.reference = ref->second;
      }
      const std::string key = detail::cell_key(entry.name, m.name(), protocol);
      if (auto it = finished.find(key); it != finished.end()) {
        const auto& j = it->second;
        cell.resumed = true;
        cell.ok = j.value("ok", false);
        cell.error = j.value("error", "");
        cell.dim = j.value("dim", std::size_t{0});
        cell.num = j.value("num", std::size_t{0});
        if (cell.ok) {
          cell.mean = j.at("mean").get<double>();
          cell.sd = j.at("sd").get<double>();
        }
        cell.failed_folds = j.value("folds_failed", std::size_t{0});
        if (j.contains("best") && j["best"].is_object()) {
          const auto& b = j["best"];
          cell.best = {b.value("c_exp", 0), b.value("lambda_exp", 0), b.value("c", 1.0),
                       b.value("lambda", 1.0)};
        }
        cell.seconds = j.value("seconds", 0.0);
        report.cells.push_back(std::move(cell));
        continue;
      }

      const auto t0 = std::chrono::steady_clock::now();
      nlohmann::json cell_rec = {{"schema", "elastica.bench.v1"},
                                 {"type", "cell"},
                                 {"key", key},
                                 {"dataset", entry.name},
                                 {"method", m.name()},
                                 {"task", to_string(entry.task)},
                                 {"metric", metric_name(entry.task)}};
      try {
        if (!data && load_error.empty()) {
          try {
            data = load_entry(entry);
          } catch (const Error& e) {
            load_error = e.what();
          }
        }
        if (!data) throw Error(ErrorCode::io_error, load_error);
        cell.dim = data->dim();
        cell.num = data->size();

        CvSetup setup;
        setup.task = entry.task;
        setup.config = protocol.config_for(m, entry.task);
        setup.scaling = entry.scaling;
        setup.k = protocol.folds;
        setup.repeats = protocol.search_repeats;
        setup.seed = protocol.seed;
        setup.workers = protocol.workers;
        const GridSpec grid = protocol.grid_for(entry.task);
        const GridResult search = grid_search(*data, setup, grid);

        setup.repeats = protocol.repeats;
        const CvReport final_report = cross_validate(*data, setup, search.best);
        for (const auto& f : final_report.folds) {
          nlohmann::json rec = {{"schema", "elastica.bench.v1"},
                                {"type", "fold"},
                                {"key", key},
                                {"dataset", entry.name},
                                {"method", m.name()},
                                {"repeat", f.repeat},
                                {"fold", f.fold},
                                {"metric", metric_name(entry.task)},
                                {"ok", f.ok},
                                {"seconds", f.seconds},
                                {"iterations", f.iterations},
                                {"seed", protocol.seed + f.repeat},
                                {"point", search.best.to_json()}};
          rec["score"] = f.ok ? nlohmann::json(f.score) : nlohmann::json(nullptr);
          if (!f.ok) rec["error"] = f.error;
          records << rec.dump() << "\n";
        }
        cell.ok = final_report.ok();
        cell.mean = final_report.mean;
        cell.sd = final_report.sd;
        cell.failed_folds = final_report.failed;
        cell.best = search.best;
        std::size_t failed_points = 0;
        for (const auto& rep : search.table) failed_points += rep.ok() ? 0 : 1;
        cell_rec["grid_points"] = search.table.size();
        cell_rec["grid_points_failed"] = failed_points;
        cell_rec["search_seconds"] = search.seconds;
        cell_rec["search_score"] = search.best_report.mean;
      } catch (const Error& e) {
        cell.ok = false;
        cell.error = std::string(to_string(e.code())) + ": " + e.what();
      }
      cell.seconds = detail::seconds_since(t0);
      cell_rec["ok"] = cell.ok;
      cell_rec["dim"] = cell.dim;
      cell_rec["num"] = cell.num;
      cell_rec["seconds"] = cell.seconds;
      cell_rec["folds_failed"] = cell.failed_folds;
      cell_rec["protocol"] = protocol.to_json();
      cell_rec["config"] = config_json(protocol.config_for(m, entry.task));
      if (cell.ok) {
        cell_rec["mean"] = cell.mean;
        cell_rec["sd"] = cell.sd;
        cell_rec["best"] = cell.best.to_json();
      } else {
        cell_rec["error"] = cell.error;
      }
      if (cell.reference) cell_rec["reference"] = *cell.reference;
      records << cell_rec.dump() << "\n";
      records.flush();
      if (opts.log) {
        *opts.log << entry.name << " / " << m.name() << ": "
                  << (cell.ok ? detail::fmt(cell.display(), 3) : "FAIL " + cell.error) << " ("
                  << detail::fmt(cell.seconds, 1) << " s)\n";
      }
      report.cells.push_back(std::move(cell));
    }
  }

  std::ofstream table(report.table_path);
  table << render_table(manifest, methods, report.cells, protocol);
  return report;
}

}  // namespace elastica
