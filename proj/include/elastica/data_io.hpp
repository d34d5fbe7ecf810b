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

// Dataset ingestion (libsvm sparse text, CSV), min-max scaling, fold
// splitting and the benchmark manifest.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "elastica/errors.hpp"
#include "elastica/types.hpp"

namespace elastica {

struct Dataset {
  Matrix features;
  Vector targets;
  // sorted distinct labels; present iff the targets are categorical
  std::optional<std::vector<double>> label_map;
  std::string name;

  std::size_t size() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }

  void validate() const {
    detail::require(features.rows() >= 1, ErrorCode::invalid_argument, "dataset is empty");
    detail::require_dims(size(), static_cast<std::size_t>(targets.size()), "dataset targets");
    detail::require(features.allFinite() && targets.allFinite(), ErrorCode::non_finite,
                    "dataset contains non-finite values");
  }

  Dataset subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
    out.targets.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto src = static_cast<Eigen::Index>(rows[r]);
      out.features.row(static_cast<Eigen::Index>(r)) = features.row(src);
      out.targets[static_cast<Eigen::Index>(r)] = targets[src];
    }
    out.label_map = label_map;
    out.name = name;
    return out;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<double> distinct_sorted(const Vector& v) {
  std::set<double> seen(v.data(), v.data() + v.size());
  return {seen.begin(), seen.end()};
}

}  // namespace detail

/// Parses "label idx:val idx:val ..." lines with 1-based, strictly increasing
/// indices. Absent indices are 0. The dimension is expected_dim when given,
/// otherwise the largest index seen. Whitespace-only lines carry no sample and
/// are skipped; anything else either parses or raises a ParseError naming the
/// line.
inline Dataset parse_libsvm(std::istream& in, std::optional<std::size_t> expected_dim = {},
                            bool categorical = true, std::string name = {}) {
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  std::vector<double> labels;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;
    const auto label = detail::to_double(tok);
    if (!label || !std::isfinite(*label)) throw ParseError(line_no, "bad label '" + tok + "'");
    std::vector<std::pair<std::size_t, double>> entries;
    std::size_t prev = 0;
    while (tokens >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) throw ParseError(line_no, "expected idx:val, got '" + tok + "'");
      std::size_t idx = 0;
      const std::string_view idx_str(tok.data(), colon);
      const auto [ptr, ec] = std::from_chars(idx_str.data(), idx_str.data() + idx_str.size(), idx);
      if (ec != std::errc() || ptr != idx_str.data() + idx_str.size() || idx == 0) {
        throw ParseError(line_no, "bad feature index '" + std::string(idx_str) + "'");
      }
      if (idx <= prev) throw ParseError(line_no, "feature indices must be strictly increasing");
      const auto val = detail::to_double(std::string_view(tok).substr(colon + 1));
      if (!val || !std::isfinite(*val)) throw ParseError(line_no, "bad feature value in '" + tok + "'");
      if (expected_dim && idx > *expected_dim) {
        throw Error(ErrorCode::dimension_mismatch,
                    "line " + std::to_string(line_no) + ": feature index " + std::to_string(idx) +
                        " exceeds expected dimension " + std::to_string(*expected_dim));
      }
      entries.emplace_back(idx, *val);
      prev = idx;
      max_index = std::max(max_index, idx);
    }
    rows.push_back(std::move(entries));
    labels.push_back(*label);
  }
  if (rows.empty()) throw ParseError(line_no, "no samples in libsvm input");
  const std::size_t d = expected_dim.value_or(max_index);
  detail::require(d >= 1, ErrorCode::parse_error, "libsvm input has no features");

  Dataset ds;
  ds.name = std::move(name);
  ds.features = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  ds.targets.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [idx, val] : rows[r]) {
      ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(idx - 1)) = val;
    }
    ds.targets[static_cast<Eigen::Index>(r)] = labels[r];
  }
  if (categorical) ds.label_map = detail::distinct_sorted(ds.targets);
  return ds;
}

/// Writes a dataset in libsvm format; values use 17 significant digits so
/// that re-parsing is exact. Zero entries are omitted.
inline void write_libsvm(std::ostream& out, const Dataset& ds) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < ds.features.rows(); ++i) {
    out << ds.targets[i];
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j) {
      if (ds.features(i, j) != 0.0) out << ' ' << (j + 1) << ':' << ds.features(i, j);
    }
    out << '\n';
  }
}

struct CsvOptions {
  std::optional<bool> header;  // nullopt: detect from the first row
  bool categorical = true;
  bool has_target = true;      // last column is the target
  std::optional<std::size_t> expected_features;
};

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (quoted) throw ParseError(line_no, "unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace detail

/// Comma-separated rows, '.' decimal separator, optional header row, target
/// in the last column.
inline Dataset parse_csv(std::istream& in, const CsvOptions& opts = {}, std::string name = {}) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv_row(line, line_no);
    std::vector<double> values;
    values.reserve(fields.size());
    bool numeric = true;
    for (const auto& f : fields) {
      const auto v = detail::to_double(f);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (first) {
      first = false;
      const bool is_header = opts.header.value_or(!numeric);
      if (is_header) {
        width = fields.size();
        continue;
      }
    }
    if (!numeric) throw ParseError(line_no, "non-numeric field");
    for (double v : values) {
      if (!std::isfinite(v)) throw ParseError(line_no, "non-finite value");
    }
    if (width == 0) width = values.size();
    if (values.size() != width) {
      throw ParseError(line_no, "expected " + std::to_string(width) + " fields, got " +
                                    std::to_string(values.size()));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError(line_no, "no samples in csv input");
  const std::size_t d = opts.has_target ? width - 1 : width;
  detail::require(d >= 1, ErrorCode::parse_error, "csv input has no feature columns");
  if (opts.expected_features && *opts.expected_features != d) {
    throw Error(ErrorCode::dimension_mismatch,
                "csv has " + std::to_string(d) + " features, expected " +
                    std::to_string(*opts.expected_features));
  }

  Dataset ds;
  ds.name = std::move(name);
  ds.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  ds.targets = Vector::Zero(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = rows[r][j];
    }
    if (opts.has_target) ds.targets[static_cast<Eigen::Index>(r)] = rows[r][d];
  }
  if (opts.has_target && opts.categorical) ds.label_map = detail::distinct_sorted(ds.targets);
  return ds;
}

inline void write_csv(std::ostream& out, const Dataset& ds) {
  out << std::setprecision(17);
  for (Eigen::Index j = 0; j < ds.features.cols(); ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  for (Eigen::Index i = 0; i < ds.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j) out << ds.features(i, j) << ',';
    out << ds.targets[i] << '\n';
  }
}

enum class DataFormat { csv, libsvm };

inline DataFormat parse_format(std::string_view s) {
  if (s == "csv") return DataFormat::csv;
  if (s == "libsvm") return DataFormat::libsvm;
  throw Error(ErrorCode::invalid_argument, "unknown data format '" + std::string(s) + "'");
}

/// libsvm for *.libsvm, *.svm and *.txt, CSV otherwise.
inline DataFormat guess_format(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".libsvm" || ext == ".svm" || ext == ".txt") ? DataFormat::libsvm
                                                              : DataFormat::csv;
}

inline Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                            bool categorical, std::optional<std::size_t> expected_dim = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  const std::string name = path.stem().string();
  if (format == DataFormat::libsvm) return parse_libsvm(in, expected_dim, categorical, name);
  CsvOptions opts;
  opts.categorical = categorical;
  opts.expected_features = expected_dim;
  return parse_csv(in, opts, name);
}

// ---------------------------------------------------------------------------
// scaling

inline ScalingParams fit_scaling(const Matrix& features) {
  detail::require(features.rows() >= 1, ErrorCode::invalid_argument, "fit_scaling: no rows");
  ScalingParams p;
  p.min.resize(static_cast<std::size_t>(features.cols()));
  p.max.resize(static_cast<std::size_t>(features.cols()));
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    p.min[static_cast<std::size_t>(j)] = features.col(j).minCoeff();
    p.max[static_cast<std::size_t>(j)] = features.col(j).maxCoeff();
  }
  return p;
}

inline ScalingParams fit_scaling(const Dataset& ds) { return fit_scaling(ds.features); }

/// Values outside the fitted range map outside [0, 1]; nothing is clipped.
inline Matrix apply_scaling(const ScalingParams& p, const Matrix& features) {
  detail::require_dims(p.dim(), static_cast<std::size_t>(features.cols()), "apply_scaling");
  Matrix out(features.rows(), features.cols());
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
      out(i, j) = p.apply(static_cast<std::size_t>(j), features(i, j));
    }
  }
  return out;
}

inline Dataset apply_scaling(const ScalingParams& p, const Dataset& ds) {
  Dataset out = ds;
  out.features = apply_scaling(p, ds.features);
  return out;
}

/// Min-max scaling of a regression target to [0, 1].
inline Dataset scale_targets(const Dataset& ds) {
  Matrix column = ds.targets;
  const ScalingParams p = fit_scaling(column);
  Dataset out = ds;
  for (Eigen::Index i = 0; i < out.targets.size(); ++i) out.targets[i] = p.apply(0, ds.targets[i]);
  return out;
}

// ---------------------------------------------------------------------------
// folds

/// Seeded shuffle of 0..n-1 cut into k contiguous chunks; the first n % k
/// chunks get one extra element.
inline std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k,
                                                           std::uint64_t seed) {
  detail::require(k >= 2, ErrorCode::invalid_argument, "kfold: k must be >= 2");
  detail::require(k <= n, ErrorCode::invalid_argument,
                  "kfold: k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t len = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                    order.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return folds;
}

// ---------------------------------------------------------------------------
// manifest

enum class ScalingMode { whole, per_fold };

inline ScalingMode parse_scaling_mode(std::string_view s) {
  if (s == "whole") return ScalingMode::whole;
  if (s == "per_fold" || s == "per-fold") return ScalingMode::per_fold;
  throw Error(ErrorCode::invalid_argument, "unknown scaling mode '" + std::string(s) + "'");
}

constexpr std::string_view to_string(ScalingMode m) {
  return m == ScalingMode::whole ? "whole" : "per_fold";
}

struct ManifestEntry {
  std::string name;
  std::filesystem::path path;   // resolved against the manifest directory
  std::string format;           // csv, libsvm or two_moons
  Task task = Task::binary;
  ScalingMode scaling = ScalingMode::whole;
  bool scale_targets = false;
  bool stretch = false;         // reported, but not part of any pass/fail gate
  std::optional<std::size_t> dim;
  std::map<std::string, double> reference;  // method name -> published score
  nlohmann::json extra;         // generator parameters for synthetic sets
};

struct Manifest {
  std::string name;
  std::vector<ManifestEntry> datasets;
};

inline Manifest parse_manifest(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  Manifest m;
  try {
    m.name = j.value("name", std::string("manifest"));
    const Task default_task = parse_task(j.value("task", std::string("binary")));
    for (const auto& d : j.at("datasets")) {
      ManifestEntry e;
      e.name = d.at("name").get<std::string>();
      e.format = d.value("format", std::string("csv"));
      if (d.contains("path")) e.path = base_dir / d.at("path").get<std::string>();
      e.task = d.contains("task") ? parse_task(d.at("task").get<std::string>()) : default_task;
      e.scaling = parse_scaling_mode(d.value("scaling", std::string("whole")));
      e.scale_targets = d.value("scale_targets", e.task == Task::regression);
      e.stretch = d.value("stretch", false);
      if (d.contains("dim")) e.dim = d.at("dim").get<std::size_t>();
      if (d.contains("reference")) e.reference = d.at("reference").get<std::map<std::string, double>>();
      e.extra = d.value("params", nlohmann::json::object());
      m.datasets.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::format_error, std::string("manifest: ") + ex.what());
  }
  return m;
}

inline Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::format_error, path.string() + ": " + ex.what());
  }
  return parse_manifest(j, path.parent_path());
}

}  // namespace elastica
