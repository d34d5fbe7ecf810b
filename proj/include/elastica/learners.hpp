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

// Task-level wrappers around a fitted expansion: binary classification by
// the sign of u, one-vs-all multiclass by argmax, and regression.

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "elastica/data_io.hpp"
#include "elastica/errors.hpp"
#include "elastica/kernel.hpp"
#include "elastica/solvers.hpp"
#include "elastica/types.hpp"

namespace elastica {

struct Predictor {
  Task kind = Task::binary;
  std::vector<RbfModel> models;
  // binary: {negative, positive}; multiclass: one label per member model
  std::vector<double> class_labels;
  ScalingParams scaling;
  std::vector<FitTrace> traces;
  nlohmann::json metadata = nlohmann::json::object();

  std::size_t dim() const { return models.front().dim(); }
  double width() const { return models.front().width(); }
};

struct TrainOptions {
  std::optional<Task> task;  // inferred from the label map when absent
  bool fit_scaling = true;   // false: features are already scaled
};

namespace detail {

inline Task infer_task(const Dataset& ds) {
  if (!ds.label_map) return Task::regression;
  return ds.label_map->size() >= 3 ? Task::multiclass : Task::binary;
}

inline Vector one_vs_rest(const Vector& targets, double positive) {
  return targets.unaryExpr([positive](double t) { return t == positive ? 1.0 : -1.0; });
}

}  // namespace detail

/// Fits one expansion per required scorer. Binary targets are coded +1 for
/// the larger label and -1 for the smaller; multiclass fits M one-vs-all
/// members sharing the basis and config; M = 2 goes through the binary path.
inline Predictor train(const Dataset& ds, double width, const SolverConfig& config,
                       const TrainOptions& opts = {}) {
  ds.validate();
  Task kind = opts.task.value_or(detail::infer_task(ds));
  std::vector<double> labels;
  if (kind != Task::regression) {
    labels = ds.label_map ? *ds.label_map : detail::distinct_sorted(ds.targets);
    detail::require(labels.size() >= 2, ErrorCode::invalid_argument,
                    "train: dataset has a single class");
    if (kind == Task::multiclass && labels.size() == 2) kind = Task::binary;
    detail::require(kind != Task::binary || labels.size() == 2, ErrorCode::invalid_argument,
                    "train: binary task needs exactly two labels, got " +
                        std::to_string(labels.size()));
  }

  Predictor pred;
  pred.kind = kind;
  pred.scaling = opts.fit_scaling ? fit_scaling(ds) : ScalingParams::identity(ds.dim());
  const Matrix x = apply_scaling(pred.scaling, ds.features);
  auto basis = std::make_shared<const RbfBasis>(x, width);

  auto fit_one = [&](const Vector& y, ModelTask task) {
    FitResult r = fit(x, y, basis, config);
    pred.models.emplace_back(basis, r.model.weights(), task, pred.scaling);
    pred.traces.push_back(std::move(r.trace));
  };

  switch (kind) {
    case Task::regression:
      fit_one(ds.targets, ModelTask::regression);
      break;
    case Task::binary:
      pred.class_labels = labels;
      fit_one(detail::one_vs_rest(ds.targets, labels[1]), ModelTask::binary);
      break;
    case Task::multiclass:
      pred.class_labels = labels;
      for (double label : labels) fit_one(detail::one_vs_rest(ds.targets, label), ModelTask::ova_member);
      break;
  }
  return pred;
}

/// u(x) for a binary or regression predictor; x is in the original feature
/// space and is scaled here.
inline double predict_value(const Predictor& pred, PointRef x) {
  detail::require(pred.kind != Task::multiclass, ErrorCode::invalid_argument,
                  "predict_value: multiclass predictors have no single value");
  detail::require_dims(pred.dim(), static_cast<std::size_t>(x.size()), "predict_value");
  return eval_u(pred.models.front(), pred.scaling.apply(x));
}

/// Member scores u_m(x) (one entry for binary and regression).
inline Vector predict_scores(const Predictor& pred, PointRef x) {
  detail::require_dims(pred.dim(), static_cast<std::size_t>(x.size()), "predict");
  const Vector scaled = pred.scaling.apply(x);
  Vector s(static_cast<Eigen::Index>(pred.models.size()));
  for (std::size_t m = 0; m < pred.models.size(); ++m) {
    s[static_cast<Eigen::Index>(m)] = eval_u(pred.models[m], scaled);
  }
  return s;
}

/// Index of the largest score; ties go to the lowest index.
inline std::size_t argmax_first(const Vector& scores) {
  std::size_t best = 0;
  for (Eigen::Index m = 1; m < scores.size(); ++m) {
    if (scores[m] > scores[static_cast<Eigen::Index>(best)]) best = static_cast<std::size_t>(m);
  }
  return best;
}

/// Binary: the positive label iff u(x) >= 0. Multiclass: label of the
/// highest-scoring member.
inline double predict_label(const Predictor& pred, PointRef x) {
  detail::require(pred.kind != Task::regression, ErrorCode::invalid_argument,
                  "predict_label: regression predictors have no labels");
  const Vector s = predict_scores(pred, x);
  if (pred.kind == Task::binary) return s[0] >= 0.0 ? pred.class_labels[1] : pred.class_labels[0];
  return pred.class_labels[argmax_first(s)];
}

/// Labels for classifiers, values for regressors, one per row.
inline Vector predict(const Predictor& pred, const Matrix& points) {
  Vector out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const auto x = points.row(i).transpose();
    out[i] = pred.kind == Task::regression ? predict_value(pred, x) : predict_label(pred, x);
  }
  return out;
}

}  // namespace elastica
