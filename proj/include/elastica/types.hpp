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

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <string_view>
#include <vector>

#include "elastica/errors.hpp"

namespace elastica {

/// Points are stored one per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using PointRef = Eigen::Ref<const Vector>;

enum class Task { binary, multiclass, regression };

constexpr std::string_view to_string(Task task) {
  switch (task) {
    case Task::binary: return "binary";
    case Task::multiclass: return "multiclass";
    case Task::regression: return "regression";
  }
  return "unknown";
}

inline Task parse_task(std::string_view s) {
  if (s == "binary") return Task::binary;
  if (s == "multiclass") return Task::multiclass;
  if (s == "regression") return Task::regression;
  throw Error(ErrorCode::invalid_argument, "unknown task '" + std::string(s) + "'");
}

/// Per-feature min-max pairs. A feature is mapped by (v - min) / (max - min);
/// a constant feature (max == min) maps to 0.
struct ScalingParams {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t dim() const { return min.size(); }

  /// The identity map on d features (min 0, max 1).
  static ScalingParams identity(std::size_t d) {
    return {std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
  }

  double apply(std::size_t j, double v) const {
    const double range = max[j] - min[j];
    return range > 0.0 ? (v - min[j]) / range : 0.0;
  }

  Vector apply(PointRef x) const {
    detail::require_dims(dim(), static_cast<std::size_t>(x.size()), "scaling");
    Vector out(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      out[j] = apply(static_cast<std::size_t>(j), x[j]);
    }
    return out;
  }
};

inline bool all_finite(const Eigen::Ref<const Matrix>& m) {
  return m.allFinite();
}

}  // namespace elastica
