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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "elastica/data_io.hpp"

namespace elastica {

/// Two interleaving half circles with isotropic Gaussian noise. The upper
/// moon is labelled +1, the lower -1; the first n / 2 rows are the upper
/// moon.
inline Dataset make_two_moons(std::size_t n, double noise, std::uint64_t seed) {
  detail::require(n >= 2, ErrorCode::invalid_argument, "two_moons: need n >= 2");
  const std::size_t n_upper = n / 2;
  const std::size_t n_lower = n - n_upper;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, noise);

  Dataset ds;
  ds.name = "two_moons";
  ds.features.resize(static_cast<Eigen::Index>(n), 2);
  ds.targets.resize(static_cast<Eigen::Index>(n));
  auto angle = [](std::size_t i, std::size_t count) {
    return count > 1 ? std::numbers::pi * static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const bool upper = i < n_upper;
    const double t = upper ? angle(i, n_upper) : angle(i - n_upper, n_lower);
    const double x = upper ? std::cos(t) : 1.0 - std::cos(t);
    const double y = upper ? std::sin(t) : 0.5 - std::sin(t);
    const auto r = static_cast<Eigen::Index>(i);
    ds.features(r, 0) = x + (noise > 0.0 ? jitter(rng) : 0.0);
    ds.features(r, 1) = y + (noise > 0.0 ? jitter(rng) : 0.0);
    ds.targets[r] = upper ? 1.0 : -1.0;
  }
  ds.label_map = std::vector<double>{-1.0, 1.0};
  return ds;
}

}  // namespace elastica
