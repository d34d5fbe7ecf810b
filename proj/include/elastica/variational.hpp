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

// Level-set curvature, the elastica flux divergence and the discrete
// energies of the three regularizers, all evaluated on an RbfModel.
//
// Every |grad u| is replaced by sqrt(|grad u|^2 + eps^2). Since
// grad u = -2c g, the matching floor on |g| is eps / (2c).

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include "elastica/errors.hpp"
#include "elastica/kernel.hpp"
#include "elastica/types.hpp"

namespace elastica {

/// LR: Laplacian (squared gradient) penalty, TV: total variation,
/// EE: Euler's elastica.
enum class Mode { lr, tv, ee };

constexpr std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::lr: return "lr";
    case Mode::tv: return "tv";
    case Mode::ee: return "ee";
  }
  return "unknown";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "lr" || s == "LR") return Mode::lr;
  if (s == "tv" || s == "TV") return Mode::tv;
  if (s == "ee" || s == "EE") return Mode::ee;
  throw Error(ErrorCode::invalid_argument, "unknown mode '" + std::string(s) + "'");
}

/// Regularizer weights. b = 0 with a = 1 is total variation.
struct ElasticaParams {
  double lambda = 1.0;
  double a = 1.0;
  double b = 0.01;
  double eps_grad = 1e-8;

  void validate() const {
    detail::require(std::isfinite(lambda) && lambda >= 0.0, ErrorCode::invalid_argument,
                    "lambda must be finite and >= 0");
    detail::require(std::isfinite(a) && a >= 0.0, ErrorCode::invalid_argument,
                    "a must be finite and >= 0");
    detail::require(std::isfinite(b) && b >= 0.0, ErrorCode::invalid_argument,
                    "b must be finite and >= 0");
    detail::require(std::isfinite(eps_grad) && eps_grad > 0.0, ErrorCode::invalid_argument,
                    "eps_grad must be finite and > 0");
  }
};

inline double regularized_norm(double squared_norm, double eps) {
  return std::sqrt(squared_norm + eps * eps);
}

/// kappa = div(grad u / |grad u|) = Delta u / |grad u| - grad u^T H grad u / |grad u|^3
inline double curvature(const PointGeometry& geo, double eps_grad) {
  const double m = regularized_norm(geo.gradient.squaredNorm(), eps_grad);
  return geo.laplacian / m - geo.grad_hess_grad / (m * m * m);
}

inline double curvature(const RbfModel& model, PointRef x, double eps_grad) {
  detail::require(eps_grad > 0.0, ErrorCode::invalid_argument, "eps_grad must be > 0");
  return curvature(geometry(model, x), eps_grad);
}

/// Per-center curvature kernel f_i(x), normalized so that
///   curvature(model, x, eps) == (1 / G) sum_i w_i phi_i(x) f_i(x)
/// with G = sqrt(|g|^2 + (eps / 2c)^2):
///   f_i = |g|^2 / G^2 - d + 2c |x - x_i|^2 - 2c (g . (x - x_i))^2 / G^2.
/// Without the floor the first term is exactly 1.
inline double f_term(const Vector& g, double g_floor_sq, PointRef offset, double sq_dist,
                     double c) {
  const double gg = g.squaredNorm();
  const double big_g_sq = gg + g_floor_sq;
  const double proj = g.dot(offset);
  const double d = static_cast<double>(g.size());
  return gg / big_g_sq - d + 2.0 * c * sq_dist - 2.0 * c * proj * proj / big_g_sq;
}

inline double g_floor(double eps_grad, double c) { return eps_grad / (2.0 * c); }

inline double f_term(const RbfModel& model, PointRef x, std::size_t i, double eps_grad) {
  detail::require(i < model.basis().size(), ErrorCode::invalid_argument,
                  "f_term: center index " + std::to_string(i) + " out of range");
  const double c = model.width();
  const Vector g = g_vector(model, x);
  const Vector offset = x - model.basis().center(i);
  const double floor = g_floor(eps_grad, c);
  return f_term(g, floor * floor, offset, squared_distance(x, model.basis().center(i)), c);
}

/// K = a + b kappa^2.
inline double elastica_K(const PointGeometry& geo, const ElasticaParams& p) {
  const double kappa = curvature(geo, p.eps_grad);
  return p.a + p.b * kappa * kappa;
}

inline double elastica_K(const RbfModel& model, PointRef x, const ElasticaParams& p) {
  p.validate();
  return elastica_K(geometry(model, x), p);
}

/// Truncated expansion of div V for the elastica flux (terms of third and
/// higher order dropped). Reduces to a * kappa when b == 0.
inline double div_V(const PointGeometry& geo, const ElasticaParams& p) {
  const double kappa = curvature(geo, p.eps_grad);
  double out = p.a * kappa;
  if (p.b == 0.0) return out;

  const double m = regularized_norm(geo.gradient.squaredNorm(), p.eps_grad);
  const double m2 = m * m;
  const double m3 = m2 * m;
  const double m4 = m2 * m2;
  const double m5 = m4 * m;
  const double lap = geo.laplacian;
  const double q = geo.grad_hess_grad;
  const double hg2 = geo.hess_grad.squaredNorm();

  const double t1 = -4.0 * kappa * lap * q / m4;
  const double t2 = kappa * kappa * kappa;
  const double t3 = 2.0 * (2.0 * lap / m3 + kappa / m4) * hg2;
  const double t4 = 2.0 * (lap / m3 - 3.0 * q / m5) * (-2.0 * lap / m2 + kappa / m) * q;
  out += p.b * (t1 + t2 + t3 + t4);
  return out;
}

inline double div_V(const RbfModel& model, PointRef x, const ElasticaParams& p) {
  p.validate();
  return div_V(geometry(model, x), p);
}

/// du/dt at one collocation point, signed so that stepping u along it lowers
/// the corresponding energy:
///   LR: lambda Delta u - (u - y)
///   TV: lambda kappa   - (u - y)
///   EE: lambda div V   - (u - y)
inline double pde_rhs(const PointGeometry& geo, double y, const ElasticaParams& p, Mode mode) {
  const double residual = geo.value - y;
  switch (mode) {
    case Mode::lr: return p.lambda * geo.laplacian - residual;
    case Mode::tv: return p.lambda * curvature(geo, p.eps_grad) - residual;
    case Mode::ee: return p.lambda * div_V(geo, p) - residual;
  }
  throw Error(ErrorCode::invalid_argument, "pde_rhs: unknown mode");
}

inline double pde_rhs(const RbfModel& model, PointRef x, double y, const ElasticaParams& p,
                      Mode mode) {
  p.validate();
  return pde_rhs(geometry(model, x), y, p, mode);
}

/// du/dt at every row of points.
inline Vector pde_rhs_all(const RbfModel& model, const Matrix& points, const Vector& targets,
                          const ElasticaParams& p, Mode mode) {
  detail::require_dims(static_cast<std::size_t>(points.rows()),
                       static_cast<std::size_t>(targets.size()), "pde_rhs targets");
  Vector rhs(points.rows());
  for (Eigen::Index j = 0; j < points.rows(); ++j) {
    rhs[j] = pde_rhs(geometry(model, points.row(j).transpose()), targets[j], p, mode);
  }
  return rhs;
}

struct EnergyTerms {
  double fidelity = 0.0;     // sum (u - y)^2
  double regularizer = 0.0;  // sum R(x_i), before the lambda factor
  double lambda = 0.0;

  double total() const { return fidelity + lambda * regularizer; }
};

/// Discrete energy collocated at the training points:
///   sum_i (u(x_i) - y_i)^2 + lambda sum_i R(x_i)
/// with R = |grad u|^2 (LR), |grad u|_eps (TV), (a + b kappa^2) |grad u|_eps (EE).
inline EnergyTerms energy_terms(const RbfModel& model, const Matrix& points,
                                const Vector& targets, const ElasticaParams& p, Mode mode) {
  detail::require(points.rows() >= 1, ErrorCode::invalid_argument, "energy: empty dataset");
  detail::require_dims(static_cast<std::size_t>(points.rows()),
                       static_cast<std::size_t>(targets.size()), "energy targets");
  EnergyTerms e;
  e.lambda = p.lambda;
  const double c = model.width();
  for (Eigen::Index j = 0; j < points.rows(); ++j) {
    const auto x = points.row(j).transpose();
    double value = 0.0;
    double reg = 0.0;
    if (mode == Mode::ee) {
      const PointGeometry geo = geometry(model, x);
      value = geo.value;
      const double kappa = curvature(geo, p.eps_grad);
      reg = (p.a + p.b * kappa * kappa) *
            regularized_norm(geo.gradient.squaredNorm(), p.eps_grad);
    } else {
      const auto t = detail::center_terms(model, x);
      value = t.weighted_phi.sum();
      const Vector gradient = -2.0 * c * (t.offsets.transpose() * t.weighted_phi);
      const double grad_sq = gradient.squaredNorm();
      reg = mode == Mode::lr ? grad_sq : regularized_norm(grad_sq, p.eps_grad);
    }
    const double r = value - targets[j];
    e.fidelity += r * r;
    e.regularizer += reg;
  }
  return e;
}

inline double energy(const RbfModel& model, const Matrix& points, const Vector& targets,
                     const ElasticaParams& p, Mode mode) {
  return energy_terms(model, points, targets, p, mode).total();
}

}  // namespace elastica
