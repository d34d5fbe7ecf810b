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

// Gaussian RBF expansions u(x) = sum_i w_i exp(-c |x - x_i|^2) and their exact
// first and second derivatives.
//
// All derivative formulas are derived for the kernel exactly as written
// above, so grad(phi_i) = -2c (x - x_i) phi_i. Formulas written for
// exp(-c r^2 / 2) map onto these with c -> 2c.

#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "elastica/errors.hpp"
#include "elastica/types.hpp"

namespace elastica {

/// Squared Euclidean distance accumulated in extended precision. The sum runs
/// in feature order, so d(a, b) == d(b, a) bit for bit.
inline double squared_distance(PointRef a, PointRef b) {
  long double acc = 0.0L;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const long double diff = static_cast<long double>(a[k]) - b[k];
    acc += diff * diff;
  }
  return static_cast<double>(acc);
}

/// exp(-c |x - center|^2).
inline double rbf_eval(PointRef x, PointRef center, double c) {
  detail::require_dims(static_cast<std::size_t>(center.size()),
                       static_cast<std::size_t>(x.size()), "rbf_eval");
  detail::require(std::isfinite(c) && c > 0.0, ErrorCode::invalid_argument,
                  "rbf_eval: width must be positive and finite");
  detail::require(x.allFinite() && center.allFinite(), ErrorCode::non_finite,
                  "rbf_eval: non-finite coordinate");
  return std::exp(-c * squared_distance(x, center));
}

/// Gaussian basis: one center per row plus the shared width c.
class RbfBasis {
 public:
  RbfBasis(Matrix centers, double width)
      : centers_(std::move(centers)), width_(width) {
    detail::require(centers_.rows() >= 1 && centers_.cols() >= 1,
                    ErrorCode::invalid_argument,
                    "RbfBasis: need at least one center of dimension >= 1");
    detail::require(std::isfinite(width_) && width_ > 0.0,
                    ErrorCode::invalid_argument,
                    "RbfBasis: width must be positive and finite");
    detail::require(centers_.allFinite(), ErrorCode::non_finite,
                    "RbfBasis: non-finite center coordinate");
  }

  std::size_t size() const { return static_cast<std::size_t>(centers_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(centers_.cols()); }
  double width() const { return width_; }
  const Matrix& centers() const { return centers_; }
  auto center(std::size_t i) const {
    return centers_.row(static_cast<Eigen::Index>(i)).transpose();
  }

 private:
  Matrix centers_;
  double width_;
};

enum class ModelTask { binary, regression, ova_member };

/// A fitted expansion. The basis is shared between models trained on the
/// same points (OVA members, grid points with equal c).
class RbfModel {
 public:
  RbfModel(std::shared_ptr<const RbfBasis> basis, Vector weights,
           ModelTask task = ModelTask::binary, ScalingParams scaling = {})
      : basis_(std::move(basis)), weights_(std::move(weights)), task_(task),
        scaling_(std::move(scaling)) {
    detail::require(basis_ != nullptr, ErrorCode::invalid_argument,
                    "RbfModel: null basis");
    detail::require(static_cast<std::size_t>(weights_.size()) == basis_->size(),
                    ErrorCode::dimension_mismatch,
                    "RbfModel: " + std::to_string(weights_.size()) +
                        " weights for " + std::to_string(basis_->size()) +
                        " centers");
    detail::require(weights_.allFinite(), ErrorCode::non_finite,
                    "RbfModel: non-finite weight");
    if (scaling_.dim() == 0) scaling_ = ScalingParams::identity(basis_->dim());
  }

  const RbfBasis& basis() const { return *basis_; }
  const std::shared_ptr<const RbfBasis>& basis_ptr() const { return basis_; }
  const Vector& weights() const { return weights_; }
  ModelTask task() const { return task_; }
  const ScalingParams& scaling() const { return scaling_; }
  std::size_t dim() const { return basis_->dim(); }
  double width() const { return basis_->width(); }

  RbfModel with_weights(Vector w) const {
    return RbfModel(basis_, std::move(w), task_, scaling_);
  }

 private:
  std::shared_ptr<const RbfBasis> basis_;
  Vector weights_;
  ModelTask task_;
  ScalingParams scaling_;
};

/// Phi(i, j) = phi_j(points_i).
inline Matrix design_matrix(const RbfBasis& basis, const Matrix& points) {
  detail::require_dims(basis.dim(), static_cast<std::size_t>(points.cols()),
                       "design_matrix");
  const Eigen::Index m = points.rows();
  const Eigen::Index n = static_cast<Eigen::Index>(basis.size());
  const double c = basis.width();
  Matrix phi(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto x = points.row(i).transpose();
    for (Eigen::Index j = 0; j < n; ++j) {
      phi(i, j) = std::exp(-c * squared_distance(x, basis.centers().row(j).transpose()));
    }
  }
  return phi;
}

/// Everything the variational operators need at one point: u, g, grad u,
/// Laplacian, H(u) grad u and grad u^T H(u) grad u. Two O(n d) passes.
struct PointGeometry {
  double value = 0.0;
  Vector g;
  Vector gradient;
  double laplacian = 0.0;
  Vector hess_grad;
  double grad_hess_grad = 0.0;
};

namespace detail {

// Per-center offsets x - x_i (rows), squared distances and w_i phi_i(x).
struct CenterTerms {
  Matrix offsets;
  Vector sq_dist;
  Vector weighted_phi;
};

inline CenterTerms center_terms(const RbfModel& model, PointRef x) {
  const RbfBasis& basis = model.basis();
  require_dims(basis.dim(), static_cast<std::size_t>(x.size()), "rbf model");
  const Eigen::Index n = static_cast<Eigen::Index>(basis.size());
  const double c = basis.width();
  CenterTerms t;
  t.offsets = (-basis.centers()).rowwise() + x.transpose();
  t.sq_dist.resize(n);
  t.weighted_phi.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t.sq_dist[i] = squared_distance(x, basis.centers().row(i).transpose());
    t.weighted_phi[i] = model.weights()[i] * std::exp(-c * t.sq_dist[i]);
  }
  return t;
}

}  // namespace detail

inline PointGeometry geometry(const RbfModel& model, PointRef x) {
  const double c = model.width();
  const double d = static_cast<double>(model.dim());
  const auto t = detail::center_terms(model, x);
  PointGeometry geo;
  geo.value = t.weighted_phi.sum();
  geo.g = t.offsets.transpose() * t.weighted_phi;
  geo.gradient = -2.0 * c * geo.g;
  geo.laplacian = 4.0 * c * c * t.weighted_phi.dot(t.sq_dist) - 2.0 * c * d * geo.value;
  // H v = 4c^2 sum_i w_i phi_i (x - x_i) ((x - x_i) . v) - 2c u v
  const Vector proj = t.offsets * geo.gradient;
  geo.hess_grad = 4.0 * c * c * (t.offsets.transpose() * t.weighted_phi.cwiseProduct(proj)) -
                  2.0 * c * geo.value * geo.gradient;
  geo.grad_hess_grad = geo.gradient.dot(geo.hess_grad);
  return geo;
}

inline double eval_u(const RbfModel& model, PointRef x) {
  return detail::center_terms(model, x).weighted_phi.sum();
}

/// g(x) = sum_i w_i (x - x_i) phi_i(x); grad u = -2c g.
inline Vector g_vector(const RbfModel& model, PointRef x) {
  const auto t = detail::center_terms(model, x);
  return t.offsets.transpose() * t.weighted_phi;
}

inline Vector grad_u(const RbfModel& model, PointRef x) {
  return -2.0 * model.width() * g_vector(model, x);
}

/// Delta u = -2c sum_i w_i (d - 2c |x - x_i|^2) phi_i(x).
inline double laplacian_u(const RbfModel& model, PointRef x) {
  const double c = model.width();
  const double d = static_cast<double>(model.dim());
  const auto t = detail::center_terms(model, x);
  return -2.0 * c * t.weighted_phi.dot((d - 2.0 * c * t.sq_dist.array()).matrix());
}

/// Full d x d Hessian: sum_i w_i phi_i (4c^2 (x - x_i)(x - x_i)^T - 2c I).
inline Eigen::MatrixXd hessian(const RbfModel& model, PointRef x) {
  const double c = model.width();
  const auto t = detail::center_terms(model, x);
  Eigen::MatrixXd h = 4.0 * c * c *
                      (t.offsets.transpose() * t.weighted_phi.asDiagonal() * t.offsets);
  h.diagonal().array() -= 2.0 * c * t.weighted_phi.sum();
  return h;
}

inline Vector hessian_vector(const RbfModel& model, PointRef x, PointRef v) {
  detail::require_dims(model.dim(), static_cast<std::size_t>(v.size()), "hessian_vector");
  const double c = model.width();
  const auto t = detail::center_terms(model, x);
  const Vector proj = t.offsets * v;
  return 4.0 * c * c * (t.offsets.transpose() * t.weighted_phi.cwiseProduct(proj)) -
         2.0 * c * t.weighted_phi.sum() * v;
}

/// v^T H(u) v without forming H.
inline double hessian_quadform(const RbfModel& model, PointRef x, PointRef v) {
  detail::require_dims(model.dim(), static_cast<std::size_t>(v.size()), "hessian_quadform");
  const double c = model.width();
  const auto t = detail::center_terms(model, x);
  const Vector proj = t.offsets * v;
  return 4.0 * c * c * t.weighted_phi.dot(proj.cwiseProduct(proj)) -
         2.0 * c * t.weighted_phi.sum() * v.squaredNorm();
}

}  // namespace elastica
