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

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>
#include <string>

#include "elastica/errors.hpp"
#include "elastica/types.hpp"

namespace elastica {

/// Factorization for min_w |A w - y|^2 + eta |w|^2, reusable across
/// right-hand sides.
///
/// With eta > 0 the normal matrix A^T A + eta I is Cholesky-factored and each
/// solve takes one step of iterative refinement. When rounding makes that
/// matrix numerically indefinite (cond(A)^2 beyond 1 / eta), the stacked
/// least-squares problem [A; sqrt(eta) I] w = [y; 0] is QR-factored instead;
/// it has full column rank for any eta > 0. With eta == 0 a column-pivoted QR
/// of A is used, and a rank-deficient A is rejected.
class RidgeSolver {
 public:
  RidgeSolver(const Matrix& a, double eta) : a_(a), eta_(eta) {
    detail::require(std::isfinite(eta) && eta >= 0.0, ErrorCode::invalid_argument,
                    "ridge: eta must be finite and >= 0");
    detail::require(a.rows() >= 1 && a.cols() >= 1, ErrorCode::invalid_argument,
                    "ridge: empty system");
    detail::require(a.allFinite(), ErrorCode::non_finite, "ridge: non-finite matrix entry");
    if (eta_ > 0.0) {
      const Eigen::Index n = a.cols();
      normal_.setZero(n, n);
      normal_.selfadjointView<Eigen::Lower>().rankUpdate(a_.transpose());
      normal_.diagonal().array() += eta_;
      normal_.triangularView<Eigen::StrictlyUpper>() = normal_.transpose();
      llt_.compute(normal_);
      if (llt_.info() != Eigen::Success) {
        Eigen::MatrixXd stacked(a.rows() + n, n);
        stacked.topRows(a.rows()) = a_;
        stacked.bottomRows(n) = std::sqrt(eta_) * Eigen::MatrixXd::Identity(n, n);
        stacked_qr_.compute(stacked);
        use_stacked_ = true;
      }
    } else {
      qr_.compute(a_);
      if (qr_.rank() < a.cols()) {
        throw Error(ErrorCode::ill_conditioned,
                    "ridge: singular system with eta = 0 (rank " + std::to_string(qr_.rank()) +
                        " < " + std::to_string(a.cols()) + "); use eta > 0");
      }
    }
  }

  Vector solve(const Vector& y) const {
    detail::require_dims(static_cast<std::size_t>(a_.rows()), static_cast<std::size_t>(y.size()),
                         "ridge right-hand side");
    detail::require(y.allFinite(), ErrorCode::non_finite, "ridge: non-finite right-hand side");
    if (eta_ == 0.0) return qr_.solve(y);
    if (use_stacked_) {
      Vector rhs = Vector::Zero(a_.rows() + a_.cols());
      rhs.head(a_.rows()) = y;
      return stacked_qr_.solve(rhs);
    }
    const Vector rhs = a_.transpose() * y;
    Vector w = llt_.solve(rhs);
    const Vector r = rhs - normal_ * w;
    w += llt_.solve(r);
    return w;
  }

  double eta() const { return eta_; }
  const Matrix& matrix() const { return a_; }

 private:
  Matrix a_;
  double eta_;
  Eigen::MatrixXd normal_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
  Eigen::HouseholderQR<Eigen::MatrixXd> stacked_qr_;
  bool use_stacked_ = false;
};

/// w = argmin |A w - y|^2 + eta |w|^2 = (A^T A + eta I)^{-1} A^T y.
inline Vector ridge_solve(const Matrix& a, const Vector& y, double eta) {
  return RidgeSolver(a, eta).solve(y);
}

/// |(A^T A + eta I) w - A^T y| / |A^T y|; the absolute value when A^T y = 0.
inline double normal_equation_residual(const Matrix& a, const Vector& y, double eta,
                                       const Vector& w) {
  const Vector aty = a.transpose() * y;
  const Vector r = a.transpose() * (a * w) + eta * w - aty;
  const double scale = aty.norm();
  return scale > 0.0 ? r.norm() / scale : r.norm();
}

}  // namespace elastica
