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

// Fitting procedures for the three energies:
//   fit_lr     one ridge-regularized collocation solve (LR only)
//   fit_gd     gradient-descent time marching on the coefficients (TV, EE)
//   fit_lagle  lagged linear-equation fixed-point iteration (TV, EE)
// All three collocate at the given points, which are normally the centers.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elastica/errors.hpp"
#include "elastica/kernel.hpp"
#include "elastica/ridge.hpp"
#include "elastica/types.hpp"
#include "elastica/variational.hpp"

namespace elastica {

enum class Method { direct, gd, lagle };

constexpr std::string_view to_string(Method method) {
  switch (method) {
    case Method::direct: return "direct";
    case Method::gd: return "gd";
    case Method::lagle: return "lagle";
  }
  return "unknown";
}

inline Method parse_method(std::string_view s) {
  if (s == "direct") return Method::direct;
  if (s == "gd" || s == "GD") return Method::gd;
  if (s == "lagle" || s == "lagLE" || s == "LAGLE") return Method::lagle;
  throw Error(ErrorCode::invalid_argument, "unknown solver '" + std::string(s) + "'");
}

struct SolverConfig {
  Mode mode = Mode::lr;
  Method method = Method::direct;
  ElasticaParams elastica;
  double eta = 1.0;
  double tau = 0.1;
  int max_iter = 40;
  double tol = 1e-6;
  int max_halvings = 20;
  // lagLE gives up once the weight change has grown this many times in a row
  int oscillation_window = 5;
  std::uint64_t seed = 0;

  /// Defaults per solver: eta = 1 for the direct LR solve, 1e-3 for the
  /// projections inside GD and lagLE.
  static SolverConfig make(Mode mode, Method method) {
    SolverConfig cfg;
    cfg.mode = mode;
    cfg.method = method;
    cfg.eta = method == Method::direct ? 1.0 : 1e-3;
    return cfg;
  }

  void validate() const {
    elastica.validate();
    detail::require(method != Method::direct || mode == Mode::lr, ErrorCode::invalid_argument,
                    "the direct solver requires mode lr");
    detail::require(method != Method::lagle || mode != Mode::lr, ErrorCode::invalid_argument,
                    "lagle requires mode tv or ee");
    detail::require(method != Method::lagle || elastica.lambda > 0.0,
                    ErrorCode::invalid_argument, "lagle requires lambda > 0");
    detail::require(std::isfinite(tau) && tau >= 0.0, ErrorCode::invalid_argument,
                    "tau must be finite and >= 0");
    detail::require(max_iter >= 1, ErrorCode::invalid_argument, "max_iter must be >= 1");
    detail::require(std::isfinite(eta) && eta >= 0.0, ErrorCode::invalid_argument,
                    "eta must be finite and >= 0");
    detail::require(tol >= 0.0, ErrorCode::invalid_argument, "tol must be >= 0");
    detail::require(max_halvings >= 0, ErrorCode::invalid_argument, "max_halvings must be >= 0");
  }
};

enum class FitStatus { converged, max_iter, stalled };

constexpr std::string_view to_string(FitStatus s) {
  switch (s) {
    case FitStatus::converged: return "converged";
    case FitStatus::max_iter: return "max_iter";
    case FitStatus::stalled: return "stalled";
  }
  return "unknown";
}

struct FitTrace {
  double initial_energy = 0.0;
  std::vector<double> energy_per_iter;
  std::vector<double> weight_change_per_iter;
  // lagLE only: |A w - rhs| / |rhs| of the system each iterate solved
  std::vector<double> residual_per_iter;
  int iterations_run = 0;
  bool converged = false;
  FitStatus status = FitStatus::max_iter;
  double final_tau = 0.0;
  int halvings = 0;
  std::chrono::duration<double> wall_time{0.0};
};

struct FitResult {
  RbfModel model;
  FitTrace trace;
};

class DivergenceError : public Error {
 public:
  DivergenceError(int iteration, FitTrace trace)
      : Error(ErrorCode::divergence, "non-finite energy at iteration " +
                                         std::to_string(iteration) +
                                         " after exhausting step halving"),
        iteration_(iteration), trace_(std::move(trace)) {}
  int iteration() const { return iteration_; }
  const FitTrace& trace() const { return trace_; }

 private:
  int iteration_;
  FitTrace trace_;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& message, FitTrace trace)
      : Error(ErrorCode::non_convergence, message), trace_(std::move(trace)) {}
  const FitTrace& trace() const { return trace_; }

 private:
  FitTrace trace_;
};

namespace detail {

inline double relative_change(const Vector& before, const Vector& after) {
  const double diff = (after - before).norm();
  const double scale = after.norm();
  return scale > 0.0 ? diff / scale : diff;
}

class Stopwatch {
 public:
  std::chrono::duration<double> elapsed() const { return Clock::now() - start_; }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

inline void check_samples(const RbfBasis& basis, const Matrix& points, const Vector& targets) {
  require_dims(basis.dim(), static_cast<std::size_t>(points.cols()), "fit points");
  require_dims(static_cast<std::size_t>(points.rows()), static_cast<std::size_t>(targets.size()),
               "fit targets");
  require(points.rows() >= 1, ErrorCode::invalid_argument, "fit: empty dataset");
  require(targets.allFinite(), ErrorCode::non_finite, "fit: non-finite target");
}

}  // namespace detail

/// w0 = (Phi^T Phi + eta I)^{-1} Phi^T y, shared by GD and lagLE.
inline Vector initial_weights(const Matrix& phi, const Vector& targets, double eta) {
  return ridge_solve(phi, targets, eta);
}

/// LR collocation matrix Psi(i, j) = phi_j(x_i) - lambda Delta phi_j(x_i)
///                                 = phi_j(x_i) (1 + 2c lambda (d - 2c r_ij^2)).
inline Matrix lr_system(const RbfBasis& basis, const Matrix& points, double lambda) {
  detail::require_dims(basis.dim(), static_cast<std::size_t>(points.cols()), "lr_system");
  const double c = basis.width();
  const double d = static_cast<double>(basis.dim());
  Matrix psi(points.rows(), static_cast<Eigen::Index>(basis.size()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const auto x = points.row(i).transpose();
    for (Eigen::Index j = 0; j < psi.cols(); ++j) {
      const double r2 = squared_distance(x, basis.centers().row(j).transpose());
      psi(i, j) = std::exp(-c * r2) * (1.0 + 2.0 * c * lambda * (d - 2.0 * c * r2));
    }
  }
  return psi;
}

inline FitResult fit_lr(const Matrix& points, const Vector& targets,
                        std::shared_ptr<const RbfBasis> basis, const SolverConfig& config) {
  detail::Stopwatch clock;
  config.validate();
  detail::require(config.mode == Mode::lr, ErrorCode::invalid_argument, "fit_lr: mode must be lr");
  detail::check_samples(*basis, points, targets);
  const Matrix psi = lr_system(*basis, points, config.elastica.lambda);
  RbfModel model(basis, ridge_solve(psi, targets, config.eta));
  FitTrace trace;
  trace.initial_energy = energy(model, points, targets, config.elastica, Mode::lr);
  trace.energy_per_iter.push_back(trace.initial_energy);
  trace.weight_change_per_iter.push_back(1.0);
  trace.iterations_run = 1;
  trace.converged = true;
  trace.status = FitStatus::converged;
  trace.wall_time = clock.elapsed();
  return {std::move(model), std::move(trace)};
}

/// Gradient-descent time marching. Each iteration maps du/dt at the
/// collocation points to coefficient space through the ridge solve against
/// Phi and steps w <- w + tau dw. A step that raises the discrete energy (or
/// makes it non-finite) is rejected and tau is halved; tau stays reduced for
/// later iterations. After max_halvings rejections the run stops as stalled,
/// so the recorded energy never increases.
inline FitResult fit_gd(const Matrix& points, const Vector& targets,
                        std::shared_ptr<const RbfBasis> basis, const SolverConfig& config) {
  detail::Stopwatch clock;
  config.validate();
  detail::require(config.method == Method::gd, ErrorCode::invalid_argument,
                  "fit_gd: method must be gd");
  detail::check_samples(*basis, points, targets);
  const ElasticaParams& p = config.elastica;

  const RidgeSolver projection(design_matrix(*basis, points), config.eta);
  RbfModel model(basis, projection.solve(targets));

  FitTrace trace;
  double current = energy(model, points, targets, p, config.mode);
  detail::require(std::isfinite(current), ErrorCode::divergence,
                  "fit_gd: non-finite initial energy");
  trace.initial_energy = current;
  double tau = config.tau;

  for (int iter = 1; iter <= config.max_iter; ++iter) {
    const Vector dw = projection.solve(pde_rhs_all(model, points, targets, p, config.mode));
    bool accepted = false;
    bool all_non_finite = true;
    while (!accepted) {
      Vector trial_w = model.weights() + tau * dw;
      double trial = std::numeric_limits<double>::infinity();
      if (trial_w.allFinite()) {
        trial = energy(model.with_weights(trial_w), points, targets, p, config.mode);
      }
      if (std::isfinite(trial)) all_non_finite = false;
      if (std::isfinite(trial) && trial <= current) {
        const double change = detail::relative_change(model.weights(), trial_w);
        model = model.with_weights(std::move(trial_w));
        current = trial;
        trace.energy_per_iter.push_back(current);
        trace.weight_change_per_iter.push_back(change);
        trace.iterations_run = iter;
        accepted = true;
        if (change < config.tol) {
          trace.converged = true;
          trace.status = FitStatus::converged;
        }
      } else {
        if (trace.halvings >= config.max_halvings) {
          if (all_non_finite) {
            trace.final_tau = tau;
            trace.wall_time = clock.elapsed();
            throw DivergenceError(iter, trace);
          }
          trace.status = FitStatus::stalled;
          break;
        }
        tau *= 0.5;
        ++trace.halvings;
      }
    }
    if (trace.converged || trace.status == FitStatus::stalled) break;
  }
  if (trace.iterations_run == 0) {
    // stalled before the first accepted step: w0 is already the best iterate
    trace.energy_per_iter.push_back(current);
    trace.weight_change_per_iter.push_back(0.0);
    trace.iterations_run = 1;
  }
  trace.final_tau = tau;
  trace.wall_time = clock.elapsed();
  return {std::move(model), std::move(trace)};
}

struct LaggedSystem {
  Matrix a;
  Vector rhs;
};

/// Linear system of one lagged iteration, with g (and K for EE) frozen at
/// the current model:
///   A(j, i) = (G_j / (lambda K_j) - f_i(x_j)) phi_i(x_j),  rhs_j = G_j y_j / lambda,
/// where G_j = sqrt(|g(x_j)|^2 + (eps / 2c)^2) and K_j = a + b kappa_j^2 (K = 1
/// for TV). Row j is the collocated PDE u - lambda div(...) = y scaled by
/// G_j / lambda.
inline LaggedSystem assemble_lagle(const Matrix& points, const Vector& targets,
                                   const RbfModel& model, const SolverConfig& config) {
  const RbfBasis& basis = model.basis();
  detail::check_samples(basis, points, targets);
  const ElasticaParams& p = config.elastica;
  detail::require(p.lambda > 0.0, ErrorCode::invalid_argument, "assemble_lagle: lambda must be > 0");
  const double c = basis.width();
  const double floor = g_floor(p.eps_grad, c);
  const double floor_sq = floor * floor;
  const Eigen::Index m = points.rows();
  const Eigen::Index n = static_cast<Eigen::Index>(basis.size());
  const Vector& w = model.weights();

  LaggedSystem sys{Matrix(m, n), Vector(m)};
  Matrix offsets(n, basis.dim());
  Vector sq_dist(n);
  Vector phi(n);
  Vector f(n);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto x = points.row(j).transpose();
    offsets = (-basis.centers()).rowwise() + x.transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
      sq_dist[i] = squared_distance(x, basis.centers().row(i).transpose());
      phi[i] = std::exp(-c * sq_dist[i]);
    }
    const Vector g = offsets.transpose() * w.cwiseProduct(phi);
    const double big_g = std::sqrt(g.squaredNorm() + floor_sq);
    for (Eigen::Index i = 0; i < n; ++i) {
      f[i] = f_term(g, floor_sq, offsets.row(i).transpose(), sq_dist[i], c);
    }
    double k = 1.0;
    if (config.mode == Mode::ee) {
      const double kappa = w.cwiseProduct(phi).dot(f) / big_g;
      k = p.a + p.b * kappa * kappa;
    }
    const double diag = big_g / (p.lambda * k);
    sys.a.row(j) = ((diag - f.array()) * phi.array()).matrix().transpose();
    sys.rhs[j] = big_g * targets[j] / p.lambda;
  }
  return sys;
}

/// Lagged linear-equation iteration: freeze g (and K), assemble, ridge-solve,
/// repeat until the relative weight change drops below tol or max_iter.
inline FitResult fit_lagle(const Matrix& points, const Vector& targets,
                           std::shared_ptr<const RbfBasis> basis, const SolverConfig& config) {
  detail::Stopwatch clock;
  config.validate();
  detail::require(config.method == Method::lagle, ErrorCode::invalid_argument,
                  "fit_lagle: method must be lagle");
  detail::check_samples(*basis, points, targets);
  const ElasticaParams& p = config.elastica;

  RbfModel model(basis, initial_weights(design_matrix(*basis, points), targets, config.eta));
  FitTrace trace;
  trace.initial_energy = energy(model, points, targets, p, config.mode);
  int growth_streak = 0;

  for (int iter = 1; iter <= config.max_iter; ++iter) {
    const LaggedSystem sys = assemble_lagle(points, targets, model, config);
    Vector next = ridge_solve(sys.a, sys.rhs, config.eta);
    const double rhs_norm = sys.rhs.norm();
    const double residual = (sys.a * next - sys.rhs).norm() / (rhs_norm > 0.0 ? rhs_norm : 1.0);
    const double change = detail::relative_change(model.weights(), next);
    model = model.with_weights(std::move(next));
    const double e = energy(model, points, targets, p, config.mode);

    if (!trace.weight_change_per_iter.empty() && change > trace.weight_change_per_iter.back()) {
      ++growth_streak;
    } else {
      growth_streak = 0;
    }
    trace.energy_per_iter.push_back(e);
    trace.weight_change_per_iter.push_back(change);
    trace.residual_per_iter.push_back(residual);
    trace.iterations_run = iter;

    if (!std::isfinite(e)) {
      trace.wall_time = clock.elapsed();
      throw DivergenceError(iter, trace);
    }
    if (change < config.tol) {
      trace.converged = true;
      trace.status = FitStatus::converged;
      break;
    }
    if (growth_streak >= config.oscillation_window) {
      trace.wall_time = clock.elapsed();
      throw NonConvergenceError("lagle: weight change grew for " +
                                    std::to_string(growth_streak) +
                                    " consecutive iterations (last " + std::to_string(change) + ")",
                                trace);
    }
  }
  trace.wall_time = clock.elapsed();
  return {std::move(model), std::move(trace)};
}

inline FitResult fit(const Matrix& points, const Vector& targets,
                     std::shared_ptr<const RbfBasis> basis, const SolverConfig& config) {
  switch (config.method) {
    case Method::direct: return fit_lr(points, targets, std::move(basis), config);
    case Method::gd: return fit_gd(points, targets, std::move(basis), config);
    case Method::lagle: return fit_lagle(points, targets, std::move(basis), config);
  }
  throw Error(ErrorCode::invalid_argument, "fit: unknown method");
}

}  // namespace elastica
