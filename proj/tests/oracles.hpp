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

// Independent reference computations for the unit tests. Nothing here calls
// the closed-form derivative code in elastica/kernel.hpp: values come from
// naive loops over the kernel definition and from finite differences.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Instance {
  Mat centers;  // n x d
  Vec weights;
  double c = 1.0;
};

/// u(x) = sum_i w_i exp(-c |x - x_i|^2), one term at a time in long double.
inline double u(const Instance& m, const Vec& x) {
  long double acc = 0.0L;
  for (Eigen::Index i = 0; i < m.centers.rows(); ++i) {
    long double r2 = 0.0L;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const long double diff = static_cast<long double>(x[k]) - m.centers(i, k);
      r2 += diff * diff;
    }
    acc += static_cast<long double>(m.weights[i]) * std::exp(-static_cast<long double>(m.c) * r2);
  }
  return static_cast<double>(acc);
}

using Field = std::function<double(const Vec&)>;

inline Vec fd_gradient(const Field& f, const Vec& x, double h) {
  Vec g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    g[k] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// Central second differences; off-diagonals from the four-point stencil.
inline Mat fd_hessian(const Field& f, const Vec& x, double h) {
  const Eigen::Index d = x.size();
  Mat hm(d, d);
  const double f0 = f(x);
  for (Eigen::Index a = 0; a < d; ++a) {
    Vec xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    hm(a, a) = (f(xp) - 2.0 * f0 + f(xm)) / (h * h);
    for (Eigen::Index b = a + 1; b < d; ++b) {
      Vec pp = x, pm = x, mp = x, mm = x;
      pp[a] += h; pp[b] += h;
      pm[a] += h; pm[b] -= h;
      mp[a] -= h; mp[b] += h;
      mm[a] -= h; mm[b] -= h;
      hm(a, b) = hm(b, a) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
    }
  }
  return hm;
}

/// div(grad u / |grad u|) by central differences of the unit normal field,
/// whose components are themselves finite-difference gradients.
inline double fd_curvature(const Field& f, const Vec& x, double h_outer, double h_inner) {
  double div = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    auto normal_k = [&](const Vec& p) {
      const Vec g = fd_gradient(f, p, h_inner);
      return g[k] / g.norm();
    };
    Vec xp = x, xm = x;
    xp[k] += h_outer;
    xm[k] -= h_outer;
    div += (normal_k(xp) - normal_k(xm)) / (2.0 * h_outer);
  }
  return div;
}

/// Conjugate gradients on the normal equations of |A w - y|^2 + eta |w|^2,
/// restarted from the true residual every n steps.
inline Vec least_squares_cg(const Mat& a, const Vec& y, double eta, int max_iter = 200000) {
  const Mat n = a.transpose() * a + eta * Mat::Identity(a.cols(), a.cols());
  const Vec b = a.transpose() * y;
  Vec w = Vec::Zero(a.cols());
  Vec r = b - n * w;
  Vec p = r;
  // conjugate directions on the normal equations: exact in n steps, a few
  // extra sweeps mop up rounding
  for (int it = 0; it < max_iter && r.norm() > 1e-15 * b.norm(); ++it) {
    const Vec np = n * p;
    const double alpha = r.squaredNorm() / p.dot(np);
    w += alpha * p;
    const Vec r_next = r - alpha * np;
    const double beta = r_next.squaredNorm() / r.squaredNorm();
    r = r_next;
    p = r + beta * p;
    if (it % a.cols() == a.cols() - 1) {
      r = b - n * w;
      p = r;
    }
  }
  return w;
}

inline Instance random_instance(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d, double c) {
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  Instance m;
  m.centers.resize(n, d);
  m.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) m.centers(i, k) = coord(rng);
    m.weights[i] = weight(rng);
  }
  m.c = c;
  return m;
}

inline Vec random_point(std::mt19937_64& rng, Eigen::Index d) {
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  Vec x(d);
  for (Eigen::Index k = 0; k < d; ++k) x[k] = coord(rng);
  return x;
}

}  // namespace oracle
