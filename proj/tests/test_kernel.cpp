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


#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "elastica/kernel.hpp"
#include "oracles.hpp"

namespace {

using namespace elastica;

Matrix rows(std::initializer_list<std::initializer_list<double>> init) {
  Matrix m(static_cast<Eigen::Index>(init.size()),
           static_cast<Eigen::Index>(init.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : init) {
    Eigen::Index k = 0;
    for (double v : r) m(i, k++) = v;
    ++i;
  }
  return m;
}

Vector vec(std::initializer_list<double> init) {
  Vector v(static_cast<Eigen::Index>(init.size()));
  Eigen::Index k = 0;
  for (double x : init) v[k++] = x;
  return v;
}

RbfModel model_of(const oracle::Instance& inst) {
  return RbfModel(std::make_shared<const RbfBasis>(Matrix(inst.centers), inst.c), inst.weights);
}

RbfModel single(const Vector& center, double w, double c) {
  Matrix m(1, center.size());
  m.row(0) = center.transpose();
  return RbfModel(std::make_shared<const RbfBasis>(m, c), vec({w}));
}

// exp(-1) by its alternating series in long double.
long double exp_minus_one_series() {
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 40; ++k) {
    term *= -1.0L / k;
    sum += term;
  }
  return sum;
}

TEST(RbfEval, ZeroDistanceIsOne) {
  const Vector x = vec({0.3, -1.2, 4.0});
  EXPECT_EQ(rbf_eval(x, x, 1.0), 1.0);
  EXPECT_EQ(rbf_eval(x, x, 123.0), 1.0);
}

TEST(RbfEval, UnitDistanceMatchesSeries) {
  const double expected = static_cast<double>(exp_minus_one_series());
  EXPECT_NEAR(expected, 0.3678794412, 1e-10);
  EXPECT_NEAR(rbf_eval(vec({1.0, 0.0}), vec({0.0, 0.0}), 1.0), expected, 1e-15);
}

TEST(RbfEval, FarPointUnderflowsWithoutNaN) {
  const double v = rbf_eval(vec({1000.0}), vec({0.0}), 1.0);
  EXPECT_FALSE(std::isnan(v));
  EXPECT_GE(v, 0.0);
  EXPECT_LT(v, 1e-300);
}

TEST(RbfEval, RejectsBadInput) {
  try {
    rbf_eval(vec({1.0, 2.0}), vec({1.0}), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
  EXPECT_THROW(rbf_eval(vec({1.0}), vec({1.0}), 0.0), Error);
  EXPECT_THROW(rbf_eval(vec({1.0}), vec({1.0}), -2.0), Error);
  try {
    rbf_eval(vec({std::numeric_limits<double>::quiet_NaN()}), vec({1.0}), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::non_finite);
  }
}

TEST(RbfBasis, Invariants) {
  EXPECT_THROW(RbfBasis(Matrix(0, 2), 1.0), Error);
  EXPECT_THROW(RbfBasis(rows({{0.0}}), 0.0), Error);
  EXPECT_THROW(RbfBasis(rows({{0.0}}), std::numeric_limits<double>::infinity()), Error);
  EXPECT_THROW(RbfBasis(rows({{std::numeric_limits<double>::quiet_NaN()}}), 1.0), Error);
  const RbfBasis b(rows({{0.0, 1.0}, {2.0, 3.0}}), 0.5);
  EXPECT_EQ(b.size(), 2u);
  EXPECT_EQ(b.dim(), 2u);
  EXPECT_EQ(b.width(), 0.5);
}

TEST(RbfModel, Invariants) {
  auto basis = std::make_shared<const RbfBasis>(rows({{0.0}, {1.0}}), 1.0);
  try {
    RbfModel(basis, vec({1.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
  EXPECT_THROW(RbfModel(basis, vec({1.0, std::numeric_limits<double>::infinity()})), Error);
}

TEST(DesignMatrix, OwnCentersSymmetricUnitDiagonal) {
  const RbfBasis b(rows({{0.1, 0.2}, {0.7, 0.3}, {0.4, 0.9}}), 1.7);
  const Matrix phi = design_matrix(b, b.centers());
  ASSERT_EQ(phi.rows(), 3);
  ASSERT_EQ(phi.cols(), 3);
  for (Eigen::Index i = 0; i < 3; ++i) {
    EXPECT_EQ(phi(i, i), 1.0);
    for (Eigen::Index j = 0; j < 3; ++j) EXPECT_EQ(phi(i, j), phi(j, i));
  }
}

TEST(DesignMatrix, SingleOrigin) {
  const RbfBasis b(rows({{0.0, 0.0}}), 3.0);
  const Matrix phi = design_matrix(b, rows({{0.0, 0.0}}));
  ASSERT_EQ(phi.size(), 1);
  EXPECT_EQ(phi(0, 0), 1.0);
}

TEST(DesignMatrix, TwoCentersAtDistanceR) {
  const double r = 1.3;
  const RbfBasis b(rows({{0.0, 0.0}, {r * 0.6, r * 0.8}}), 1.0);
  const Matrix phi = design_matrix(b, b.centers());
  const double expected = std::exp(-r * r);
  EXPECT_NEAR(phi(0, 1), expected, 1e-14);
  EXPECT_NEAR(phi(1, 0), expected, 1e-14);
}

TEST(DesignMatrix, RejectsDimensionMismatch) {
  const RbfBasis b(rows({{0.0, 0.0}}), 1.0);
  EXPECT_THROW(design_matrix(b, rows({{0.0, 0.0, 0.0}})), Error);
}

TEST(DesignMatrix, RandomPropertiesRangeAndExactSymmetry) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = oracle::random_instance(rng, 25, 1 + trial % 7, 0.5 + trial);
    const RbfBasis b(Matrix(inst.centers), inst.c);
    const Matrix phi = design_matrix(b, b.centers());
    for (Eigen::Index i = 0; i < phi.rows(); ++i) {
      EXPECT_EQ(phi(i, i), 1.0);
      for (Eigen::Index j = 0; j < phi.cols(); ++j) {
        EXPECT_GT(phi(i, j), 0.0);
        EXPECT_LE(phi(i, j), 1.0);
        EXPECT_EQ(phi(i, j), phi(j, i));
      }
    }
  }
}

TEST(EvalU, SimpleCases) {
  auto basis = std::make_shared<const RbfBasis>(rows({{0.0, 0.0}, {1.0, 1.0}}), 1.0);
  EXPECT_EQ(eval_u(RbfModel(basis, Vector::Zero(2)), vec({0.4, 0.2})), 0.0);
  EXPECT_EQ(eval_u(single(vec({0.5, 0.5}), 2.0, 3.0), vec({0.5, 0.5})), 2.0);
  EXPECT_THROW(eval_u(RbfModel(basis, Vector::Zero(2)), vec({0.4})), Error);
}

TEST(EvalU, MatchesNaiveSummation) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = oracle::random_instance(rng, 5, 3, 2.0);
    const Vector x = oracle::random_point(rng, 3);
    const double expected = oracle::u(inst, x);
    EXPECT_NEAR(eval_u(model_of(inst), x), expected, 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST(GradU, VanishesAtCenterAndBySymmetry) {
  EXPECT_EQ(grad_u(single(vec({0.2, 0.4}), 1.5, 2.0), vec({0.2, 0.4})).norm(), 0.0);
  auto basis = std::make_shared<const RbfBasis>(rows({{1.0, 0.0}, {-1.0, 0.0}}), 0.7);
  const RbfModel m(basis, vec({1.0, 1.0}));
  EXPECT_EQ(grad_u(m, vec({0.0, 0.0})).norm(), 0.0);
}

TEST(GVector, ScalarOracle) {
  const RbfModel m = single(vec({0.0, 0.0}), 1.0, 1.0);
  const Vector g = g_vector(m, vec({1.0, 0.0}));
  EXPECT_NEAR(g[0], static_cast<double>(exp_minus_one_series()), 1e-15);
  EXPECT_EQ(g[1], 0.0);
  EXPECT_EQ(g_vector(m, vec({0.0, 0.0})).norm(), 0.0);
}

TEST(GVector, IsScaledNegativeGradient) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = oracle::random_instance(rng, 8, 4, 0.3 + trial * 0.1);
    const RbfModel m = model_of(inst);
    const Vector x = oracle::random_point(rng, 4);
    const Vector g = g_vector(m, x);
    const Vector expected = -grad_u(m, x) / (2.0 * inst.c);
    EXPECT_LE((g - expected).norm(), 1e-12 * std::max(1.0, g.norm()));
  }
}

TEST(GradU, FiniteDifferenceProperty) {
  std::mt19937_64 rng(101);
  int checked = 0;
  for (int d : {1, 2, 5, 10}) {
    for (int trial = 0; trial < 30; ++trial) {
      const auto inst = oracle::random_instance(rng, 12, d, 0.5 + 3.0 * trial / 30.0);
      const Vector x = oracle::random_point(rng, d);
      const auto f = [&](const Vector& p) { return oracle::u(inst, p); };
      const Vector fd = oracle::fd_gradient(f, x, 1e-5);
      const Vector an = grad_u(model_of(inst), x);
      EXPECT_LE((an - fd).norm(), 1e-6 * std::max(1.0, fd.norm())) << "d=" << d;
      ++checked;
    }
  }
  EXPECT_GE(checked, 100);
}

TEST(Laplacian, AtCenter) {
  EXPECT_DOUBLE_EQ(laplacian_u(single(vec({0.0, 0.0, 0.0}), 1.0, 2.0), vec({0.0, 0.0, 0.0})),
                   -12.0);
  auto basis = std::make_shared<const RbfBasis>(rows({{0.0}, {1.0}}), 1.0);
  EXPECT_EQ(laplacian_u(RbfModel(basis, Vector::Zero(2)), vec({0.3})), 0.0);
}

TEST(Hessian, AtCenterIsMinusTwoIdentity) {
  const RbfModel m = single(vec({0.0, 0.0, 0.0}), 1.0, 1.0);
  const Vector x = vec({0.0, 0.0, 0.0});
  const Eigen::MatrixXd h = hessian(m, x);
  EXPECT_LE((h + 2.0 * Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-15);
  const Vector v = vec({1.0, -2.0, 0.5});
  EXPECT_DOUBLE_EQ(hessian_quadform(m, x, v), -2.0 * v.squaredNorm());
  EXPECT_EQ(hessian_quadform(m, x, Vector::Zero(3)), 0.0);
}

TEST(Hessian, FiniteDifferenceAndTraceProperty) {
  std::mt19937_64 rng(202);
  int checked = 0;
  for (int d : {1, 2, 5, 10}) {
    for (int trial = 0; trial < 30; ++trial) {
      const auto inst = oracle::random_instance(rng, 12, d, 0.5 + 3.0 * trial / 30.0);
      const RbfModel m = model_of(inst);
      const Vector x = oracle::random_point(rng, d);
      const auto f = [&](const Vector& p) { return oracle::u(inst, p); };
      const Eigen::MatrixXd fd = oracle::fd_hessian(f, x, 1e-4);
      const Eigen::MatrixXd an = hessian(m, x);
      const double scale = std::max(1.0, fd.norm());
      EXPECT_LE((an - fd).norm(), 1e-4 * scale) << "d=" << d;

      const double lap = laplacian_u(m, x);
      EXPECT_LE(std::abs(an.trace() - lap), 1e-10 * std::max(1.0, std::abs(lap)));
      EXPECT_LE(std::abs(fd.trace() - lap), 1e-4 * std::max(1.0, std::abs(lap)));

      const Vector v = oracle::random_point(rng, d) - Vector::Constant(d, 0.5);
      const Vector hv = hessian_vector(m, x, v);
      EXPECT_LE((hv - an * v).norm(), 1e-12 * std::max(1.0, hv.norm()));
      const double q = hessian_quadform(m, x, v);
      EXPECT_NEAR(q, v.dot(fd * v), 1e-4 * std::max(1.0, std::abs(q)));
      ++checked;
    }
  }
  EXPECT_GE(checked, 100);
}

TEST(Geometry, AgreesWithStandaloneOperators) {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 6;
    const auto inst = oracle::random_instance(rng, 10, d, 1.0 + trial % 4);
    const RbfModel m = model_of(inst);
    const Vector x = oracle::random_point(rng, d);
    const PointGeometry geo = geometry(m, x);
    EXPECT_NEAR(geo.value, eval_u(m, x), 1e-14);
    EXPECT_LE((geo.gradient - grad_u(m, x)).norm(), 1e-13);
    EXPECT_NEAR(geo.laplacian, laplacian_u(m, x), 1e-12);
    EXPECT_LE((geo.hess_grad - hessian(m, x) * geo.gradient).norm(), 1e-11);
  }
}

}  // namespace
