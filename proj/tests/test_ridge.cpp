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


#include <random>

#include <gtest/gtest.h>

#include "elastica/ridge.hpp"
#include "oracles.hpp"

namespace {

using namespace elastica;

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index m, Eigen::Index n) {
  std::normal_distribution<double> z;
  Matrix a(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = z(rng);
  }
  return a;
}

Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> z;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = z(rng);
  return v;
}

TEST(Ridge, IdentitySystem) {
  const Matrix eye = Matrix::Identity(4, 4);
  const Vector y{{1.0, -2.0, 3.5, 0.25}};
  EXPECT_LE((ridge_solve(eye, y, 0.0) - y).norm(), 1e-15);
  EXPECT_LE((ridge_solve(eye, y, 1.0) - y / 2.0).norm(), 1e-15);
}

TEST(Ridge, MatchesConjugateGradientOracle) {
  std::mt19937_64 rng(3);
  for (double eta : {0.0, 1e-3, 1.0}) {
    Matrix a = random_matrix(rng, 20, 20);
    a.diagonal().array() += 8.0;  // well conditioned
    const Vector y = random_vector(rng, 20);
    const Vector w = ridge_solve(a, y, eta);
    const Vector expected = oracle::least_squares_cg(a, y, eta);
    EXPECT_LE((w - expected).norm(), 1e-8 * expected.norm()) << "eta=" << eta;
  }
}

TEST(Ridge, NormalEquationResidualProperty) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index m = 5 + trial;
    const Eigen::Index n = 3 + trial % 17;
    const Matrix a = random_matrix(rng, m, n);
    const Vector y = random_vector(rng, m);
    const double eta = trial % 3 == 0 ? 0.0 : std::pow(10.0, -(trial % 6));
    if (eta == 0.0 && m < n) continue;
    const Vector w = ridge_solve(a, y, eta);
    EXPECT_LE(normal_equation_residual(a, y, eta, w), 1e-8);
  }
}

TEST(Ridge, GaussianKernelMatrixWithSmallEta) {
  // nearly singular symmetric positive matrix, the projection use case
  const Eigen::Index n = 60;
  Matrix phi(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = static_cast<double>(i - j) / static_cast<double>(n);
      phi(i, j) = std::exp(-4.0 * d * d);
    }
  }
  std::mt19937_64 rng(5);
  const Vector y = random_vector(rng, n);
  const Vector w = ridge_solve(phi, y, 1e-3);
  EXPECT_LE(normal_equation_residual(phi, y, 1e-3, w), 1e-8);
}

TEST(Ridge, SingularWithoutEtaIsIllConditioned) {
  Matrix a(3, 3);
  a << 1, 2, 3, 2, 4, 6, 1, 0, 1;
  try {
    ridge_solve(a, Vector::Ones(3), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ill_conditioned);
    EXPECT_NE(std::string(e.what()).find("eta"), std::string::npos);
  }
  EXPECT_NO_THROW(ridge_solve(a, Vector::Ones(3), 1e-6));
}

TEST(Ridge, RejectsBadArguments) {
  EXPECT_THROW(ridge_solve(Matrix::Identity(2, 2), Vector::Ones(3), 1.0), Error);
  EXPECT_THROW(ridge_solve(Matrix::Identity(2, 2), Vector::Ones(2), -1.0), Error);
}

TEST(Ridge, SolverReusableAcrossRightHandSides) {
  std::mt19937_64 rng(6);
  const Matrix a = random_matrix(rng, 12, 8);
  const RidgeSolver solver(a, 0.1);
  for (int k = 0; k < 5; ++k) {
    const Vector y = random_vector(rng, 12);
    EXPECT_EQ(solver.solve(y), ridge_solve(a, y, 0.1));
  }
}

}  // namespace
