// Copyright 2026 The MSCS Authors
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

// Small random datasets shared by the unit tests.

#ifndef MSCS_TESTS_FIXTURES_HPP_
#define MSCS_TESTS_FIXTURES_HPP_

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "mscs/likelihood.hpp"
#include "mscs/simulate.hpp"

namespace fixture {

inline Eigen::MatrixXd Normals(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = z(rng);
  return m;
}

inline mscs::Dataset NormalLocation(int n, const Eigen::VectorXd& theta, std::mt19937_64& rng) {
  Eigen::MatrixXd y = Normals(n, static_cast<int>(theta.size()), rng);
  y.rowwise() += theta.transpose();
  return mscs::Dataset::Make(mscs::Family::kNormalLocation, y);
}

// Correlated Gaussian vectors: y = z L^T with a fixed lower-triangular L.
inline mscs::Dataset BlockCov(int n, int p, std::mt19937_64& rng) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(p, p);
  for (int j = 1; j < p; ++j) l(j, j - 1) = 0.6;
  return mscs::Dataset::Make(mscs::Family::kNormalBlockCov, Normals(n, p, rng) * l.transpose());
}

inline mscs::Dataset Logistic(int n, const Eigen::VectorXd& theta, std::mt19937_64& rng) {
  const Eigen::MatrixXd x = Normals(n, static_cast<int>(theta.size()), rng);
  Eigen::MatrixXd y(n, 1);
  for (int i = 0; i < n; ++i) {
    const double pi = 1.0 / (1.0 + std::exp(x.row(i).dot(theta)));
    y(i, 0) = std::uniform_real_distribution<double>()(rng) < pi ? 1.0 : 0.0;
  }
  return mscs::Dataset::Make(mscs::Family::kLogistic, y, x);
}

inline mscs::Dataset Poisson(int n, const Eigen::VectorXd& theta, std::mt19937_64& rng) {
  const Eigen::MatrixXd x = 0.5 * Normals(n, static_cast<int>(theta.size()), rng);
  Eigen::MatrixXd y(n, 1);
  for (int i = 0; i < n; ++i) {
    y(i, 0) = std::poisson_distribution<int>(std::exp(-x.row(i).dot(theta)))(rng);
  }
  return mscs::Dataset::Make(mscs::Family::kPoisson, y, x);
}

inline mscs::Dataset Ising(int n, int p, std::mt19937_64& rng) {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p * (p + 1) / 2);
  std::normal_distribution<double> z(0.0, 0.5);
  for (int j = 0; j < p; ++j)
    for (int k = j; k < p; ++k) theta[mscs::PackedIndex(p, j, k)] = z(rng);
  return mscs::GenerateIsing(theta, p, n, rng);
}

}  // namespace fixture

#endif  // MSCS_TESTS_FIXTURES_HPP_
