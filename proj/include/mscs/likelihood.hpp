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

#ifndef MSCS_LIKELIHOOD_HPP_
#define MSCS_LIKELIHOOD_HPP_

#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "mscs/model_space.hpp"

namespace mscs {

enum class Family {
  kNormalLocation,  // Y ~ N_p(theta, I)
  kNormalBlockCov,  // Y ~ N_p(0, Sigma), Sigma block-diagonal by partition
  kLogistic,        // logit(pi) = -x^T theta
  kPoisson,         // log(lambda) = -x^T theta
  kIsing,           // binary vectors, pairwise interactions by partition
};

std::string_view FamilyName(Family family);
// Accepts the names produced by FamilyName ("normal-location", ...).
Family ParseFamily(std::string_view name);

// Subset families take ModelKind::kSubset models, the rest take partitions.
ModelKind ModelKindFor(Family family);
bool IsRegression(Family family);

// Observations plus their family. For NormalLocation, NormalBlockCov and
// Ising, `y` is n x p and `x` is empty; for Logistic and Poisson, `y` is
// n x 1 and `x` is the n x p design.
class Dataset {
 public:
  // Validates shape, finiteness and the response support of the family.
  static Dataset Make(Family family, Eigen::MatrixXd y,
                      Eigen::MatrixXd x = Eigen::MatrixXd());

  Family family() const noexcept { return family_; }
  const Eigen::MatrixXd& y() const noexcept { return y_; }
  const Eigen::MatrixXd& x() const noexcept { return x_; }
  int n() const noexcept { return static_cast<int>(y_.rows()); }
  // Number of variables indexed by model spaces over this dataset.
  int p() const noexcept {
    return static_cast<int>(IsRegression(family_) ? x_.cols() : y_.cols());
  }

 private:
  Dataset(Family family, Eigen::MatrixXd y, Eigen::MatrixXd x)
      : family_(family), y_(std::move(y)), x_(std::move(x)) {}

  Family family_;
  Eigen::MatrixXd y_;
  Eigen::MatrixXd x_;
};

struct FitOptions {
  double tolerance = 1e-8;  // gradient sup-norm over free parameters
  int max_iterations = 100;
  int max_halvings = 30;
};

struct FitResult {
  // Native parameterization of the family, zero outside the model:
  // NormalLocation/Logistic/Poisson a p-vector; NormalBlockCov the packed
  // upper triangle of Sigma; Ising the packed upper triangle of theta_{j,k}.
  Eigen::VectorXd theta_hat;
  double loglik = 0.0;  // nats
  int p_gamma = 0;      // free parameters of the model
  bool converged = false;
  int iterations = 0;
  double grad_norm = 0.0;
};

// Length of the native parameter vector for `data`.
int ParameterDimension(const Dataset& data);
int FreeParameterCount(Family family, int p, const ModelIndex& model);

// Packed position of (j, k), 0 <= j <= k < p, in row-major upper-triangle
// order (0,0), (0,1), ..., (0,p-1), (1,1), ...
inline int PackedIndex(int p, int j, int k) {
  return j * p - j * (j - 1) / 2 + (k - j);
}

// Maximum-likelihood fit restricted to `model`. Throws kFitDiverged,
// kSingularBlock, kRankDeficientDesign, kStateSpaceTooLarge or
// kModelSpaceMismatch.
FitResult Fit(const Dataset& data, const ModelIndex& model,
              const FitOptions& options = {});

// Exact log-likelihood at a native parameter vector.
double LogLikAt(const Dataset& data, const Eigen::VectorXd& theta);
// Analytic gradient of LogLikAt with respect to every native coordinate.
// For NormalBlockCov an off-diagonal coordinate moves both Sigma_{jk} and
// Sigma_{kj}.
Eigen::VectorXd LogLikGradient(const Dataset& data,
                               const Eigen::VectorXd& theta);

inline constexpr int kMaxIsingItems = 20;

// Ising normalizer psi(theta) = -log sum_y exp(sum_{j<=k} theta_jk y_j y_k),
// so that P(y) = exp(energy(y) + psi). State s encodes y_j = bit j of s.
double IsingPsi(const Eigen::VectorXd& theta, int p);
Eigen::VectorXd IsingStateProbabilities(const Eigen::VectorXd& theta, int p);

// Default model space for a dataset: all subsets (with `forced`) for subset
// families, all partitions otherwise.
ModelSpace DefaultSpace(const Dataset& data, std::vector<int> forced = {});

}  // namespace mscs

#endif  // MSCS_LIKELIHOOD_HPP_
