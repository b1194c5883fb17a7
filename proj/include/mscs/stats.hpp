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

#ifndef MSCS_STATS_HPP_
#define MSCS_STATS_HPP_

#include <Eigen/Dense>

namespace mscs::stats {

// Chi-square law with integer degrees of freedom and optional noncentrality.
// df == 0 is the point mass at zero.
struct ChiSqSpec {
  int df = 1;
  double noncentrality = 0.0;
};

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double RegularizedGammaP(double a, double x);
// Upper tail Q(a, x) = 1 - P(a, x), computed without cancellation.
double RegularizedGammaQ(double a, double x);

double Chi2Cdf(double x, const ChiSqSpec& spec);
// Upper tail probability P(X > x); accurate for tiny p-values.
double Chi2Survival(double x, const ChiSqSpec& spec);

// Upper alpha-quantile q of the central chi-square: P(X > q) = alpha.
// Returns 0 for df == 0.
double Chi2Quantile(double alpha, int df);

// K_n(s) = s * log(p / s), 1 <= s <= p.
double Kn(int s, int p);

// (theta_gamma - theta)^T F (theta_gamma - theta). `fisher` is the total
// (n-scaled) information matrix.
double Noncentrality(const Eigen::VectorXd& theta_star,
                     const Eigen::VectorXd& theta_star_gamma,
                     const Eigen::MatrixXd& fisher);

}  // namespace mscs::stats

#endif  // MSCS_STATS_HPP_
