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

#include "mscs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mscs/error.hpp"

namespace mscs::stats {
namespace {

constexpr double kTolerance = 1e-15;
constexpr double kTiny = 1e-300;
constexpr int kMaxTerms = 100000;

// Series for P(a, x); converges quickly for x < a + 1.
double GammaPSeries(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < kMaxTerms; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kTolerance) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a, x); used for x >= a + 1.
double GammaQContinuedFraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kTolerance) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double CentralCdf(double x, int df) {
  if (x <= 0.0) return df == 0 ? (x < 0.0 ? 0.0 : 1.0) : 0.0;
  if (df == 0) return 1.0;
  return RegularizedGammaP(0.5 * df, 0.5 * x);
}

double CentralSurvival(double x, int df) {
  if (x < 0.0) return 1.0;
  if (df == 0) return 0.0;
  if (x == 0.0) return 1.0;
  return RegularizedGammaQ(0.5 * df, 0.5 * x);
}

// Sums w_m * f(df + 2m) with Poisson(delta / 2) weights w_m, starting at the
// mode and walking outward until the unvisited Poisson tail is below 1e-14.
template <typename F>
double PoissonMixture(double delta, int df, F&& central) {
  const double lambda = 0.5 * delta;
  const int mode = static_cast<int>(std::floor(lambda));
  const double log_w0 =
      -lambda + mode * std::log(lambda) - std::lgamma(mode + 1.0);
  const double w0 = std::exp(log_w0);
  double sum = w0 * central(df + 2 * mode);
  double mass = w0;

  double w = w0;
  for (int m = mode; m > 0; --m) {
    w *= m / lambda;
    if (w < 1e-300) break;
    sum += w * central(df + 2 * (m - 1));
    mass += w;
    if (w < 1e-17 * mass) break;
  }
  w = w0;
  for (int m = mode + 1; m < mode + kMaxTerms; ++m) {
    if (1.0 - mass < 1e-14) break;
    w *= lambda / m;
    if (w < 1e-300) break;
    sum += w * central(df + 2 * m);
    mass += w;
  }
  return sum;
}

double Chi2Density(double x, int df) {
  if (x <= 0.0) return 0.0;
  const double k = 0.5 * df;
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::log(2.0) -
                  std::lgamma(k));
}

}  // namespace

double RegularizedGammaP(double a, double x) {
  if (a <= 0.0) throw Error(ErrorCode::kInvalidArgument, "gamma shape <= 0");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return GammaPSeries(a, x);
  return 1.0 - GammaQContinuedFraction(a, x);
}

double RegularizedGammaQ(double a, double x) {
  if (a <= 0.0) throw Error(ErrorCode::kInvalidArgument, "gamma shape <= 0");
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - GammaPSeries(a, x);
  return GammaQContinuedFraction(a, x);
}

double Chi2Cdf(double x, const ChiSqSpec& spec) {
  if (spec.df < 0 || spec.noncentrality < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "df and noncentrality must be >= 0");
  }
  if (x < 0.0) return 0.0;
  if (spec.noncentrality == 0.0) return CentralCdf(x, spec.df);
  return std::clamp(PoissonMixture(spec.noncentrality, spec.df,
                                   [x](int k) { return CentralCdf(x, k); }),
                    0.0, 1.0);
}

double Chi2Survival(double x, const ChiSqSpec& spec) {
  if (spec.df < 0 || spec.noncentrality < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "df and noncentrality must be >= 0");
  }
  if (x < 0.0) return 1.0;
  if (spec.noncentrality == 0.0) return CentralSurvival(x, spec.df);
  return std::clamp(PoissonMixture(spec.noncentrality, spec.df,
                                   [x](int k) { return CentralSurvival(x, k); }),
                    0.0, 1.0);
}

double Chi2Quantile(double alpha, int df) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1)");
  }
  if (df < 0) throw Error(ErrorCode::kInvalidArgument, "df must be >= 0");
  if (df == 0) return 0.0;

  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(df));
  while (CentralSurvival(hi, df) > alpha) {
    lo = hi;
    hi *= 2.0;
  }
  // Safeguarded Newton on S(q) - alpha; S is decreasing with S' = -density.
  double q = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = CentralSurvival(q, df) - alpha;
    if (f > 0.0) {
      lo = q;
    } else {
      hi = q;
    }
    const double dens = Chi2Density(q, df);
    double next = dens > 0.0 ? q + f / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - q) <= 1e-15 * std::max(1.0, q) || hi - lo <= 1e-15 * hi) {
      return next;
    }
    q = next;
  }
  return q;
}

double Kn(int s, int p) {
  if (s < 1 || s > p) throw Error(ErrorCode::kInvalidArgument, "Kn needs 1 <= s <= p");
  return s * std::log(static_cast<double>(p) / s);
}

double Noncentrality(const Eigen::VectorXd& theta_star,
                     const Eigen::VectorXd& theta_star_gamma,
                     const Eigen::MatrixXd& fisher) {
  if (theta_star.size() != theta_star_gamma.size() ||
      fisher.rows() != theta_star.size() || fisher.cols() != theta_star.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "noncentrality needs equal-length vectors and a matching square matrix");
  }
  const Eigen::VectorXd diff = theta_star_gamma - theta_star;
  return diff.dot(fisher * diff);
}

}  // namespace mscs::stats
