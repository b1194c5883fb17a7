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

#include "mscs/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mscs/error.hpp"

namespace mscs {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// Current state of a concave maximization: value, gradient and the negated
// Hessian (positive semidefinite).
struct Derivatives {
  double loglik = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd neg_hessian;
};

struct NewtonOutcome {
  Eigen::VectorXd theta;
  double loglik = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

double SupNorm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// Solves H step = grad for a positive (semi)definite H. Adds a growing ridge
// when the factorization fails, which only happens once the likelihood is
// flat in some direction (e.g. separated logistic data).
Eigen::VectorXd SolveNewtonStep(const Eigen::MatrixXd& h,
                                const Eigen::VectorXd& grad) {
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd step = llt.solve(grad);
    if (step.allFinite()) return step;
  }
  const double scale = std::max(h.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  for (double ridge = 1e-12 * scale; ridge < 1e12 * scale; ridge *= 100.0) {
    Eigen::MatrixXd damped = h;
    damped.diagonal().array() += ridge;
    llt.compute(damped);
    if (llt.info() == Eigen::Success) {
      Eigen::VectorXd step = llt.solve(grad);
      if (step.allFinite()) return step;
    }
  }
  return grad / scale;
}

// True when the Cholesky pivots of `h` show a (numerically) dependent column.
bool LooksRankDeficient(const Eigen::MatrixXd& h) {
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() != Eigen::Success) return true;
  const Eigen::MatrixXd l = llt.matrixL();
  for (Eigen::Index j = 0; j < h.rows(); ++j) {
    const double pivot = l(j, j) * l(j, j);
    if (!(pivot > 1e-10 * h(j, j))) return true;
  }
  return false;
}

// Newton ascent with step halving. `evaluate` returns Derivatives at theta;
// `loglik` returns only the objective (for the line search).
template <typename Evaluate, typename LogLik>
NewtonOutcome NewtonAscent(Eigen::VectorXd theta, Evaluate&& evaluate,
                           LogLik&& loglik, const FitOptions& options,
                           bool check_rank) {
  NewtonOutcome out;
  Derivatives d = evaluate(theta);
  if (check_rank && theta.size() > 0 && LooksRankDeficient(d.neg_hessian)) {
    throw Error(ErrorCode::kRankDeficientDesign,
                "design columns of the model are linearly dependent");
  }
  int iter = 0;
  while (true) {
    out.grad_norm = SupNorm(d.grad);
    if (out.grad_norm <= options.tolerance) {
      out.converged = true;
      break;
    }
    if (iter >= options.max_iterations) break;
    const Eigen::VectorXd step = SolveNewtonStep(d.neg_hessian, d.grad);
    // Rounding noise near the optimum can make an exact ascent test fail.
    const double slack = 1e-13 * std::max(1.0, std::abs(d.loglik));
    double scale = 1.0;
    bool accepted = false;
    Eigen::VectorXd candidate;
    for (int h = 0; h <= options.max_halvings; ++h) {
      candidate = theta + scale * step;
      const double value = loglik(candidate);
      if (std::isfinite(value) && value >= d.loglik - slack) {
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) break;
    theta = std::move(candidate);
    d = evaluate(theta);
    ++iter;
  }
  out.theta = std::move(theta);
  out.loglik = d.loglik;
  out.iterations = iter;
  return out;
}

void CheckModel(const Dataset& data, const ModelIndex& model) {
  const ModelKind want = ModelKindFor(data.family());
  if (model.kind() != want) {
    throw Error(ErrorCode::kModelSpaceMismatch,
                std::string(FamilyName(data.family())) + " needs " +
                    (want == ModelKind::kSubset ? "subset" : "partition") +
                    " models");
  }
  const int p = data.p();
  if (want == ModelKind::kSubset) {
    if (!model.values().empty() && model.values().back() > p) {
      throw Error(ErrorCode::kModelSpaceMismatch,
                  "model '" + model.ToString() + "' has ids beyond p=" +
                      std::to_string(p));
    }
  } else if (static_cast<int>(model.size()) != p ||
             !IsRestrictedGrowth(model.values())) {
    throw Error(ErrorCode::kModelSpaceMismatch,
                "partition '" + model.ToString() + "' does not cover p=" +
                    std::to_string(p) + " items");
  }
}

void CheckThetaSize(const Dataset& data, const Eigen::VectorXd& theta) {
  if (theta.size() != ParameterDimension(data)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "parameter vector has length " + std::to_string(theta.size()) +
                    ", expected " + std::to_string(ParameterDimension(data)));
  }
}

// ----- normal location ------------------------------------------------------

double NormalLocationLogLik(const Dataset& data, const Eigen::VectorXd& theta) {
  const double n = data.n();
  const double p = data.p();
  const double rss = (data.y().rowwise() - theta.transpose()).squaredNorm();
  return -0.5 * n * p * kLog2Pi - 0.5 * rss;
}

Eigen::VectorXd NormalLocationGradient(const Dataset& data,
                                       const Eigen::VectorXd& theta) {
  return (data.y().rowwise() - theta.transpose()).colwise().sum().transpose();
}

FitResult FitNormalLocation(const Dataset& data, const ModelIndex& model) {
  const Eigen::VectorXd means = data.y().colwise().mean().transpose();
  FitResult r;
  r.theta_hat = Eigen::VectorXd::Zero(data.p());
  for (int id : model.values()) r.theta_hat[id - 1] = means[id - 1];
  r.loglik = NormalLocationLogLik(data, r.theta_hat);
  r.p_gamma = static_cast<int>(model.size());
  r.converged = true;
  const Eigen::VectorXd g = NormalLocationGradient(data, r.theta_hat);
  for (int id : model.values()) {
    r.grad_norm = std::max(r.grad_norm, std::abs(g[id - 1]));
  }
  return r;
}

// ----- normal block covariance ----------------------------------------------

Eigen::MatrixXd SampleSecondMoment(const Dataset& data) {
  return (data.y().transpose() * data.y()) / static_cast<double>(data.n());
}

Eigen::MatrixXd UnpackSymmetric(const Eigen::VectorXd& packed, int p) {
  Eigen::MatrixXd m(p, p);
  for (int j = 0; j < p; ++j) {
    for (int k = j; k < p; ++k) {
      m(j, k) = m(k, j) = packed[PackedIndex(p, j, k)];
    }
  }
  return m;
}

double BlockCovLogLik(const Dataset& data, const Eigen::VectorXd& theta) {
  const int p = data.p();
  const Eigen::MatrixXd sigma = UnpackSymmetric(theta, p);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    return -std::numeric_limits<double>::infinity();
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const double logdet = 2.0 * l.diagonal().array().log().sum();
  const double trace = llt.solve(SampleSecondMoment(data)).trace();
  return -0.5 * data.n() * (logdet + trace + p * kLog2Pi);
}

Eigen::VectorXd BlockCovGradient(const Dataset& data,
                                 const Eigen::VectorXd& theta) {
  const int p = data.p();
  const Eigen::MatrixXd sigma = UnpackSymmetric(theta, p);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingularBlock,
                "covariance is not positive definite");
  }
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd m =
      0.5 * data.n() * (inv * SampleSecondMoment(data) * inv - inv);
  Eigen::VectorXd g(p * (p + 1) / 2);
  for (int j = 0; j < p; ++j) {
    for (int k = j; k < p; ++k) {
      g[PackedIndex(p, j, k)] = j == k ? m(j, j) : 2.0 * m(j, k);
    }
  }
  return g;
}

FitResult FitBlockCov(const Dataset& data, const ModelIndex& model) {
  const int p = data.p();
  const int n = data.n();
  const Eigen::MatrixXd s = SampleSecondMoment(data);
  FitResult r;
  r.theta_hat = Eigen::VectorXd::Zero(p * (p + 1) / 2);
  double logdet = 0.0;
  for (const std::vector<int>& block : model.Blocks()) {
    const int size = static_cast<int>(block.size());
    if (n <= size) {
      throw Error(ErrorCode::kSingularBlock,
                  "block of size " + std::to_string(size) + " needs n > " +
                      std::to_string(size) + " observations");
    }
    Eigen::MatrixXd sub(size, size);
    for (int a = 0; a < size; ++a) {
      for (int b = 0; b < size; ++b) sub(a, b) = s(block[a], block[b]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sub);
    if (llt.info() != Eigen::Success || LooksRankDeficient(sub)) {
      throw Error(ErrorCode::kSingularBlock,
                  "sample covariance block is not positive definite");
    }
    const Eigen::MatrixXd l = llt.matrixL();
    logdet += 2.0 * l.diagonal().array().log().sum();
    for (int a = 0; a < size; ++a) {
      for (int b = a; b < size; ++b) {
        const int j = std::min(block[a], block[b]);
        const int k = std::max(block[a], block[b]);
        r.theta_hat[PackedIndex(p, j, k)] = sub(a, b);
      }
    }
  }
  // tr(Sigma^-1 S) = p at the block-diagonal MLE.
  r.loglik = -0.5 * n * (logdet + p * kLog2Pi + p);
  r.p_gamma = FreeParameterCount(Family::kNormalBlockCov, p, model);
  r.converged = true;
  const Eigen::VectorXd g = BlockCovGradient(data, r.theta_hat);
  const auto& labels = model.values();
  for (int j = 0; j < p; ++j) {
    for (int k = j; k < p; ++k) {
      if (labels[j] == labels[k]) {
        r.grad_norm = std::max(r.grad_norm, std::abs(g[PackedIndex(p, j, k)]));
      }
    }
  }
  return r;
}

// ----- logistic and Poisson regression --------------------------------------

double Softplus(double eta) {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta))
                   : std::log1p(std::exp(eta));
}

double Sigmoid(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

// Log-likelihood of the GLM at linear predictor eta = -X theta.
double GlmLogLik(Family family, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& eta, double log_factorial_sum) {
  double ll = 0.0;
  if (family == Family::kLogistic) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      ll += y[i] * eta[i] - Softplus(eta[i]);
    }
    return ll;
  }
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    ll += y[i] * eta[i] - std::exp(eta[i]);
  }
  return ll - log_factorial_sum;
}

double LogFactorialSum(Family family, const Eigen::VectorXd& y) {
  if (family != Family::kPoisson) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) s += std::lgamma(y[i] + 1.0);
  return s;
}

// Mean and working weight at eta for the negative-sign links.
void GlmMoments(Family family, const Eigen::VectorXd& eta, Eigen::VectorXd& mu,
                Eigen::VectorXd& w) {
  mu.resize(eta.size());
  w.resize(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    if (family == Family::kLogistic) {
      mu[i] = Sigmoid(eta[i]);
      w[i] = mu[i] * (1.0 - mu[i]);
    } else {
      mu[i] = std::exp(eta[i]);
      w[i] = mu[i];
    }
  }
}

Eigen::VectorXd GlmGradient(const Dataset& data, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd y = data.y().col(0);
  const Eigen::VectorXd eta = -(data.x() * theta);
  Eigen::VectorXd mu, w;
  GlmMoments(data.family(), eta, mu, w);
  return -(data.x().transpose() * (y - mu));
}

FitResult FitGlm(const Dataset& data, const ModelIndex& model,
                 const FitOptions& options) {
  const Family family = data.family();
  const int n = data.n();
  const int k = static_cast<int>(model.size());
  const Eigen::VectorXd y = data.y().col(0);
  const double lfs = LogFactorialSum(family, y);
  Eigen::MatrixXd xg(n, k);
  for (int c = 0; c < k; ++c) xg.col(c) = data.x().col(model.values()[c] - 1);

  auto loglik = [&](const Eigen::VectorXd& theta) {
    const Eigen::VectorXd eta = -(xg * theta);
    return GlmLogLik(family, y, eta, lfs);
  };
  auto evaluate = [&](const Eigen::VectorXd& theta) {
    Derivatives d;
    const Eigen::VectorXd eta = -(xg * theta);
    Eigen::VectorXd mu, w;
    GlmMoments(family, eta, mu, w);
    d.loglik = GlmLogLik(family, y, eta, lfs);
    d.grad = -(xg.transpose() * (y - mu));
    const Eigen::MatrixXd xw = w.array().sqrt().matrix().asDiagonal() * xg;
    d.neg_hessian = Eigen::MatrixXd::Zero(k, k);
    d.neg_hessian.selfadjointView<Eigen::Lower>().rankUpdate(xw.transpose());
    d.neg_hessian.triangularView<Eigen::StrictlyUpper>() =
        d.neg_hessian.transpose();
    return d;
  };

  const NewtonOutcome out = NewtonAscent(Eigen::VectorXd::Zero(k), evaluate,
                                         loglik, options, /*check_rank=*/true);
  if (!out.converged) {
    throw Error(ErrorCode::kFitDiverged,
                "Newton did not converge for model '" + model.ToString() +
                    "' (gradient " + std::to_string(out.grad_norm) + " after " +
                    std::to_string(out.iterations) + " iterations)");
  }
  FitResult r;
  r.theta_hat = Eigen::VectorXd::Zero(data.p());
  for (int c = 0; c < k; ++c) r.theta_hat[model.values()[c] - 1] = out.theta[c];
  r.loglik = out.loglik;
  r.p_gamma = k;
  r.converged = true;
  r.iterations = out.iterations;
  r.grad_norm = out.grad_norm;
  return r;
}

// ----- Ising ----------------------------------------------------------------

void CheckIsingSize(int p) {
  if (p > kMaxIsingItems) {
    throw Error(ErrorCode::kStateSpaceTooLarge,
                "exact Ising enumeration needs p <= " +
                    std::to_string(kMaxIsingItems) + ", got " + std::to_string(p));
  }
}

std::vector<std::uint32_t> ObservedStates(const Dataset& data) {
  std::vector<std::uint32_t> states(data.n(), 0);
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.p(); ++j) {
      if (data.y()(i, j) != 0.0) states[i] |= std::uint32_t{1} << j;
    }
  }
  return states;
}

// Bit positions set in `state`.
int SetBits(std::uint32_t state, int p, int* out) {
  int count = 0;
  for (int j = 0; j < p; ++j) {
    if ((state >> j) & 1U) out[count++] = j;
  }
  return count;
}

double IsingEnergy(std::uint32_t state, int p, const Eigen::VectorXd& theta) {
  int bits[32];
  const int m = SetBits(state, p, bits);
  double e = 0.0;
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) e += theta[PackedIndex(p, bits[a], bits[b])];
  }
  return e;
}

double LogSumExp(const std::vector<double>& v) {
  const double mx = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

double IsingLogLik(const Dataset& data, const Eigen::VectorXd& theta) {
  const int p = data.p();
  CheckIsingSize(p);
  double ll = 0.0;
  for (std::uint32_t s : ObservedStates(data)) ll += IsingEnergy(s, p, theta);
  return ll + data.n() * IsingPsi(theta, p);
}

Eigen::VectorXd IsingGradient(const Dataset& data, const Eigen::VectorXd& theta) {
  const int p = data.p();
  CheckIsingSize(p);
  const Eigen::VectorXd probs = IsingStateProbabilities(theta, p);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(theta.size());
  int bits[32];
  for (std::uint32_t s : ObservedStates(data)) {
    const int m = SetBits(s, p, bits);
    for (int a = 0; a < m; ++a) {
      for (int b = a; b < m; ++b) g[PackedIndex(p, bits[a], bits[b])] += 1.0;
    }
  }
  for (std::uint32_t s = 0; s < probs.size(); ++s) {
    const int m = SetBits(s, p, bits);
    for (int a = 0; a < m; ++a) {
      for (int b = a; b < m; ++b) {
        g[PackedIndex(p, bits[a], bits[b])] -= data.n() * probs[s];
      }
    }
  }
  return g;
}

FitResult FitIsing(const Dataset& data, const ModelIndex& model,
                   const FitOptions& options) {
  const int p = data.p();
  CheckIsingSize(p);
  const int n = data.n();
  const auto& labels = model.values();

  // Free coordinates: every main effect, plus pairs sharing a block.
  std::vector<int> packed_of_free;
  std::vector<int> free_of_pair(p * p, -1);
  for (int j = 0; j < p; ++j) {
    for (int k = j; k < p; ++k) {
      if (j == k || labels[j] == labels[k]) {
        free_of_pair[j * p + k] = static_cast<int>(packed_of_free.size());
        packed_of_free.push_back(PackedIndex(p, j, k));
      }
    }
  }
  const int dim = static_cast<int>(packed_of_free.size());
  const std::uint32_t num_states = std::uint32_t{1} << p;

  // Active free features of a state: pairs of set bits that are free.
  auto active = [&](std::uint32_t s, int* out) {
    int bits[32];
    const int m = SetBits(s, p, bits);
    int count = 0;
    for (int a = 0; a < m; ++a) {
      for (int b = a; b < m; ++b) {
        const int f = free_of_pair[bits[a] * p + bits[b]];
        if (f >= 0) out[count++] = f;
      }
    }
    return count;
  };

  Eigen::VectorXd observed = Eigen::VectorXd::Zero(dim);
  std::vector<int> scratch(p * (p + 1) / 2 + 1);
  for (std::uint32_t s : ObservedStates(data)) {
    const int m = active(s, scratch.data());
    for (int a = 0; a < m; ++a) observed[scratch[a]] += 1.0;
  }

  std::vector<double> logits(num_states);
  auto fill_logits = [&](const Eigen::VectorXd& theta) {
    for (std::uint32_t s = 0; s < num_states; ++s) {
      const int m = active(s, scratch.data());
      double e = 0.0;
      for (int a = 0; a < m; ++a) e += theta[scratch[a]];
      logits[s] = e;
    }
    return -LogSumExp(logits);
  };
  auto loglik = [&](const Eigen::VectorXd& theta) {
    const double psi = fill_logits(theta);
    return observed.dot(theta) + n * psi;
  };
  auto evaluate = [&](const Eigen::VectorXd& theta) {
    const double psi = fill_logits(theta);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(dim, dim);
    for (std::uint32_t s = 0; s < num_states; ++s) {
      const double prob = std::exp(logits[s] + psi);
      const int m = active(s, scratch.data());
      for (int a = 0; a < m; ++a) {
        mean[scratch[a]] += prob;
        for (int b = 0; b < m; ++b) second(scratch[a], scratch[b]) += prob;
      }
    }
    Derivatives d;
    d.loglik = observed.dot(theta) + n * psi;
    d.grad = observed - n * mean;
    d.neg_hessian = n * (second - mean * mean.transpose());
    return d;
  };

  const NewtonOutcome out = NewtonAscent(Eigen::VectorXd::Zero(dim), evaluate,
                                         loglik, options, /*check_rank=*/false);
  if (!out.converged) {
    throw Error(ErrorCode::kFitDiverged,
                "Ising Newton did not converge for partition '" +
                    model.ToString() + "' (gradient " +
                    std::to_string(out.grad_norm) + ")");
  }
  FitResult r;
  r.theta_hat = Eigen::VectorXd::Zero(p * (p + 1) / 2);
  for (int f = 0; f < dim; ++f) r.theta_hat[packed_of_free[f]] = out.theta[f];
  r.loglik = out.loglik;
  r.p_gamma = dim;
  r.converged = true;
  r.iterations = out.iterations;
  r.grad_norm = out.grad_norm;
  return r;
}

}  // namespace

std::string_view FamilyName(Family family) {
  switch (family) {
    case Family::kNormalLocation: return "normal-location";
    case Family::kNormalBlockCov: return "normal-blockcov";
    case Family::kLogistic: return "logistic";
    case Family::kPoisson: return "poisson";
    case Family::kIsing: return "ising";
  }
  return "unknown";
}

Family ParseFamily(std::string_view name) {
  for (Family f : {Family::kNormalLocation, Family::kNormalBlockCov,
                   Family::kLogistic, Family::kPoisson, Family::kIsing}) {
    if (FamilyName(f) == name) return f;
  }
  throw Error(ErrorCode::kUnsupportedFamily,
              "unknown family '" + std::string(name) + "'");
}

ModelKind ModelKindFor(Family family) {
  return family == Family::kNormalBlockCov || family == Family::kIsing
             ? ModelKind::kPartition
             : ModelKind::kSubset;
}

bool IsRegression(Family family) {
  return family == Family::kLogistic || family == Family::kPoisson;
}

Dataset Dataset::Make(Family family, Eigen::MatrixXd y, Eigen::MatrixXd x) {
  if (y.rows() < 1 || y.cols() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "no observations");
  }
  if (!y.allFinite() || !x.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite entries in data");
  }
  if (IsRegression(family)) {
    if (y.cols() != 1) {
      throw Error(ErrorCode::kDimensionMismatch, "regression response must be a single column");
    }
    if (x.rows() != y.rows() || x.cols() < 1) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "design must have one row per observation and >= 1 column");
    }
  } else if (x.size() != 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(FamilyName(family)) + " takes no covariates");
  }
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      const double v = y(i, j);
      const bool binary = v == 0.0 || v == 1.0;
      if ((family == Family::kLogistic || family == Family::kIsing) && !binary) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(FamilyName(family)) + " responses must be 0 or 1");
      }
      if (family == Family::kPoisson && (v < 0.0 || v != std::floor(v))) {
        throw Error(ErrorCode::kInvalidArgument,
                    "poisson responses must be non-negative integers");
      }
    }
  }
  return Dataset(family, std::move(y), std::move(x));
}

int ParameterDimension(const Dataset& data) {
  const int p = data.p();
  switch (data.family()) {
    case Family::kNormalBlockCov:
    case Family::kIsing:
      return p * (p + 1) / 2;
    default:
      return p;
  }
}

int FreeParameterCount(Family family, int p, const ModelIndex& model) {
  switch (family) {
    case Family::kNormalBlockCov: {
      int count = 0;
      for (int s : model.BlockSizes()) count += s * (s + 1) / 2;
      return count;
    }
    case Family::kIsing: {
      int pairs = 0;
      for (int s : model.BlockSizes()) pairs += s * (s - 1) / 2;
      return p + pairs;
    }
    default:
      return static_cast<int>(model.size());
  }
}

FitResult Fit(const Dataset& data, const ModelIndex& model,
              const FitOptions& options) {
  CheckModel(data, model);
  try {
    switch (data.family()) {
      case Family::kNormalLocation: return FitNormalLocation(data, model);
      case Family::kNormalBlockCov: return FitBlockCov(data, model);
      case Family::kLogistic:
      case Family::kPoisson: return FitGlm(data, model, options);
      case Family::kIsing: return FitIsing(data, model, options);
    }
  } catch (const Error& e) {
    // Numeric failures must say which model failed.
    const std::string tag = "'" + model.ToString() + "'";
    if (e.detail().find(tag) != std::string::npos) throw;
    throw Error(e.code(), "model " + tag + ": " + e.detail());
  }
  throw Error(ErrorCode::kUnsupportedFamily, "unknown family");
}

double LogLikAt(const Dataset& data, const Eigen::VectorXd& theta) {
  CheckThetaSize(data, theta);
  switch (data.family()) {
    case Family::kNormalLocation: return NormalLocationLogLik(data, theta);
    case Family::kNormalBlockCov: return BlockCovLogLik(data, theta);
    case Family::kLogistic:
    case Family::kPoisson: {
      const Eigen::VectorXd y = data.y().col(0);
      return GlmLogLik(data.family(), y, -(data.x() * theta),
                       LogFactorialSum(data.family(), y));
    }
    case Family::kIsing: return IsingLogLik(data, theta);
  }
  throw Error(ErrorCode::kUnsupportedFamily, "unknown family");
}

Eigen::VectorXd LogLikGradient(const Dataset& data,
                               const Eigen::VectorXd& theta) {
  CheckThetaSize(data, theta);
  switch (data.family()) {
    case Family::kNormalLocation: return NormalLocationGradient(data, theta);
    case Family::kNormalBlockCov: return BlockCovGradient(data, theta);
    case Family::kLogistic:
    case Family::kPoisson: return GlmGradient(data, theta);
    case Family::kIsing: return IsingGradient(data, theta);
  }
  throw Error(ErrorCode::kUnsupportedFamily, "unknown family");
}

double IsingPsi(const Eigen::VectorXd& theta, int p) {
  CheckIsingSize(p);
  if (theta.size() != p * (p + 1) / 2) {
    throw Error(ErrorCode::kDimensionMismatch, "Ising theta must have p(p+1)/2 entries");
  }
  std::vector<double> energies(std::size_t{1} << p);
  for (std::uint32_t s = 0; s < energies.size(); ++s) {
    energies[s] = IsingEnergy(s, p, theta);
  }
  return -LogSumExp(energies);
}

Eigen::VectorXd IsingStateProbabilities(const Eigen::VectorXd& theta, int p) {
  CheckIsingSize(p);
  if (theta.size() != p * (p + 1) / 2) {
    throw Error(ErrorCode::kDimensionMismatch, "Ising theta must have p(p+1)/2 entries");
  }
  const std::uint32_t num_states = std::uint32_t{1} << p;
  std::vector<double> energies(num_states);
  for (std::uint32_t s = 0; s < num_states; ++s) {
    energies[s] = IsingEnergy(s, p, theta);
  }
  const double psi = -LogSumExp(energies);
  Eigen::VectorXd probs(num_states);
  for (std::uint32_t s = 0; s < num_states; ++s) {
    probs[s] = std::exp(energies[s] + psi);
  }
  return probs;
}

ModelSpace DefaultSpace(const Dataset& data, std::vector<int> forced) {
  if (ModelKindFor(data.family()) == ModelKind::kPartition) {
    if (!forced.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "forced variables only apply to subset spaces");
    }
    return ModelSpace::AllPartitions(data.p());
  }
  return ModelSpace::AllSubsets(data.p(), std::move(forced));
}

}  // namespace mscs
