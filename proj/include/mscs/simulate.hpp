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

#ifndef MSCS_SIMULATE_HPP_
#define MSCS_SIMULATE_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mscs/adaptive.hpp"
#include "mscs/likelihood.hpp"
#include "mscs/model_space.hpp"
#include "mscs/mscs.hpp"

namespace mscs {

// Covariate law for the regression models (3 and 4).
enum class CovariateLaw {
  kIdentity,        // N_p(0, I)
  kAutoregressive,  // N_p(0, Sigma), Sigma_ij = 0.5^|i-j|
};

enum class Design {
  kSetting1,        // constant signal psi on the first p/2 coordinates
  kSetting2,        // decreasing signal psi / j on the first p/2 coordinates
  kSparseHighDim,   // five fixed leading coefficients, rest zero (models 3, 4)
};

// A Monte Carlo scenario. Defaults reproduce the constant-signal normal
// location design at n = 100, p = 8.
struct ScenarioSpec {
  int model_id = 1;  // 1 normal location, 2 block covariance, 3 logistic, 4 Poisson
  Design design = Design::kSetting1;
  int n = 100;
  int p = 8;
  std::optional<double> psi;  // signal size; defaults per model and design
  std::optional<CovariateLaw> covariates;  // defaults per design
  std::uint64_t seed = 1;
  int runs = 500;
  std::vector<double> alphas{0.10, 0.05, 0.01};

  // Throws kInvalidSpec.
  void Validate() const;

  Family family() const;
  double ResolvedPsi() const;
  CovariateLaw ResolvedCovariates() const;
  ModelSpace Space() const;
  // Model 2: the generating covariance; otherwise theta*.
  Eigen::VectorXd TrueTheta() const;
  Eigen::MatrixXd TrueCovariance() const;
  ModelIndex TrueModel() const;
};

struct GeneratedData {
  Dataset data;
  ModelIndex truth;
};

// Draws run `run_index` of a scenario from stream DeriveSeed(seed, run_index).
// Covariates of the regression models are redrawn on every run.
GeneratedData GenerateDataset(const ScenarioSpec& spec, int run_index);

// Exact sampling of n binary vectors from the Ising law with packed
// parameter `theta` (p(p+1)/2 entries), by inverse CDF over all 2^p states.
Dataset GenerateIsing(const Eigen::VectorXd& theta, int p, int n,
                      std::mt19937_64& rng);

struct McCell {
  double alpha = 0.0;
  double coverage = 0.0;          // share of completed runs with truth in the set
  double mean_cardinality = 0.0;
};

struct McSummary {
  ScenarioSpec spec;
  std::vector<McCell> cells;  // one per spec.alphas entry
  int completed = 0;
  int discarded = 0;          // runs whose full-model fit failed
  std::int64_t candidate_fit_failures = 0;
  bool flagged = false;       // discarded share >= 5%
  std::vector<std::string> diagnostics;
};

McSummary McCoverage(const ScenarioSpec& spec, int workers = 1);

struct NullFeatureCheck {
  FeatureId feature;
  double exceed_rate = 0.0;  // MC estimate of P(II > 1/2 + delta)
  double mc_se = 0.0;        // binomial standard error of exceed_rate
};

struct IiBoundReport {
  double alpha = 0.05;
  double delta = 1.0 / 6.0;
  double bound = 0.0;        // alpha (1 + 2 delta) / (4 delta)
  int completed = 0;
  std::vector<NullFeatureCheck> features;
};

// alpha (1 + 2 delta) / (4 delta); delta in (0, 1/2].
double IiNullBound(double alpha, double delta);

IiBoundReport IiNullBoundCheck(const ScenarioSpec& spec, double alpha,
                               double delta, int workers = 1);

enum class BootstrapMethod { kExhaustive, kAdaptive };

struct BootstrapOptions {
  int replicates = 50;
  BootstrapMethod method = BootstrapMethod::kExhaustive;
  std::uint64_t seed = 1;
  int workers = 1;
  AsConfig adaptive;  // used when method == kAdaptive
};

struct BootstrapReport {
  ImportanceReport importance;  // ii from the data, CIs from replicates
  int replicates_used = 0;
  int replicates_failed = 0;
};

// Draws a dataset of the same shape from the fitted full model (covariates
// held fixed for the regression families).
Dataset ParametricResample(const Dataset& data, const FitResult& full_fit,
                           std::mt19937_64& rng);

// Percentile (2.5%, 97.5%) intervals of inclusion importance under the
// parametric bootstrap from the fitted full model.
BootstrapReport BootstrapImportance(const Dataset& data, const ModelSpace& space,
                                    double alpha, const BootstrapOptions& options);

// Linear-interpolation sample quantile of sorted values, q in [0, 1].
double SampleQuantile(const std::vector<double>& sorted, double q);

}  // namespace mscs

#endif  // MSCS_SIMULATE_HPP_
