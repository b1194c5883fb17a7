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

#include "mscs/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "mscs/error.hpp"
#include "mscs/parallel.hpp"
#include "mscs/random.hpp"

namespace mscs {
namespace {

constexpr double kLogisticHighDim[] = {2.5, -1.9, 2.8, -2.2, 3.0};
constexpr double kPoissonHighDim[] = {1.25, -0.95, 0.9, -1.1, 0.6};

Eigen::MatrixXd ArCovariance(int p) {
  Eigen::MatrixXd s(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) s(i, j) = std::pow(0.5, std::abs(i - j));
  }
  return s;
}

Eigen::MatrixXd CholeskyFactor(const Eigen::MatrixXd& sigma) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidSpec, "generating covariance is not positive definite");
  }
  return llt.matrixL();
}

Eigen::MatrixXd StandardNormals(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(rows, cols);
  // Row-major fill so a row is one observation's draws.
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) z(i, j) = normal(rng);
  }
  return z;
}

double Sigmoid(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

// Responses of the regression families under the negative-sign links.
Eigen::MatrixXd DrawGlmResponse(Family family, const Eigen::VectorXd& eta,
                                std::mt19937_64& rng) {
  Eigen::MatrixXd y(eta.size(), 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    if (family == Family::kLogistic) {
      y(i, 0) = unif(rng) < Sigmoid(eta[i]) ? 1.0 : 0.0;
    } else {
      std::poisson_distribution<long> pois(std::exp(eta[i]));
      y(i, 0) = static_cast<double>(pois(rng));
    }
  }
  return y;
}

Eigen::MatrixXd UnpackCovariance(const Eigen::VectorXd& packed, int p) {
  Eigen::MatrixXd m(p, p);
  for (int j = 0; j < p; ++j) {
    for (int k = j; k < p; ++k) m(j, k) = m(k, j) = packed[PackedIndex(p, j, k)];
  }
  return m;
}

}  // namespace

void ScenarioSpec::Validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidSpec, what); };
  if (model_id < 1 || model_id > 4) fail("model must be 1, 2, 3 or 4");
  if (n < 1) fail("n must be >= 1");
  if (runs < 1) fail("runs must be >= 1");
  if (alphas.empty()) fail("at least one alpha is required");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) fail("alphas must lie in (0, 1)");
  }
  if (design == Design::kSparseHighDim) {
    if (model_id != 3 && model_id != 4) fail("the sparse high-dimensional design covers models 3 and 4");
    if (p < 5) fail("the sparse high-dimensional design needs p >= 5");
  } else if (p < 2 || p % 2 != 0) {
    fail("settings 1 and 2 need an even p >= 2");
  }
  if (model_id == 2 && psi) fail("model 2 has no signal size");
  if (model_id == 2 && covariates) fail("model 2 has no covariates");
  if (model_id == 1 && covariates) fail("model 1 has no covariates");
}

Family ScenarioSpec::family() const {
  switch (model_id) {
    case 1: return Family::kNormalLocation;
    case 2: return Family::kNormalBlockCov;
    case 3: return Family::kLogistic;
    case 4: return Family::kPoisson;
  }
  throw Error(ErrorCode::kInvalidSpec, "model must be 1, 2, 3 or 4");
}

double ScenarioSpec::ResolvedPsi() const {
  if (psi) return *psi;
  const bool first = design == Design::kSetting1;
  switch (model_id) {
    case 1: return 1.0;
    case 3: return first ? 1.0 : 2.0;
    case 4: return first ? 0.2 : 0.4;
    default: return 1.0;
  }
}

CovariateLaw ScenarioSpec::ResolvedCovariates() const {
  if (covariates) return *covariates;
  return design == Design::kSparseHighDim ? CovariateLaw::kAutoregressive
                                          : CovariateLaw::kIdentity;
}

ModelSpace ScenarioSpec::Space() const {
  return model_id == 2 ? ModelSpace::AllPartitions(p) : ModelSpace::AllSubsets(p);
}

Eigen::VectorXd ScenarioSpec::TrueTheta() const {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  if (model_id == 2) return theta;
  if (design == Design::kSparseHighDim) {
    const double* lead = model_id == 3 ? kLogisticHighDim : kPoissonHighDim;
    for (int j = 0; j < 5; ++j) theta[j] = lead[j];
    return theta;
  }
  const double s = ResolvedPsi();
  for (int j = 1; j <= p / 2; ++j) {
    theta[j - 1] = design == Design::kSetting1 ? s : s / j;
  }
  return theta;
}

Eigen::MatrixXd ScenarioSpec::TrueCovariance() const {
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(p, p);
  const int half = p / 2;
  for (int i = 0; i < half; ++i) {
    for (int j = 0; j < half; ++j) {
      if (i == j) continue;
      sigma(i, j) = design == Design::kSetting1 ? 0.5 : 0.5 / std::abs(i - j);
    }
  }
  return sigma;
}

ModelIndex ScenarioSpec::TrueModel() const {
  if (model_id == 2) {
    std::vector<int> labels(p);
    const int half = p / 2;
    for (int i = 0; i < p; ++i) labels[i] = i < half ? 0 : i - half + 1;
    return ModelIndex::Partition(labels);
  }
  const Eigen::VectorXd theta = TrueTheta();
  std::vector<int> ids;
  for (int j = 0; j < p; ++j) {
    if (theta[j] != 0.0) ids.push_back(j + 1);
  }
  return ModelIndex::Subset(std::move(ids));
}

GeneratedData GenerateDataset(const ScenarioSpec& spec, int run_index) {
  spec.Validate();
  std::mt19937_64 rng = MakeEngine(spec.seed, static_cast<std::uint64_t>(run_index));
  const Family family = spec.family();
  switch (spec.model_id) {
    case 1: {
      Eigen::MatrixXd y = StandardNormals(spec.n, spec.p, rng);
      y.rowwise() += spec.TrueTheta().transpose();
      return {Dataset::Make(family, std::move(y)), spec.TrueModel()};
    }
    case 2: {
      const Eigen::MatrixXd l = CholeskyFactor(spec.TrueCovariance());
      Eigen::MatrixXd y = StandardNormals(spec.n, spec.p, rng) * l.transpose();
      return {Dataset::Make(family, std::move(y)), spec.TrueModel()};
    }
    default: {
      Eigen::MatrixXd x = StandardNormals(spec.n, spec.p, rng);
      if (spec.ResolvedCovariates() == CovariateLaw::kAutoregressive) {
        x = x * CholeskyFactor(ArCovariance(spec.p)).transpose();
      }
      const Eigen::VectorXd eta = -(x * spec.TrueTheta());
      Eigen::MatrixXd y = DrawGlmResponse(family, eta, rng);
      return {Dataset::Make(family, std::move(y), std::move(x)), spec.TrueModel()};
    }
  }
}

Dataset GenerateIsing(const Eigen::VectorXd& theta, int p, int n,
                      std::mt19937_64& rng) {
  const Eigen::VectorXd probs = IsingStateProbabilities(theta, p);
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (Eigen::Index s = 0; s < probs.size(); ++s) {
    acc += probs[s];
    cdf[s] = acc;
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd y(n, p);
  for (int i = 0; i < n; ++i) {
    const double u = unif(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto state = static_cast<std::uint32_t>(
        std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    for (int j = 0; j < p; ++j) y(i, j) = (state >> j) & 1U ? 1.0 : 0.0;
  }
  return Dataset::Make(Family::kIsing, std::move(y));
}

McSummary McCoverage(const ScenarioSpec& spec, int workers) {
  spec.Validate();
  struct RunOutcome {
    bool ok = false;
    std::vector<char> covered;
    std::vector<int> cardinality;
    std::int64_t failures = 0;
    std::string diagnostic;
  };
  const ModelSpace space = spec.Space();
  std::vector<RunOutcome> runs(spec.runs);
  ParallelFor(runs.size(), workers, [&](std::size_t r) {
    RunOutcome& out = runs[r];
    try {
      const GeneratedData gen = GenerateDataset(spec, static_cast<int>(r));
      const Screening screening = ScreenSpace(gen.data, space);
      const auto truth = std::lower_bound(
          screening.records.begin(), screening.records.end(), gen.truth,
          [](const LrtRecord& rec, const ModelIndex& m) { return rec.model < m; });
      for (const LrtRecord& rec : screening.records) {
        if (!rec.note.empty()) ++out.failures;
      }
      for (double alpha : spec.alphas) {
        int card = 0;
        for (const LrtRecord& rec : screening.records) card += rec.pvalue >= alpha ? 1 : 0;
        out.cardinality.push_back(card);
        out.covered.push_back(truth->pvalue >= alpha ? 1 : 0);
      }
      out.ok = true;
    } catch (const Error& e) {
      out.diagnostic = "run " + std::to_string(r) + " discarded: " + e.what();
    }
  });

  McSummary summary;
  summary.spec = spec;
  std::vector<double> covered(spec.alphas.size(), 0.0);
  std::vector<double> card(spec.alphas.size(), 0.0);
  for (const RunOutcome& run : runs) {
    if (!run.ok) {
      ++summary.discarded;
      summary.diagnostics.push_back(run.diagnostic);
      continue;
    }
    ++summary.completed;
    summary.candidate_fit_failures += run.failures;
    for (std::size_t a = 0; a < spec.alphas.size(); ++a) {
      covered[a] += run.covered[a];
      card[a] += run.cardinality[a];
    }
  }
  for (std::size_t a = 0; a < spec.alphas.size(); ++a) {
    McCell cell{spec.alphas[a], 0.0, 0.0};
    if (summary.completed > 0) {
      cell.coverage = covered[a] / summary.completed;
      cell.mean_cardinality = card[a] / summary.completed;
    }
    summary.cells.push_back(cell);
  }
  summary.flagged = summary.discarded >= 0.05 * spec.runs;
  return summary;
}

double IiNullBound(double alpha, double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1/2]");
  }
  return alpha * (1.0 + 2.0 * delta) / (4.0 * delta);
}

IiBoundReport IiNullBoundCheck(const ScenarioSpec& spec, double alpha,
                               double delta, int workers) {
  spec.Validate();
  IiBoundReport report;
  report.alpha = alpha;
  report.delta = delta;
  report.bound = IiNullBound(alpha, delta);

  const ModelSpace space = spec.Space();
  const ModelIndex truth = spec.TrueModel();
  const std::vector<FeatureId> true_features = FeaturesOf(space, truth);
  std::vector<FeatureId> nulls;
  for (const FeatureId& f : AllFeatures(space)) {
    if (std::find(true_features.begin(), true_features.end(), f) == true_features.end()) {
      nulls.push_back(f);
    }
  }

  // Per run: 1 if the null feature's ii exceeds 1/2 + delta, -1 if discarded.
  std::vector<std::vector<int>> exceed(spec.runs);
  ParallelFor(exceed.size(), workers, [&](std::size_t r) {
    try {
      const GeneratedData gen = GenerateDataset(spec, static_cast<int>(r));
      const ImportanceReport ii =
          InclusionImportance(BuildMscs(gen.data, space, alpha));
      for (const FeatureId& f : nulls) {
        exceed[r].push_back(ii.at(f).ii > 0.5 + delta ? 1 : 0);
      }
    } catch (const Error&) {
      exceed[r].assign(1, -1);
    }
  });
  std::vector<double> counts(nulls.size(), 0.0);
  for (const auto& run : exceed) {
    if (!run.empty() && run[0] < 0) continue;
    ++report.completed;
    for (std::size_t k = 0; k < nulls.size(); ++k) counts[k] += run[k];
  }
  for (std::size_t k = 0; k < nulls.size(); ++k) {
    const double rate = report.completed > 0 ? counts[k] / report.completed : 0.0;
    const double se =
        report.completed > 0 ? std::sqrt(rate * (1.0 - rate) / report.completed) : 0.0;
    report.features.push_back({nulls[k], rate, se});
  }
  return report;
}

Dataset ParametricResample(const Dataset& data, const FitResult& full_fit,
                           std::mt19937_64& rng) {
  const int n = data.n();
  const int p = data.p();
  switch (data.family()) {
    case Family::kNormalLocation: {
      Eigen::MatrixXd y = StandardNormals(n, p, rng);
      y.rowwise() += full_fit.theta_hat.transpose();
      return Dataset::Make(data.family(), std::move(y));
    }
    case Family::kNormalBlockCov: {
      const Eigen::MatrixXd l = CholeskyFactor(UnpackCovariance(full_fit.theta_hat, p));
      Eigen::MatrixXd y = StandardNormals(n, p, rng) * l.transpose();
      return Dataset::Make(data.family(), std::move(y));
    }
    case Family::kLogistic:
    case Family::kPoisson: {
      const Eigen::VectorXd eta = -(data.x() * full_fit.theta_hat);
      return Dataset::Make(data.family(), DrawGlmResponse(data.family(), eta, rng), data.x());
    }
    case Family::kIsing:
      return GenerateIsing(full_fit.theta_hat, p, n, rng);
  }
  throw Error(ErrorCode::kUnsupportedFamily, "unknown family");
}

double SampleQuantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::kInvalidArgument, "quantile of no values");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BootstrapReport BootstrapImportance(const Dataset& data, const ModelSpace& space,
                                    double alpha, const BootstrapOptions& options) {
  if (options.replicates < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bootstrap needs >= 1 replicate");
  }
  auto importance_of = [&](const Dataset& d, std::uint64_t seed, int workers) {
    if (options.method == BootstrapMethod::kExhaustive) {
      ScreenOptions so;
      so.workers = workers;
      return InclusionImportance(BuildMscs(d, space, alpha, so));
    }
    AsConfig cfg = options.adaptive;
    cfg.alpha_star = alpha;
    cfg.seed = seed;
    cfg.workers = workers;
    const AsResult as = RunMscsAs(d, space, cfg);
    std::vector<ModelIndex> members;
    for (const LrtRecord& r : as.members) members.push_back(r.model);
    return InclusionImportance(space, members);
  };

  BootstrapReport report;
  report.importance = importance_of(data, options.adaptive.seed, options.workers);
  const FitResult full_fit = Fit(data, space.FullModel());

  std::vector<std::optional<ImportanceReport>> reps(options.replicates);
  ParallelFor(reps.size(), options.workers, [&](std::size_t s) {
    std::mt19937_64 rng = MakeEngine(options.seed, s);
    try {
      const Dataset resampled = ParametricResample(data, full_fit, rng);
      reps[s] = importance_of(resampled, DeriveSeed(options.seed, s, 1), 1);
    } catch (const Error&) {
      reps[s].reset();
    }
  });

  for (std::size_t f = 0; f < report.importance.entries.size(); ++f) {
    std::vector<double> values;
    for (const auto& rep : reps) {
      if (rep) values.push_back(rep->entries[f].ii);
    }
    if (values.empty()) continue;
    std::sort(values.begin(), values.end());
    report.importance.entries[f].ci_lo = SampleQuantile(values, 0.025);
    report.importance.entries[f].ci_hi = SampleQuantile(values, 0.975);
  }
  for (const auto& rep : reps) {
    rep ? ++report.replicates_used : ++report.replicates_failed;
  }
  return report;
}

}  // namespace mscs
