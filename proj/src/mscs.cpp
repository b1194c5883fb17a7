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

#include "mscs/mscs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mscs/error.hpp"
#include "mscs/parallel.hpp"
#include "mscs/stats.hpp"

namespace mscs {

LrtRecord Lrt(const Dataset& data, const ModelIndex& model,
              const FitResult& full_fit, const FitOptions& options) {
  const FitResult fit = Fit(data, model, options);
  const double gap = full_fit.loglik - fit.loglik;
  if (gap < -kNestingTolerance) {
    throw Error(ErrorCode::kNestingViolation,
                "model '" + model.ToString() + "' exceeds the full-model loglik by " +
                    std::to_string(-gap));
  }
  LrtRecord r;
  r.model = model;
  r.df = full_fit.p_gamma - fit.p_gamma;
  if (r.df < 0) {
    throw Error(ErrorCode::kNestingViolation,
                "model '" + model.ToString() + "' has more parameters than the full model");
  }
  r.lambda = std::max(0.0, 2.0 * gap);
  r.pvalue = r.df == 0 ? 1.0 : stats::Chi2Survival(r.lambda, {r.df, 0.0});
  return r;
}

LrtRecord LrtOrReject(const Dataset& data, const ModelIndex& model,
                      const FitResult& full_fit, const FitOptions& options) {
  try {
    return Lrt(data, model, full_fit, options);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kFitDiverged) throw;
    LrtRecord r;
    r.model = model;
    r.df = full_fit.p_gamma - FreeParameterCount(data.family(), data.p(), model);
    r.lambda = std::numeric_limits<double>::infinity();
    r.pvalue = 0.0;
    r.note = e.what();
    return r;
  }
}

Screening ScreenSpace(const Dataset& data, const ModelSpace& space,
                      const ScreenOptions& options) {
  if (space.p() != data.p() || space.model_kind() != ModelKindFor(data.family())) {
    throw Error(ErrorCode::kModelSpaceMismatch,
                space.ToString() + " does not match " +
                    std::string(FamilyName(data.family())) + " data with p=" +
                    std::to_string(data.p()));
  }
  const FitResult full_fit = Fit(data, space.FullModel(), options.fit);
  std::vector<ModelIndex> models = Enumerate(space, options.enumeration_cap);
  std::sort(models.begin(), models.end());
  std::vector<LrtRecord> records(models.size());
  ParallelFor(models.size(), options.workers, [&](std::size_t i) {
    records[i] = LrtOrReject(data, models[i], full_fit, options.fit);
  });
  return Screening{space, full_fit, std::move(records)};
}

MscsResult ApplyLevel(const Screening& screening, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1)");
  }
  MscsResult out{alpha, screening.space, screening.records, {}, true};
  for (LrtRecord& r : out.records) {
    r.survived = r.pvalue >= alpha;
    if (r.survived) out.survivors.push_back(r.model);
  }
  return out;
}

MscsResult BuildMscs(const Dataset& data, const ModelSpace& space, double alpha,
                     const ScreenOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1)");
  }
  return ApplyLevel(ScreenSpace(data, space, options), alpha);
}

const ImportanceEntry& ImportanceReport::at(const FeatureId& feature) const {
  for (const ImportanceEntry& e : entries) {
    if (e.feature == feature) return e;
  }
  throw Error(ErrorCode::kInvalidArgument, "no feature " + feature.ToString());
}

ImportanceReport InclusionImportance(const ModelSpace& space,
                                     std::span<const ModelIndex> survivors) {
  const std::vector<FeatureId> features = AllFeatures(space);
  std::map<FeatureId, int> counts;
  for (const ModelIndex& m : survivors) {
    for (const FeatureId& f : FeaturesOf(space, m)) ++counts[f];
  }
  ImportanceReport report;
  report.entries.reserve(features.size());
  const double total = static_cast<double>(survivors.size());
  for (const FeatureId& f : features) {
    const auto it = counts.find(f);
    const int c = it == counts.end() ? 0 : it->second;
    report.entries.push_back({f, total > 0 ? c / total : 0.0, {}, {}});
  }
  return report;
}

ImportanceReport InclusionImportance(const MscsResult& mscs) {
  return InclusionImportance(mscs.space, mscs.survivors);
}

DetectabilityResult DetectabilityMargin(Family family,
                                        const Eigen::VectorXd& theta_star,
                                        const Eigen::MatrixXd& fisher_total,
                                        const ModelSpace& space) {
  if (family != Family::kNormalLocation || space.kind() != SpaceKind::kAllSubsets) {
    throw Error(ErrorCode::kUnsupportedFamily,
                "detectability margin needs the normal-location family");
  }
  const int p = space.p();
  if (theta_star.size() != p) {
    throw Error(ErrorCode::kDimensionMismatch, "theta_star must have length p");
  }
  DetectabilityResult best{std::numeric_limits<double>::infinity(), std::nullopt};
  ModelEnumerator stream(space);
  while (auto model = stream.Next()) {
    Eigen::VectorXd projected = Eigen::VectorXd::Zero(p);
    bool misses_true = false;
    for (int j = 0; j < p; ++j) {
      if (model->Contains(j + 1)) {
        projected[j] = theta_star[j];
      } else if (theta_star[j] != 0.0) {
        misses_true = true;
      }
    }
    if (!misses_true) continue;
    const int d = p - static_cast<int>(model->size());
    const double delta = stats::Noncentrality(theta_star, projected, fisher_total);
    const double k = stats::Kn(d, p);
    const double ratio = k > 0.0 ? delta / k : std::numeric_limits<double>::infinity();
    if (!best.argmin || ratio < best.margin) {
      best.margin = ratio;
      best.argmin = *model;
    }
  }
  return best;
}

}  // namespace mscs
