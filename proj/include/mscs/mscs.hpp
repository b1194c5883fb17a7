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

#ifndef MSCS_MSCS_HPP_
#define MSCS_MSCS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mscs/likelihood.hpp"
#include "mscs/model_space.hpp"

namespace mscs {

// One likelihood-ratio screening of a candidate against the full model.
struct LrtRecord {
  ModelIndex model;
  double lambda = 0.0;  // 2 * (loglik_full - loglik_model), clamped at 0
  int df = 0;           // p_full - p_model
  double pvalue = 1.0;  // upper chi-square tail at lambda
  bool survived = false;
  std::string note;     // set when the candidate fit failed
};

// Gap allowed between a candidate and the full model before it is treated
// as a solver failure rather than rounding.
inline constexpr double kNestingTolerance = 1e-6;

// LRT of `model` against a converged fit of the full model on the same data.
// The survival flag is left false; see ApplyLevel. Throws
// kNestingViolation if the candidate beats the full model by more than
// kNestingTolerance, and propagates fit errors.
LrtRecord Lrt(const Dataset& data, const ModelIndex& model,
              const FitResult& full_fit, const FitOptions& options = {});

// Same as Lrt but a kFitDiverged candidate becomes a rejected record
// (pvalue 0, lambda +inf) carrying the failure message.
LrtRecord LrtOrReject(const Dataset& data, const ModelIndex& model,
                      const FitResult& full_fit, const FitOptions& options = {});

struct ScreenOptions {
  int workers = 1;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  FitOptions fit;
};

// Level-free output of an exhaustive screening: every model's LRT record,
// sorted by canonical model order. One screening serves any number of alphas.
struct Screening {
  ModelSpace space;
  FitResult full_fit;
  std::vector<LrtRecord> records;
};

Screening ScreenSpace(const Dataset& data, const ModelSpace& space,
                      const ScreenOptions& options = {});

struct MscsResult {
  double alpha = 0.05;
  ModelSpace space;
  std::vector<LrtRecord> records;
  std::vector<ModelIndex> survivors;
  bool exhaustive = true;
};

// Flags survivors (pvalue >= alpha) of a screening.
MscsResult ApplyLevel(const Screening& screening, double alpha);

MscsResult BuildMscs(const Dataset& data, const ModelSpace& space, double alpha,
                     const ScreenOptions& options = {});

struct ImportanceEntry {
  FeatureId feature;
  double ii = 0.0;
  std::optional<double> ci_lo;
  std::optional<double> ci_hi;
};

struct ImportanceReport {
  std::vector<ImportanceEntry> entries;  // one per feature of the full model

  const ImportanceEntry& at(const FeatureId& feature) const;
};

// Share of survivors containing each feature of the space.
ImportanceReport InclusionImportance(const ModelSpace& space,
                                     std::span<const ModelIndex> survivors);
ImportanceReport InclusionImportance(const MscsResult& mscs);

struct DetectabilityResult {
  // min over models missing a true variable of delta / K_n(d); +inf when no
  // such model exists.
  double margin = 0.0;
  std::optional<ModelIndex> argmin;
};

// Minimum signal-to-multiplicity ratio over misspecified models, given the
// true parameter and the total Fisher information. Only NormalLocation has a
// closed-form KL projection (coordinate truncation); other families throw
// kUnsupportedFamily.
DetectabilityResult DetectabilityMargin(Family family,
                                        const Eigen::VectorXd& theta_star,
                                        const Eigen::MatrixXd& fisher_total,
                                        const ModelSpace& space);

}  // namespace mscs

#endif  // MSCS_MSCS_HPP_
