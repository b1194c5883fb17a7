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

#ifndef MSCS_ADAPTIVE_HPP_
#define MSCS_ADAPTIVE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mscs/likelihood.hpp"
#include "mscs/model_space.hpp"
#include "mscs/mscs.hpp"

namespace mscs {

// Tuning of the adaptive cross-entropy sampler over subset spaces.
struct AsConfig {
  int batch_size = 300;       // models sampled per iteration (B)
  double zeta = 0.25;         // target survivor share per iteration
  double xi = 0.2;            // smoothing weight of the new estimate
  double alpha_star = 0.05;   // target level
  std::optional<double> alpha0;  // floor for the level sequence
  int stall_d = 10;           // stop once alpha_t == alpha_star for d+1 iterations
  int max_iters = 200;
  std::optional<int> fixed_iterations;  // stop after exactly this many
  std::vector<double> omega0;  // empty: 0.5 everywhere
  double clamp_lo = 0.01;
  double clamp_hi = 0.99;
  std::int64_t final_draw = 1'000'000;
  std::uint64_t seed = 1;
  int workers = 1;
  FitOptions fit;

  // Throws kInvalidArgument on out-of-range settings.
  void Validate(int p) const;
};

struct TrajectoryPoint {
  int iteration = 0;
  double alpha_t = 0.0;
  double survivor_fraction = 0.0;
  Eigen::VectorXd omega;
};

struct AsResult {
  Eigen::VectorXd omega;            // weights after the last iteration
  std::vector<LrtRecord> members;   // LRT-verified distinct survivors
  double hit_rate = 0.0;            // share of final draws with pvalue >= alpha*
  std::int64_t draws = 0;
  std::int64_t distinct_draws = 0;
  int iterations = 0;
  bool converged = false;           // false when max_iters was hit first
  std::vector<TrajectoryPoint> trajectory;
  FitResult full_fit;
};

// Independent Bernoulli(omega_j) inclusion for each free id; forced ids are
// always included. Draw b uses its own stream DeriveSeed(seed, b).
std::vector<ModelIndex> SampleModels(const ModelSpace& space,
                                     const Eigen::VectorXd& omega, int count,
                                     std::uint64_t seed);

// min(p-value at 1-based rank floor((1 - zeta) B) of the ascending sort,
// alpha_star).
double UpdateAlpha(std::span<const double> pvalues, double zeta,
                   double alpha_star);

// Smoothed share of survivors (pvalue > alpha_t) containing each variable,
// clamped to [lo, hi], forced ids pinned to hi. Returns nullopt when no
// sampled model survives; callers keep the previous weights.
std::optional<Eigen::VectorXd> UpdateWeights(
    const ModelSpace& space, std::span<const ModelIndex> models,
    std::span<const double> pvalues, double alpha_t,
    const Eigen::VectorXd& omega_prev, double xi, double clamp_lo,
    double clamp_hi);

AsResult RunMscsAs(const Dataset& data, const ModelSpace& space,
                   const AsConfig& config);

// Share of `draws` sampled models that pass the LRT at alpha_star. Repeated
// draws count with multiplicity; each distinct model is fitted once.
double EstimateHitRate(const Dataset& data, const ModelSpace& space,
                       const Eigen::VectorXd& omega, double alpha_star,
                       std::int64_t draws, std::uint64_t seed, int workers = 1,
                       const FitOptions& fit = {});

}  // namespace mscs

#endif  // MSCS_ADAPTIVE_HPP_
