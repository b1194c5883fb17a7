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

#include "mscs/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "mscs/error.hpp"
#include "mscs/parallel.hpp"
#include "mscs/random.hpp"

namespace mscs {
namespace {

constexpr std::uint64_t kFinalDrawTag = 0xF1AA1D4A3ULL;
constexpr std::int64_t kDrawChunk = 8192;

void RequireSubsetSpace(const ModelSpace& space) {
  if (space.kind() != SpaceKind::kAllSubsets) {
    throw Error(ErrorCode::kModelSpaceMismatch,
                "adaptive sampling runs on subset spaces only");
  }
}

// Draws one model: forced ids always, free id j with probability omega_j.
// Consumes exactly one uniform per free id, in id order.
std::vector<int> DrawIds(const ModelSpace& space, const Eigen::VectorXd& omega,
                         std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<int> ids;
  for (int j = 1; j <= space.p(); ++j) {
    if (space.IsForced(j) || rng.Uniform() < omega[j - 1]) ids.push_back(j);
  }
  return ids;
}

// Packed inclusion bits; short enough for the small-string buffer up to
// p = 120, which keeps large hit-rate caches compact.
std::string KeyOf(const std::vector<int>& ids, int p) {
  std::string key(static_cast<std::size_t>((p + 7) / 8), '\0');
  for (int id : ids) key[(id - 1) / 8] |= static_cast<char>(1 << ((id - 1) % 8));
  return key;
}

// Fits every model of `models` not yet in `cache` (once per distinct key),
// stores its p-value, and appends the new records to `fresh` in order of
// first appearance. Returns p-values aligned with `models`.
std::vector<double> EvaluateBatch(const Dataset& data, const FitResult& full_fit,
                                  const std::vector<ModelIndex>& models,
                                  const std::vector<std::string>& keys,
                                  std::unordered_map<std::string, double>& cache,
                                  int workers, const FitOptions& fit,
                                  std::vector<LrtRecord>* fresh) {
  std::vector<std::size_t> todo;
  std::unordered_map<std::string, std::size_t> pending;
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (cache.count(keys[i]) == 0 && pending.emplace(keys[i], i).second) {
      todo.push_back(i);
    }
  }
  std::vector<LrtRecord> records(todo.size());
  ParallelFor(todo.size(), workers, [&](std::size_t k) {
    records[k] = LrtOrReject(data, models[todo[k]], full_fit, fit);
  });
  for (std::size_t k = 0; k < todo.size(); ++k) {
    cache.emplace(keys[todo[k]], records[k].pvalue);
    if (fresh != nullptr) fresh->push_back(std::move(records[k]));
  }
  std::vector<double> pvalues(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) pvalues[i] = cache.at(keys[i]);
  return pvalues;
}

struct DrawOutcome {
  double hit_rate = 0.0;
  std::int64_t distinct = 0;
  std::vector<LrtRecord> members;
};

DrawOutcome DrawAndVerify(const Dataset& data, const ModelSpace& space,
                          const FitResult& full_fit, const Eigen::VectorXd& omega,
                          double alpha_star, std::int64_t draws,
                          std::uint64_t seed, int workers, const FitOptions& fit) {
  DrawOutcome out;
  std::unordered_map<std::string, double> cache;
  std::int64_t hits = 0;
  for (std::int64_t start = 0; start < draws; start += kDrawChunk) {
    const std::int64_t stop = std::min(draws, start + kDrawChunk);
    std::vector<ModelIndex> models;
    std::vector<std::string> keys;
    models.reserve(stop - start);
    keys.reserve(stop - start);
    for (std::int64_t i = start; i < stop; ++i) {
      std::vector<int> ids = DrawIds(space, omega, DeriveSeed(seed, i));
      keys.push_back(KeyOf(ids, space.p()));
      models.push_back(ModelIndex::Subset(std::move(ids)));
    }
    std::vector<LrtRecord> fresh;
    const std::vector<double> pvalues =
        EvaluateBatch(data, full_fit, models, keys, cache, workers, fit, &fresh);
    for (double pv : pvalues) hits += pv >= alpha_star ? 1 : 0;
    for (LrtRecord& r : fresh) {
      if (r.pvalue >= alpha_star) {
        r.survived = true;
        out.members.push_back(std::move(r));
      }
    }
  }
  out.distinct = static_cast<std::int64_t>(cache.size());
  out.hit_rate = draws > 0 ? static_cast<double>(hits) / static_cast<double>(draws) : 0.0;
  std::sort(out.members.begin(), out.members.end(),
            [](const LrtRecord& a, const LrtRecord& b) { return a.model < b.model; });
  return out;
}

}  // namespace

void AsConfig::Validate(int p) const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, what);
  };
  if (batch_size < 1) fail("B must be >= 1");
  if (!(zeta > 0.0 && zeta < 1.0)) fail("zeta must lie in (0, 1)");
  if (!(xi > 0.0 && xi <= 1.0)) fail("xi must lie in (0, 1]");
  if (!(alpha_star > 0.0 && alpha_star < 1.0)) fail("alpha* must lie in (0, 1)");
  if (alpha0 && !(*alpha0 > 0.0 && *alpha0 <= alpha_star)) {
    fail("alpha0 must lie in (0, alpha*]");
  }
  if (stall_d < 0) fail("stall d must be >= 0");
  if (max_iters < 1) fail("max iterations must be >= 1");
  if (fixed_iterations && *fixed_iterations < 1) fail("fixed iterations must be >= 1");
  if (!(clamp_lo > 0.0 && clamp_lo < clamp_hi && clamp_hi < 1.0)) {
    fail("clamp bounds must satisfy 0 < lo < hi < 1");
  }
  if (final_draw < 1) fail("final draw must be >= 1");
  if (!omega0.empty()) {
    if (static_cast<int>(omega0.size()) != p) fail("omega0 must have p entries");
    for (double w : omega0) {
      if (!(w >= 0.0 && w <= 1.0)) fail("omega0 entries must lie in [0, 1]");
    }
  }
}

std::vector<ModelIndex> SampleModels(const ModelSpace& space,
                                     const Eigen::VectorXd& omega, int count,
                                     std::uint64_t seed) {
  RequireSubsetSpace(space);
  if (omega.size() != space.p()) {
    throw Error(ErrorCode::kDimensionMismatch, "omega must have p entries");
  }
  std::vector<ModelIndex> out;
  out.reserve(std::max(count, 0));
  for (int b = 0; b < count; ++b) {
    out.push_back(ModelIndex::Subset(DrawIds(space, omega, DeriveSeed(seed, b))));
  }
  return out;
}

double UpdateAlpha(std::span<const double> pvalues, double zeta,
                   double alpha_star) {
  if (pvalues.empty()) throw Error(ErrorCode::kInvalidArgument, "no p-values");
  std::vector<double> sorted(pvalues.begin(), pvalues.end());
  std::stable_sort(sorted.begin(), sorted.end());
  const auto b = static_cast<long>(sorted.size());
  long rank = static_cast<long>(std::floor((1.0 - zeta) * b + 1e-9));
  rank = std::clamp(rank, 1L, b);
  return std::min(sorted[rank - 1], alpha_star);
}

std::optional<Eigen::VectorXd> UpdateWeights(
    const ModelSpace& space, std::span<const ModelIndex> models,
    std::span<const double> pvalues, double alpha_t,
    const Eigen::VectorXd& omega_prev, double xi, double clamp_lo,
    double clamp_hi) {
  if (models.size() != pvalues.size() || omega_prev.size() != space.p()) {
    throw Error(ErrorCode::kDimensionMismatch, "models, p-values and omega disagree");
  }
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(space.p());
  int survivors = 0;
  for (std::size_t b = 0; b < models.size(); ++b) {
    if (!(pvalues[b] > alpha_t)) continue;
    ++survivors;
    for (int id : models[b].values()) counts[id - 1] += 1.0;
  }
  if (survivors == 0) return std::nullopt;
  const Eigen::VectorXd c = counts / static_cast<double>(survivors);
  Eigen::VectorXd omega = xi * c + (1.0 - xi) * omega_prev;
  for (int j = 0; j < space.p(); ++j) {
    omega[j] = space.IsForced(j + 1) ? clamp_hi : std::clamp(omega[j], clamp_lo, clamp_hi);
  }
  return omega;
}

AsResult RunMscsAs(const Dataset& data, const ModelSpace& space,
                   const AsConfig& config) {
  RequireSubsetSpace(space);
  if (space.p() != data.p() || ModelKindFor(data.family()) != ModelKind::kSubset) {
    throw Error(ErrorCode::kModelSpaceMismatch,
                space.ToString() + " does not match the dataset");
  }
  config.Validate(space.p());

  AsResult result;
  result.full_fit = Fit(data, space.FullModel(), config.fit);
  Eigen::VectorXd omega = Eigen::VectorXd::Constant(space.p(), 0.5);
  if (!config.omega0.empty()) {
    omega = Eigen::Map<const Eigen::VectorXd>(config.omega0.data(), space.p());
  }
  double alpha_prev = config.alpha0.value_or(0.0);
  int stall = 0;
  std::unordered_map<std::string, double> cache;

  for (int t = 1;; ++t) {
    const std::vector<ModelIndex> models = SampleModels(
        space, omega, config.batch_size, DeriveSeed(config.seed, t));
    std::vector<std::string> keys;
    keys.reserve(models.size());
    for (const ModelIndex& m : models) keys.push_back(KeyOf(m.values(), space.p()));
    const std::vector<double> pvalues = EvaluateBatch(
        data, result.full_fit, models, keys, cache, config.workers, config.fit, nullptr);

    // The level sequence is kept nondecreasing.
    const double alpha_t =
        std::max(alpha_prev, UpdateAlpha(pvalues, config.zeta, config.alpha_star));
    const auto survivors = std::count_if(pvalues.begin(), pvalues.end(),
                                         [&](double pv) { return pv > alpha_t; });
    if (auto next = UpdateWeights(space, models, pvalues, alpha_t, omega, config.xi,
                                  config.clamp_lo, config.clamp_hi)) {
      omega = std::move(*next);
    }
    result.trajectory.push_back(
        {t, alpha_t, static_cast<double>(survivors) / models.size(), omega});
    stall = alpha_t == config.alpha_star ? stall + 1 : 0;
    alpha_prev = alpha_t;
    result.iterations = t;

    if (config.fixed_iterations) {
      if (t >= *config.fixed_iterations) {
        result.converged = true;
        break;
      }
    } else if (stall >= config.stall_d + 1) {
      result.converged = true;
      break;
    }
    if (t >= config.max_iters) break;
  }

  result.omega = omega;
  DrawOutcome final_draw = DrawAndVerify(
      data, space, result.full_fit, omega, config.alpha_star, config.final_draw,
      DeriveSeed(config.seed, kFinalDrawTag), config.workers, config.fit);
  result.members = std::move(final_draw.members);
  result.hit_rate = final_draw.hit_rate;
  result.draws = config.final_draw;
  result.distinct_draws = final_draw.distinct;
  return result;
}

double EstimateHitRate(const Dataset& data, const ModelSpace& space,
                       const Eigen::VectorXd& omega, double alpha_star,
                       std::int64_t draws, std::uint64_t seed, int workers,
                       const FitOptions& fit) {
  RequireSubsetSpace(space);
  if (omega.size() != space.p()) {
    throw Error(ErrorCode::kDimensionMismatch, "omega must have p entries");
  }
  if (draws < 1) throw Error(ErrorCode::kInvalidArgument, "draws must be >= 1");
  const FitResult full_fit = Fit(data, space.FullModel(), fit);
  return DrawAndVerify(data, space, full_fit, omega, alpha_star, draws, seed,
                       workers, fit)
      .hit_rate;
}

}  // namespace mscs
