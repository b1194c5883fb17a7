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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "mscs/adaptive.hpp"
#include "mscs/error.hpp"
#include "mscs/mscs.hpp"

using mscs::AsConfig;
using mscs::Dataset;
using mscs::ModelIndex;
using mscs::ModelSpace;

namespace {

// Probability of drawing `m` under independent Bernoulli(omega) inclusion.
double DrawProbability(const ModelSpace& s, const ModelIndex& m, const Eigen::VectorXd& omega) {
  double pr = 1.0;
  for (int id : s.FreeIds()) pr *= m.Contains(id) ? omega[id - 1] : 1.0 - omega[id - 1];
  return pr;
}

Dataset SmallLocation(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd t(8);
  t << 0.5, 0.4, 0.3, 0.25, 0, 0, 0, 0;
  return fixture::NormalLocation(100, t, rng);
}

}  // namespace

TEST_SUITE("adaptive") {

TEST_CASE("degenerate weights") {
  const ModelSpace s = ModelSpace::AllSubsets(6);
  for (const ModelIndex& m : mscs::SampleModels(s, Eigen::VectorXd::Ones(6), 50, 1)) {
    CHECK(m == s.FullModel());
  }
  const ModelSpace forced = ModelSpace::AllSubsets(6, {1});
  for (const ModelIndex& m : mscs::SampleModels(forced, Eigen::VectorXd::Zero(6), 50, 1)) {
    CHECK(m.ToString() == "1");
  }
}

TEST_CASE("inclusion frequencies follow the weights") {
  const int draws = 100000;
  const auto models = mscs::SampleModels(ModelSpace::AllSubsets(10),
                                         Eigen::VectorXd::Constant(10, 0.5), draws, 42);
  std::vector<int> counts(10, 0);
  for (const ModelIndex& m : models)
    for (int id : m.values()) ++counts[id - 1];
  const double tol = 3.0 * std::sqrt(0.25 / draws);
  for (int c : counts) CHECK(std::abs(static_cast<double>(c) / draws - 0.5) < std::max(tol, 0.01) + 1e-12);
}

TEST_CASE("sampling is reproducible and seed-dependent") {
  const ModelSpace s = ModelSpace::AllSubsets(12);
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(12, 0.3);
  CHECK(mscs::SampleModels(s, w, 200, 5) == mscs::SampleModels(s, w, 200, 5));
  CHECK(mscs::SampleModels(s, w, 200, 5) != mscs::SampleModels(s, w, 200, 6));
  // a draw does not depend on how many draws were requested
  const auto short_run = mscs::SampleModels(s, w, 10, 5);
  const auto long_run = mscs::SampleModels(s, w, 200, 5);
  CHECK(std::equal(short_run.begin(), short_run.end(), long_run.begin()));
}

TEST_CASE("level update") {
  std::vector<double> ones(20, 1.0);
  CHECK(mscs::UpdateAlpha(ones, 0.25, 0.05) == 0.05);
  std::vector<double> four{0.9, 0.1, 0.3, 0.2};
  CHECK(mscs::UpdateAlpha(four, 0.25, 0.5) == 0.3);

  std::mt19937_64 rng(77);
  std::vector<double> u(300);
  for (double& v : u) v = std::uniform_real_distribution<double>()(rng);
  CHECK(std::abs(mscs::UpdateAlpha(u, 0.25, 1.0) - 0.75) < 0.05);
}

TEST_CASE("weight update") {
  const ModelSpace s = ModelSpace::AllSubsets(3);
  const std::vector<ModelIndex> models{ModelIndex::Subset({1, 2}), ModelIndex::Subset({1}),
                                       ModelIndex::Subset({3})};
  const std::vector<double> pv{0.5, 0.4, 0.01};
  const Eigen::VectorXd prev = Eigen::VectorXd::Constant(3, 0.5);

  // xi = 1: the survivor inclusion shares, then clamped
  const auto c = mscs::UpdateWeights(s, models, pv, 0.05, prev, 1.0, 1e-9, 1.0 - 1e-9);
  REQUIRE(c.has_value());
  CHECK((*c)[0] == 1.0 - 1e-9);
  CHECK((*c)[1] == 0.5);
  CHECK((*c)[2] == 1e-9);

  // xi = 0.2 with c_1 = 1 and previous weight 1/2
  const auto w = mscs::UpdateWeights(s, models, pv, 0.05, prev, 0.2, 0.01, 0.99);
  REQUIRE(w.has_value());
  CHECK((*w)[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK((*w)[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK((*w)[2] == doctest::Approx(0.4).epsilon(1e-15));

  // nobody above the level
  CHECK_FALSE(mscs::UpdateWeights(s, models, pv, 0.9, prev, 0.2, 0.01, 0.99).has_value());

  // forced variables are pinned at the upper clamp
  const ModelSpace f = ModelSpace::AllSubsets(3, {2});
  const std::vector<ModelIndex> fm{ModelIndex::Subset({2}), ModelIndex::Subset({1, 2})};
  const std::vector<double> fp{0.5, 0.5};
  const auto fw = mscs::UpdateWeights(f, fm, fp, 0.05, prev, 0.2, 0.01, 0.99);
  REQUIRE(fw.has_value());
  CHECK((*fw)[1] == 0.99);
}

TEST_CASE("hit rate at concentrated weights") {
  const Dataset d = SmallLocation(3);
  const ModelSpace s = ModelSpace::AllSubsets(8);
  const Eigen::VectorXd full = Eigen::VectorXd::Ones(8);
  CHECK(mscs::EstimateHitRate(d, s, full, 0.05, 500, 1) == 1.0);
  const Eigen::VectorXd empty = Eigen::VectorXd::Zero(8);
  CHECK(mscs::EstimateHitRate(d, s, empty, 0.05, 500, 1) == 0.0);
}

TEST_CASE("hit rate matches the exact survivor mass") {
  const Dataset d = SmallLocation(4);
  const ModelSpace s = ModelSpace::AllSubsets(8);
  const auto exhaustive = mscs::BuildMscs(d, s, 0.05);
  Eigen::VectorXd w(8);
  w << 0.9, 0.8, 0.7, 0.7, 0.4, 0.3, 0.5, 0.6;
  double mass = 0.0;
  for (const ModelIndex& m : exhaustive.survivors) mass += DrawProbability(s, m, w);
  const int draws = 20000;
  const double est = mscs::EstimateHitRate(d, s, w, 0.05, draws, 9);
  const double se = std::sqrt(mass * (1.0 - mass) / draws);
  CAPTURE(mass);
  CHECK(std::abs(est - mass) <= 3.0 * se);
}

TEST_CASE("sampler trajectory invariants on a small problem") {
  const Dataset d = SmallLocation(5);
  const ModelSpace s = ModelSpace::AllSubsets(8);
  AsConfig cfg;
  cfg.batch_size = 200;
  cfg.final_draw = 4000;
  cfg.seed = 11;
  const mscs::AsResult r = mscs::RunMscsAs(d, s, cfg);
  CHECK(r.converged);
  CHECK(r.draws == 4000);
  REQUIRE_FALSE(r.trajectory.empty());

  double prev = 0.0;
  for (const auto& t : r.trajectory) {
    CHECK(t.alpha_t >= prev);
    CHECK(t.alpha_t <= cfg.alpha_star);
    CHECK((t.omega.array() >= cfg.clamp_lo).all());
    CHECK((t.omega.array() <= cfg.clamp_hi).all());
    prev = t.alpha_t;
  }
  // stall rule: the last d + 1 levels sit at alpha*
  REQUIRE(static_cast<int>(r.trajectory.size()) >= cfg.stall_d + 1);
  for (std::size_t i = r.trajectory.size() - cfg.stall_d - 1; i < r.trajectory.size(); ++i) {
    CHECK(r.trajectory[i].alpha_t == cfg.alpha_star);
  }

  // every member re-verifies, and nothing outside the exhaustive set sneaks in
  const auto exhaustive = mscs::BuildMscs(d, s, cfg.alpha_star);
  const std::set<ModelIndex> truth(exhaustive.survivors.begin(), exhaustive.survivors.end());
  const auto full = mscs::Fit(d, s.FullModel());
  for (const auto& m : r.members) {
    CHECK(truth.count(m.model) == 1);
    const auto again = mscs::Lrt(d, m.model, full);
    CHECK(again.pvalue == m.pvalue);
    CHECK(m.pvalue >= cfg.alpha_star);
  }

  // the members found cover most of the exhaustive set's sampling mass
  double total = 0.0, found = 0.0;
  const std::set<ModelIndex> members = [&] {
    std::set<ModelIndex> out;
    for (const auto& m : r.members) out.insert(m.model);
    return out;
  }();
  for (const ModelIndex& m : truth) {
    const double pr = DrawProbability(s, m, r.omega);
    total += pr;
    if (members.count(m)) found += pr;
  }
  CHECK(found / total >= 0.95);
}

TEST_CASE("fixed seed reproduces the whole run") {
  std::mt19937_64 rng(6);
  Eigen::VectorXd t = Eigen::VectorXd::Zero(12);
  t.head(3) << 1.5, -1.0, 1.2;
  const Dataset d = fixture::Logistic(150, t, rng);
  const ModelSpace s = ModelSpace::AllSubsets(12);
  AsConfig cfg;
  cfg.batch_size = 100;
  cfg.fixed_iterations = 6;
  cfg.final_draw = 500;
  cfg.seed = 3;
  const auto a = mscs::RunMscsAs(d, s, cfg);
  cfg.workers = 3;
  const auto b = mscs::RunMscsAs(d, s, cfg);
  REQUIRE(a.trajectory.size() == b.trajectory.size());
  CHECK(a.trajectory.size() == 6);
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    CHECK(a.trajectory[i].alpha_t == b.trajectory[i].alpha_t);
    CHECK(a.trajectory[i].omega == b.trajectory[i].omega);
  }
  CHECK(a.omega == b.omega);
  CHECK(a.hit_rate == b.hit_rate);
  REQUIRE(a.members.size() == b.members.size());
  for (std::size_t i = 0; i < a.members.size(); ++i) {
    CHECK(a.members[i].model == b.members[i].model);
    CHECK(a.members[i].lambda == b.members[i].lambda);
  }
}

TEST_CASE("non-convergence is reported, not hidden") {
  const Dataset d = SmallLocation(7);
  AsConfig cfg;
  cfg.max_iters = 2;
  cfg.final_draw = 100;
  const auto r = mscs::RunMscsAs(d, ModelSpace::AllSubsets(8), cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
}

TEST_CASE("configuration validation") {
  AsConfig cfg;
  CHECK_NOTHROW(cfg.Validate(5));
  cfg.zeta = 0.0;
  CHECK_THROWS_AS(cfg.Validate(5), mscs::Error);
  cfg = {};
  cfg.clamp_lo = 0.5;
  cfg.clamp_hi = 0.4;
  CHECK_THROWS_AS(cfg.Validate(5), mscs::Error);
  cfg = {};
  cfg.omega0 = {0.5, 0.5};
  CHECK_THROWS_AS(cfg.Validate(5), mscs::Error);
  cfg = {};
  cfg.alpha0 = 0.2;
  CHECK_THROWS_AS(cfg.Validate(5), mscs::Error);
  CHECK_THROWS_AS(mscs::RunMscsAs(SmallLocation(1), ModelSpace::AllPartitions(3), AsConfig{}),
                  mscs::Error);
}

}  // TEST_SUITE
