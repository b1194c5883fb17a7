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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Tolerances are fixed here on purpose.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mscs/adaptive.hpp"
#include "mscs/mscs.hpp"
#include "mscs/parallel.hpp"
#include "mscs/simulate.hpp"
#include "mscs/stats.hpp"
#include "oracles.hpp"

namespace {

constexpr std::uint64_t kSeed = 7;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (ok ? "" : "[miss] ") << what << "; ";
  }
};

std::string Fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

int failures = 0;

void Report(const std::string& id, const std::function<void(Outcome&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "exception: " << e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s %s (%.1fs) %s\n", o.pass ? "PASS" : "FAIL", id.c_str(), secs,
              o.detail.str().c_str());
  std::fflush(stdout);
}

// Coverage within +-cov_tol points and cardinality within +-card_rel.
void CheckCell(Outcome& o, const mscs::McCell& cell, double cov_pct, double cov_tol,
               double card, double card_rel) {
  const double got_cov = 100.0 * cell.coverage;
  o.Require(std::abs(got_cov - cov_pct) <= cov_tol,
            Fmt("alpha %.2f coverage %.1f vs %.1f", cell.alpha, got_cov, cov_pct));
  o.Require(std::abs(cell.mean_cardinality - card) <= card_rel * card,
            Fmt("alpha %.2f cardinality %.2f vs %.1f", cell.alpha, cell.mean_cardinality, card));
}

mscs::McSummary Coverage(int model, int p, std::vector<double> alphas) {
  mscs::ScenarioSpec spec;
  spec.model_id = model;
  spec.design = mscs::Design::kSetting1;
  spec.n = 100;
  spec.p = p;
  spec.runs = 500;
  spec.seed = kSeed;
  spec.alphas = std::move(alphas);
  return mscs::McCoverage(spec, mscs::DefaultWorkers());
}

std::set<std::string> BruteForceNormalLocation(const mscs::Dataset& d, double alpha) {
  const Eigen::VectorXd ybar = d.y().colwise().mean();
  std::set<std::string> out;
  for (int mask = 0; mask < (1 << d.p()); ++mask) {
    double lambda = 0.0;
    std::vector<int> ids;
    for (int j = 0; j < d.p(); ++j) {
      if (mask >> j & 1) ids.push_back(j + 1);
      else lambda += d.n() * ybar[j] * ybar[j];
    }
    const int df = d.p() - static_cast<int>(ids.size());
    if (lambda <= (df == 0 ? 0.0 : oracle::Chi2QuantileByBisection(alpha, df))) {
      out.insert(mscs::ModelIndex::Subset(ids).ToString());
    }
  }
  return out;
}

bool IsSubsetOf(const mscs::ModelIndex& a, const mscs::ModelIndex& b) {
  for (int id : a.values())
    if (!b.Contains(id)) return false;
  return true;
}

}  // namespace

int main() {
  Report("1 model-1 coverage and cardinality (n=100, p=8, 500 runs)", [](Outcome& o) {
    const auto s = Coverage(1, 8, {0.10, 0.05, 0.01});
    const double cov[] = {91.2, 94.4, 98.4}, card[] = {14.5, 15.3, 15.8};
    for (int i = 0; i < 3; ++i) CheckCell(o, s.cells[i], cov[i], 3.0, card[i], 0.15);
  });

  Report("2 model-2 partitions coverage and cardinality (n=100, p=6, 500 runs)", [](Outcome& o) {
    const auto s = Coverage(2, 6, {0.10, 0.05, 0.01});
    o.Require(mscs::BellNumber(6) == 203, "203 partitions");
    const double cov[] = {89.2, 94.6, 98.4}, card[] = {13.5, 14.3, 15.6};
    for (int i = 0; i < 3; ++i) CheckCell(o, s.cells[i], cov[i], 3.0, card[i], 0.15);
  });

  Report("3 GLM coverage and cardinality (models 3 and 4, n=100, p=8, alpha=0.05)", [](Outcome& o) {
    const auto m3 = Coverage(3, 8, {0.05});
    o.detail << "model 3: ";
    CheckCell(o, m3.cells[0], 92.4, 3.5, 20.8, 0.20);
    o.Require(!m3.flagged, Fmt("model 3 discarded %.0f runs", m3.discarded));
    const auto m4 = Coverage(4, 8, {0.05});
    o.detail << "model 4: ";
    CheckCell(o, m4.cells[0], 95.6, 3.0, 109.6, 0.25);
    o.Require(!m4.flagged, Fmt("model 4 discarded %.0f runs", m4.discarded));
  });

  Report("4 adaptive sampler hit rate (logistic n=200, p=100, 15 iterations, 1e5 draws)", [](Outcome& o) {
    mscs::ScenarioSpec spec;
    spec.model_id = 3;
    spec.design = mscs::Design::kSparseHighDim;
    spec.n = 200;
    spec.p = 100;
    spec.seed = kSeed;
    const auto g = mscs::GenerateDataset(spec, 0);
    const mscs::ModelSpace space = spec.Space();
    mscs::AsConfig cfg;
    cfg.fixed_iterations = 15;
    cfg.final_draw = 100000;
    cfg.seed = kSeed;
    cfg.workers = mscs::DefaultWorkers();
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = mscs::RunMscsAs(g.data, space, cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.Require(r.hit_rate >= 0.50, Fmt("adapted hit rate %.4f >= 0.50", r.hit_rate));
    o.Require(secs < 600.0, Fmt("sampler %.0f s < 600 s", secs));
    const double control = mscs::EstimateHitRate(g.data, space, Eigen::VectorXd::Constant(100, 0.5),
                                                 0.05, 100000, kSeed, cfg.workers);
    o.Require(control < 0.01, Fmt("uniform-weight hit rate %.5f < 0.01", control));
  });

  Report("5 null-variable importance bound (model 1, n=250, p=8, 500 runs, alpha=0.05, delta=1/6)",
         [](Outcome& o) {
    mscs::ScenarioSpec spec;
    spec.n = 250;
    spec.p = 8;
    spec.runs = 500;
    spec.seed = kSeed;
    const auto r = mscs::IiNullBoundCheck(spec, 0.05, 1.0 / 6.0, mscs::DefaultWorkers());
    o.Require(std::abs(r.bound - 0.1) < 1e-12, Fmt("bound %.4f", r.bound));
    o.Require(r.features.size() == 4, "four null variables");
    for (const auto& f : r.features) {
      o.Require(f.exceed_rate <= r.bound + 3.0 * f.mc_se,
                "x" + f.feature.ToString() + Fmt(" P(II > 2/3) = %.3f (se %.3f)", f.exceed_rate, f.mc_se));
    }
  });

  Report("6 brute-force agreement on 20 random normal-location instances", [](Outcome& o) {
    std::mt19937_64 rng(kSeed);
    int agree = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const int p = 1 + static_cast<int>(rng() % 8);
      const int n = 10 + static_cast<int>(rng() % 300);
      Eigen::VectorXd t = Eigen::VectorXd::Zero(p);
      for (int j = 0; j < p; ++j)
        if (rng() % 2) t[j] = std::normal_distribution<double>(0.0, 0.3)(rng);
      const auto d = fixture::NormalLocation(n, t, rng);
      const double alpha = std::vector<double>{0.10, 0.05, 0.01}[trial % 3];
      const auto r = mscs::BuildMscs(d, mscs::ModelSpace::AllSubsets(p), alpha);
      std::set<std::string> got;
      for (const auto& m : r.survivors) got.insert(m.ToString());
      if (got == BruteForceNormalLocation(d, alpha)) ++agree;
    }
    o.Require(agree == 20, Fmt("%.0f of 20 identical survivor sets", agree));
  });

  Report("7 property suites", [](Outcome& o) {
    std::mt19937_64 rng(kSeed);
    Eigen::VectorXd t(4);
    t << 0.6, -0.4, 0.0, 0.2;
    const std::vector<mscs::Dataset> data{
        fixture::NormalLocation(40, t, rng), fixture::BlockCov(60, 4, rng),
        fixture::Logistic(100, t, rng), fixture::Poisson(100, t, rng), fixture::Ising(200, 4, rng)};

    bool nonneg = true, nested = true, monotone = true, full = true;
    for (const auto& d : data) {
      const auto s = mscs::ScreenSpace(d, mscs::DefaultSpace(d));
      for (const auto& r : s.records) nonneg = nonneg && r.lambda >= 0.0;
      if (mscs::ModelKindFor(d.family()) == mscs::ModelKind::kSubset) {
        for (const auto& a : s.records)
          for (const auto& b : s.records)
            if (IsSubsetOf(a.model, b.model)) nested = nested && a.lambda >= b.lambda - 1e-8;
      }
      std::size_t prev = 0;
      for (double alpha : {0.5, 0.1, 0.05, 0.01}) {
        const auto m = mscs::ApplyLevel(s, alpha);
        monotone = monotone && m.survivors.size() >= prev;
        prev = m.survivors.size();
        full = full && std::find(m.survivors.begin(), m.survivors.end(), s.space.FullModel()) !=
                           m.survivors.end();
      }
    }
    o.Require(nonneg, "lambda >= 0");
    o.Require(nested, "nesting monotonicity of lambda");
    o.Require(monotone, "survivors grow as alpha shrinks");
    o.Require(full, "full model always survives");

    double worst = 0.0;
    for (double alpha : {0.01, 0.05, 0.10})
      for (int d = 1; d <= 50; ++d)
        worst = std::max(worst, std::abs(mscs::stats::Chi2Cdf(mscs::stats::Chi2Quantile(alpha, d), {d, 0.0}) -
                                         (1.0 - alpha)));
    o.Require(worst <= 1e-10, Fmt("quantile round-trip error %.2e", worst));

    double grad_err = 0.0;
    for (const auto& d : data) {
      Eigen::VectorXd theta = mscs::Fit(d, mscs::DefaultSpace(d).FullModel()).theta_hat;
      if (d.family() == mscs::Family::kNormalBlockCov) {
        for (int j = 0; j < d.p(); ++j) theta[mscs::PackedIndex(d.p(), j, j)] += 0.2;
      } else {
        for (auto& v : theta) v += 0.05;
      }
      const Eigen::VectorXd g = mscs::LogLikGradient(d, theta);
      for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(theta[i]));
        Eigen::VectorXd up = theta, dn = theta;
        up[i] += h;
        dn[i] -= h;
        const double fd = (mscs::LogLikAt(d, up) - mscs::LogLikAt(d, dn)) / (2 * h);
        grad_err = std::max(grad_err, std::abs(g[i] - fd) / std::max(1.0, std::abs(fd)));
      }
    }
    o.Require(grad_err <= 1e-4, Fmt("gradient vs finite differences %.2e", grad_err));

    double norm_err = 0.0;
    for (int p = 1; p <= 12; ++p) {
      Eigen::VectorXd theta(p * (p + 1) / 2);
      for (auto& v : theta) v = std::normal_distribution<double>(0.0, 1.0)(rng);
      norm_err = std::max(norm_err, std::abs(mscs::IsingStateProbabilities(theta, p).sum() - 1.0));
    }
    o.Require(norm_err <= 1e-12, Fmt("Ising normalization %.2e", norm_err));

    mscs::AsConfig cfg;
    cfg.batch_size = 100;
    cfg.fixed_iterations = 5;
    cfg.final_draw = 300;
    cfg.seed = kSeed;
    const mscs::ModelSpace sp = mscs::ModelSpace::AllSubsets(4);
    const auto a = mscs::RunMscsAs(data[2], sp, cfg);
    const auto b = mscs::RunMscsAs(data[2], sp, cfg);
    bool same = a.trajectory.size() == b.trajectory.size() && a.hit_rate == b.hit_rate;
    for (std::size_t i = 0; same && i < a.trajectory.size(); ++i) {
      same = a.trajectory[i].alpha_t == b.trajectory[i].alpha_t && a.trajectory[i].omega == b.trajectory[i].omega;
    }
    o.Require(same, "fixed-seed sampler trajectory reproducible");
  });

  std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
