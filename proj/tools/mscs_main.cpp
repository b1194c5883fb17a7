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

// mscs: model selection confidence sets from the command line.
//
//   mscs exhaustive --family normal-location --alpha 0.05 data.csv
//   mscs sample --family logistic --alpha-star 0.05 data.csv
//   mscs simulate --model 1 --setting 1 --n 100 --p 8 --runs 500
//   mscs generate --model 3 --setting 1 --n 100 --p 8 --out data.csv
//
// Exit codes: 0 ok, 64 usage, 1 IO/parse, 2 numeric, 3 non-convergence.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mscs/adaptive.hpp"
#include "mscs/dataset_io.hpp"
#include "mscs/error.hpp"
#include "mscs/likelihood.hpp"
#include "mscs/model_space.hpp"
#include "mscs/mscs.hpp"
#include "mscs/parallel.hpp"
#include "mscs/report.hpp"
#include "mscs/simulate.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Values strictly inside (0, 1).
const CLI::Validator kOpenUnit(
    [](std::string& text) -> std::string {
      double v = 0.0;
      if (!CLI::detail::lexical_cast(text, v) || !(v > 0.0 && v < 1.0)) {
        return "value " + text + " must lie strictly between 0 and 1";
      }
      return {};
    },
    "(0,1)");

int ExitCodeFor(mscs::ErrorCode code) {
  using mscs::ErrorCode;
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDimensionMismatch:
      return kExitIo;
    case ErrorCode::kFitDiverged:
    case ErrorCode::kSingularBlock:
    case ErrorCode::kRankDeficientDesign:
    case ErrorCode::kNestingViolation:
    case ErrorCode::kNoSurvivors:
      return kExitNumeric;
    default:
      return kExitUsage;
  }
}

// Shared flags.
struct Common {
  std::string input;
  std::string family;
  std::string space = "auto";
  std::string forced;
  std::string prefix = "mscs";
  std::uint64_t seed = 1;
  int workers = 0;
};

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  void Report(const char* what) const {
    const double s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start).count();
    std::cerr << what << " took " << s << " s\n";
  }
};

std::vector<int> ParseForced(const std::string& text) {
  if (text.empty()) return {};
  return mscs::ModelIndex::Parse(text, mscs::ModelKind::kSubset).values();
}

mscs::ModelSpace ResolveSpace(const Common& c, const mscs::Dataset& data) {
  const std::vector<int> forced = ParseForced(c.forced);
  const mscs::ModelKind kind = mscs::ModelKindFor(data.family());
  if (c.space == "auto") return mscs::DefaultSpace(data, forced);
  if (c.space == "subsets") {
    if (kind != mscs::ModelKind::kSubset) {
      throw UsageError("family " + std::string(mscs::FamilyName(data.family())) +
                       " needs a partition space");
    }
    return mscs::ModelSpace::AllSubsets(data.p(), forced);
  }
  if (kind != mscs::ModelKind::kPartition) {
    throw UsageError("family " + std::string(mscs::FamilyName(data.family())) +
                     " needs a subset space");
  }
  if (!forced.empty()) throw UsageError("--forced applies to subset spaces only");
  return mscs::ModelSpace::AllPartitions(data.p());
}

int Workers(const Common& c) { return c.workers > 0 ? c.workers : mscs::DefaultWorkers(); }

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw mscs::Error(mscs::ErrorCode::kParse, "cannot write '" + path + "'");
  return out;
}

void WriteJson(const std::string& path, const json& j) { OpenOut(path) << j.dump(2) << '\n'; }

void AddCommonFlags(CLI::App* cmd, Common& c, bool needs_input) {
  if (needs_input) {
    cmd->add_option("data", c.input, "Input CSV with header")->required();
    cmd->add_option("--family", c.family, "normal-location, normal-blockcov, logistic, poisson, ising")
        ->required()
        ->check(CLI::IsMember({"normal-location", "normal-blockcov", "logistic", "poisson", "ising"}));
    cmd->add_option("--space", c.space, "auto, subsets or partitions")
        ->check(CLI::IsMember({"auto", "subsets", "partitions"}));
    cmd->add_option("--forced", c.forced, "Variables forced into every model, e.g. 1,2");
  }
  cmd->add_option("--output-prefix,-o", c.prefix, "Prefix for output files");
  cmd->add_option("--seed", c.seed, "Root random seed");
  cmd->add_option("--workers", c.workers, "Worker threads (default: MSCS_WORKERS or all cores)")
      ->check(CLI::NonNegativeNumber);
}

// ---------------------------------------------------------------- exhaustive

struct ExhaustiveArgs {
  Common common;
  double alpha = 0.05;
  int bootstrap = 0;
};

int RunExhaustive(const ExhaustiveArgs& a) {
  Timer timer;
  const mscs::Dataset data = mscs::ReadCsvFile(a.common.input, mscs::ParseFamily(a.common.family));
  const mscs::ModelSpace space = ResolveSpace(a.common, data);
  mscs::ScreenOptions options;
  options.workers = Workers(a.common);
  const mscs::MscsResult result = mscs::BuildMscs(data, space, a.alpha, options);

  mscs::ImportanceReport importance = mscs::InclusionImportance(result);
  json boot = nullptr;
  if (a.bootstrap > 0) {
    mscs::BootstrapOptions bo;
    bo.replicates = a.bootstrap;
    bo.seed = a.common.seed;
    bo.workers = options.workers;
    const mscs::BootstrapReport br = mscs::BootstrapImportance(data, space, a.alpha, bo);
    importance = br.importance;
    boot = {{"replicates_used", br.replicates_used}, {"replicates_failed", br.replicates_failed}};
  }

  const json config = {{"command", "exhaustive"},
                       {"input", a.common.input},
                       {"family", a.common.family},
                       {"space", space.ToString()},
                       {"forced", space.forced()},
                       {"alpha", a.alpha},
                       {"seed", a.common.seed},
                       {"bootstrap", a.bootstrap}};
  json out = mscs::Stamp(config);
  out["result"] = mscs::ToJson(result);
  out["importance"] = mscs::ToJson(importance);
  out["bootstrap"] = boot;
  WriteJson(a.common.prefix + ".json", out);
  {
    std::ofstream f = OpenOut(a.common.prefix + "_survivors.csv");
    mscs::WriteCsvStamp(f, config);
    mscs::WriteSurvivorsCsv(f, result);
  }
  {
    std::ofstream f = OpenOut(a.common.prefix + "_importance.csv");
    mscs::WriteCsvStamp(f, config);
    mscs::WriteImportanceCsv(f, importance);
  }
  std::cout << "alpha " << a.alpha << ": " << result.survivors.size() << " of "
            << result.records.size() << " models survive\n";
  for (const mscs::ImportanceEntry& e : importance.entries) {
    std::cout << "  ii(" << e.feature.ToString() << ") = " << e.ii << '\n';
  }
  timer.Report("exhaustive");
  return kExitOk;
}

// -------------------------------------------------------------------- sample

struct SampleArgs {
  Common common;
  mscs::AsConfig as;
  double alpha0 = -1.0;
  int fixed_iterations = 0;
};

int RunSample(SampleArgs a) {
  Timer timer;
  const mscs::Dataset data = mscs::ReadCsvFile(a.common.input, mscs::ParseFamily(a.common.family));
  if (mscs::ModelKindFor(data.family()) != mscs::ModelKind::kSubset) {
    throw UsageError("sample needs a subset-space family");
  }
  const mscs::ModelSpace space = ResolveSpace(a.common, data);
  if (a.alpha0 >= 0.0) a.as.alpha0 = a.alpha0;
  if (a.fixed_iterations > 0) a.as.fixed_iterations = a.fixed_iterations;
  a.as.seed = a.common.seed;
  a.as.workers = Workers(a.common);
  try {
    a.as.Validate(space.p());
  } catch (const mscs::Error& e) {
    throw UsageError(e.what());
  }

  const mscs::AsResult result = mscs::RunMscsAs(data, space, a.as);
  std::vector<mscs::ModelIndex> members;
  for (const mscs::LrtRecord& r : result.members) members.push_back(r.model);
  const mscs::ImportanceReport importance = mscs::InclusionImportance(space, members);

  json config = {{"command", "sample"},
                 {"input", a.common.input},
                 {"family", a.common.family},
                 {"space", space.ToString()},
                 {"forced", space.forced()},
                 {"seed", a.common.seed},
                 {"adaptive", mscs::ToJson(a.as)}};
  json out = mscs::Stamp(config);
  out["result"] = mscs::ToJson(result);
  out["importance"] = mscs::ToJson(importance);
  out["partial"] = !result.converged;
  WriteJson(a.common.prefix + ".json", out);
  {
    std::ofstream f = OpenOut(a.common.prefix + "_trajectory.csv");
    mscs::WriteCsvStamp(f, config);
    mscs::WriteTrajectoryCsv(f, result);
  }
  {
    std::ofstream f = OpenOut(a.common.prefix + "_members.csv");
    mscs::WriteCsvStamp(f, config);
    mscs::WriteSurvivorsCsv(f, result);
  }
  {
    std::ofstream f = OpenOut(a.common.prefix + "_importance.csv");
    mscs::WriteCsvStamp(f, config);
    mscs::WriteImportanceCsv(f, importance);
  }
  std::cout << "iterations " << result.iterations << (result.converged ? "" : " (not converged)")
            << "\nhit_rate " << result.hit_rate << "\nmembers " << result.members.size() << '\n';
  timer.Report("sample");
  if (!result.converged) {
    std::cerr << "error: level sequence did not settle at alpha* within " << a.as.max_iters
              << " iterations; outputs are flagged partial\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

// ------------------------------------------------------------------ simulate

struct ScenarioArgs {
  int model = 1;
  std::string setting = "1";
  int n = 100;
  int p = 8;
  double psi = 0.0;
  std::string covariates = "auto";
  int runs = 500;
  std::vector<double> alphas{0.10, 0.05, 0.01};
};

void AddScenarioFlags(CLI::App* cmd, ScenarioArgs& s) {
  // Range checks live in ScenarioSpec::Validate so the library and CLI agree.
  cmd->add_option("--model", s.model, "1 normal location, 2 block covariance, 3 logistic, 4 Poisson");
  cmd->add_option("--setting,--design", s.setting, "1, 2 or sparse")
      ->check(CLI::IsMember({"1", "2", "sparse"}));
  cmd->add_option("--n", s.n, "Sample size");
  cmd->add_option("--p", s.p, "Number of variables");
  cmd->add_option("--psi", s.psi, "Signal size (default depends on model and setting)");
  cmd->add_option("--covariates", s.covariates, "auto, identity or ar")
      ->check(CLI::IsMember({"auto", "identity", "ar"}));
  cmd->add_option("--runs", s.runs, "Monte Carlo replicates");
  cmd->add_option("--alphas", s.alphas, "Levels to report")->delimiter(',');
}

mscs::ScenarioSpec MakeSpec(const ScenarioArgs& s, std::uint64_t seed) {
  mscs::ScenarioSpec spec;
  spec.model_id = s.model;
  spec.design = s.setting == "1"   ? mscs::Design::kSetting1
                : s.setting == "2" ? mscs::Design::kSetting2
                                   : mscs::Design::kSparseHighDim;
  spec.n = s.n;
  spec.p = s.p;
  if (s.psi != 0.0) spec.psi = s.psi;
  if (s.covariates == "identity") spec.covariates = mscs::CovariateLaw::kIdentity;
  if (s.covariates == "ar") spec.covariates = mscs::CovariateLaw::kAutoregressive;
  spec.seed = seed;
  spec.runs = s.runs;
  spec.alphas = s.alphas;
  try {
    spec.Validate();
  } catch (const mscs::Error& e) {
    throw UsageError(e.what());
  }
  return spec;
}

struct SimulateArgs {
  Common common;
  ScenarioArgs scenario;
  double ii_delta = 0.0;
};

int RunSimulate(const SimulateArgs& a) {
  Timer timer;
  const mscs::ScenarioSpec spec = MakeSpec(a.scenario, a.common.seed);
  if (a.ii_delta < 0.0 || a.ii_delta > 0.5) throw UsageError("--ii-delta must lie in (0, 1/2]");
  const int workers = Workers(a.common);
  const mscs::McSummary summary = mscs::McCoverage(spec, workers);
  const json config = {{"command", "simulate"}, {"scenario", mscs::ToJson(spec)},
                       {"seed", spec.seed}, {"ii_delta", a.ii_delta}};
  json out = mscs::Stamp(config);
  out["summary"] = mscs::ToJson(summary);

  if (a.ii_delta > 0.0) {
    json checks = json::array();
    for (double alpha : spec.alphas) {
      const mscs::IiBoundReport r = mscs::IiNullBoundCheck(spec, alpha, a.ii_delta, workers);
      json features = json::array();
      for (const mscs::NullFeatureCheck& f : r.features) {
        features.push_back({{"feature", f.feature.ToString()},
                            {"exceed_rate", f.exceed_rate},
                            {"mc_se", f.mc_se}});
      }
      checks.push_back({{"alpha", r.alpha}, {"delta", r.delta}, {"bound", r.bound},
                        {"completed", r.completed}, {"null_features", features}});
    }
    out["ii_bound"] = checks;
  }
  WriteJson(a.common.prefix + ".json", out);
  {
    std::ofstream f = OpenOut(a.common.prefix + "_summary.csv");
    mscs::WriteCsvStamp(f, config);
    mscs::WriteMcSummaryCsv(f, summary);
  }
  std::cout << "completed " << summary.completed << " of " << spec.runs << " runs";
  if (summary.discarded > 0) std::cout << " (" << summary.discarded << " discarded)";
  std::cout << '\n';
  for (const mscs::McCell& c : summary.cells) {
    std::cout << "  alpha " << c.alpha << ": coverage " << 100.0 * c.coverage
              << "%  cardinality " << c.mean_cardinality << '\n';
  }
  if (summary.flagged) std::cout << "  warning: 5% or more of runs discarded\n";
  timer.Report("simulate");
  return kExitOk;
}

// ------------------------------------------------------------------ generate

struct GenerateArgs {
  Common common;
  ScenarioArgs scenario;
  int run = 0;
  std::string out;
};

int RunGenerate(const GenerateArgs& a) {
  const mscs::ScenarioSpec spec = MakeSpec(a.scenario, a.common.seed);
  const mscs::GeneratedData g = mscs::GenerateDataset(spec, a.run);
  if (a.out.empty() || a.out == "-") {
    mscs::WriteCsv(std::cout, g.data);
  } else {
    std::ofstream f = OpenOut(a.out);
    mscs::WriteCsv(f, g.data);
  }
  std::cerr << "true model: " << g.truth.ToString() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model selection confidence sets"};
  app.set_version_flag("--version", std::string(mscs::Version()));
  app.require_subcommand(1);

  ExhaustiveArgs ex;
  CLI::App* cmd_ex = app.add_subcommand("exhaustive", "Screen every model in the space");
  AddCommonFlags(cmd_ex, ex.common, true);
  cmd_ex->add_option("--alpha", ex.alpha, "Significance level")->check(kOpenUnit);
  cmd_ex->add_option("--bootstrap", ex.bootstrap, "Parametric bootstrap replicates for II intervals")
      ->check(CLI::NonNegativeNumber);

  SampleArgs sa;
  CLI::App* cmd_sa = app.add_subcommand("sample", "Adaptive sampling of the model space");
  AddCommonFlags(cmd_sa, sa.common, true);
  cmd_sa->add_option("--B", sa.as.batch_size, "Models per iteration");
  cmd_sa->add_option("--zeta", sa.as.zeta, "Target survivor share")->check(kOpenUnit);
  cmd_sa->add_option("--xi", sa.as.xi, "Smoothing weight");
  cmd_sa->add_option("--alpha-star,--alpha", sa.as.alpha_star, "Target level")->check(kOpenUnit);
  cmd_sa->add_option("--alpha0", sa.alpha0, "Initial level floor");
  cmd_sa->add_option("--stall-d", sa.as.stall_d, "Stop after d+1 iterations at alpha*");
  cmd_sa->add_option("--final-draw", sa.as.final_draw, "Models drawn from the final weights");
  cmd_sa->add_option("--clamp-lo", sa.as.clamp_lo, "Lower weight clamp");
  cmd_sa->add_option("--clamp-hi", sa.as.clamp_hi, "Upper weight clamp");
  cmd_sa->add_option("--max-iters", sa.as.max_iters, "Iteration limit");
  cmd_sa->add_option("--fixed-iterations", sa.fixed_iterations, "Stop after exactly this many iterations");

  SimulateArgs si;
  CLI::App* cmd_si = app.add_subcommand("simulate", "Monte Carlo coverage and cardinality");
  AddCommonFlags(cmd_si, si.common, false);
  AddScenarioFlags(cmd_si, si.scenario);
  cmd_si->add_option("--ii-delta", si.ii_delta, "Also check the null-variable II bound at this delta");

  GenerateArgs ge;
  CLI::App* cmd_ge = app.add_subcommand("generate", "Write one simulated dataset as CSV");
  AddCommonFlags(cmd_ge, ge.common, false);
  AddScenarioFlags(cmd_ge, ge.scenario);
  cmd_ge->add_option("--run", ge.run, "Replicate index")->check(CLI::NonNegativeNumber);
  cmd_ge->add_option("--out", ge.out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_ex->parsed()) return RunExhaustive(ex);
    if (cmd_sa->parsed()) return RunSample(sa);
    if (cmd_si->parsed()) return RunSimulate(si);
    if (cmd_ge->parsed()) return RunGenerate(ge);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const mscs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
