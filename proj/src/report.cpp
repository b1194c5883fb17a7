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

#include "mscs/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace mscs {
namespace {

// Shortest round-trip decimal text, independent of the stream locale.
std::string Num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string DesignName(Design d) {
  switch (d) {
    case Design::kSetting1: return "setting1";
    case Design::kSetting2: return "setting2";
    case Design::kSparseHighDim: return "sparse-highdim";
  }
  return "unknown";
}

}  // namespace

std::string_view Version() { return MSCS_VERSION; }

nlohmann::json Stamp(const nlohmann::json& config) {
  return {{"tool", "mscs"}, {"version", std::string(Version())}, {"config", config}};
}

void WriteCsvStamp(std::ostream& out, const nlohmann::json& config) {
  out << "# mscs " << Version() << '\n';
  out << "# config: " << config.dump() << '\n';
}

nlohmann::json ToJson(const LrtRecord& r) {
  nlohmann::json j = {{"model", r.model.ToString()},
                      {"lambda", r.lambda},
                      {"df", r.df},
                      {"pvalue", r.pvalue},
                      {"survived", r.survived}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

nlohmann::json ToJson(const MscsResult& result) {
  nlohmann::json records = nlohmann::json::array();
  for (const LrtRecord& r : result.records) records.push_back(ToJson(r));
  nlohmann::json survivors = nlohmann::json::array();
  for (const ModelIndex& m : result.survivors) survivors.push_back(m.ToString());
  return {{"alpha", result.alpha},
          {"space", result.space.ToString()},
          {"exhaustive", result.exhaustive},
          {"cardinality", result.survivors.size()},
          {"survivors", survivors},
          {"records", records}};
}

nlohmann::json ToJson(const ImportanceReport& report) {
  nlohmann::json out = nlohmann::json::array();
  for (const ImportanceEntry& e : report.entries) {
    nlohmann::json j = {{"feature", e.feature.ToString()}, {"ii", e.ii}};
    if (e.ci_lo) j["ci_lo"] = *e.ci_lo;
    if (e.ci_hi) j["ci_hi"] = *e.ci_hi;
    out.push_back(j);
  }
  return out;
}

nlohmann::json ToJson(const AsResult& result) {
  nlohmann::json members = nlohmann::json::array();
  for (const LrtRecord& r : result.members) members.push_back(ToJson(r));
  nlohmann::json trajectory = nlohmann::json::array();
  for (const TrajectoryPoint& t : result.trajectory) {
    trajectory.push_back({{"iteration", t.iteration},
                          {"alpha_t", t.alpha_t},
                          {"survivor_fraction", t.survivor_fraction},
                          {"omega", std::vector<double>(t.omega.data(),
                                                        t.omega.data() + t.omega.size())}});
  }
  return {{"omega", std::vector<double>(result.omega.data(),
                                        result.omega.data() + result.omega.size())},
          {"hit_rate", result.hit_rate},
          {"draws", result.draws},
          {"distinct_draws", result.distinct_draws},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"full_model_loglik", result.full_fit.loglik},
          {"members", members},
          {"trajectory", trajectory}};
}

nlohmann::json ToJson(const ScenarioSpec& spec) {
  nlohmann::json j = {{"model", spec.model_id},
                      {"design", DesignName(spec.design)},
                      {"n", spec.n},
                      {"p", spec.p},
                      {"seed", spec.seed},
                      {"runs", spec.runs},
                      {"alphas", spec.alphas}};
  if (spec.model_id != 2) j["psi"] = spec.ResolvedPsi();
  if (spec.model_id >= 3) {
    j["covariates"] = spec.ResolvedCovariates() == CovariateLaw::kIdentity ? "identity"
                                                                           : "ar0.5";
  }
  return j;
}

nlohmann::json ToJson(const AsConfig& c) {
  nlohmann::json j = {{"B", c.batch_size},
                      {"zeta", c.zeta},
                      {"xi", c.xi},
                      {"alpha_star", c.alpha_star},
                      {"stall_d", c.stall_d},
                      {"max_iters", c.max_iters},
                      {"clamp_lo", c.clamp_lo},
                      {"clamp_hi", c.clamp_hi},
                      {"final_draw", c.final_draw},
                      {"seed", c.seed},
                      {"omega0", c.omega0.empty() ? nlohmann::json("0.5") : nlohmann::json(c.omega0)}};
  j["alpha0"] = c.alpha0 ? nlohmann::json(*c.alpha0) : nlohmann::json(nullptr);
  j["fixed_iterations"] =
      c.fixed_iterations ? nlohmann::json(*c.fixed_iterations) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json ToJson(const McSummary& s) {
  nlohmann::json cells = nlohmann::json::array();
  for (const McCell& c : s.cells) {
    cells.push_back({{"alpha", c.alpha},
                     {"coverage", c.coverage},
                     {"mean_cardinality", c.mean_cardinality}});
  }
  return {{"spec", ToJson(s.spec)},
          {"cells", cells},
          {"completed", s.completed},
          {"discarded", s.discarded},
          {"candidate_fit_failures", s.candidate_fit_failures},
          {"flagged", s.flagged},
          {"diagnostics", s.diagnostics}};
}

void WriteSurvivorsCsv(std::ostream& out, const MscsResult& result) {
  out << "model,lambda,df,pvalue\n";
  for (const LrtRecord& r : result.records) {
    if (!r.survived) continue;
    out << '"' << r.model.ToString() << "\"," << Num(r.lambda) << ',' << r.df << ','
        << Num(r.pvalue) << '\n';
  }
}

void WriteSurvivorsCsv(std::ostream& out, const AsResult& result) {
  out << "model,lambda,df,pvalue\n";
  for (const LrtRecord& r : result.members) {
    out << '"' << r.model.ToString() << "\"," << Num(r.lambda) << ',' << r.df << ','
        << Num(r.pvalue) << '\n';
  }
}

void WriteImportanceCsv(std::ostream& out, const ImportanceReport& report) {
  out << "feature,ii,ci_lo,ci_hi\n";
  for (const ImportanceEntry& e : report.entries) {
    out << e.feature.ToString() << ',' << Num(e.ii) << ','
        << (e.ci_lo ? Num(*e.ci_lo) : "") << ',' << (e.ci_hi ? Num(*e.ci_hi) : "") << '\n';
  }
}

void WriteTrajectoryCsv(std::ostream& out, const AsResult& result) {
  out << "iteration,alpha_t,survivor_fraction";
  for (Eigen::Index j = 1; j <= result.omega.size(); ++j) out << ",omega_" << j;
  out << '\n';
  for (const TrajectoryPoint& t : result.trajectory) {
    out << t.iteration << ',' << Num(t.alpha_t) << ',' << Num(t.survivor_fraction);
    for (Eigen::Index j = 0; j < t.omega.size(); ++j) out << ',' << Num(t.omega[j]);
    out << '\n';
  }
}

void WriteMcSummaryCsv(std::ostream& out, const McSummary& summary) {
  const std::string column =
      "n" + std::to_string(summary.spec.n) + "_p" + std::to_string(summary.spec.p);
  out << "metric,alpha," << column << '\n';
  for (const McCell& c : summary.cells) {
    out << "coverage_pct," << Num(c.alpha) << ',' << Num(100.0 * c.coverage) << '\n';
  }
  for (const McCell& c : summary.cells) {
    out << "cardinality," << Num(c.alpha) << ',' << Num(c.mean_cardinality) << '\n';
  }
}

}  // namespace mscs
