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

#ifndef MSCS_REPORT_HPP_
#define MSCS_REPORT_HPP_

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "mscs/adaptive.hpp"
#include "mscs/mscs.hpp"
#include "mscs/simulate.hpp"

namespace mscs {

std::string_view Version();

// Every artifact carries {"tool", "version", "config"} so a run can be
// reproduced from its outputs alone.
nlohmann::json Stamp(const nlohmann::json& config);
// CSV artifacts carry the same stamp as leading '#' comment lines.
void WriteCsvStamp(std::ostream& out, const nlohmann::json& config);

nlohmann::json ToJson(const LrtRecord& record);
nlohmann::json ToJson(const MscsResult& result);
nlohmann::json ToJson(const ImportanceReport& report);
nlohmann::json ToJson(const AsResult& result);
nlohmann::json ToJson(const McSummary& summary);
nlohmann::json ToJson(const ScenarioSpec& spec);
nlohmann::json ToJson(const AsConfig& config);

// model,lambda,df,pvalue for the surviving models.
void WriteSurvivorsCsv(std::ostream& out, const MscsResult& result);
void WriteSurvivorsCsv(std::ostream& out, const AsResult& result);
// feature,ii,ci_lo,ci_hi (CI columns empty without a bootstrap).
void WriteImportanceCsv(std::ostream& out, const ImportanceReport& report);
// iteration,alpha_t,survivor_fraction,omega_1..omega_p.
void WriteTrajectoryCsv(std::ostream& out, const AsResult& result);
// metric,alpha,<n..._p...>: coverage in percent and mean cardinality.
void WriteMcSummaryCsv(std::ostream& out, const McSummary& summary);

}  // namespace mscs

#endif  // MSCS_REPORT_HPP_
