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

// Drives the mscs executable end to end.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "mscs/dataset_io.hpp"
#include "mscs/mscs.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kTmp = MSCS_TEST_TMP;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RunResult Run(const std::string& args) {
  fs::create_directories(kTmp);
  const std::string cmd = std::string("cd '") + kTmp.string() + "' && '" + MSCS_CLI_PATH + "' " +
                          args + " > stdout.txt 2> stderr.txt";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = Slurp(kTmp / "stdout.txt");
  r.err = Slurp(kTmp / "stderr.txt");
  return r;
}

// Model column of a survivors/members CSV, skipping '#' lines and the header.
std::set<std::string> ModelsIn(const fs::path& csv) {
  std::ifstream in(csv);
  std::string line;
  std::set<std::string> out;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto close = line.find('"', 1);
    out.insert(line.substr(1, close - 1));
  }
  return out;
}

}  // namespace

TEST_CASE("exhaustive run on strong-signal data") {
  // true model {1, 2} at signal 5 with n = 400
  REQUIRE(Run("generate --model 1 --n 400 --p 4 --psi 5 --seed 3 --out strong.csv").code == 0);
  const RunResult r = Run("exhaustive --family normal-location --alpha 0.05 -o strong strong.csv");
  REQUIRE(r.code == 0);
  const auto survivors = ModelsIn(kTmp / "strong_survivors.csv");
  CHECK(survivors == std::set<std::string>{"1,2", "1,2,3", "1,2,4", "1,2,3,4"});

  const auto data = mscs::ReadCsvFile((kTmp / "strong.csv").string(), mscs::Family::kNormalLocation);
  const auto lib = mscs::BuildMscs(data, mscs::ModelSpace::AllSubsets(4), 0.05);
  std::set<std::string> expect;
  for (const auto& m : lib.survivors) expect.insert(m.ToString());
  CHECK(survivors == expect);

  const auto j = nlohmann::json::parse(Slurp(kTmp / "strong.json"));
  CHECK(j["config"]["alpha"] == 0.05);
  CHECK(j["config"]["family"] == "normal-location");
  CHECK(j.contains("version"));
  CHECK(j["result"]["records"].size() == 16);
  CHECK(Slurp(kTmp / "strong_importance.csv").find("feature,ii,ci_lo,ci_hi") != std::string::npos);
  // nothing time-dependent on stdout
  CHECK(r.out.find("took") == std::string::npos);
  CHECK(r.err.find("took") != std::string::npos);
}

TEST_CASE("usage errors exit 64") {
  REQUIRE(Run("generate --model 1 --n 50 --p 4 --seed 1 --out small.csv").code == 0);
  CHECK(Run("exhaustive --family normal-location --alpha 1.5 small.csv").code == 64);
  CHECK(Run("exhaustive --family normal-location --alpha 0 small.csv").code == 64);
  CHECK(Run("exhaustive --family nonsense small.csv").code == 64);
  CHECK(Run("sample --family normal-location --zeta 0 small.csv").code == 64);
  CHECK(Run("sample --family normal-location --clamp-lo 0.6 --clamp-hi 0.5 small.csv").code == 64);
  CHECK(Run("simulate --model 5").code == 64);
  CHECK(Run("simulate --model 1 --p 7").code == 64);
  CHECK(Run("").code == 64);
}

TEST_CASE("input errors exit 1") {
  std::ofstream(kTmp / "empty.csv").close();
  const RunResult r = Run("exhaustive --family normal-location empty.csv");
  CHECK(r.code == 1);
  CHECK(r.err.find("no observations") != std::string::npos);
  CHECK(Run("exhaustive --family normal-location missing.csv").code == 1);
  std::ofstream(kTmp / "bad.csv") << "y1,y2\n1,zz\n";
  CHECK(Run("exhaustive --family normal-location bad.csv").code == 1);
}

TEST_CASE("numeric failures exit 2 and name the model") {
  // duplicated covariate columns make the full design rank deficient
  std::ofstream f(kTmp / "collinear.csv");
  f << "y,x1,x2\n";
  for (int i = 0; i < 20; ++i) f << (i % 2) << ',' << (i * 0.37 - 3) << ',' << (i * 0.37 - 3) << '\n';
  f.close();
  const RunResult r = Run("exhaustive --family logistic collinear.csv");
  CHECK(r.code == 2);
  CHECK(r.err.find("'1,2'") != std::string::npos);
}

TEST_CASE("sampled members re-verify exhaustively") {
  REQUIRE(Run("generate --model 3 --n 150 --p 8 --seed 5 --out glm.csv").code == 0);
  const RunResult s = Run("sample --family logistic --B 200 --final-draw 3000 --seed 2 -o glm_as glm.csv");
  REQUIRE(s.code == 0);
  CHECK(s.out.find("hit_rate") != std::string::npos);
  REQUIRE(Run("exhaustive --family logistic --alpha 0.05 -o glm_ex glm.csv").code == 0);
  const auto members = ModelsIn(kTmp / "glm_as_members.csv");
  const auto survivors = ModelsIn(kTmp / "glm_ex_survivors.csv");
  CHECK_FALSE(members.empty());
  for (const auto& m : members) CHECK(survivors.count(m) == 1);
}

TEST_CASE("sampler trajectories are bit-identical across invocations") {
  REQUIRE(Run("generate --model 3 --setting sparse --n 200 --p 100 --seed 11 --out hd.csv").code == 0);
  const std::string args =
      "sample --family logistic --fixed-iterations 3 --final-draw 300 --seed 4 -o ";
  REQUIRE(Run(args + "hd_a hd.csv").code == 0);
  REQUIRE(Run(args + "hd_b hd.csv").code == 0);
  const std::string a = Slurp(kTmp / "hd_a_trajectory.csv");
  CHECK_FALSE(a.empty());
  CHECK(a == Slurp(kTmp / "hd_b_trajectory.csv"));
  CHECK(Slurp(kTmp / "hd_a_members.csv") == Slurp(kTmp / "hd_b_members.csv"));
}

TEST_CASE("non-convergence exits 3 with partial outputs") {
  REQUIRE(Run("generate --model 1 --n 100 --p 6 --seed 2 --out nc.csv").code == 0);
  const RunResult r = Run("sample --family normal-location --max-iters 2 --final-draw 50 -o nc nc.csv");
  CHECK(r.code == 3);
  const auto j = nlohmann::json::parse(Slurp(kTmp / "nc.json"));
  CHECK(j["partial"] == true);
  CHECK(j["result"]["converged"] == false);
}

TEST_CASE("simulate writes a summary") {
  const RunResult r = Run("simulate --model 1 --setting 1 --n 100 --p 8 --runs 1 --seed 7 -o one");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(Slurp(kTmp / "one.json"));
  for (const auto& c : j["summary"]["cells"]) {
    const double cov = c["coverage"];
    CHECK((cov == 0.0 || cov == 1.0));
  }
  CHECK(j["config"]["scenario"]["seed"] == 7);
  const std::string csv = Slurp(kTmp / "one_summary.csv");
  CHECK(csv.find("metric,alpha,n100_p8") != std::string::npos);
}
