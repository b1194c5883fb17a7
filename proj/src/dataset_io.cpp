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

#include "mscs/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>
#include <vector>

#include "mscs/error.hpp"

namespace mscs {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' ||
                        s.back() == '"')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    fields.push_back(Trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

double ParseDouble(std::string_view s, int line_no) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                       ": cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

// Column role parsed from a header name: ('y', 0) for a bare y, ('y', k) or
// ('x', k) for indexed names.
struct ColumnRole {
  char prefix;
  int index;
};

ColumnRole ParseHeader(std::string_view name) {
  if (name == "y") return {'y', 0};
  if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'y')) {
    int idx = 0;
    auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
    if (ec == std::errc() && ptr == name.data() + name.size() && idx >= 1) {
      return {name[0], idx};
    }
  }
  throw Error(ErrorCode::kParse, "unrecognized column '" + std::string(name) +
                                     "' (expected y, y1..yp, x1..xp)");
}

}  // namespace

Dataset ReadCsv(std::istream& in, Family family) {
  std::string line;
  int line_no = 0;
  std::vector<ColumnRole> roles;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty() && line[0] != '#') break;
  }
  if (Trim(line).empty() || line[0] == '#') {
    throw Error(ErrorCode::kInvalidArgument, "no observations (empty CSV)");
  }
  for (std::string_view name : SplitFields(line)) roles.push_back(ParseHeader(name));

  std::map<int, int> y_cols;
  std::map<int, int> x_cols;
  for (int c = 0; c < static_cast<int>(roles.size()); ++c) {
    auto& target = roles[c].prefix == 'y' ? y_cols : x_cols;
    if (!target.emplace(roles[c].index, c).second) {
      throw Error(ErrorCode::kParse, "duplicate column in header");
    }
  }
  const bool regression = IsRegression(family);
  if (regression) {
    if (y_cols.size() != 1 || y_cols.count(0) != 1 || x_cols.empty()) {
      throw Error(ErrorCode::kParse, "regression data needs one y column and x1..xp");
    }
  } else if (!x_cols.empty() || y_cols.empty() || y_cols.count(0) != 0) {
    throw Error(ErrorCode::kParse,
                std::string(FamilyName(family)) + " data needs columns y1..yp only");
  }
  auto check_contiguous = [](const std::map<int, int>& cols, char prefix) {
    int expect = 1;
    for (const auto& [idx, col] : cols) {
      if (idx != 0 && idx != expect) {
        throw Error(ErrorCode::kParse, std::string("missing column ") + prefix +
                                           std::to_string(expect));
      }
      ++expect;
    }
  };
  if (!regression) check_contiguous(y_cols, 'y');
  check_contiguous(x_cols, 'x');

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty() || line[0] == '#') continue;
    const auto fields = SplitFields(line);
    if (fields.size() != roles.size()) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(roles.size()) + " fields");
    }
    std::vector<double> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) row[c] = ParseDouble(fields[c], line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::kInvalidArgument, "no observations");

  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd y(n, static_cast<int>(y_cols.size()));
  Eigen::MatrixXd x(regression ? n : 0, static_cast<int>(regression ? x_cols.size() : 0));
  for (int i = 0; i < n; ++i) {
    int j = 0;
    for (const auto& [idx, col] : y_cols) y(i, j++) = rows[i][col];
    j = 0;
    if (regression) {
      for (const auto& [idx, col] : x_cols) x(i, j++) = rows[i][col];
    }
  }
  return Dataset::Make(family, std::move(y), std::move(x));
}

Dataset ReadCsvFile(const std::string& path, Family family) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open '" + path + "'");
  return ReadCsv(in, family);
}

void WriteCsv(std::ostream& out, const Dataset& data) {
  const bool regression = IsRegression(data.family());
  std::vector<std::string> header;
  if (regression) {
    header.push_back("y");
    for (int j = 1; j <= data.x().cols(); ++j) header.push_back("x" + std::to_string(j));
  } else {
    for (int j = 1; j <= data.y().cols(); ++j) header.push_back("y" + std::to_string(j));
  }
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  char buf[64];
  auto put = [&](double v) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, ptr - buf);
  };
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.y().cols(); ++j) {
      if (j) out << ',';
      put(data.y()(i, j));
    }
    if (regression) {
      for (int j = 0; j < data.x().cols(); ++j) {
        out << ',';
        put(data.x()(i, j));
      }
    }
    out << '\n';
  }
}

}  // namespace mscs
