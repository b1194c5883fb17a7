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

#ifndef MSCS_ERROR_HPP_
#define MSCS_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace mscs {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kPartitionSpaceTooLarge,
  kEnumerationCapExceeded,
  kModelSpaceMismatch,
  kDimensionMismatch,
  kFitDiverged,
  kSingularBlock,
  kRankDeficientDesign,
  kStateSpaceTooLarge,
  kNestingViolation,
  kUnsupportedFamily,
  kInvalidSpec,
  kNoSurvivors,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this type; `code()` lets callers
// (the CLI in particular) map failures to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code),
        detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace mscs

#endif  // MSCS_ERROR_HPP_
