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

#include "mscs/error.hpp"

namespace mscs {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kPartitionSpaceTooLarge: return "PartitionSpaceTooLarge";
    case ErrorCode::kEnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorCode::kModelSpaceMismatch: return "ModelSpaceMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kFitDiverged: return "FitDiverged";
    case ErrorCode::kSingularBlock: return "SingularBlock";
    case ErrorCode::kRankDeficientDesign: return "RankDeficientDesign";
    case ErrorCode::kStateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::kNestingViolation: return "NestingViolation";
    case ErrorCode::kUnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kNoSurvivors: return "NoSurvivors";
  }
  return "Unknown";
}

}  // namespace mscs
