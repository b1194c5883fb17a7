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

#ifndef MSCS_DATASET_IO_HPP_
#define MSCS_DATASET_IO_HPP_

#include <iosfwd>
#include <string>

#include "mscs/likelihood.hpp"

namespace mscs {

// Reads a headed CSV. Responses are `y` (regression families) or `y1..yp`;
// covariates are `x1..xp`. Column order in the file is free; numbers use
// '.' as decimal separator regardless of the process locale.
Dataset ReadCsv(std::istream& in, Family family);
Dataset ReadCsvFile(const std::string& path, Family family);

void WriteCsv(std::ostream& out, const Dataset& data);

}  // namespace mscs

#endif  // MSCS_DATASET_IO_HPP_
