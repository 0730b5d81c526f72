// Copyright 2026 The Underfit Authors.
//
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

#ifndef UNDERFIT_CSV_HPP_
#define UNDERFIT_CSV_HPP_

#include <string>

#include "underfit/types.hpp"

namespace underfit {

// Plain CSV matrix format: one row per line, comma-separated decimal
// literals, no header. The reader rejects ragged rows, empty cells and
// non-finite values, reporting 1-based line numbers.
Matd read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Matd& m);

}  // namespace underfit

#endif  // UNDERFIT_CSV_HPP_
