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

#ifndef UNDERFIT_ERRORS_HPP_
#define UNDERFIT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace underfit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroMatrix : Error { using Error::Error; };
struct DegenerateFactor : Error { using Error::Error; };
struct SingularModel : Error { using Error::Error; };
struct DegenerateSample : Error { using Error::Error; };
struct InsufficientSupport : Error { using Error::Error; };
struct PoolExhausted : Error { using Error::Error; };
struct EmptyPreference : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct NegativeEntry : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace underfit

#endif  // UNDERFIT_ERRORS_HPP_
