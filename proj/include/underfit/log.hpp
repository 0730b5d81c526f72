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

#ifndef UNDERFIT_LOG_HPP_
#define UNDERFIT_LOG_HPP_

#include <cstdlib>
#include <iostream>
#include <string>

namespace underfit {

enum class LogLevel { kQuiet = 0, kError = 1, kWarn = 2, kInfo = 3, kDebug = 4 };

// Verbosity from UNDERFIT_LOG (quiet|error|warn|info|debug or 0..4);
// defaults to warnings. Diagnostics go to stderr only.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("UNDERFIT_LOG");
    if (!env) return LogLevel::kWarn;
    const std::string s(env);
    if (s == "quiet" || s == "0") return LogLevel::kQuiet;
    if (s == "error" || s == "1") return LogLevel::kError;
    if (s == "warn" || s == "2") return LogLevel::kWarn;
    if (s == "info" || s == "3") return LogLevel::kInfo;
    if (s == "debug" || s == "4") return LogLevel::kDebug;
    return LogLevel::kWarn;
  }();
  return level;
}

}  // namespace underfit

#define UNDERFIT_LOG_AT(level, tag, expr)                            \
  do {                                                               \
    if (::underfit::log_level() >= (level)) {                        \
      std::cerr << "[underfit " tag "] " << expr << std::endl;       \
    }                                                                \
  } while (0)

#define UNDERFIT_LOG_ERROR(expr) UNDERFIT_LOG_AT(::underfit::LogLevel::kError, "error", expr)
#define UNDERFIT_LOG_WARN(expr) UNDERFIT_LOG_AT(::underfit::LogLevel::kWarn, "warn", expr)
#define UNDERFIT_LOG_INFO(expr) UNDERFIT_LOG_AT(::underfit::LogLevel::kInfo, "info", expr)
#define UNDERFIT_LOG_DEBUG(expr) UNDERFIT_LOG_AT(::underfit::LogLevel::kDebug, "debug", expr)

#endif  // UNDERFIT_LOG_HPP_
