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

#ifndef UNDERFIT_CLI_HPP_
#define UNDERFIT_CLI_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "underfit/nmu.hpp"
#include "underfit/robustfit.hpp"
#include "underfit/synth.hpp"

namespace underfit {

// Command runners shared by the command-line tool and the test suites.
// Primary outputs land in `output_dir`; a short machine-readable summary is
// printed to stdout; diagnostics go to stderr.

struct SynthCommand {
  std::string kind = "star";
  SynthParams params;
  std::string output = "dataset.json";
};
int run_synth(const SynthCommand& cmd);

struct NmuCommand {
  std::string input;
  int rank = 1;
  NmuConfig config;
  std::string output_dir = ".";
};
int run_nmu(const NmuCommand& cmd);

struct FitCommand {
  std::string input;
  std::string family;  // empty -> dataset family
  FitConfig config;
  std::string output_dir = ".";
};
int run_fit(const FitCommand& cmd);

struct SweepCommand {
  std::string input;
  std::string family;
  std::vector<double> sigmas;
  FitConfig config;  // sigma ignored, taken from `sigmas`
  std::string output_dir = ".";
};
int run_sweep(const SweepCommand& cmd);

struct ReportCommand {
  std::string what = "pref";  // pref | conv
  std::string input;
  double sigma = 0.0;
  Index pool_size = 0;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
};
int run_report(const ReportCommand& cmd);

}  // namespace underfit

#endif  // UNDERFIT_CLI_HPP_
