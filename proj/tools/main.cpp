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

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <json.hpp>

#include "underfit/cli.hpp"
#include "underfit/errors.hpp"
#include "underfit/log.hpp"

namespace {

using nlohmann::json;

// Config-file support with precedence CLI flags > config JSON > defaults.
// The config maps long option names (without dashes) to values; unknown
// keys are rejected.
class ConfigMerge {
 public:
  void track(CLI::App* app, CLI::Option* opt, const std::string& key) {
    entries_.push_back({app, opt, key});
  }

  void apply(const std::string& config_path) {
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    if (!in) throw underfit::IoError("cannot open config '" + config_path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::parse_error& e) {
      throw underfit::ParseError(config_path + ": " + e.what());
    }
    for (const auto& [key, value] : j.items()) {
      bool known = false;
      for (const auto& entry : entries_) {
        if (entry.key != key) continue;
        known = true;
        if (entry.opt->count() == 0) {  // CLI beats config
          const std::string text =
              value.is_string() ? value.get<std::string>() : value.dump();
          entry.opt->add_result(text);
          entry.opt->run_callback();
        }
      }
      if (!known) {
        throw underfit::InvalidParams(config_path + ": unknown config key '" + key + "'");
      }
    }
  }

 private:
  struct Entry {
    CLI::App* app;
    CLI::Option* opt;
    std::string key;
  };
  std::vector<Entry> entries_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"underfit: rank-one NMU by ADMM and robust multi-model fitting"};
  app.require_subcommand(1);
  std::string config_path;
  ConfigMerge merge;

  // synth ------------------------------------------------------------
  underfit::SynthCommand synth;
  auto* synth_app = app.add_subcommand("synth", "generate a labeled synthetic dataset");
  merge.track(synth_app, synth_app->add_option("--kind", synth.kind,
              "star|stairs|circles|homography|fundamental"), "kind");
  merge.track(synth_app, synth_app->add_option("--k", synth.params.k, "model count"), "k");
  merge.track(synth_app, synth_app->add_option("--points", synth.params.total_points,
              "total points"), "points");
  merge.track(synth_app, synth_app->add_option("--noise", synth.params.noise,
              "Gaussian noise std"), "noise");
  merge.track(synth_app, synth_app->add_option("--outlier-ratio", synth.params.outlier_ratio,
              "outlier fraction in [0,1)"), "outlier_ratio");
  merge.track(synth_app, synth_app->add_option("--margin", synth.params.margin,
              "outlier keep-away distance"), "margin");
  merge.track(synth_app, synth_app->add_option("--seed", synth.params.seed, "RNG seed"),
              "seed");
  merge.track(synth_app, synth_app->add_option("--output", synth.output, "dataset path"),
              "output");
  synth_app->add_option("--config", config_path, "JSON config file");

  // nmu --------------------------------------------------------------
  underfit::NmuCommand nmu;
  auto* nmu_app = app.add_subcommand("nmu", "multi-factor rank-one NMU of a CSV matrix");
  merge.track(nmu_app, nmu_app->add_option("--input", nmu.input, "matrix CSV")->required(),
              "input");
  merge.track(nmu_app, nmu_app->add_option("--rank", nmu.rank, "factors to extract"),
              "rank");
  merge.track(nmu_app, nmu_app->add_option("--gamma", nmu.config.gamma, "ADMM penalty"),
              "gamma");
  merge.track(nmu_app, nmu_app->add_option("--xi", nmu.config.xi, "dual step scale"), "xi");
  merge.track(nmu_app, nmu_app->add_option("--tau", nmu.config.tau, "stop tolerance"),
              "tau");
  merge.track(nmu_app, nmu_app->add_option("--max-iters", nmu.config.max_iters,
              "iteration cap"), "max_iters");
  bool no_polish = false;
  merge.track(nmu_app, nmu_app->add_flag("--no-polish", no_polish,
              "skip the exact-feasibility polish"), "no_polish");
  merge.track(nmu_app, nmu_app->add_option("--output-dir", nmu.output_dir, "output dir"),
              "output_dir");
  nmu_app->add_option("--config", config_path, "JSON config file");

  // fit ----------------------------------------------------------------
  underfit::FitCommand fit;
  auto* fit_app = app.add_subcommand("fit", "robust multi-model fitting of a dataset");
  bool no_prefilter = false, no_exclusive = false;
  merge.track(fit_app, fit_app->add_option("--input", fit.input, "dataset JSON")->required(),
              "input");
  merge.track(fit_app, fit_app->add_option("--family", fit.family,
              "line2d|circle2d|homography|fundamental"), "family");
  merge.track(fit_app, fit_app->add_option("--sigma", fit.config.sigma,
              "soft-membership scale")->required(), "sigma");
  merge.track(fit_app, fit_app->add_option("--seed", fit.config.seed, "RNG seed"), "seed");
  merge.track(fit_app, fit_app->add_option("--pool-size", fit.config.pool_size,
              "hypothesis count (0 = default)"), "pool_size");
  merge.track(fit_app, fit_app->add_option("--corr-threshold", fit.config.corr_threshold,
              "factor redundancy threshold"), "corr_threshold");
  merge.track(fit_app, fit_app->add_option("--max-biclusters", fit.config.max_biclusters,
              "extraction cap"), "max_biclusters");
  merge.track(fit_app, fit_app->add_option("--alpha", fit.config.alpha_override,
              "test level override (0 = automatic)"), "alpha");
  merge.track(fit_app, fit_app->add_flag("--no-prefilter", no_prefilter,
              "skip the column prefilter"), "no_prefilter");
  merge.track(fit_app, fit_app->add_flag("--no-exclusive", no_exclusive,
              "skip exclusive assignment"), "no_exclusive");
  merge.track(fit_app, fit_app->add_option("--output-dir", fit.output_dir, "output dir"),
              "output_dir");
  fit_app->add_option("--config", config_path, "JSON config file");

  // sweep --------------------------------------------------------------
  underfit::SweepCommand sweep;
  auto* sweep_app = app.add_subcommand("sweep", "fit across a list of sigma values");
  bool sweep_no_prefilter = false, sweep_no_exclusive = false;
  merge.track(sweep_app, sweep_app->add_option("--input", sweep.input,
              "dataset JSON")->required(), "input");
  merge.track(sweep_app, sweep_app->add_option("--family", sweep.family, "model family"),
              "family");
  merge.track(sweep_app, sweep_app->add_option("--sigmas", sweep.sigmas,
              "sigma values")->delimiter(','), "sigmas");
  merge.track(sweep_app, sweep_app->add_option("--seed", sweep.config.seed, "RNG seed"),
              "seed");
  merge.track(sweep_app, sweep_app->add_option("--pool-size", sweep.config.pool_size,
              "hypothesis count (0 = default)"), "pool_size");
  merge.track(sweep_app, sweep_app->add_flag("--no-prefilter", sweep_no_prefilter,
              "skip the column prefilter"), "no_prefilter");
  merge.track(sweep_app, sweep_app->add_flag("--no-exclusive", sweep_no_exclusive,
              "skip exclusive assignment"), "no_exclusive");
  merge.track(sweep_app, sweep_app->add_option("--output-dir", sweep.output_dir,
              "output dir"), "output_dir");
  sweep_app->add_option("--config", config_path, "JSON config file");

  // report -------------------------------------------------------------
  underfit::ReportCommand report;
  auto* report_app = app.add_subcommand("report", "plots from datasets or factor files");
  merge.track(report_app, report_app->add_option("--what", report.what, "pref|conv"),
              "what");
  merge.track(report_app, report_app->add_option("--input", report.input,
              "dataset JSON or factors.json")->required(), "input");
  merge.track(report_app, report_app->add_option("--sigma", report.sigma,
              "soft-membership scale (pref)"), "sigma");
  merge.track(report_app, report_app->add_option("--pool-size", report.pool_size,
              "hypothesis count (pref)"), "pool_size");
  merge.track(report_app, report_app->add_option("--seed", report.seed, "RNG seed"),
              "seed");
  merge.track(report_app, report_app->add_option("--output-dir", report.output_dir,
              "output dir"), "output_dir");
  report_app->add_option("--config", config_path, "JSON config file");

  try {
    app.parse(argc, argv);
    merge.apply(config_path);
    if (synth_app->parsed()) return underfit::run_synth(synth);
    if (nmu_app->parsed()) {
      nmu.config.polish = !no_polish;
      return underfit::run_nmu(nmu);
    }
    if (fit_app->parsed()) {
      fit.config.prefilter = !no_prefilter;
      fit.config.exclusive_assignment = !no_exclusive;
      return underfit::run_fit(fit);
    }
    if (sweep_app->parsed()) {
      sweep.config.prefilter = !sweep_no_prefilter;
      sweep.config.exclusive_assignment = !sweep_no_exclusive;
      return underfit::run_sweep(sweep);
    }
    if (report_app->parsed()) return underfit::run_report(report);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const underfit::Error& e) {
    std::cerr << "underfit: error: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "underfit: unexpected error: " << e.what() << std::endl;
    return 2;
  }
  return 0;
}
