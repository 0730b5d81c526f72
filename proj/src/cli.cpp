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

#include "underfit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "underfit/csv.hpp"
#include "underfit/dataset.hpp"
#include "underfit/errors.hpp"
#include "underfit/log.hpp"
#include "underfit/svg.hpp"

namespace underfit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string joined(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "'");
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

void save_overlay_svg(const Dataset& ds, const FitResult& result,
                      const std::string& path) {
  SvgPlot plot(520, 520, -0.05, 1.05, -0.05, 1.05, "detected models");
  const auto& colors = SvgPlot::palette();
  // Points, colored by exclusive assignment when present.
  std::vector<std::vector<double>> xs(result.selected.size() + 1),
      ys(result.selected.size() + 1);
  for (Index i = 0; i < ds.points.rows(); ++i) {
    int label = 0;
    if (!result.assignment.empty()) label = result.assignment[static_cast<std::size_t>(i)];
    xs[static_cast<std::size_t>(label)].push_back(ds.points(i, 0));
    ys[static_cast<std::size_t>(label)].push_back(ds.points(i, 1));
  }
  plot.scatter(xs[0], ys[0], "#bbbbbb", 1.6);
  for (std::size_t t = 1; t < xs.size(); ++t) {
    plot.scatter(xs[t], ys[t], colors[(t - 1) % colors.size()], 2.0);
  }
  for (std::size_t t = 0; t < result.selected.size(); ++t) {
    const auto& model = result.all_candidates[static_cast<std::size_t>(result.selected[t])]
                            .theta_hat;
    const std::string& color = colors[t % colors.size()];
    if (model.family == ModelFamily::kLine2D) {
      // n.x + c = 0 clipped to the viewport by sliding along the direction.
      const double nx = model.theta[0], ny = model.theta[1], c = model.theta[2];
      const double px = -c * nx, py = -c * ny;  // closest point to origin
      const double dx = -ny, dy = nx;
      plot.line(px - 2.0 * dx, py - 2.0 * dy, px + 2.0 * dx, py + 2.0 * dy, color, 1.2);
    } else if (model.family == ModelFamily::kCircle2D) {
      plot.circle(model.theta[0], model.theta[1], model.theta[2], color, 1.2);
    }
  }
  write_text(path, plot.str());
}

json models_json(const FitResult& result) {
  json models = json::array();
  for (int idx : result.selected) {
    const Bicluster& bc = result.all_candidates[static_cast<std::size_t>(idx)];
    models.push_back({{"family", family_name(bc.theta_hat.family)},
                      {"theta", std::vector<double>(bc.theta_hat.theta.data(),
                                                    bc.theta_hat.theta.data() +
                                                        bc.theta_hat.theta.size())},
                      {"p_value", bc.p_value},
                      {"d_minus", bc.d_minus},
                      {"support_size", bc.support_size}});
  }
  return models;
}

json diagnostics_json(const FitResult& result) {
  json iters = json::array();
  for (const auto& it : result.diagnostics.iterations) {
    iters.push_back({{"j_star", it.j_star},
                     {"active_before", it.active_before},
                     {"active_after", it.active_after},
                     {"nmu_iterations", it.nmu_iterations},
                     {"nmu_relative_residual", it.nmu_relative_residual},
                     {"min_margin", it.min_margin},
                     {"kept", it.kept},
                     {"reason", it.reason}});
  }
  json cands = json::array();
  for (const auto& bc : result.all_candidates) {
    cands.push_back({{"p_value", bc.p_value},
                     {"d_minus", bc.d_minus},
                     {"kept", bc.kept},
                     {"reason", bc.discard_reason},
                     {"support_size", bc.support_size},
                     {"anchor_column", bc.anchor_column}});
  }
  return {{"pool_size", result.diagnostics.pool_size},
          {"prefilter_discarded", result.diagnostics.prefilter_discarded},
          {"iterations", std::move(iters)},
          {"candidates", std::move(cands)}};
}

FitResult run_pipeline(const Dataset& ds, const std::string& family_flag,
                       FitConfig cfg, ModelFamily* family_out) {
  ModelFamily family = ds.family;
  if (!family_flag.empty()) {
    family = family_from_name(family_flag);
    if (family != ds.family) {
      throw InvalidParams("requested family '" + family_flag +
                          "' does not match dataset family '" + family_name(ds.family) + "'");
    }
  }
  if (family_out) *family_out = family;
  return fit_models(ds.points, family, cfg);
}

double fit_misclassification(const Dataset& ds, const FitResult& result) {
  std::vector<int> predicted;
  if (!result.assignment.empty()) {
    predicted = result.assignment;
  } else if (!result.selected.empty()) {
    predicted = assign_exclusive(result.all_candidates, result.selected, ds.points);
  } else {
    predicted.assign(static_cast<std::size_t>(ds.points.rows()), 0);
  }
  return misclassification_error(predicted, ds.labels);
}

}  // namespace

int run_synth(const SynthCommand& cmd) {
  const SynthResult synth = synth_dataset(cmd.kind, cmd.params);
  write_dataset_json(cmd.output, synth.data);
  json summary = {{"kind", cmd.kind},
                  {"family", family_name(synth.data.family)},
                  {"points", synth.data.points.rows()},
                  {"models", synth.truth.size()},
                  {"output", cmd.output}};
  std::cout << summary.dump() << std::endl;
  return 0;
}

int run_nmu(const NmuCommand& cmd) {
  ensure_dir(cmd.output_dir);
  const Matd a = read_matrix_csv(cmd.input);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) < 0.0) {
        throw NegativeEntry(cmd.input + ": negative entry at row " + std::to_string(i + 1) +
                            ", column " + std::to_string(j + 1));
      }
    }
  }
  NmuConfig cfg = cmd.config;
  cfg.record_history = true;
  const auto factors = extract_factors(a, cmd.rank, cfg);

  Matd u(a.rows(), static_cast<Index>(factors.size()));
  Matd v(a.cols(), static_cast<Index>(factors.size()));
  Matd reconstruction = Matd::Zero(a.rows(), a.cols());
  json factor_meta = json::array();
  std::vector<std::vector<double>> histories;
  for (std::size_t t = 0; t < factors.size(); ++t) {
    u.col(static_cast<Index>(t)) = factors[t].u;
    v.col(static_cast<Index>(t)) = factors[t].v;
    reconstruction += factors[t].u * factors[t].v.transpose();
    factor_meta.push_back({{"iterations_used", factors[t].iterations_used},
                           {"converged", factors[t].converged},
                           {"relative_residual_history", factors[t].history},
                           {"energy_fraction",
                            std::pow((factors[t].u * factors[t].v.transpose()).norm(), 2) /
                                std::pow(a.norm(), 2)}});
    histories.push_back(factors[t].history);
  }
  write_matrix_csv(joined(cmd.output_dir, "u.csv"), u);
  write_matrix_csv(joined(cmd.output_dir, "v.csv"), v);

  const Matd residual = a - reconstruction;
  Index negatives = 0;
  std::vector<double> residual_values;
  residual_values.reserve(static_cast<std::size_t>(residual.size()));
  for (Index i = 0; i < residual.rows(); ++i) {
    for (Index j = 0; j < residual.cols(); ++j) {
      residual_values.push_back(residual(i, j));
      negatives += (residual(i, j) < 0.0);
    }
  }
  json report = {{"input", cmd.input},
                 {"rank_requested", cmd.rank},
                 {"factors_extracted", factors.size()},
                 {"relative_error", residual.norm() / a.norm()},
                 {"min_residual", residual.minCoeff()},
                 {"negative_residuals", negatives},
                 {"factors", std::move(factor_meta)}};
  write_text(joined(cmd.output_dir, "factors.json"), report.dump(2) + "\n");
  write_text(joined(cmd.output_dir, "convergence.svg"),
             plot_convergence(histories, "relative residual per factor"));
  write_text(joined(cmd.output_dir, "residual_hist.svg"),
             plot_histogram(residual_values, 60, "residual values"));
  UNDERFIT_LOG_INFO("nmu: " << factors.size() << " factors, "
                            << negatives << " negative residual entries");
  std::cout << report.dump() << std::endl;
  return 0;
}

int run_fit(const FitCommand& cmd) {
  ensure_dir(cmd.output_dir);
  const Dataset ds = read_dataset_json(cmd.input);
  ModelFamily family = ds.family;
  const FitResult result = run_pipeline(ds, cmd.family, cmd.config, &family);

  Matd mem(ds.points.rows(), static_cast<Index>(result.selected.size()));
  for (std::size_t t = 0; t < result.selected.size(); ++t) {
    mem.col(static_cast<Index>(t)) =
        result.all_candidates[static_cast<std::size_t>(result.selected[t])].memberships;
  }
  const std::string mem_csv = joined(cmd.output_dir, "memberships.csv");
  if (mem.cols() > 0) write_matrix_csv(mem_csv, mem);

  json out = {{"models", models_json(result)},
              {"memberships", "memberships.csv"},
              {"assignment", result.assignment},
              {"misclassification", nullptr},
              {"diagnostics", diagnostics_json(result)}};
  if (ds.has_labels()) out["misclassification"] = fit_misclassification(ds, result);
  write_text(joined(cmd.output_dir, "result.json"), out.dump(2) + "\n");
  if (datum_dim(family) == 2) {
    save_overlay_svg(ds, result, joined(cmd.output_dir, "overlay.svg"));
  }
  std::cout << "models: " << result.selected.size() << "\n";
  if (ds.has_labels()) {
    std::cout << "misclassification: " << out["misclassification"].dump() << "\n";
  }
  return 0;
}

int run_sweep(const SweepCommand& cmd) {
  if (cmd.sigmas.empty()) throw InvalidParams("sweep: empty sigma list");
  ensure_dir(cmd.output_dir);
  const Dataset ds = read_dataset_json(cmd.input);

  std::string csv = "sigma,models,misclassification,status\n";
  std::vector<double> ok_sigmas, model_counts, errors;
  for (double sigma : cmd.sigmas) {
    FitConfig cfg = cmd.config;
    cfg.sigma = sigma;
    try {
      const FitResult result = run_pipeline(ds, cmd.family, cfg, nullptr);
      const double me = ds.has_labels() ? fit_misclassification(ds, result) : -1.0;
      csv += std::to_string(sigma) + "," + std::to_string(result.selected.size()) + "," +
             (ds.has_labels() ? std::to_string(me) : std::string("")) + ",ok\n";
      ok_sigmas.push_back(sigma);
      model_counts.push_back(static_cast<double>(result.selected.size()));
      errors.push_back(std::max(me, 0.0));
    } catch (const Error& e) {
      csv += std::to_string(sigma) + ",,," + std::string(e.what()) + "\n";
      UNDERFIT_LOG_WARN("sweep sigma=" << sigma << " failed: " << e.what());
    }
  }
  write_text(joined(cmd.output_dir, "sweep.csv"), csv);

  double max_models = 1.0;
  for (double c : model_counts) max_models = std::max(max_models, c);
  SvgPlot plot(480, 320, cmd.sigmas.front(), cmd.sigmas.back(), 0.0, max_models * 1.1,
               "models (red) / misclassification x10 (blue) vs sigma");
  std::vector<double> scaled_err;
  for (double e : errors) scaled_err.push_back(10.0 * e);
  plot.polyline(ok_sigmas, model_counts, "#d62728");
  plot.polyline(ok_sigmas, scaled_err, "#1f77b4");
  write_text(joined(cmd.output_dir, "sweep.svg"), plot.str());
  std::cout << csv;
  return 0;
}

int run_report(const ReportCommand& cmd) {
  ensure_dir(cmd.output_dir);
  if (cmd.what == "pref") {
    if (!(cmd.sigma > 0.0)) throw InvalidParams("report pref: sigma must be > 0");
    const Dataset ds = read_dataset_json(cmd.input);
    const Index pool_size =
        cmd.pool_size > 0 ? cmd.pool_size : default_pool_size(ds.family);
    auto pool = sample_pool(ds.points, ds.family, pool_size, cmd.seed);
    const PreferenceMatrix pref = build_preference(ds.points, std::move(pool), cmd.sigma);
    write_matrix_csv(joined(cmd.output_dir, "preference.csv"), pref.P);
    write_text(joined(cmd.output_dir, "preference.svg"),
               plot_heatmap(pref.P, "preference matrix"));
    std::cout << "{\"rows\": " << pref.rows() << ", \"cols\": " << pref.cols() << "}"
              << std::endl;
    return 0;
  }
  if (cmd.what == "conv") {
    std::ifstream in(cmd.input);
    if (!in) throw IoError("cannot open '" + cmd.input + "' for reading");
    json j;
    in >> j;
    std::vector<std::vector<double>> histories;
    for (const auto& f : j.at("factors")) {
      histories.push_back(f.at("relative_residual_history").get<std::vector<double>>());
    }
    write_text(joined(cmd.output_dir, "convergence.svg"),
               plot_convergence(histories, "relative residual per factor"));
    std::cout << "{\"factors\": " << histories.size() << "}" << std::endl;
    return 0;
  }
  throw InvalidParams("report: unknown mode '" + cmd.what + "'");
}

}  // namespace underfit
