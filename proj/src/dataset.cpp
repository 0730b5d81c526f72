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

#include "underfit/dataset.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "underfit/errors.hpp"

namespace underfit {

using nlohmann::json;

Dataset read_dataset_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  for (const auto& [key, _] : j.items()) {
    if (key != "family" && key != "points" && key != "labels" && key != "meta") {
      throw ParseError(path + ": unknown key '" + key + "'");
    }
  }
  if (!j.contains("family") || !j.contains("points")) {
    throw ParseError(path + ": dataset requires 'family' and 'points'");
  }
  Dataset ds;
  ds.family = family_from_name(j.at("family").get<std::string>());
  const auto& pts = j.at("points");
  if (!pts.is_array() || pts.empty()) throw ParseError(path + ": 'points' must be a nonempty array");
  const Index dim = datum_dim(ds.family);
  ds.points.resize(static_cast<Index>(pts.size()), dim);
  Index row = 0;
  for (const auto& p : pts) {
    if (!p.is_array() || static_cast<Index>(p.size()) != dim) {
      throw ParseError(path + ": point " + std::to_string(row) + " must have " +
                       std::to_string(dim) + " coordinates");
    }
    for (Index c = 0; c < dim; ++c) {
      const double value = p.at(static_cast<std::size_t>(c)).get<double>();
      if (!std::isfinite(value)) {
        throw ParseError(path + ": non-finite coordinate at point " + std::to_string(row));
      }
      ds.points(row, c) = value;
    }
    ++row;
  }
  if (j.contains("labels")) {
    const auto& labels = j.at("labels");
    if (static_cast<Index>(labels.size()) != ds.points.rows()) {
      throw ParseError(path + ": 'labels' length must match 'points'");
    }
    ds.labels.reserve(labels.size());
    for (const auto& l : labels) ds.labels.push_back(l.get<int>());
  }
  if (j.contains("meta")) {
    for (const auto& [key, value] : j.at("meta").items()) {
      ds.meta[key] = value.get<double>();
    }
  }
  return ds;
}

void write_dataset_json(const std::string& path, const Dataset& ds) {
  json j;
  j["family"] = family_name(ds.family);
  json pts = json::array();
  for (Index i = 0; i < ds.points.rows(); ++i) {
    json p = json::array();
    for (Index c = 0; c < ds.points.cols(); ++c) p.push_back(ds.points(i, c));
    pts.push_back(std::move(p));
  }
  j["points"] = std::move(pts);
  if (!ds.labels.empty()) j["labels"] = ds.labels;
  if (!ds.meta.empty()) j["meta"] = ds.meta;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace underfit
