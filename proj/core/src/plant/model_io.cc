// Copyright 2026 The scope-rt Authors.
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

#include "scope/plant/model_io.h"

#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace scope::plant {

namespace {

using nlohmann::json;

Eigen::MatrixXd matrix_of(const json& j, const char* name) {
  const auto& rows = j.at(name);
  if (!rows.is_array() || rows.empty()) throw std::invalid_argument(std::string(name) + " must be a non-empty array");
  const auto cols = rows.at(0).size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionError(std::string(name) + " has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd vector_of(const json& j, const char* name) {
  const auto v = j.at(name).get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

LtiModel model_from_json(std::string_view text) {
  const auto j = json::parse(text);
  LtiModel model;
  model.A = matrix_of(j, "A");
  model.B = matrix_of(j, "B");
  model.C = matrix_of(j, "C");
  model.theta = vector_of(j, "theta");
  model.omega = vector_of(j, "omega");
  model.step_us = j.value("step_us", std::int64_t{10000});
  model.check();
  return model;
}

std::string model_to_json(const LtiModel& model) {
  const json j = {{"A", to_json(model.A)},         {"B", to_json(model.B)},
                  {"C", to_json(model.C)},         {"theta", to_json(model.theta)},
                  {"omega", to_json(model.omega)}, {"step_us", model.step_us}};
  return j.dump(2);
}

LtiModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return model_from_json(text.str());
}

void write_trajectory_csv(std::ostream& out, const PlantTrajectory& traj) {
  if (traj.states.empty()) return;
  const auto k = traj.states.front().size();
  const auto m = traj.controls.empty() ? 0 : traj.controls.front().size();
  out << "t";
  for (Eigen::Index i = 0; i < k; ++i) out << ",x" << i;
  for (Eigen::Index i = 0; i < m; ++i) out << ",u" << i;
  out << ",tau_remaining\n";
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    out << t;
    for (Eigen::Index i = 0; i < k; ++i) out << ',' << traj.states[t][i];
    const bool has_u = t < traj.controls.size();
    for (Eigen::Index i = 0; i < m; ++i) {
      out << ',';
      if (has_u) out << traj.controls[t][i];
    }
    out << ',';
    if (t < traj.tau_remaining.size()) out << traj.tau_remaining[t];
    out << '\n';
  }
}

}  // namespace scope::plant
