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

#include "scope/plant/swat.h"

#include <algorithm>
#include <cmath>

namespace scope::plant {

LtiModel swat_stage1_model(const TankConstants& c) {
  LtiModel model;
  model.A = Eigen::MatrixXd::Identity(1, 1);
  model.B.resize(1, 2);
  model.B << c.inflow, -c.outflow;
  model.C = Eigen::MatrixXd::Identity(1, 1);
  model.theta = Eigen::VectorXd::Constant(1, c.theta);
  model.omega = Eigen::VectorXd::Constant(1, c.omega);
  model.step_us = c.step_us;
  model.check();
  return model;
}

Eigen::VectorXd tank_command(bool valve_open, double demand) {
  Eigen::VectorXd u(2);
  u << (valve_open ? 1.0 : 0.0), demand;
  return u;
}

std::uint16_t level_to_ai(double level) {
  const auto raw = std::lround(level * 100.0);
  return static_cast<std::uint16_t>(std::clamp<long>(raw, 0, 65535));
}

bool HysteresisController::update(double level) {
  if (level < low_) {
    open_ = true;
  } else if (level > high_) {
    open_ = false;
  }
  return open_;
}

}  // namespace scope::plant
