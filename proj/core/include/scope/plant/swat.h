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

#pragma once

#include <cstdint>

#include "scope/plant/lti.h"

namespace scope::plant {

// Raw-water tank of the first SWaT stage. Level in percent; the inlet valve
// adds `inflow` per step when open and downstream demand draws `outflow`.
struct TankConstants {
  double inflow = 2.0;
  double outflow = 0.5;
  double theta = 10.0;
  double omega = 100.0;
  double low = 30.0;   // valve opens below this level
  double high = 80.0;  // valve closes above this level
  double x0 = 65.0;
  std::int64_t step_us = 10000;
};

// k = 1, m = 2 with u = (valve, demand); demand is normally held at 1.
LtiModel swat_stage1_model(const TankConstants& c = {});

Eigen::VectorXd tank_command(bool valve_open, double demand = 1.0);

// Analog level sensor: level * 100, rounded and clamped to 16 bits.
std::uint16_t level_to_ai(double level);

// Set-dominant on/off control with an [low, high] band.
class HysteresisController {
 public:
  explicit HysteresisController(const TankConstants& c = {}) : low_(c.low), high_(c.high) {}
  bool update(double level);
  bool open() const { return open_; }

 private:
  double low_;
  double high_;
  bool open_ = false;
};

}  // namespace scope::plant
