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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "scope/plant/lti.h"

namespace scope::plant {

// Fresh command for step t given the current state.
using Controller = std::function<Eigen::VectorXd(std::size_t t, const Eigen::VectorXd& x)>;

struct DelaySpec {
  double tau_us = 0;
  std::size_t onset_t = 0;
  Eigen::VectorXd held_command;
};

struct PlantTrajectory {
  std::vector<Eigen::VectorXd> states;    // x_0 .. x_T
  std::vector<Eigen::VectorXd> controls;  // u applied at each step
  std::vector<std::uint64_t> tau_remaining;  // held steps left, this one included
};

// Held steps for a delay: ceil(tau / step).
std::uint64_t held_steps(double tau_us, std::int64_t step_us);

PlantTrajectory simulate(const LtiModel& model, const Eigen::VectorXd& x0, const Controller& controller,
                         std::size_t steps);

// Steps in [onset, onset + held_steps) apply the held command without
// consulting the controller.
PlantTrajectory simulate_with_delay(const LtiModel& model, const Eigen::VectorXd& x0,
                                    const Controller& controller, const DelaySpec& delay,
                                    std::size_t steps);

enum class Bound : std::uint8_t { kLower, kUpper };

struct Verdict {
  bool resilient = true;
  std::size_t t = 0;
  Eigen::Index component = 0;
  Bound bound = Bound::kUpper;
  double value = 0;
};

Verdict check_resiliency(const std::vector<Eigen::VectorXd>& states, const Eigen::VectorXd& theta,
                         const Eigen::VectorXd& omega);
inline Verdict check_resiliency(const PlantTrajectory& traj, const Eigen::VectorXd& theta,
                                const Eigen::VectorXd& omega) {
  return check_resiliency(traj.states, theta, omega);
}

}  // namespace scope::plant
