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

#include "scope/plant/simulate.h"

#include <cmath>
#include <stdexcept>

namespace scope::plant {

std::uint64_t held_steps(double tau_us, std::int64_t step_us) {
  if (tau_us < 0) throw std::invalid_argument("control delay must not be negative");
  if (step_us <= 0) throw std::invalid_argument("step period must be positive");
  return static_cast<std::uint64_t>(std::ceil(tau_us / static_cast<double>(step_us)));
}

PlantTrajectory simulate(const LtiModel& model, const Eigen::VectorXd& x0, const Controller& controller,
                         std::size_t steps) {
  return simulate_with_delay(model, x0, controller, DelaySpec{}, steps);
}

PlantTrajectory simulate_with_delay(const LtiModel& model, const Eigen::VectorXd& x0,
                                    const Controller& controller, const DelaySpec& delay,
                                    std::size_t steps) {
  const auto held = held_steps(delay.tau_us, model.step_us);
  if (held > 0 && delay.held_command.size() != model.m()) {
    throw DimensionError("held command has wrong dimension");
  }
  PlantTrajectory traj;
  traj.states.reserve(steps + 1);
  traj.states.push_back(x0);
  for (std::size_t t = 0; t < steps; ++t) {
    const bool holding = held > 0 && t >= delay.onset_t && t < delay.onset_t + held;
    const Eigen::VectorXd u = holding ? delay.held_command : controller(t, traj.states.back());
    traj.tau_remaining.push_back(holding ? delay.onset_t + held - t : 0);
    traj.states.push_back(lti_step(model, traj.states.back(), u));
    traj.controls.push_back(u);
  }
  return traj;
}

Verdict check_resiliency(const std::vector<Eigen::VectorXd>& states, const Eigen::VectorXd& theta,
                         const Eigen::VectorXd& omega) {
  if (states.empty()) throw std::invalid_argument("empty trajectory");
  for (std::size_t t = 0; t < states.size(); ++t) {
    const auto& x = states[t];
    if (x.size() != theta.size() || x.size() != omega.size()) throw DimensionError("bound dimension mismatch");
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] < theta[i]) return {false, t, i, Bound::kLower, x[i]};
      if (x[i] > omega[i]) return {false, t, i, Bound::kUpper, x[i]};
    }
  }
  return {};
}

}  // namespace scope::plant
