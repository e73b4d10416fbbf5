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

#include <iosfwd>
#include <string>
#include <string_view>

#include "scope/plant/lti.h"
#include "scope/plant/simulate.h"

namespace scope::plant {

// {"A": [[..]], "B": [[..]], "C": [[..]], "theta": [..], "omega": [..], "step_us": N}
LtiModel model_from_json(std::string_view text);
std::string model_to_json(const LtiModel& model);
LtiModel load_model(const std::string& path);

// Columns: t, x0.., u0.., tau_remaining. The final state row has empty
// control columns.
void write_trajectory_csv(std::ostream& out, const PlantTrajectory& traj);

}  // namespace scope::plant
