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

#include <variant>

namespace scope::runtime {

// The PLC was aborted or restarted; actuators see no fresh command for delta.
struct Aborted {
  double delta_us = 0;
};

struct Completed {
  double scan_us = 0;
  double cycle_time_us = 0;
};

using DelayCase = std::variant<Aborted, Completed>;

// tau: delta when aborted, 0 when the scan met its deadline, otherwise the
// overrun past T_c.
double control_delay(const DelayCase& c);

}  // namespace scope::runtime
