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

#include "scope/runtime/control_delay.h"

namespace scope::runtime {

double control_delay(const DelayCase& c) {
  if (const auto* a = std::get_if<Aborted>(&c)) return a->delta_us;
  const auto& done = std::get<Completed>(c);
  return done.scan_us <= done.cycle_time_us ? 0.0 : done.scan_us - done.cycle_time_us;
}

}  // namespace scope::runtime
