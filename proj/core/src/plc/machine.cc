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

#include "scope/plc/machine.h"

namespace scope::plc {

IoImage IoImage::with_widths(IoWidths widths) {
  IoImage image;
  image.di.assign(widths.di, 0);
  image.ai.assign(widths.ai, 0);
  image.do_.assign(widths.do_, 0);
  return image;
}

IoWidths IoImage::widths() const {
  return {static_cast<std::uint32_t>(di.size()), static_cast<std::uint32_t>(ai.size()),
          static_cast<std::uint32_t>(do_.size())};
}

MachineState MachineState::for_program(const Program& program, IoWidths widths) {
  MachineState state;
  state.pc = Pc{program.entry, 0, false};
  state.timers.resize(program.timer_modes.size());
  for (std::size_t i = 0; i < program.timer_modes.size(); ++i) {
    state.timers[i].mode = program.timer_modes[i];
  }
  state.counters.resize(program.counter_count);
  state.io = IoImage::with_widths(widths);
  return state;
}

bool same_observables(const MachineState& a, const MachineState& b) {
  return a.registers == b.registers && a.io.do_ == b.io.do_ && a.timers == b.timers &&
         a.counters == b.counters;
}

}  // namespace scope::plc
