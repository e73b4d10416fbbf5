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

#include <array>
#include <cstdint>
#include <vector>

#include "scope/plc/program.h"

namespace scope::plc {

struct IoWidths {
  std::uint32_t di = 0;
  std::uint32_t ai = 0;
  std::uint32_t do_ = 0;
  friend bool operator==(const IoWidths&, const IoWidths&) = default;
};

// The process image. `net` is the network receive mailbox for this scan.
struct IoImage {
  std::vector<std::uint8_t> di;
  std::vector<std::uint16_t> ai;
  std::vector<std::uint8_t> do_;
  std::vector<std::uint8_t> net;

  static IoImage with_widths(IoWidths widths);
  IoWidths widths() const;
  friend bool operator==(const IoImage&, const IoImage&) = default;
};

struct TimerState {
  TimerMode mode = TimerMode::kOnDelay;
  std::int64_t preset_us = 0;
  std::int64_t elapsed_us = 0;
  bool output = false;
  friend bool operator==(const TimerState&, const TimerState&) = default;
};

struct CounterState {
  std::int64_t preset = 0;
  std::int64_t count = 0;
  bool output = false;
  bool last_input = false;  // for rising-edge detection
  friend bool operator==(const CounterState&, const CounterState&) = default;
};

struct CallRecord {
  BlockId return_block{};
  std::uint32_t return_index = 0;
  Address frame_base = 0;
  friend bool operator==(const CallRecord&, const CallRecord&) = default;
};

struct Pc {
  BlockId block{};
  std::uint32_t index = 0;
  bool halted = false;
  friend bool operator==(const Pc&, const Pc&) = default;
};

struct MachineState {
  Pc pc;
  std::array<std::int64_t, kRegisterCount> registers{};
  std::vector<CallRecord> frames;
  std::vector<TimerState> timers;
  std::vector<CounterState> counters;
  IoImage io;
  std::uint64_t cycle_index = 0;
  // Simulated time that timers advance by on each execution this scan.
  std::int64_t cycle_dt_us = 0;

  // Cold state for `program`: zeroed registers, timers sized and moded.
  static MachineState for_program(const Program& program, IoWidths widths = {});

  friend bool operator==(const MachineState&, const MachineState&) = default;
};

// The observable outcome compared by benign-equivalence checks.
bool same_observables(const MachineState& a, const MachineState& b);

}  // namespace scope::plc
