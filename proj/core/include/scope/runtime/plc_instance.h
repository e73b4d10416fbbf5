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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scope/cima/executor.h"
#include "scope/cima/instrument.h"
#include "scope/memguard/guard.h"
#include "scope/plc/machine.h"
#include "scope/plc/memory.h"
#include "scope/plc/program.h"

namespace scope::runtime {

enum class MitigationMode : std::uint8_t { kNone, kAbortOnViolation, kCima };

const char* to_string(MitigationMode mode);
std::optional<MitigationMode> parse_mode(std::string_view name);

struct CycleConfig {
  std::int64_t cycle_time_us = 10000;
  std::uint64_t n_cycles = 50000;
  MitigationMode mode = MitigationMode::kNone;
  bool leak_check = false;
  // Restart cost after an abort or crash; 0 selects 100 cycle times.
  std::int64_t restart_delta_us = 0;
  std::uint64_t fuel = 1'000'000;
  plc::MemoryLayout layout{};

  std::int64_t delta_us() const { return restart_delta_us > 0 ? restart_delta_us : 100 * cycle_time_us; }
  // Cycles lost per abort, counting the aborted one.
  std::uint64_t downtime_cycles() const;
  void check() const;
};

struct ScanRecord {
  std::uint64_t cycle_index = 0;
  double input_scan_us = 0;
  double exec_us = 0;
  double output_us = 0;
  double total_us = 0;
  bool deadline_met = true;
  bool aborted = false;  // violation stopped the scan (abort mode)
  bool failed = false;   // hard fault or fuel exhaustion
  bool offline = false;  // restarting; no scan ran
  std::uint64_t executed = 0;
  std::uint32_t violations = 0;
  std::uint32_t skipped = 0;
  std::uint32_t checks = 0;
  std::string fault;

  bool completed() const { return !aborted && !failed && !offline; }
};

// Input data for one scan. Vectors shorter than the profile widths are
// zero padded; longer ones are truncated.
struct ScanInputs {
  std::vector<std::uint8_t> di;
  std::vector<std::uint16_t> ai;
  std::vector<std::uint8_t> net;
};

class PlcInstance {
 public:
  PlcInstance(plc::Program program, plc::IoWidths widths, CycleConfig config);

  PlcInstance(const PlcInstance&) = delete;
  PlcInstance& operator=(const PlcInstance&) = delete;

  ScanRecord run_scan_cycle(const ScanInputs& inputs);

  const CycleConfig& config() const { return config_; }
  const plc::Program& program() const { return program_; }
  const cima::InstrumentedProgram* instrumented() const { return instrumented_.get(); }
  const plc::MachineState& state() const { return state_; }
  const plc::DataMemory& memory() const { return mem_; }
  const memguard::Guard& guard() const { return *guard_; }
  // DO image committed by the last completed output update.
  const std::vector<std::uint8_t>& outputs() const { return committed_do_; }
  const std::vector<memguard::Violation>& violations() const { return violations_; }
  const cima::MitigationLog& mitigation_log() const { return log_; }
  bool online() const { return downtime_left_ == 0; }
  std::uint64_t cycle_index() const { return next_cycle_; }
  std::uint64_t restarts() const { return restarts_; }

  // Leak scan over the current heap; appended to violations().
  std::vector<memguard::Violation> leak_check();
  void cold_restart();

 private:
  void input_scan(const ScanInputs& inputs);
  void output_update();
  void go_offline();

  plc::Program program_;
  std::unique_ptr<cima::InstrumentedProgram> instrumented_;
  plc::IoWidths widths_;
  CycleConfig config_;
  plc::MachineState state_;
  plc::DataMemory mem_;
  std::unique_ptr<memguard::Guard> guard_;
  std::vector<std::uint8_t> committed_do_;
  std::vector<memguard::Violation> violations_;
  cima::MitigationLog log_;
  std::uint64_t next_cycle_ = 0;
  std::uint64_t downtime_left_ = 0;
  bool restart_pending_ = false;
  std::uint64_t restarts_ = 0;
};

}  // namespace scope::runtime
