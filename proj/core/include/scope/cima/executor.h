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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scope/cima/instrument.h"
#include "scope/memguard/guard.h"
#include "scope/memguard/violation.h"
#include "scope/plc/machine.h"
#include "scope/plc/memory.h"

namespace scope::cima {

// A skip chain longer than InstrumentedProgram::chain_cap.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One run of consecutive skips.
struct MitigationEntry {
  std::uint64_t cycle = 0;
  InstrId skipped{};  // first instruction of the run
  memguard::ViolationClass cls = memguard::ViolationClass::kHeapBufferOverflow;
  InstrId resumed_at{};  // T_i of the last skipped instruction
  std::uint32_t run_len = 0;
  std::vector<InstrId> skipped_ids;
  friend bool operator==(const MitigationEntry&, const MitigationEntry&) = default;
};

struct MitigationLog {
  std::vector<MitigationEntry> entries;
  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

// {cycle, skipped, class, resumed_at, run_len}
std::string to_json_line(const MitigationEntry& entry);

enum class ViolationPolicy : std::uint8_t { kSkip, kAbort };

struct ExecResult {
  std::uint64_t executed = 0;
  std::uint64_t skipped = 0;
  std::uint64_t checks = 0;  // memory accesses inspected by the guard
  std::vector<memguard::Violation> violations;
  // Set under kAbort: the violation that stopped the logic phase.
  std::optional<memguard::Violation> aborted_on;
};

// Runs the logic phase from state.pc to HALT, consulting the guard before
// every memory access. Throws plc::FuelExhausted past `fuel` dispatches.
ExecResult execute_instrumented(const InstrumentedProgram& ip, plc::MachineState& state,
                                plc::DataMemory& mem, memguard::Guard& guard, ViolationPolicy policy,
                                std::uint64_t fuel, MitigationLog* log = nullptr);

inline ExecResult execute_mitigated(const InstrumentedProgram& ip, plc::MachineState& state,
                                    plc::DataMemory& mem, memguard::Guard& guard, MitigationLog& log,
                                    std::uint64_t fuel) {
  return execute_instrumented(ip, state, mem, guard, ViolationPolicy::kSkip, fuel, &log);
}

}  // namespace scope::cima
