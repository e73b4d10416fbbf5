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

#include "scope/cima/executor.h"

#include "json.hpp"

#include "scope/plc/interpreter.h"

namespace scope::cima {

std::string to_json_line(const MitigationEntry& entry) {
  const nlohmann::json j = {
      {"cycle", entry.cycle},
      {"skipped", plc::to_index(entry.skipped)},
      {"class", memguard::to_string(entry.cls)},
      {"resumed_at", plc::to_index(entry.resumed_at)},
      {"run_len", entry.run_len},
  };
  return j.dump();
}

ExecResult execute_instrumented(const InstrumentedProgram& ip, plc::MachineState& state,
                                plc::DataMemory& mem, memguard::Guard& guard, ViolationPolicy policy,
                                std::uint64_t fuel, MitigationLog* log) {
  const auto& program = ip.program;
  ExecResult result;
  MitigationEntry run;
  std::uint32_t cap = 0;
  const auto close_run = [&] {
    if (run.run_len == 0) return;
    if (log != nullptr) log->entries.push_back(run);
    run = MitigationEntry{};
  };

  std::uint64_t dispatched = 0;
  while (!state.pc.halted) {
    if (dispatched == fuel) throw plc::FuelExhausted(fuel);
    ++dispatched;
    const plc::Position pos{state.pc.block, state.pc.index};
    const auto& instr = program.at(pos);
    if (plc::is_memory_access(instr.opcode)) {
      ++result.checks;
      if (auto v = guard.check(instr, state)) {
        v->cycle_index = state.cycle_index;
        result.violations.push_back(*v);
        if (policy == ViolationPolicy::kAbort) {
          result.aborted_on = *v;
          close_run();
          return result;
        }
        const auto target = ip.bypass.at(plc::to_index(instr.id));
        if (run.run_len == 0) {
          run.cycle = state.cycle_index;
          run.skipped = instr.id;
          run.cls = v->cls;
          cap = ip.chain_cap(pos.block);
        }
        ++run.run_len;
        run.skipped_ids.push_back(instr.id);
        run.resumed_at = program.at(*target).id;
        if (run.run_len > cap) {
          throw ConfigurationError("skip chain of " + std::to_string(run.run_len) +
                                   " exceeds cap " + std::to_string(cap));
        }
        ++result.skipped;
        state.pc.block = target->block;
        state.pc.index = target->index;
        continue;
      }
    }
    close_run();
    plc::step(program, state, mem, guard);
    ++result.executed;
  }
  close_run();
  return result;
}

}  // namespace scope::cima
