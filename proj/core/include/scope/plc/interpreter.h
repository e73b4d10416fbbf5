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

#include "scope/plc/machine.h"
#include "scope/plc/memory.h"
#include "scope/plc/program.h"

namespace scope::plc {

// Allocation and frame events the interpreter delegates. The memory guard
// implements this; the interpreter itself never touches shadow state.
class MemoryHooks {
 public:
  virtual ~MemoryHooks() = default;
  virtual Address allocate(std::uint32_t size, InstrId site) = 0;
  virtual void release(Address addr, InstrId site) = 0;
  virtual void frame_entered(const Frame& frame) = 0;
  virtual void frame_exited(const Frame& frame) = 0;
};

// Hooks for programs that never allocate: ALLOC faults, frames are unguarded.
class NoHeap final : public MemoryHooks {
 public:
  Address allocate(std::uint32_t size, InstrId site) override;
  void release(Address addr, InstrId site) override;
  void frame_entered(const Frame&) override {}
  void frame_exited(const Frame&) override {}
};

enum class AccessKind : std::uint8_t { kRead, kWrite, kFree, kAlloc };

const char* to_string(AccessKind kind);

struct MemoryAccess {
  AccessKind kind = AccessKind::kRead;
  std::int64_t address = 0;
  std::int64_t length = 0;
};

// The data-memory touches a memory-access instruction would perform in the
// current state, in check order (MEMCPY: source read, then destination write).
struct AccessSet {
  std::array<MemoryAccess, 2> items{};
  std::uint32_t count = 0;
};

std::int64_t value_of(const Operand& operand, const MachineState& state, const DataMemory& mem);
std::int64_t effective_address(const MemRef& ref, const MachineState& state, const DataMemory& mem);
AccessSet describe_access(const Instruction& instr, const MachineState& state,
                          const DataMemory& mem);

// Position control reaches after a non-terminator at `pos` completes.
Position successor(const Program& program, Position pos);

// Resets the pc to the entry block and unwinds any frame left over from an
// interrupted scan.
void begin_logic_phase(const Program& program, MachineState& state, DataMemory& mem,
                       MemoryHooks& hooks);

// Executes the instruction at state.pc and advances the pc.
void step(const Program& program, MachineState& state, DataMemory& mem, MemoryHooks& hooks);

// Runs until HALT. Returns the executed instruction count; throws
// FuelExhausted if `fuel` instructions run without halting.
std::uint64_t run_logic_phase(const Program& program, MachineState& state, DataMemory& mem,
                              MemoryHooks& hooks, std::uint64_t fuel);

}  // namespace scope::plc
