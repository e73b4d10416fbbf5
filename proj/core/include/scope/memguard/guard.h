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
#include <optional>
#include <vector>

#include "scope/memguard/heap.h"
#include "scope/memguard/shadow.h"
#include "scope/memguard/violation.h"
#include "scope/plc/interpreter.h"
#include "scope/plc/machine.h"
#include "scope/plc/memory.h"
#include "scope/plc/program.h"

namespace scope::memguard {

// kLayoutOnly reserves the same redzones and quarantine as kShadowed, so
// addresses agree across modes, but keeps no shadow and never reports.
enum class GuardMode : std::uint8_t { kLayoutOnly, kShadowed };

inline constexpr std::uint32_t kDefaultQuarantineBytes = 4096;

class Guard final : public plc::MemoryHooks {
 public:
  Guard(const plc::Program& program, plc::DataMemory& mem, GuardMode mode,
        std::uint32_t quarantine_bytes = kDefaultQuarantineBytes);

  GuardMode mode() const { return mode_; }
  bool shadowed() const { return mode_ == GuardMode::kShadowed; }
  const ShadowMemory& shadow() const { return shadow_; }
  const HeapAllocator& heap() const { return heap_; }
  const plc::DataMemory& memory() const { return mem_; }

  // Forgets every allocation and re-poisons from scratch. Call after the
  // data memory itself was cleared.
  void reset();

  plc::Address allocate(std::uint32_t size, plc::InstrId site) override;
  void release(plc::Address addr, plc::InstrId site) override;
  void frame_entered(const plc::Frame& frame) override;
  void frame_exited(const plc::Frame& frame) override;

  std::optional<Violation> check_access(std::int64_t addr, std::int64_t len, plc::AccessKind kind,
                                        plc::InstrId site) const;
  std::optional<Violation> check_free(std::int64_t addr, plc::InstrId site) const;
  // Pre-execution check of a memory-access instruction in the current state.
  std::optional<Violation> check(const plc::Instruction& instr, const plc::MachineState& state) const;

  // Live heap allocations unreachable from registers and global words.
  std::vector<Violation> leak_check(const std::array<std::int64_t, plc::kRegisterCount>& registers) const;

  // Shadow recomputed from the allocation table, globals and live frames
  // alone, without replaying history.
  ShadowMemory rebuild_shadow() const;

  // Globals, live frames and heap records (live and quarantined).
  std::vector<Allocation> allocations() const;

 private:
  void poison_static(ShadowMemory& shadow) const;

  const plc::Program& program_;
  plc::DataMemory& mem_;
  GuardMode mode_;
  ShadowMemory shadow_;
  HeapAllocator heap_;
};

struct MemoryReport {
  std::uint64_t data_bytes = 0;
  std::uint64_t shadow_bytes = 0;
  std::uint64_t redzone_bytes = 0;
  std::uint64_t quarantine_bytes = 0;
  std::uint64_t live_heap_bytes = 0;
  std::uint64_t original_instructions = 0;
  std::uint64_t instrumented_instructions = 0;

  double memory_ratio() const;
  double instruction_ratio() const;
};

// `check_sites` counts one inserted check per memory-access instruction.
MemoryReport memory_report(const Guard& guard, const plc::Program& original, std::uint64_t check_sites);

}  // namespace scope::memguard
