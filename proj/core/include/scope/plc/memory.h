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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "scope/plc/program.h"

namespace scope::plc {

enum class FaultKind : std::uint8_t {
  kOutOfBounds,     // address outside the whole data-memory array
  kStackExhausted,
  kBadReturn,       // control slot does not name an instruction
  kNoFrame,         // fp or RET used outside a call
  kOutOfMemory,
  kBadChannel,      // I/O index beyond the profile's widths
  kBadOperand,
  kFuelExhausted,
};

const char* to_string(FaultKind kind);

// A hard fault: the VM cannot continue the current scan. Distinct from a
// redzone violation, which is detected before the access happens.
class Fault : public std::runtime_error {
 public:
  Fault(FaultKind kind, const std::string& message);
  FaultKind kind() const { return kind_; }

 private:
  FaultKind kind_;
};

class FuelExhausted : public Fault {
 public:
  explicit FuelExhausted(std::uint64_t budget);
};

enum class StackGrowth : std::uint8_t { kUp, kDown };

// Region bounds: globals [0, globals_end), stack [globals_end, stack_end),
// heap [stack_end, size).
struct MemoryLayout {
  std::uint32_t size = 64 * 1024;
  std::uint32_t globals_end = 8 * 1024;
  std::uint32_t stack_end = 24 * 1024;
  StackGrowth growth = StackGrowth::kUp;

  std::uint32_t stack_begin() const { return globals_end; }
  std::uint32_t heap_begin() const { return stack_end; }
  std::uint32_t heap_end() const { return size; }
  void check() const;
  friend bool operator==(const MemoryLayout&, const MemoryLayout&) = default;
};

// [start, base) left redzone, [base, base+locals) locals, then the control
// slot and the right redzone. The call's return instruction id lives in the
// first four bytes of the slot.
struct Frame {
  Address start = 0;
  Address base = 0;
  std::uint32_t locals = 0;

  Address slot() const { return base + round_up(locals, kGranule); }
  Address end() const { return slot() + kControlSlotSize + kRedzone; }
  std::uint32_t footprint() const { return end() - start; }
  friend bool operator==(const Frame&, const Frame&) = default;
};

constexpr std::uint32_t frame_footprint(std::uint32_t locals) {
  return kRedzone + round_up(locals, kGranule) + kControlSlotSize + kRedzone;
}

class DataMemory {
 public:
  explicit DataMemory(MemoryLayout layout = {});

  const MemoryLayout& layout() const { return layout_; }
  std::uint32_t size() const { return layout_.size; }

  std::span<std::uint8_t> bytes() { return bytes_; }
  std::span<const std::uint8_t> bytes() const { return bytes_; }

  // Little-endian, zero-extended. Throws Fault{kOutOfBounds}.
  std::uint64_t read(std::int64_t addr, std::uint32_t width) const;
  void write(std::int64_t addr, std::uint32_t width, std::uint64_t value);
  void copy(std::int64_t dst, std::int64_t src, std::int64_t len);
  void check_range(std::int64_t addr, std::int64_t len) const;

  Frame push_frame(std::uint32_t locals);
  Frame pop_frame();
  std::span<const Frame> frames() const { return frames_; }
  const Frame* top_frame() const { return frames_.empty() ? nullptr : &frames_.back(); }

  // Lowest and highest stack addresses ever covered by a frame.
  Address stack_touched_begin() const { return touched_begin_; }
  Address stack_touched_end() const { return touched_end_; }

  void clear();

  friend bool operator==(const DataMemory&, const DataMemory&) = default;

 private:
  MemoryLayout layout_;
  std::vector<std::uint8_t> bytes_;
  std::vector<Frame> frames_;
  Address cursor_;
  Address touched_begin_;
  Address touched_end_;
};

}  // namespace scope::plc
