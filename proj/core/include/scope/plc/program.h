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

#include "scope/plc/isa.h"

namespace scope::plc {

// Granule and redzone geometry shared by every allocator in the VM. The
// layout is identical whether or not shadow checking is enabled; only the
// poisoning differs.
inline constexpr std::uint32_t kGranule = 8;
inline constexpr std::uint32_t kRedzone = 16;
inline constexpr std::uint32_t kControlSlotSize = 8;

constexpr std::uint32_t round_up(std::uint32_t value, std::uint32_t to) {
  return (value + to - 1) / to * to;
}

struct Block {
  BlockId id{};
  std::string label;
  std::vector<Instruction> instructions;
  // Set only on blocks produced by splitting: control continues at the head
  // of this block when the last instruction is not a terminator.
  std::optional<BlockId> fallthrough;

  friend bool operator==(const Block&, const Block&) = default;
};

// A global occupies a slot of [payload][right redzone]; slots are packed
// contiguously from data-memory offset 0.
struct GlobalVar {
  std::string name;
  Address offset = 0;
  std::uint32_t size = 0;

  std::uint32_t slot_size() const { return round_up(size, kGranule) + kRedzone; }
  friend bool operator==(const GlobalVar&, const GlobalVar&) = default;
};

enum class BindingDirection : std::uint8_t { kToRegister, kFromRegister };

// `.io DI3->r10` latches an input into a register before the logic phase;
// `.io DO0<-r20` drives an output from a register at output update.
struct IoBinding {
  ChannelKind channel = ChannelKind::kDigitalIn;
  std::uint32_t index = 0;
  std::uint8_t reg = 0;

  BindingDirection direction() const {
    return channel == ChannelKind::kDigitalOut ? BindingDirection::kFromRegister
                                               : BindingDirection::kToRegister;
  }
  friend bool operator==(const IoBinding&, const IoBinding&) = default;
};

// Network receive mailbox: payload bytes are copied into `global` (truncated
// to its size) and the received length into `length_reg`.
struct NetBinding {
  std::string global;
  std::uint8_t length_reg = 0;
  friend bool operator==(const NetBinding&, const NetBinding&) = default;
};

// Declares a vulnerable site the attack harness may target.
struct VictimDecl {
  std::string kind;
  std::uint32_t size = 0;
  std::string attacker_block;
  friend bool operator==(const VictimDecl&, const VictimDecl&) = default;
};

enum class TimerMode : std::uint8_t { kOnDelay, kOffDelay };

struct Position {
  BlockId block{};
  std::uint32_t index = 0;
  friend bool operator==(Position, Position) = default;
};

class ProgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Program {
  std::vector<Block> blocks;  // blocks[i].id == BlockId{i}
  BlockId entry{};
  std::vector<GlobalVar> globals;
  std::vector<IoBinding> io_map;
  std::optional<NetBinding> net;
  std::vector<VictimDecl> victims;
  std::vector<TimerMode> timer_modes;
  std::uint32_t counter_count = 0;
  bool instrumented = false;

  std::size_t instruction_count() const;
  std::uint32_t globals_size() const;

  const Block& block(BlockId id) const { return blocks.at(to_index(id)); }
  const Instruction& at(Position pos) const {
    return blocks[to_index(pos.block)].instructions[pos.index];
  }
  const GlobalVar* find_global(std::string_view name) const;
  std::optional<BlockId> find_block(std::string_view label) const;

  // Rebuilds the id -> position index. Call after mutating blocks.
  void reindex();
  std::optional<Position> position_of(InstrId id) const;
  std::size_t id_space() const { return positions_.size(); }

  friend bool operator==(const Program& a, const Program& b) {
    return a.blocks == b.blocks && a.entry == b.entry && a.globals == b.globals &&
           a.io_map == b.io_map && a.net == b.net && a.victims == b.victims &&
           a.timer_modes == b.timer_modes && a.counter_count == b.counter_count &&
           a.instrumented == b.instrumented;
  }

 private:
  std::vector<std::optional<Position>> positions_;
};

// Throws ProgramError describing the first broken invariant.
void validate(const Program& program);

// Emits a listing that assembles back to a structurally equal program.
std::string render(const Program& program);

}  // namespace scope::plc
