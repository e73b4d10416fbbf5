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
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace scope::plc {

// Strong identifiers. Both are dense indices assigned at assembly time.
enum class BlockId : std::uint32_t {};
enum class InstrId : std::uint32_t {};

constexpr std::uint32_t to_index(BlockId id) { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t to_index(InstrId id) { return static_cast<std::uint32_t>(id); }

using Address = std::uint32_t;

inline constexpr std::size_t kRegisterCount = 64;

enum class Opcode : std::uint8_t {
  kAnd,
  kOr,
  kNot,
  kSr,
  kAdd,
  kMul,
  kEq,
  kGt,
  kLt,
  kLe,
  kTon,
  kTof,
  kCtu,
  kSel,
  kMax,
  kContact,
  kCoil,
  kLoad,
  kStore,
  kMemcpy,
  kAlloc,
  kFree,
  kCall,
  kRet,
  kJmp,
  kCjmp,
  kHalt,
};

inline constexpr std::size_t kOpcodeCount = static_cast<std::size_t>(Opcode::kHalt) + 1;

enum class ChannelKind : std::uint8_t { kDigitalIn, kAnalogIn, kDigitalOut };

struct Reg {
  std::uint8_t index = 0;
  friend bool operator==(Reg, Reg) = default;
};

struct Imm {
  std::int64_t value = 0;
  friend bool operator==(Imm, Imm) = default;
};

// The current frame base, usable wherever a value is read.
struct FramePointer {
  friend bool operator==(FramePointer, FramePointer) = default;
};

struct ChannelRef {
  ChannelKind kind = ChannelKind::kDigitalIn;
  std::uint32_t index = 0;
  friend bool operator==(ChannelRef, ChannelRef) = default;
};

struct TimerRef {
  std::uint32_t index = 0;
  friend bool operator==(TimerRef, TimerRef) = default;
};

struct CounterRef {
  std::uint32_t index = 0;
  friend bool operator==(CounterRef, CounterRef) = default;
};

enum class AddressBase : std::uint8_t { kAbsolute, kRegister, kFrame };

// Effective address = base + displacement, resolved at execution time.
struct MemRef {
  AddressBase base = AddressBase::kAbsolute;
  std::uint8_t reg = 0;
  std::int64_t displacement = 0;
  friend bool operator==(const MemRef&, const MemRef&) = default;
};

struct BlockRef {
  BlockId block{};
  friend bool operator==(BlockRef, BlockRef) = default;
};

using Operand =
    std::variant<Reg, Imm, FramePointer, ChannelRef, TimerRef, CounterRef, MemRef, BlockRef>;

// What an operand position accepts. kValue admits a register, an immediate or fp.
enum class Slot : std::uint8_t {
  kReg,
  kValue,
  kImm,
  kInput,   // DI, AI or DO (contacts may read coil state)
  kOutput,  // DO
  kTimer,
  kCounter,
  kMem,
  kBlock,
};

struct OpcodeInfo {
  Opcode opcode;
  std::string_view mnemonic;
  std::span<const Slot> slots;
  bool terminator;
  bool memory_access;
};

const OpcodeInfo& info(Opcode op);
std::optional<Opcode> parse_mnemonic(std::string_view mnemonic);
std::string_view mnemonic(Opcode op);

inline bool is_terminator(Opcode op) { return info(op).terminator; }
inline bool is_memory_access(Opcode op) { return info(op).memory_access; }

bool operand_fits(Slot slot, const Operand& operand);

struct Instruction {
  InstrId id{};
  Opcode opcode = Opcode::kHalt;
  std::vector<Operand> operands;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

// True iff operand count and kinds match the opcode's signature.
bool well_formed(const Instruction& instr);

}  // namespace scope::plc
