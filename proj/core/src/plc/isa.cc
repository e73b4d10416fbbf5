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

#include "scope/plc/isa.h"

#include <stdexcept>

namespace scope::plc {
namespace {

using S = Slot;

constexpr S kBinary[] = {S::kReg, S::kValue, S::kValue};
constexpr S kUnary[] = {S::kReg, S::kValue};
constexpr S kSelect[] = {S::kReg, S::kValue, S::kValue, S::kValue};
constexpr S kTimer[] = {S::kReg, S::kTimer, S::kValue, S::kImm};
constexpr S kCounter[] = {S::kReg, S::kCounter, S::kValue, S::kValue, S::kImm};
constexpr S kContact[] = {S::kReg, S::kInput};
constexpr S kCoil[] = {S::kOutput, S::kValue};
constexpr S kLoad[] = {S::kReg, S::kMem, S::kImm};
constexpr S kStore[] = {S::kMem, S::kValue, S::kImm};
constexpr S kMemcpy[] = {S::kMem, S::kMem, S::kValue};
constexpr S kAlloc[] = {S::kReg, S::kValue};
constexpr S kFree[] = {S::kValue};
constexpr S kCall[] = {S::kBlock, S::kImm};
constexpr S kJmp[] = {S::kBlock};
constexpr S kCjmp[] = {S::kValue, S::kBlock, S::kBlock};

// Indexed by Opcode.
constexpr OpcodeInfo kTable[] = {
    {Opcode::kAnd, "AND", kBinary, false, false},
    {Opcode::kOr, "OR", kBinary, false, false},
    {Opcode::kNot, "NOT", kUnary, false, false},
    {Opcode::kSr, "SR", kBinary, false, false},
    {Opcode::kAdd, "ADD", kBinary, false, false},
    {Opcode::kMul, "MUL", kBinary, false, false},
    {Opcode::kEq, "EQ", kBinary, false, false},
    {Opcode::kGt, "GT", kBinary, false, false},
    {Opcode::kLt, "LT", kBinary, false, false},
    {Opcode::kLe, "LE", kBinary, false, false},
    {Opcode::kTon, "TON", kTimer, false, false},
    {Opcode::kTof, "TOF", kTimer, false, false},
    {Opcode::kCtu, "CTU", kCounter, false, false},
    {Opcode::kSel, "SEL", kSelect, false, false},
    {Opcode::kMax, "MAX", kBinary, false, false},
    {Opcode::kContact, "CONTACT", kContact, false, false},
    {Opcode::kCoil, "COIL", kCoil, false, false},
    {Opcode::kLoad, "LOAD", kLoad, false, true},
    {Opcode::kStore, "STORE", kStore, false, true},
    {Opcode::kMemcpy, "MEMCPY", kMemcpy, false, true},
    {Opcode::kAlloc, "ALLOC", kAlloc, false, true},
    {Opcode::kFree, "FREE", kFree, false, true},
    {Opcode::kCall, "CALL", kCall, false, false},
    {Opcode::kRet, "RET", {}, true, false},
    {Opcode::kJmp, "JMP", kJmp, true, false},
    {Opcode::kCjmp, "CJMP", kCjmp, true, false},
    {Opcode::kHalt, "HALT", {}, true, false},
};

static_assert(std::size(kTable) == kOpcodeCount);

}  // namespace

const OpcodeInfo& info(Opcode op) {
  const auto index = static_cast<std::size_t>(op);
  if (index >= kOpcodeCount) throw std::out_of_range("invalid opcode");
  return kTable[index];
}

std::string_view mnemonic(Opcode op) { return info(op).mnemonic; }

std::optional<Opcode> parse_mnemonic(std::string_view text) {
  for (const auto& entry : kTable) {
    if (entry.mnemonic == text) return entry.opcode;
  }
  return std::nullopt;
}

bool operand_fits(Slot slot, const Operand& operand) {
  switch (slot) {
    case Slot::kReg:
      return std::holds_alternative<Reg>(operand);
    case Slot::kValue:
      return std::holds_alternative<Reg>(operand) || std::holds_alternative<Imm>(operand) ||
             std::holds_alternative<FramePointer>(operand);
    case Slot::kImm:
      return std::holds_alternative<Imm>(operand);
    case Slot::kInput:
      return std::holds_alternative<ChannelRef>(operand);
    case Slot::kOutput: {
      const auto* channel = std::get_if<ChannelRef>(&operand);
      return channel != nullptr && channel->kind == ChannelKind::kDigitalOut;
    }
    case Slot::kTimer:
      return std::holds_alternative<TimerRef>(operand);
    case Slot::kCounter:
      return std::holds_alternative<CounterRef>(operand);
    case Slot::kMem:
      return std::holds_alternative<MemRef>(operand);
    case Slot::kBlock:
      return std::holds_alternative<BlockRef>(operand);
  }
  return false;
}

bool well_formed(const Instruction& instr) {
  const auto& sig = info(instr.opcode).slots;
  if (instr.operands.size() != sig.size()) return false;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    if (!operand_fits(sig[i], instr.operands[i])) return false;
  }
  for (const auto& operand : instr.operands) {
    if (const auto* reg = std::get_if<Reg>(&operand); reg && reg->index >= kRegisterCount) {
      return false;
    }
    if (const auto* mem = std::get_if<MemRef>(&operand);
        mem && mem->base == AddressBase::kRegister && mem->reg >= kRegisterCount) {
      return false;
    }
  }
  return true;
}

}  // namespace scope::plc
