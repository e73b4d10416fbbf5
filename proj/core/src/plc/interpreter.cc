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

#include "scope/plc/interpreter.h"

#include <algorithm>
#include <limits>

namespace scope::plc {

Address NoHeap::allocate(std::uint32_t size, InstrId) {
  throw Fault(FaultKind::kOutOfMemory, "no heap configured for ALLOC of " + std::to_string(size));
}

void NoHeap::release(Address addr, InstrId) {
  if (addr != 0) throw Fault(FaultKind::kBadOperand, "no heap configured for FREE");
}

const char* to_string(AccessKind kind) {
  switch (kind) {
    case AccessKind::kRead:
      return "read";
    case AccessKind::kWrite:
      return "write";
    case AccessKind::kFree:
      return "free";
    case AccessKind::kAlloc:
      return "alloc";
  }
  return "unknown";
}

namespace {

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}

std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

const Frame& current_frame(const DataMemory& mem) {
  const Frame* frame = mem.top_frame();
  if (frame == nullptr) throw Fault(FaultKind::kNoFrame, "frame pointer used outside a call");
  return *frame;
}

std::uint32_t access_width(const Operand& operand) {
  const auto width = std::get<Imm>(operand).value;
  if (width != 1 && width != 2 && width != 4 && width != 8) {
    throw Fault(FaultKind::kBadOperand, "access width must be 1, 2, 4 or 8");
  }
  return static_cast<std::uint32_t>(width);
}

Reg dest(const Instruction& instr) { return std::get<Reg>(instr.operands[0]); }

std::uint8_t read_channel(const ChannelRef& ch, const IoImage& io) {
  const auto fetch = [&](const auto& vec) {
    if (ch.index >= vec.size()) {
      throw Fault(FaultKind::kBadChannel, "channel index " + std::to_string(ch.index) +
                                              " beyond image width " + std::to_string(vec.size()));
    }
    return vec[ch.index];
  };
  switch (ch.kind) {
    case ChannelKind::kDigitalIn:
      return fetch(io.di) != 0;
    case ChannelKind::kDigitalOut:
      return fetch(io.do_) != 0;
    case ChannelKind::kAnalogIn:
      break;
  }
  return 0;
}

void advance(const Program& program, MachineState& state) {
  const auto next = successor(program, {state.pc.block, state.pc.index});
  state.pc.block = next.block;
  state.pc.index = next.index;
}

void jump(MachineState& state, BlockId target) {
  state.pc.block = target;
  state.pc.index = 0;
}

void run_timer(const Instruction& instr, MachineState& state, DataMemory& mem) {
  const auto& ref = std::get<TimerRef>(instr.operands[1]);
  auto& timer = state.timers.at(ref.index);
  const bool input = value_of(instr.operands[2], state, mem) != 0;
  timer.preset_us = std::get<Imm>(instr.operands[3]).value;
  const auto accumulate = [&] {
    timer.elapsed_us = std::min(timer.preset_us, timer.elapsed_us + state.cycle_dt_us);
  };
  if (instr.opcode == Opcode::kTon) {
    if (input) {
      if (!timer.output) accumulate();
      timer.output = timer.elapsed_us >= timer.preset_us;
    } else {
      timer.elapsed_us = 0;
      timer.output = false;
    }
  } else {
    if (input) {
      timer.output = true;
      timer.elapsed_us = 0;
    } else if (timer.output) {
      accumulate();
      if (timer.elapsed_us >= timer.preset_us) timer.output = false;
    }
  }
  state.registers[dest(instr).index] = timer.output ? 1 : 0;
}

void run_counter(const Instruction& instr, MachineState& state, DataMemory& mem) {
  const auto& ref = std::get<CounterRef>(instr.operands[1]);
  auto& counter = state.counters.at(ref.index);
  const bool input = value_of(instr.operands[2], state, mem) != 0;
  const bool reset = value_of(instr.operands[3], state, mem) != 0;
  counter.preset = std::get<Imm>(instr.operands[4]).value;
  if (reset) {
    counter.count = 0;
  } else if (input && !counter.last_input && counter.count < std::numeric_limits<std::int64_t>::max()) {
    ++counter.count;
  }
  counter.last_input = input;
  counter.output = counter.count >= counter.preset;
  state.registers[dest(instr).index] = counter.output ? 1 : 0;
}

}  // namespace

std::int64_t value_of(const Operand& operand, const MachineState& state, const DataMemory& mem) {
  if (const auto* reg = std::get_if<Reg>(&operand)) return state.registers[reg->index];
  if (const auto* imm = std::get_if<Imm>(&operand)) return imm->value;
  if (std::holds_alternative<FramePointer>(operand)) return current_frame(mem).base;
  throw Fault(FaultKind::kBadOperand, "operand is not a value");
}

std::int64_t effective_address(const MemRef& ref, const MachineState& state, const DataMemory& mem) {
  switch (ref.base) {
    case AddressBase::kAbsolute:
      return ref.displacement;
    case AddressBase::kRegister:
      return wrap_add(state.registers[ref.reg], ref.displacement);
    case AddressBase::kFrame:
      return wrap_add(current_frame(mem).base, ref.displacement);
  }
  return ref.displacement;
}

AccessSet describe_access(const Instruction& instr, const MachineState& state,
                          const DataMemory& mem) {
  AccessSet set;
  const auto& ops = instr.operands;
  switch (instr.opcode) {
    case Opcode::kLoad:
      set.items[0] = {AccessKind::kRead, effective_address(std::get<MemRef>(ops[1]), state, mem),
                      access_width(ops[2])};
      set.count = 1;
      break;
    case Opcode::kStore:
      set.items[0] = {AccessKind::kWrite, effective_address(std::get<MemRef>(ops[0]), state, mem),
                      access_width(ops[2])};
      set.count = 1;
      break;
    case Opcode::kMemcpy: {
      const auto len = value_of(ops[2], state, mem);
      set.items[0] = {AccessKind::kRead, effective_address(std::get<MemRef>(ops[1]), state, mem), len};
      set.items[1] = {AccessKind::kWrite, effective_address(std::get<MemRef>(ops[0]), state, mem), len};
      set.count = 2;
      break;
    }
    case Opcode::kFree:
      set.items[0] = {AccessKind::kFree, value_of(ops[0], state, mem), 0};
      set.count = 1;
      break;
    case Opcode::kAlloc:
      set.items[0] = {AccessKind::kAlloc, 0, value_of(ops[1], state, mem)};
      set.count = 1;
      break;
    default:
      break;
  }
  return set;
}

Position successor(const Program& program, Position pos) {
  const auto& block = program.block(pos.block);
  if (pos.index + 1 < block.instructions.size()) return {pos.block, pos.index + 1};
  if (block.fallthrough) return {*block.fallthrough, 0};
  throw Fault(FaultKind::kBadOperand, "control runs off the end of block '" + block.label + "'");
}

void begin_logic_phase(const Program& program, MachineState& state, DataMemory& mem,
                       MemoryHooks& hooks) {
  while (mem.top_frame() != nullptr) {
    hooks.frame_exited(*mem.top_frame());
    mem.pop_frame();
  }
  state.frames.clear();
  state.pc = Pc{program.entry, 0, false};
}

void step(const Program& program, MachineState& state, DataMemory& mem, MemoryHooks& hooks) {
  if (state.pc.halted) return;
  const auto& instr = program.at({state.pc.block, state.pc.index});
  const auto& ops = instr.operands;
  auto& regs = state.registers;
  const auto val = [&](std::size_t i) { return value_of(ops[i], state, mem); };

  switch (instr.opcode) {
    case Opcode::kAnd:
      regs[dest(instr).index] = (val(1) != 0 && val(2) != 0) ? 1 : 0;
      break;
    case Opcode::kOr:
      regs[dest(instr).index] = (val(1) != 0 || val(2) != 0) ? 1 : 0;
      break;
    case Opcode::kNot:
      regs[dest(instr).index] = val(1) == 0 ? 1 : 0;
      break;
    case Opcode::kSr: {
      const auto d = dest(instr).index;
      if (val(1) != 0) {
        regs[d] = 1;
      } else if (val(2) != 0) {
        regs[d] = 0;
      } else {
        regs[d] = regs[d] != 0 ? 1 : 0;
      }
      break;
    }
    case Opcode::kAdd:
      regs[dest(instr).index] = wrap_add(val(1), val(2));
      break;
    case Opcode::kMul:
      regs[dest(instr).index] = wrap_mul(val(1), val(2));
      break;
    case Opcode::kEq:
      regs[dest(instr).index] = val(1) == val(2) ? 1 : 0;
      break;
    case Opcode::kGt:
      regs[dest(instr).index] = val(1) > val(2) ? 1 : 0;
      break;
    case Opcode::kLt:
      regs[dest(instr).index] = val(1) < val(2) ? 1 : 0;
      break;
    case Opcode::kLe:
      regs[dest(instr).index] = val(1) <= val(2) ? 1 : 0;
      break;
    case Opcode::kTon:
    case Opcode::kTof:
      run_timer(instr, state, mem);
      break;
    case Opcode::kCtu:
      run_counter(instr, state, mem);
      break;
    case Opcode::kSel:
      regs[dest(instr).index] = val(1) != 0 ? val(3) : val(2);
      break;
    case Opcode::kMax:
      regs[dest(instr).index] = std::max(val(1), val(2));
      break;
    case Opcode::kContact: {
      const auto& ch = std::get<ChannelRef>(ops[1]);
      if (ch.kind == ChannelKind::kAnalogIn) {
        if (ch.index >= state.io.ai.size()) {
          throw Fault(FaultKind::kBadChannel, "AI" + std::to_string(ch.index) + " beyond image width");
        }
        regs[dest(instr).index] = state.io.ai[ch.index];
      } else {
        regs[dest(instr).index] = read_channel(ch, state.io);
      }
      break;
    }
    case Opcode::kCoil: {
      const auto& ch = std::get<ChannelRef>(ops[0]);
      if (ch.index >= state.io.do_.size()) {
        throw Fault(FaultKind::kBadChannel, "DO" + std::to_string(ch.index) + " beyond image width");
      }
      state.io.do_[ch.index] = val(1) != 0 ? 1 : 0;
      break;
    }
    case Opcode::kLoad: {
      const auto addr = effective_address(std::get<MemRef>(ops[1]), state, mem);
      regs[dest(instr).index] = static_cast<std::int64_t>(mem.read(addr, access_width(ops[2])));
      break;
    }
    case Opcode::kStore: {
      const auto addr = effective_address(std::get<MemRef>(ops[0]), state, mem);
      mem.write(addr, access_width(ops[2]), static_cast<std::uint64_t>(val(1)));
      break;
    }
    case Opcode::kMemcpy: {
      const auto len = val(2);
      if (len < 0) throw Fault(FaultKind::kBadOperand, "negative MEMCPY length");
      const auto dst = effective_address(std::get<MemRef>(ops[0]), state, mem);
      const auto src = effective_address(std::get<MemRef>(ops[1]), state, mem);
      mem.copy(dst, src, len);
      break;
    }
    case Opcode::kAlloc: {
      const auto size = val(1);
      if (size < 1 || size > std::numeric_limits<std::uint32_t>::max()) {
        throw Fault(FaultKind::kBadOperand, "ALLOC size must be at least 1");
      }
      regs[dest(instr).index] = hooks.allocate(static_cast<std::uint32_t>(size), instr.id);
      break;
    }
    case Opcode::kFree: {
      const auto addr = val(0);
      if (addr != 0) {
        if (addr < 0 || addr >= mem.size()) {
          throw Fault(FaultKind::kOutOfBounds, "FREE of " + std::to_string(addr));
        }
        hooks.release(static_cast<Address>(addr), instr.id);
      }
      break;
    }
    case Opcode::kCall: {
      const auto target = std::get<BlockRef>(ops[0]).block;
      const auto locals = std::get<Imm>(ops[1]).value;
      if (locals < 0 || locals > 0xFFFF) throw Fault(FaultKind::kBadOperand, "bad frame size");
      const auto ret = successor(program, {state.pc.block, state.pc.index});
      const Frame frame = mem.push_frame(static_cast<std::uint32_t>(locals));
      mem.write(frame.slot(), 4, to_index(program.at(ret).id));
      mem.write(frame.slot() + 4, 4, 0);
      hooks.frame_entered(frame);
      state.frames.push_back({ret.block, ret.index, frame.base});
      jump(state, target);
      return;
    }
    case Opcode::kRet: {
      const Frame& frame = current_frame(mem);
      const auto target = static_cast<std::uint32_t>(mem.read(frame.slot(), 4));
      const auto pos = program.position_of(InstrId{target});
      hooks.frame_exited(frame);
      mem.pop_frame();
      if (!state.frames.empty()) state.frames.pop_back();
      if (!pos) throw Fault(FaultKind::kBadReturn, "return to unknown instruction " + std::to_string(target));
      state.pc.block = pos->block;
      state.pc.index = pos->index;
      return;
    }
    case Opcode::kJmp:
      jump(state, std::get<BlockRef>(ops[0]).block);
      return;
    case Opcode::kCjmp:
      jump(state, val(0) != 0 ? std::get<BlockRef>(ops[1]).block : std::get<BlockRef>(ops[2]).block);
      return;
    case Opcode::kHalt:
      state.pc.halted = true;
      return;
  }
  advance(program, state);
}

std::uint64_t run_logic_phase(const Program& program, MachineState& state, DataMemory& mem,
                              MemoryHooks& hooks, std::uint64_t fuel) {
  std::uint64_t executed = 0;
  while (!state.pc.halted) {
    if (executed == fuel) throw FuelExhausted(fuel);
    step(program, state, mem, hooks);
    ++executed;
  }
  return executed;
}

}  // namespace scope::plc
