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

#include "scope/plc/program.h"

#include <set>
#include <sstream>

namespace scope::plc {

std::size_t Program::instruction_count() const {
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.instructions.size();
  return total;
}

std::uint32_t Program::globals_size() const {
  std::uint32_t end = 0;
  for (const auto& g : globals) end = g.offset + g.slot_size();
  return end;
}

const GlobalVar* Program::find_global(std::string_view name) const {
  for (const auto& g : globals) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

std::optional<BlockId> Program::find_block(std::string_view label) const {
  for (const auto& b : blocks) {
    if (b.label == label) return b.id;
  }
  return std::nullopt;
}

void Program::reindex() {
  std::uint32_t max_id = 0;
  bool any = false;
  for (const auto& b : blocks) {
    for (const auto& instr : b.instructions) {
      max_id = std::max(max_id, to_index(instr.id));
      any = true;
    }
  }
  positions_.assign(any ? max_id + 1 : 0, std::nullopt);
  for (const auto& b : blocks) {
    for (std::uint32_t i = 0; i < b.instructions.size(); ++i) {
      positions_[to_index(b.instructions[i].id)] = Position{b.id, i};
    }
  }
}

std::optional<Position> Program::position_of(InstrId id) const {
  const auto index = to_index(id);
  if (index >= positions_.size()) return std::nullopt;
  return positions_[index];
}

namespace {

[[noreturn]] void fail(const std::string& message) { throw ProgramError(message); }

std::string block_name(const Program& p, BlockId id) {
  const auto index = to_index(id);
  if (index < p.blocks.size()) return p.blocks[index].label;
  return "#" + std::to_string(index);
}

}  // namespace

void validate(const Program& program) {
  if (program.blocks.empty()) fail("program has no blocks");
  if (to_index(program.entry) >= program.blocks.size()) fail("entry block does not exist");

  std::set<std::string> labels;
  std::set<std::uint32_t> ids;
  for (std::uint32_t bi = 0; bi < program.blocks.size(); ++bi) {
    const auto& b = program.blocks[bi];
    if (to_index(b.id) != bi) fail("block ids must be dense and ordered");
    if (!labels.insert(b.label).second) fail("duplicate block label '" + b.label + "'");
    if (b.instructions.empty()) fail("block '" + b.label + "' is empty");
    if (b.fallthrough) {
      if (!program.instrumented) fail("fallthrough block '" + b.label + "' in an original program");
      if (to_index(*b.fallthrough) >= program.blocks.size()) {
        fail("block '" + b.label + "' falls through to a missing block");
      }
    }
    for (std::size_t i = 0; i < b.instructions.size(); ++i) {
      const auto& instr = b.instructions[i];
      if (!ids.insert(to_index(instr.id)).second) {
        fail("duplicate instruction id " + std::to_string(to_index(instr.id)));
      }
      if (!well_formed(instr)) {
        fail("instruction " + std::to_string(to_index(instr.id)) + " (" +
             std::string(mnemonic(instr.opcode)) + ") has the wrong operands");
      }
      const bool last = i + 1 == b.instructions.size();
      if (is_terminator(instr.opcode) && !last) {
        fail("terminator in the middle of block '" + b.label + "'");
      }
      if (last && !is_terminator(instr.opcode) && !b.fallthrough) {
        fail("block '" + b.label + "' does not end with a terminator");
      }
      for (const auto& operand : instr.operands) {
        if (const auto* ref = std::get_if<BlockRef>(&operand)) {
          if (to_index(ref->block) >= program.blocks.size()) {
            fail("reference to missing block " + block_name(program, ref->block));
          }
        }
        if (const auto* timer = std::get_if<TimerRef>(&operand)) {
          if (timer->index >= program.timer_modes.size()) fail("timer index out of range");
          const auto expected =
              instr.opcode == Opcode::kTon ? TimerMode::kOnDelay : TimerMode::kOffDelay;
          if (program.timer_modes[timer->index] != expected) {
            fail("timer T" + std::to_string(timer->index) + " used as both TON and TOF");
          }
        }
        if (const auto* counter = std::get_if<CounterRef>(&operand)) {
          if (counter->index >= program.counter_count) fail("counter index out of range");
        }
      }
    }
  }

  std::set<std::string> globals;
  Address expected = 0;
  for (const auto& g : program.globals) {
    if (!globals.insert(g.name).second) fail("duplicate global '" + g.name + "'");
    if (g.size == 0) fail("global '" + g.name + "' has zero size");
    if (g.offset < expected) fail("global '" + g.name + "' overlaps its predecessor");
    if (g.offset > expected) fail("global '" + g.name + "' leaves a gap");
    expected = g.offset + g.slot_size();
  }

  for (const auto& binding : program.io_map) {
    if (binding.reg >= kRegisterCount) fail("io binding register out of range");
  }
  if (program.net) {
    if (!program.find_global(program.net->global)) {
      fail("net binding names missing global '" + program.net->global + "'");
    }
    if (program.net->length_reg >= kRegisterCount) fail("net length register out of range");
  }
  for (const auto& victim : program.victims) {
    if (!victim.attacker_block.empty() && !program.find_block(victim.attacker_block)) {
      fail("victim names missing attacker block '" + victim.attacker_block + "'");
    }
  }
}

namespace {

std::string channel_name(ChannelKind kind, std::uint32_t index) {
  switch (kind) {
    case ChannelKind::kDigitalIn:
      return "DI" + std::to_string(index);
    case ChannelKind::kAnalogIn:
      return "AI" + std::to_string(index);
    case ChannelKind::kDigitalOut:
      return "DO" + std::to_string(index);
  }
  return "??";
}

void render_operand(std::ostream& out, const Program& p, const Operand& operand) {
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Reg>) {
          out << 'r' << int{o.index};
        } else if constexpr (std::is_same_v<T, Imm>) {
          out << '#' << o.value;
        } else if constexpr (std::is_same_v<T, FramePointer>) {
          out << "fp";
        } else if constexpr (std::is_same_v<T, ChannelRef>) {
          out << channel_name(o.kind, o.index);
        } else if constexpr (std::is_same_v<T, TimerRef>) {
          out << 'T' << o.index;
        } else if constexpr (std::is_same_v<T, CounterRef>) {
          out << 'C' << o.index;
        } else if constexpr (std::is_same_v<T, MemRef>) {
          out << '[';
          switch (o.base) {
            case AddressBase::kAbsolute:
              out << o.displacement;
              break;
            case AddressBase::kRegister:
              out << 'r' << int{o.reg};
              break;
            case AddressBase::kFrame:
              out << "fp";
              break;
          }
          if (o.base != AddressBase::kAbsolute && o.displacement != 0) {
            out << (o.displacement > 0 ? "+" : "-")
                << (o.displacement > 0 ? o.displacement : -o.displacement);
          }
          out << ']';
        } else if constexpr (std::is_same_v<T, BlockRef>) {
          out << block_name(p, o.block);
        }
      },
      operand);
}

}  // namespace

std::string render(const Program& program) {
  std::ostringstream out;
  if (program.entry != BlockId{0}) out << ".entry " << block_name(program, program.entry) << '\n';
  for (const auto& g : program.globals) out << ".global " << g.name << ' ' << g.size << '\n';
  for (const auto& b : program.io_map) {
    if (b.direction() == BindingDirection::kToRegister) {
      out << ".io " << channel_name(b.channel, b.index) << "->r" << int{b.reg} << '\n';
    } else {
      out << ".io " << channel_name(b.channel, b.index) << "<-r" << int{b.reg} << '\n';
    }
  }
  if (program.net) out << ".net " << program.net->global << " r" << int{program.net->length_reg} << '\n';
  for (const auto& v : program.victims) {
    out << ".victim " << v.kind << ' ' << v.size;
    if (!v.attacker_block.empty()) out << ' ' << v.attacker_block;
    out << '\n';
  }
  for (const auto& b : program.blocks) {
    out << b.label << ":\n";
    for (const auto& instr : b.instructions) {
      out << "  " << mnemonic(instr.opcode);
      for (std::size_t i = 0; i < instr.operands.size(); ++i) {
        out << (i == 0 ? " " : ", ");
        render_operand(out, program, instr.operands[i]);
      }
      out << '\n';
    }
    if (b.fallthrough) out << "  # falls through to " << block_name(program, *b.fallthrough) << '\n';
  }
  return out.str();
}

}  // namespace scope::plc
