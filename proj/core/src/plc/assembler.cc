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

#include "scope/plc/assembler.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <vector>

namespace scope::plc {

AssembleError::AssembleError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

struct SourceLine {
  std::size_t number;
  std::string text;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// '#' followed by a digit or sign is an immediate; any other '#' (and ';')
// starts a comment.
std::string_view strip_comment(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == ';') return s.substr(0, i);
    if (s[i] == '#') {
      const char next = i + 1 < s.size() ? s[i + 1] : ' ';
      if (!(std::isdigit(static_cast<unsigned char>(next)) || next == '-' || next == '+')) {
        return s.substr(0, i);
      }
    }
  }
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_' || s[0] == '.')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

std::optional<std::int64_t> parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
  }
  if (s.empty()) return std::nullopt;
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, base);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  if (value > static_cast<std::uint64_t>(INT64_MAX)) return std::nullopt;
  const auto signed_value = static_cast<std::int64_t>(value);
  return negative ? -signed_value : signed_value;
}

std::optional<std::uint32_t> parse_indexed(std::string_view s, std::string_view prefix) {
  if (s.size() <= prefix.size() || s.substr(0, prefix.size()) != prefix) return std::nullopt;
  const auto digits = s.substr(prefix.size());
  if (!std::all_of(digits.begin(), digits.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    return std::nullopt;
  }
  std::uint32_t value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{}) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_operands(std::string_view s) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '[') ++depth;
    if (s[i] == ']') --depth;
    if (s[i] == ',' && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  const auto tail = trim(s.substr(start));
  if (!tail.empty() || !parts.empty()) parts.push_back(tail);
  return parts;
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) words.push_back(s.substr(start, i - start));
  }
  return words;
}

class Assembler {
 public:
  explicit Assembler(std::string_view source) { split_lines(source); }

  Program run() {
    collect_declarations();
    emit_instructions();
    finish();
    return std::move(program_);
  }

 private:
  struct PendingBlock {
    std::string label;
    std::size_t line;
    std::vector<std::pair<std::size_t, std::string>> body;  // (line, text)
  };

  void split_lines(std::string_view source) {
    std::size_t number = 1;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= source.size(); ++i) {
      if (i == source.size() || source[i] == '\n') {
        lines_.push_back({number++, std::string(source.substr(start, i - start))});
        start = i + 1;
      }
    }
  }

  [[noreturn]] static void error(std::size_t line, const std::string& msg) {
    throw AssembleError(line, msg);
  }

  // Pass 1: directives, labels and their bodies.
  void collect_declarations() {
    Address next_offset = 0;
    for (const auto& line : lines_) {
      const auto text = trim(strip_comment(line.text));
      if (text.empty()) continue;
      if (text.front() == '.') {
        directive(line.number, text, next_offset);
        continue;
      }
      if (text.back() == ':') {
        const auto label = trim(text.substr(0, text.size() - 1));
        if (!is_identifier(label)) error(line.number, "bad label '" + std::string(label) + "'");
        if (label_ids_.count(std::string(label))) {
          error(line.number, "duplicate label '" + std::string(label) + "'");
        }
        label_ids_[std::string(label)] = static_cast<std::uint32_t>(pending_.size());
        pending_.push_back({std::string(label), line.number, {}});
        continue;
      }
      if (pending_.empty()) error(line.number, "instruction before the first label");
      pending_.back().body.emplace_back(line.number, std::string(text));
    }
    if (pending_.empty()) error(lines_.empty() ? 1 : lines_.back().number, "no blocks");
  }

  void directive(std::size_t line, std::string_view text, Address& next_offset) {
    const auto words = split_words(text);
    const auto& name = words[0];
    if (name == ".global") {
      if (words.size() != 3 && words.size() != 4) error(line, ".global expects NAME SIZE [@OFFSET]");
      const std::string global(words[1]);
      if (!is_identifier(global)) error(line, "bad global name '" + global + "'");
      if (program_.find_global(global)) error(line, "duplicate global '" + global + "'");
      const auto size = parse_integer(words[2]);
      if (!size || *size <= 0 || *size > 0xFFFFFF) error(line, "bad global size");
      GlobalVar g{global, next_offset, static_cast<std::uint32_t>(*size)};
      if (words.size() == 4) {
        if (words[3].front() != '@') error(line, "global offset must be written @OFFSET");
        const auto offset = parse_integer(words[3].substr(1));
        if (!offset || *offset < 0) error(line, "bad global offset");
        if (*offset < next_offset) error(line, "global '" + global + "' overlaps its predecessor");
        if (*offset > next_offset) {
          error(line, "global '" + global + "' is not contiguous with its predecessor");
        }
      }
      next_offset = g.offset + g.slot_size();
      program_.globals.push_back(std::move(g));
    } else if (name == ".io") {
      if (words.size() != 2) error(line, ".io expects CHANNEL->rN or DOk<-rN");
      io_binding(line, words[1]);
    } else if (name == ".net") {
      if (words.size() != 3) error(line, ".net expects GLOBAL rN");
      const auto reg = parse_indexed(words[2], "r");
      if (!reg || *reg >= kRegisterCount) error(line, "bad register '" + std::string(words[2]) + "'");
      program_.net = NetBinding{std::string(words[1]), static_cast<std::uint8_t>(*reg)};
      net_line_ = line;
    } else if (name == ".victim") {
      if (words.size() != 3 && words.size() != 4) error(line, ".victim expects KIND SIZE [BLOCK]");
      const auto size = parse_integer(words[2]);
      if (!size || *size < 0) error(line, "bad victim size");
      program_.victims.push_back({std::string(words[1]), static_cast<std::uint32_t>(*size),
                                  words.size() == 4 ? std::string(words[3]) : std::string()});
      victim_lines_.push_back(line);
    } else if (name == ".entry") {
      if (words.size() != 2) error(line, ".entry expects LABEL");
      entry_label_ = std::string(words[1]);
      entry_line_ = line;
    } else {
      error(line, "unknown directive '" + std::string(name) + "'");
    }
  }

  void io_binding(std::size_t line, std::string_view binding) {
    const auto to = binding.find("->");
    const auto from = binding.find("<-");
    const bool input = to != std::string_view::npos;
    if (!input && from == std::string_view::npos) error(line, "bad io binding");
    const auto split = input ? to : from;
    const auto channel = parse_channel(binding.substr(0, split));
    const auto reg = parse_indexed(binding.substr(split + 2), "r");
    if (!channel) error(line, "bad channel in io binding");
    if (!reg || *reg >= kRegisterCount) error(line, "bad register in io binding");
    const bool is_output = channel->kind == ChannelKind::kDigitalOut;
    if (input == is_output) error(line, "inputs bind with '->', outputs with '<-'");
    program_.io_map.push_back({channel->kind, channel->index, static_cast<std::uint8_t>(*reg)});
  }

  static std::optional<ChannelRef> parse_channel(std::string_view s) {
    if (auto i = parse_indexed(s, "DI")) return ChannelRef{ChannelKind::kDigitalIn, *i};
    if (auto i = parse_indexed(s, "AI")) return ChannelRef{ChannelKind::kAnalogIn, *i};
    if (auto i = parse_indexed(s, "DO")) return ChannelRef{ChannelKind::kDigitalOut, *i};
    return std::nullopt;
  }

  // Pass 2: instructions, resolved against labels and globals.
  void emit_instructions() {
    std::uint32_t next_id = 0;
    for (std::uint32_t bi = 0; bi < pending_.size(); ++bi) {
      auto& pending = pending_[bi];
      Block block;
      block.id = BlockId{bi};
      block.label = pending.label;
      if (pending.body.empty()) error(pending.line, "block '" + pending.label + "' is empty");
      for (std::size_t k = 0; k < pending.body.size(); ++k) {
        const auto& [line, text] = pending.body[k];
        auto instr = parse_instruction(line, text);
        instr.id = InstrId{next_id++};
        const bool last = k + 1 == pending.body.size();
        if (is_terminator(instr.opcode) && !last) {
          error(line, "terminator " + std::string(mnemonic(instr.opcode)) +
                          " must end its block");
        }
        if (last && !is_terminator(instr.opcode)) {
          error(line, "block '" + pending.label + "' does not end with a terminator");
        }
        block.instructions.push_back(std::move(instr));
      }
      program_.blocks.push_back(std::move(block));
    }
  }

  Instruction parse_instruction(std::size_t line, std::string_view text) {
    std::size_t split = 0;
    while (split < text.size() && !std::isspace(static_cast<unsigned char>(text[split]))) ++split;
    const auto name = text.substr(0, split);
    const auto op = parse_mnemonic(name);
    if (!op) error(line, "unknown opcode '" + std::string(name) + "'");
    const auto operands = split_operands(trim(text.substr(split)));
    const auto& sig = info(*op).slots;
    if (operands.size() != sig.size()) {
      error(line, std::string(name) + " expects " + std::to_string(sig.size()) + " operand(s), got " +
                      std::to_string(operands.size()));
    }
    Instruction instr;
    instr.opcode = *op;
    for (std::size_t i = 0; i < sig.size(); ++i) {
      instr.operands.push_back(parse_operand(line, sig[i], operands[i], *op));
    }
    return instr;
  }

  Operand parse_operand(std::size_t line, Slot slot, std::string_view token, Opcode op) {
    const auto bad = [&](const char* what) -> Operand {
      error(line, "operand '" + std::string(token) + "' of " + std::string(mnemonic(op)) +
                      " is not " + what);
    };
    switch (slot) {
      case Slot::kReg:
        if (auto r = parse_register(token)) return *r;
        return bad("a register");
      case Slot::kValue:
        if (token == "fp") return FramePointer{};
        if (auto r = parse_register(token)) return *r;
        if (auto imm = parse_immediate(token)) return *imm;
        if (!token.empty() && token.front() == '@') {
          const auto* g = program_.find_global(token.substr(1));
          if (!g) error(line, "undefined global '" + std::string(token.substr(1)) + "'");
          return Imm{static_cast<std::int64_t>(g->offset)};
        }
        return bad("a register, immediate, fp or @global");
      case Slot::kImm:
        if (auto imm = parse_immediate(token)) return *imm;
        return bad("an immediate");
      case Slot::kInput:
        if (auto ch = parse_channel(token)) return *ch;
        return bad("an I/O channel");
      case Slot::kOutput:
        if (auto ch = parse_channel(token); ch && ch->kind == ChannelKind::kDigitalOut) return *ch;
        return bad("a digital output");
      case Slot::kTimer:
        if (auto t = parse_indexed(token, "T")) {
          const auto mode = op == Opcode::kTon ? TimerMode::kOnDelay : TimerMode::kOffDelay;
          note_timer(line, *t, mode);
          return TimerRef{*t};
        }
        return bad("a timer");
      case Slot::kCounter:
        if (auto c = parse_indexed(token, "C")) {
          program_.counter_count = std::max(program_.counter_count, *c + 1);
          return CounterRef{*c};
        }
        return bad("a counter");
      case Slot::kMem:
        return parse_memref(line, token);
      case Slot::kBlock: {
        const auto it = label_ids_.find(std::string(token));
        if (it == label_ids_.end()) error(line, "undefined label '" + std::string(token) + "'");
        return BlockRef{BlockId{it->second}};
      }
    }
    return bad("valid");
  }

  static std::optional<Reg> parse_register(std::string_view token) {
    const auto r = parse_indexed(token, "r");
    if (!r || *r >= kRegisterCount) return std::nullopt;
    return Reg{static_cast<std::uint8_t>(*r)};
  }

  static std::optional<Imm> parse_immediate(std::string_view token) {
    if (token.empty() || token.front() != '#') return std::nullopt;
    const auto value = parse_integer(token.substr(1));
    if (!value) return std::nullopt;
    return Imm{*value};
  }

  void note_timer(std::size_t line, std::uint32_t index, TimerMode mode) {
    auto& modes = program_.timer_modes;
    if (index >= modes.size()) {
      modes.resize(index + 1, TimerMode::kOnDelay);
      timer_seen_.resize(index + 1, false);
    }
    if (timer_seen_[index] && modes[index] != mode) {
      error(line, "timer T" + std::to_string(index) + " used as both TON and TOF");
    }
    modes[index] = mode;
    timer_seen_[index] = true;
  }

  MemRef parse_memref(std::size_t line, std::string_view token) {
    if (token.size() < 3 || token.front() != '[' || token.back() != ']') {
      error(line, "bad address '" + std::string(token) + "'");
    }
    const auto inner = token.substr(1, token.size() - 2);
    MemRef ref;
    bool have_base = false;
    std::size_t i = 0;
    int sign = 1;
    while (i < inner.size()) {
      std::size_t j = i;
      while (j < inner.size() && inner[j] != '+' && inner[j] != '-') ++j;
      const auto term = trim(inner.substr(i, j - i));
      if (term.empty()) error(line, "empty term in address '" + std::string(token) + "'");
      if (term == "fp" || parse_register(term)) {
        if (have_base || sign < 0) error(line, "address may have one added base register");
        have_base = true;
        if (term == "fp") {
          ref.base = AddressBase::kFrame;
        } else {
          ref.base = AddressBase::kRegister;
          ref.reg = parse_register(term)->index;
        }
      } else if (term.front() == '@') {
        const auto* g = program_.find_global(term.substr(1));
        if (!g) error(line, "undefined global '" + std::string(term.substr(1)) + "'");
        ref.displacement += sign * static_cast<std::int64_t>(g->offset);
      } else if (auto v = parse_integer(term)) {
        ref.displacement += sign * *v;
      } else {
        error(line, "bad address term '" + std::string(term) + "'");
      }
      if (j < inner.size()) sign = inner[j] == '-' ? -1 : 1;
      i = j + 1;
      if (j == inner.size()) break;
    }
    return ref;
  }

  void finish() {
    if (entry_label_) {
      const auto it = label_ids_.find(*entry_label_);
      if (it == label_ids_.end()) error(entry_line_, "undefined label '" + *entry_label_ + "'");
      program_.entry = BlockId{it->second};
    }
    if (program_.net && !program_.find_global(program_.net->global)) {
      error(net_line_, "undefined global '" + program_.net->global + "'");
    }
    for (std::size_t i = 0; i < program_.victims.size(); ++i) {
      const auto& block = program_.victims[i].attacker_block;
      if (!block.empty() && !label_ids_.count(block)) {
        error(victim_lines_[i], "undefined label '" + block + "'");
      }
    }
    program_.reindex();
    try {
      validate(program_);
    } catch (const ProgramError& e) {
      error(lines_.empty() ? 1 : lines_.back().number, e.what());
    }
  }

  std::vector<SourceLine> lines_;
  std::vector<PendingBlock> pending_;
  std::map<std::string, std::uint32_t> label_ids_;
  std::vector<bool> timer_seen_;
  std::optional<std::string> entry_label_;
  std::size_t entry_line_ = 0;
  std::size_t net_line_ = 0;
  std::vector<std::size_t> victim_lines_;
  Program program_;
};

}  // namespace

Program assemble(std::string_view source) { return Assembler(source).run(); }

}  // namespace scope::plc
