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

#include "scope/cima/cfg.h"

#include <algorithm>
#include <sstream>

#include "scope/plc/interpreter.h"

namespace scope::cima {

using plc::Opcode;

const char* to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kFallthrough:
      return "fallthrough";
    case EdgeKind::kJump:
      return "jump";
    case EdgeKind::kBranchTaken:
      return "branch-taken";
    case EdgeKind::kBranchNotTaken:
      return "branch-not-taken";
    case EdgeKind::kCall:
      return "call";
  }
  return "unknown";
}

plc::Position bypass_target(const plc::Program& program, plc::Position pos) {
  const auto next = plc::successor(program, pos);
  const auto& instr = program.at(next);
  if (instr.opcode == Opcode::kJmp) return {std::get<plc::BlockRef>(instr.operands[0]).block, 0};
  return next;
}

Cfg build_cfg(const plc::Program& program) {
  Cfg cfg;
  cfg.nodes.resize(program.blocks.size());
  for (const auto& block : program.blocks) {
    auto& ids = cfg.nodes[plc::to_index(block.id)];
    for (std::uint32_t i = 0; i < block.instructions.size(); ++i) {
      const auto& instr = block.instructions[i];
      ids.push_back(instr.id);
      const auto ref = [&](std::size_t k) { return std::get<plc::BlockRef>(instr.operands[k]).block; };
      switch (instr.opcode) {
        case Opcode::kJmp:
          cfg.edges.push_back({block.id, ref(0), EdgeKind::kJump});
          break;
        case Opcode::kCjmp:
          cfg.edges.push_back({block.id, ref(1), EdgeKind::kBranchTaken});
          cfg.edges.push_back({block.id, ref(2), EdgeKind::kBranchNotTaken});
          break;
        case Opcode::kCall:
          cfg.edges.push_back({block.id, ref(0), EdgeKind::kCall});
          break;
        default:
          break;
      }
      if (plc::is_memory_access(instr.opcode)) {
        cfg.targets[instr.id] = program.at(bypass_target(program, {block.id, i})).id;
      }
    }
    if (block.fallthrough) cfg.edges.push_back({block.id, *block.fallthrough, EdgeKind::kFallthrough});
  }
  std::sort(cfg.edges.begin(), cfg.edges.end());
  return cfg;
}

std::string to_dot(const plc::Program& program, const Cfg& cfg) {
  std::ostringstream out;
  out << "digraph cfg {\n  node [shape=box, fontname=monospace];\n";
  for (const auto& block : program.blocks) {
    out << "  b" << plc::to_index(block.id) << " [label=\"" << block.label << "\\l";
    for (const auto& instr : block.instructions) {
      out << plc::to_index(instr.id) << ": " << plc::mnemonic(instr.opcode);
      if (const auto it = cfg.targets.find(instr.id); it != cfg.targets.end()) {
        out << "  -> T=" << plc::to_index(it->second);
      }
      out << "\\l";
    }
    out << "\"];\n";
  }
  for (const auto& e : cfg.edges) {
    out << "  b" << plc::to_index(e.from) << " -> b" << plc::to_index(e.to) << " [label=\""
        << to_string(e.kind) << "\"";
    if (e.kind == EdgeKind::kCall) out << ", style=dashed";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace scope::cima
