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

#include "scope/cima/instrument.h"

#include <algorithm>

namespace scope::cima {

using plc::Block;
using plc::Opcode;

std::uint32_t InstrumentedProgram::chain_cap(BlockId block) const {
  return 4 * original_block_sizes.at(plc::to_index(provenance.at(plc::to_index(block))));
}

namespace {

bool splits_after(const Block& block, std::size_t i) {
  if (!plc::is_memory_access(block.instructions[i].opcode)) return false;
  if (i + 1 >= block.instructions.size()) return false;
  return block.instructions[i + 1].opcode != Opcode::kJmp;
}

}  // namespace

InstrumentedProgram instrument(const plc::Program& program) {
  if (program.instrumented) throw InstrumentError("program is already instrumented");
  plc::validate(program);

  InstrumentedProgram ip;
  ip.program = program;
  ip.program.instrumented = true;
  auto& blocks = ip.program.blocks;
  const auto original_count = static_cast<std::uint32_t>(program.blocks.size());
  for (const auto& b : program.blocks) {
    ip.provenance.push_back(b.id);
    ip.original_block_sizes.push_back(static_cast<std::uint32_t>(b.instructions.size()));
  }

  std::vector<Block> appended;
  for (std::uint32_t b = 0; b < original_count; ++b) {
    const Block& source = program.blocks[b];
    std::vector<Block> pieces;
    pieces.push_back({source.id, source.label, {}, std::nullopt});
    for (std::size_t i = 0; i < source.instructions.size(); ++i) {
      pieces.back().instructions.push_back(source.instructions[i]);
      if (splits_after(source, i)) {
        const BlockId id{original_count + static_cast<std::uint32_t>(appended.size() + pieces.size() - 1)};
        pieces.back().fallthrough = id;
        pieces.push_back({id, source.label + "." + std::to_string(pieces.size()), {}, std::nullopt});
      }
    }
    blocks[b] = std::move(pieces.front());
    for (std::size_t k = 1; k < pieces.size(); ++k) {
      ip.provenance.push_back(source.id);
      appended.push_back(std::move(pieces[k]));
    }
  }
  for (auto& piece : appended) blocks.push_back(std::move(piece));
  ip.program.reindex();
  plc::validate(ip.program);

  ip.cfg = build_cfg(ip.program);
  ip.bypass.resize(ip.program.id_space());
  for (const auto& block : ip.program.blocks) {
    for (std::uint32_t i = 0; i < block.instructions.size(); ++i) {
      const auto& instr = block.instructions[i];
      if (!plc::is_memory_access(instr.opcode)) continue;
      ip.bypass[plc::to_index(instr.id)] = bypass_target(ip.program, {block.id, i});
    }
  }
  for (const auto& block : program.blocks) {
    for (const auto& instr : block.instructions) {
      if (plc::is_memory_access(instr.opcode)) ip.check_sites.push_back(instr.id);
    }
  }
  return ip;
}

Cfg collapse(const InstrumentedProgram& ip) {
  Cfg cfg;
  const auto original_count = ip.original_block_sizes.size();
  cfg.nodes.resize(original_count);
  for (std::size_t b = 0; b < original_count; ++b) {
    auto& node = cfg.nodes[b];
    std::optional<BlockId> piece = BlockId{static_cast<std::uint32_t>(b)};
    while (piece && ip.provenance[plc::to_index(*piece)] == BlockId{static_cast<std::uint32_t>(b)}) {
      const auto& ids = ip.cfg.nodes[plc::to_index(*piece)];
      node.insert(node.end(), ids.begin(), ids.end());
      piece = ip.program.block(*piece).fallthrough;
    }
  }
  for (const auto& e : ip.cfg.edges) {
    const auto from = ip.provenance[plc::to_index(e.from)];
    const auto to = ip.provenance[plc::to_index(e.to)];
    if (e.kind == EdgeKind::kFallthrough && from == to) continue;
    cfg.edges.push_back({from, to, e.kind});
  }
  std::sort(cfg.edges.begin(), cfg.edges.end());
  cfg.targets = ip.cfg.targets;
  return cfg;
}

}  // namespace scope::cima
