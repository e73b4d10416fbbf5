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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scope/plc/program.h"

namespace scope::cima {

using plc::BlockId;
using plc::InstrId;

enum class EdgeKind : std::uint8_t { kFallthrough, kJump, kBranchTaken, kBranchNotTaken, kCall };

const char* to_string(EdgeKind kind);

struct Edge {
  BlockId from{};
  BlockId to{};
  EdgeKind kind = EdgeKind::kFallthrough;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Cfg {
  // Indexed by block id: the block's instruction ids in order.
  std::vector<std::vector<InstrId>> nodes;
  // Sorted.
  std::vector<Edge> edges;
  // Memory-access instruction i -> bypass target T_i.
  std::map<InstrId, InstrId> targets;

  friend bool operator==(const Cfg&, const Cfg&) = default;
};

// Where control resumes if the instruction at `pos` does not run: the next
// instruction, or the head of the block an immediately following JMP names.
plc::Position bypass_target(const plc::Program& program, plc::Position pos);

Cfg build_cfg(const plc::Program& program);

// Graphviz rendering; memory accesses are annotated with their targets.
std::string to_dot(const plc::Program& program, const Cfg& cfg);

}  // namespace scope::cima
