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
#include <vector>

#include "scope/cima/cfg.h"
#include "scope/plc/program.h"

namespace scope::cima {

class InstrumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstrumentedProgram {
  plc::Program program;
  Cfg cfg;
  // Memory-access instruction ids in listing order; each gets a dispatch check.
  std::vector<InstrId> check_sites;
  // Indexed by new block id: the original block it was split from.
  std::vector<BlockId> provenance;
  // Indexed by original block id.
  std::vector<std::uint32_t> original_block_sizes;
  // Indexed by instruction id: where to resume when that access is skipped.
  std::vector<std::optional<plc::Position>> bypass;

  std::uint32_t chain_cap(BlockId block) const;
};

// Splits every block after each memory access whose target sits in the same
// block (no split when a JMP follows). Throws InstrumentError on a program
// that is already instrumented.
InstrumentedProgram instrument(const plc::Program& program);

// Merges split blocks back via provenance; equals build_cfg of the original.
Cfg collapse(const InstrumentedProgram& ip);

}  // namespace scope::cima
