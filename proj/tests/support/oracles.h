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

// Independent reference computations shared by the unit and acceptance
// tests. None of these call into the code they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "scope/plc/program.h"

namespace scope::oracle {

using Matrix = std::vector<std::vector<double>>;
using Vector = std::vector<double>;

inline Vector matvec(const Matrix& a, const Vector& x) {
  Vector y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

inline Vector add(const Vector& a, const Vector& b) {
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

// A copy of `program` with the given instructions removed and every other
// id kept, so a RET into a surviving instruction still resolves.
inline plc::Program delete_instructions(plc::Program program, const std::set<std::uint32_t>& ids) {
  for (auto& block : program.blocks) {
    auto& v = block.instructions;
    v.erase(std::remove_if(v.begin(), v.end(), [&](const plc::Instruction& i) { return ids.count(to_index(i.id)); }),
            v.end());
  }
  program.reindex();
  return program;
}

// The instruction at which control resumes when the one at (block, index)
// is not executed, found by walking the listing directly.
inline std::uint32_t successor_id(const plc::Program& p, std::uint32_t block, std::uint32_t index) {
  const auto& instrs = p.blocks[block].instructions;
  const auto& next = instrs.at(index + 1);
  if (next.opcode == plc::Opcode::kJmp) {
    const auto target = std::get<plc::BlockRef>(next.operands[0]).block;
    return to_index(p.blocks[to_index(target)].instructions.front().id);
  }
  return to_index(next.id);
}

// tau by direct case split.
inline double tau(bool aborted, double delta, double scan, double tc) {
  if (aborted) return delta;
  if (scan <= tc) return 0.0;
  return scan - tc;
}

}  // namespace scope::oracle
