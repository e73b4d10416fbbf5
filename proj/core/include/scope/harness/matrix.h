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
#include <string>
#include <vector>

#include "scope/harness/attack.h"
#include "scope/memguard/violation.h"

namespace scope::harness {

enum class RowKind : std::uint8_t {
  kCovered,    // must be detected and mitigated
  kUncovered,  // no guard can see it; must raise nothing
  kBlindSpot,  // structural miss of the redzone scheme; must raise nothing
};

struct MatrixRow {
  std::string vulnerability;
  std::string program;
  AttackKind attack = AttackKind::kStackOverflowControlHijack;
  RowKind kind = RowKind::kCovered;
  std::optional<memguard::ViolationClass> expected;
  bool detected = false;
  bool mitigated = false;
  std::optional<memguard::ViolationClass> observed;
  std::uint64_t benign_accesses = 0;
  std::uint64_t false_positives = 0;
  bool conforms = false;
  std::string detail;
};

struct MatrixConfig {
  std::uint64_t attack_cycles = 20;      // per attacked run
  std::uint64_t attack_at = 5;
  std::uint64_t benign_cycles = 5000;    // per program for the false-positive sweep
  std::uint64_t seed = 7;
};

struct DetectionMatrix {
  std::vector<MatrixRow> rows;
  std::uint64_t benign_accesses = 0;
  std::uint64_t false_positives = 0;

  bool conforms() const;
};

DetectionMatrix detection_matrix(const MatrixConfig& config = {});

}  // namespace scope::harness
