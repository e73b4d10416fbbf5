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
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scope/memguard/violation.h"
#include "scope/plc/program.h"
#include "scope/runtime/plc_instance.h"

namespace scope::harness {

enum class AttackKind : std::uint8_t {
  kStackOverflowControlHijack,
  kHeapOverflow,
  kGlobalOverflow,
  kUseAfterFree,
  kDoubleFree,
  kUseAfterReturn,
  kLeak,
  kUninitRead,
  kRedzoneBypass,
};

const char* to_string(AttackKind kind);
std::optional<AttackKind> parse_attack_kind(std::string_view name);

// The class a guard should report; nullopt where none can be.
std::optional<memguard::ViolationClass> expected_class(AttackKind kind);

// First request byte that arms the diagnostic paths in the corpus programs.
inline constexpr std::uint8_t kTriggerByte = 0xA5;

struct AttackScenario {
  AttackKind kind = AttackKind::kStackOverflowControlHijack;
  std::vector<std::uint8_t> payload;
  // Only the network mailbox is modeled as an entry point.
  std::string target = "net";
  std::uint32_t victim_size = 0;
};

class ScenarioMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Builds the payload for `kind` against the program's `.victim` declaration.
// Hijack payload: victim_size padding bytes, then the little-endian id of the
// attacker block's first instruction.
AttackScenario make_scenario(const plc::Program& program, AttackKind kind);
// The scenario for the program's first `.victim`.
AttackScenario default_scenario(const plc::Program& program);

// Places the payload where the next input scan picks it up.
void inject(const AttackScenario& scenario, runtime::ScanInputs& inputs);

// A request that stays inside the victim bounds and never arms a trigger.
std::vector<std::uint8_t> benign_payload(const plc::Program& program, std::mt19937_64& rng);

}  // namespace scope::harness
