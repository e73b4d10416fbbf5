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

#include "scope/harness/attack.h"

#include <algorithm>

namespace scope::harness {

using memguard::ViolationClass;

namespace {

struct KindInfo {
  AttackKind kind;
  const char* name;
  std::optional<ViolationClass> cls;
  bool overflow;  // payload must exceed the victim size
};

constexpr KindInfo kKinds[] = {
    {AttackKind::kStackOverflowControlHijack, "stack-overflow-control-hijack",
     ViolationClass::kStackBufferOverflow, true},
    {AttackKind::kHeapOverflow, "heap-overflow", ViolationClass::kHeapBufferOverflow, true},
    {AttackKind::kGlobalOverflow, "global-overflow", ViolationClass::kGlobalBufferOverflow, true},
    {AttackKind::kUseAfterFree, "use-after-free", ViolationClass::kUseAfterFree, false},
    {AttackKind::kDoubleFree, "double-free", ViolationClass::kDoubleFree, false},
    {AttackKind::kUseAfterReturn, "use-after-return", ViolationClass::kUseAfterReturn, false},
    {AttackKind::kLeak, "leak", ViolationClass::kMemoryLeak, false},
    {AttackKind::kUninitRead, "uninit-read", std::nullopt, false},
    {AttackKind::kRedzoneBypass, "redzone-bypass", std::nullopt, false},
};

const KindInfo& info(AttackKind kind) { return kKinds[static_cast<std::size_t>(kind)]; }

}  // namespace

const char* to_string(AttackKind kind) { return info(kind).name; }

std::optional<AttackKind> parse_attack_kind(std::string_view name) {
  for (const auto& k : kKinds) {
    if (name == k.name) return k.kind;
  }
  return std::nullopt;
}

std::optional<ViolationClass> expected_class(AttackKind kind) { return info(kind).cls; }

AttackScenario make_scenario(const plc::Program& program, AttackKind kind) {
  const auto it = std::find_if(program.victims.begin(), program.victims.end(),
                               [&](const plc::VictimDecl& v) { return v.kind == to_string(kind); });
  if (it == program.victims.end()) {
    throw ScenarioMismatch(std::string("program declares no '") + to_string(kind) + "' victim");
  }
  if (!program.net) throw ScenarioMismatch("program has no network mailbox");

  AttackScenario s;
  s.kind = kind;
  s.victim_size = it->size;
  switch (kind) {
    case AttackKind::kStackOverflowControlHijack: {
      const auto block = program.find_block(it->attacker_block);
      if (!block) throw ScenarioMismatch("hijack victim names no attacker block");
      const auto id = plc::to_index(program.block(*block).instructions.front().id);
      s.payload.assign(it->size, 0x41);
      for (int i = 0; i < 4; ++i) s.payload.push_back(static_cast<std::uint8_t>(id >> (8 * i)));
      break;
    }
    case AttackKind::kHeapOverflow:
    case AttackKind::kGlobalOverflow:
      s.payload.assign(it->size + 8, 0x42);
      break;
    case AttackKind::kRedzoneBypass:
      s.payload = {kTriggerByte, static_cast<std::uint8_t>(it->size)};
      break;
    default:
      s.payload = {kTriggerByte};
      break;
  }
  const auto* rx = program.find_global(program.net->global);
  if (s.payload.size() > rx->size) throw ScenarioMismatch("payload does not fit the mailbox");
  if (info(kind).overflow && s.payload.size() <= s.victim_size) {
    throw ScenarioMismatch("overflow payload must exceed the victim buffer");
  }
  return s;
}

AttackScenario default_scenario(const plc::Program& program) {
  if (program.victims.empty()) throw ScenarioMismatch("program declares no victim");
  const auto kind = parse_attack_kind(program.victims.front().kind);
  if (!kind) throw ScenarioMismatch("unknown victim kind '" + program.victims.front().kind + "'");
  return make_scenario(program, *kind);
}

void inject(const AttackScenario& scenario, runtime::ScanInputs& inputs) { inputs.net = scenario.payload; }

std::vector<std::uint8_t> benign_payload(const plc::Program& program, std::mt19937_64& rng) {
  std::uint32_t limit = 16;
  if (!program.victims.empty()) {
    const auto kind = parse_attack_kind(program.victims.front().kind);
    if (kind && info(*kind).overflow) limit = program.victims.front().size;
  }
  std::uniform_int_distribution<std::uint32_t> len(0, limit);
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<std::uint8_t> out(len(rng));
  for (auto& b : out) b = static_cast<std::uint8_t>(byte(rng));
  if (!out.empty() && out[0] == kTriggerByte) out[0] = 0;
  return out;
}

}  // namespace scope::harness
