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
#include <string_view>

#include "scope/plc/interpreter.h"
#include "scope/plc/isa.h"

namespace scope::memguard {

enum class ViolationClass : std::uint8_t {
  kStackBufferOverflow,
  kHeapBufferOverflow,
  kGlobalBufferOverflow,
  kUseAfterFree,
  kUseAfterReturn,
  kDoubleFree,
  kMemoryLeak,
  kBadFree,  // FREE of an address that is not an allocation base
};

inline constexpr ViolationClass kAllViolationClasses[] = {
    ViolationClass::kStackBufferOverflow, ViolationClass::kHeapBufferOverflow,
    ViolationClass::kGlobalBufferOverflow, ViolationClass::kUseAfterFree,
    ViolationClass::kUseAfterReturn,      ViolationClass::kDoubleFree,
    ViolationClass::kMemoryLeak,          ViolationClass::kBadFree,
};

const char* to_string(ViolationClass cls);
std::optional<ViolationClass> parse_violation_class(std::string_view name);

// Maps a poison code to the class it evidences. Nullopt for addressable
// cells (0..7) and unknown codes.
std::optional<ViolationClass> classify(std::uint8_t code);

struct Violation {
  ViolationClass cls = ViolationClass::kHeapBufferOverflow;
  plc::InstrId instr_id{};
  std::int64_t address = 0;
  std::int64_t size = 0;
  plc::AccessKind kind = plc::AccessKind::kRead;
  std::uint64_t cycle_index = 0;
  friend bool operator==(const Violation&, const Violation&) = default;
};

// One JSON object: {class, instr_id, address, size, kind, cycle_index}.
std::string to_json(const Violation& v);
Violation violation_from_json(std::string_view text);

}  // namespace scope::memguard
