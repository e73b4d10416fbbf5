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

#include "scope/memguard/violation.h"

#include <stdexcept>

#include "json.hpp"

#include "scope/memguard/shadow.h"

namespace scope::memguard {

const char* to_string(ViolationClass cls) {
  switch (cls) {
    case ViolationClass::kStackBufferOverflow:
      return "stack-buffer-overflow";
    case ViolationClass::kHeapBufferOverflow:
      return "heap-buffer-overflow";
    case ViolationClass::kGlobalBufferOverflow:
      return "global-buffer-overflow";
    case ViolationClass::kUseAfterFree:
      return "use-after-free";
    case ViolationClass::kUseAfterReturn:
      return "use-after-return";
    case ViolationClass::kDoubleFree:
      return "double-free";
    case ViolationClass::kMemoryLeak:
      return "memory-leak";
    case ViolationClass::kBadFree:
      return "bad-free";
  }
  return "unknown";
}

std::optional<ViolationClass> parse_violation_class(std::string_view name) {
  for (auto cls : kAllViolationClasses) {
    if (name == to_string(cls)) return cls;
  }
  return std::nullopt;
}

std::optional<ViolationClass> classify(std::uint8_t code) {
  switch (code) {
    case poison::kStackRedzone:
      return ViolationClass::kStackBufferOverflow;
    case poison::kStackAfterReturn:
      return ViolationClass::kUseAfterReturn;
    case poison::kGlobalRedzone:
      return ViolationClass::kGlobalBufferOverflow;
    case poison::kHeapRedzone:
    case poison::kHeapUnallocated:
      return ViolationClass::kHeapBufferOverflow;
    case poison::kHeapFreed:
      return ViolationClass::kUseAfterFree;
    default:
      return std::nullopt;
  }
}

namespace {

plc::AccessKind parse_kind(const std::string& s) {
  for (auto k : {plc::AccessKind::kRead, plc::AccessKind::kWrite, plc::AccessKind::kFree,
                 plc::AccessKind::kAlloc}) {
    if (s == plc::to_string(k)) return k;
  }
  throw std::invalid_argument("unknown access kind '" + s + "'");
}

}  // namespace

std::string to_json(const Violation& v) {
  const nlohmann::json j = {
      {"class", to_string(v.cls)},   {"instr_id", plc::to_index(v.instr_id)},
      {"address", v.address},        {"size", v.size},
      {"kind", plc::to_string(v.kind)}, {"cycle_index", v.cycle_index},
  };
  return j.dump();
}

Violation violation_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  const auto cls = parse_violation_class(j.at("class").get<std::string>());
  if (!cls) throw std::invalid_argument("unknown violation class");
  Violation v;
  v.cls = *cls;
  v.instr_id = plc::InstrId{j.at("instr_id").get<std::uint32_t>()};
  v.address = j.at("address").get<std::int64_t>();
  v.size = j.at("size").get<std::int64_t>();
  v.kind = parse_kind(j.at("kind").get<std::string>());
  v.cycle_index = j.at("cycle_index").get<std::uint64_t>();
  return v;
}

}  // namespace scope::memguard
