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

#include "scope/plc/machine.h"

namespace scope::harness {

enum class ProfileId : std::uint8_t { kOpenSwat, kOpenSecuts };

struct Profile {
  ProfileId id;
  const char* name;
  const char* program;  // bundled listing
  plc::IoWidths widths;
  std::int64_t cycle_time_us;
  std::uint32_t plc_count;
  bool has_tank;  // PLCs read a tank level on AI0 and drive its valve with DO0
};

const Profile& profile(ProfileId id);
std::optional<ProfileId> parse_profile(std::string_view name);

// I/O widths the corpus programs run with.
inline constexpr plc::IoWidths kCorpusWidths{8, 2, 8};

}  // namespace scope::harness
