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

#include "scope/harness/profiles.h"

namespace scope::harness {

namespace {

constexpr Profile kProfiles[] = {
    {ProfileId::kOpenSwat, "openswat", "openswat_stage1", {32, 13, 16}, 10000, 6, true},
    {ProfileId::kOpenSecuts, "opensecuts", "opensecuts", {6, 0, 9}, 30000, 1, false},
};

}  // namespace

const Profile& profile(ProfileId id) { return kProfiles[static_cast<std::size_t>(id)]; }

std::optional<ProfileId> parse_profile(std::string_view name) {
  for (const auto& p : kProfiles) {
    if (name == p.name) return p.id;
  }
  return std::nullopt;
}

}  // namespace scope::harness
