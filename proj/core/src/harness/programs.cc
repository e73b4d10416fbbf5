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

#include "scope/harness/programs.h"

#include <stdexcept>

#include "scope/plc/assembler.h"

namespace scope::harness {

std::vector<std::string> listing_names() {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < detail::kEmbeddedListingCount; ++i) {
    names.emplace_back(detail::kEmbeddedListings[i].name);
  }
  return names;
}

std::string_view listing_text(std::string_view name) {
  for (std::size_t i = 0; i < detail::kEmbeddedListingCount; ++i) {
    if (name == detail::kEmbeddedListings[i].name) return detail::kEmbeddedListings[i].text;
  }
  throw std::out_of_range("no bundled listing named '" + std::string(name) + "'");
}

plc::Program load_program(std::string_view name) { return plc::assemble(listing_text(name)); }

const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names = {
      "stack_overflow", "heap_overflow", "global_overflow", "use_after_free", "use_after_return",
      "memory_leak",    "double_free",   "uninit_read",     "redzone_bypass",
  };
  return names;
}

}  // namespace scope::harness
