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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "scope/plc/program.h"

namespace scope::harness {

namespace detail {
struct EmbeddedListing {
  const char* name;
  const char* text;
};
extern const EmbeddedListing kEmbeddedListings[];
extern const std::size_t kEmbeddedListingCount;
}  // namespace detail

// Bundled listings by file stem, e.g. "openswat_stage1" or "double_free".
std::vector<std::string> listing_names();
std::string_view listing_text(std::string_view name);  // throws std::out_of_range
plc::Program load_program(std::string_view name);

// The vulnerability corpus in detection-matrix order.
const std::vector<std::string>& corpus_names();

}  // namespace scope::harness
