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
#include <span>
#include <vector>

#include "scope/plc/isa.h"

namespace scope::memguard {

using plc::Address;

// Shadow byte values. 0 means the whole granule is addressable and 1..7 mean
// only the first k bytes are; everything from 0xf0 up is poison.
namespace poison {
inline constexpr std::uint8_t kStackRedzone = 0xf1;
inline constexpr std::uint8_t kStackAfterReturn = 0xf5;
inline constexpr std::uint8_t kGlobalRedzone = 0xf9;
inline constexpr std::uint8_t kHeapRedzone = 0xfa;
inline constexpr std::uint8_t kHeapFreed = 0xfd;
inline constexpr std::uint8_t kHeapUnallocated = 0xfe;
}  // namespace poison

inline constexpr std::uint32_t kShadowScale = 8;

struct PoisonedByte {
  std::int64_t address = 0;
  std::uint8_t code = 0;
  friend bool operator==(const PoisonedByte&, const PoisonedByte&) = default;
};

class ShadowMemory {
 public:
  explicit ShadowMemory(std::uint32_t data_size = 0);

  std::uint32_t data_size() const { return data_size_; }
  std::span<const std::uint8_t> cells() const { return cells_; }
  std::uint8_t cell_for(Address addr) const { return cells_[addr / kShadowScale]; }

  // Marks [addr, addr+size) addressable. `addr` must be granule aligned; a
  // trailing partial granule is encoded as its addressable byte count.
  void unpoison(Address addr, std::uint32_t size);
  // Sets every granule overlapping [addr, addr+size) to `code`.
  void poison(Address addr, std::uint32_t size, std::uint8_t code);
  void fill(std::uint8_t code);

  bool addressable(Address addr) const;
  // The poison code governing a byte: itself for a poisoned granule, the next
  // granule's code for the tail of a partial one.
  std::uint8_t code_of(Address addr) const;

  // First unaddressable byte in [addr, addr+len). `len` may be 0.
  std::optional<PoisonedByte> first_poisoned(std::int64_t addr, std::int64_t len) const;

  friend bool operator==(const ShadowMemory&, const ShadowMemory&) = default;

 private:
  std::uint32_t data_size_;
  std::vector<std::uint8_t> cells_;
};

}  // namespace scope::memguard
