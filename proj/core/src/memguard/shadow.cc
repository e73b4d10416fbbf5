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

#include "scope/memguard/shadow.h"

#include <algorithm>
#include <stdexcept>

namespace scope::memguard {

ShadowMemory::ShadowMemory(std::uint32_t data_size)
    : data_size_(data_size), cells_((data_size + kShadowScale - 1) / kShadowScale, 0) {}

void ShadowMemory::unpoison(Address addr, std::uint32_t size) {
  if (addr % kShadowScale != 0) throw std::invalid_argument("unpoison of unaligned address");
  const Address end = addr + size;
  Address g = addr;
  for (; g + kShadowScale <= end; g += kShadowScale) cells_[g / kShadowScale] = 0;
  if (g < end) cells_[g / kShadowScale] = static_cast<std::uint8_t>(end - g);
}

void ShadowMemory::poison(Address addr, std::uint32_t size, std::uint8_t code) {
  if (size == 0) return;
  const auto first = addr / kShadowScale;
  const auto last = (static_cast<std::uint64_t>(addr) + size - 1) / kShadowScale;
  std::fill(cells_.begin() + first, cells_.begin() + static_cast<std::ptrdiff_t>(last) + 1, code);
}

void ShadowMemory::fill(std::uint8_t code) { std::fill(cells_.begin(), cells_.end(), code); }

bool ShadowMemory::addressable(Address addr) const {
  const auto cell = cells_[addr / kShadowScale];
  return cell == 0 || (cell < kShadowScale && addr % kShadowScale < cell);
}

std::uint8_t ShadowMemory::code_of(Address addr) const {
  if (addressable(addr)) return 0;
  auto g = addr / kShadowScale;
  if (cells_[g] >= kShadowScale) return cells_[g];
  for (++g; g < cells_.size(); ++g) {
    if (cells_[g] >= kShadowScale) return cells_[g];
  }
  return poison::kHeapUnallocated;
}

std::optional<PoisonedByte> ShadowMemory::first_poisoned(std::int64_t addr, std::int64_t len) const {
  if (len <= 0) return std::nullopt;
  const std::int64_t end = addr + len;
  std::int64_t a = addr;
  while (a < end) {
    const auto cell = cells_[static_cast<std::size_t>(a / kShadowScale)];
    const std::int64_t granule_end = (a / kShadowScale + 1) * kShadowScale;
    if (cell == 0) {
      a = granule_end;
      continue;
    }
    if (cell < kShadowScale) {
      const std::int64_t limit = granule_end - kShadowScale + cell;
      if (a < limit) a = limit;
      if (a < end && a < granule_end) {
        return PoisonedByte{a, code_of(static_cast<Address>(a))};
      }
      a = granule_end;
      continue;
    }
    return PoisonedByte{a, cell};
  }
  return std::nullopt;
}

}  // namespace scope::memguard
