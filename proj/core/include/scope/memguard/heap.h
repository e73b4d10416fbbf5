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
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "scope/plc/isa.h"

namespace scope::memguard {

using plc::Address;

enum class AllocKind : std::uint8_t { kHeap, kStackFrame, kGlobal };
enum class AllocState : std::uint8_t { kLive, kQuarantined, kReleased };

const char* to_string(AllocKind kind);
const char* to_string(AllocState state);

struct Allocation {
  Address base = 0;
  std::uint32_t size = 0;
  AllocKind kind = AllocKind::kHeap;
  AllocState state = AllocState::kLive;
  std::uint32_t redzone_left = 0;
  std::uint32_t redzone_right = 0;
  plc::InstrId site{};

  Address chunk_begin() const { return base - redzone_left; }
  Address chunk_end() const { return base + size + redzone_right; }
  bool contains(std::int64_t addr) const { return addr >= base && addr < base + size; }
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

// Heap chunk layout for a payload of `size`: 16-byte left redzone, payload
// padded to the granule, then a right redzone of at least 16 bytes.
std::uint32_t heap_chunk_size(std::uint32_t size);

enum class FreeStatus : std::uint8_t { kOk, kDoubleFree, kBadFree };

// First-fit allocator over [begin, end) with a FIFO quarantine of freed
// chunks. It only does bookkeeping; shadow updates belong to the guard.
class HeapAllocator {
 public:
  HeapAllocator(Address begin, Address end, std::uint32_t quarantine_capacity = 4096);

  struct AllocResult {
    std::optional<Allocation> allocation;  // nullopt: heap exhausted
    std::vector<Allocation> evicted;
  };
  struct FreeResult {
    FreeStatus status = FreeStatus::kOk;
    std::optional<Allocation> freed;
    std::vector<Allocation> evicted;
  };

  // Drains the quarantine oldest-first when no free span fits.
  AllocResult allocate(std::uint32_t size, plc::InstrId site);
  FreeResult release(Address base);
  FreeStatus classify_free(Address base) const;

  const Allocation* find(Address base) const;
  // The live or quarantined allocation whose payload contains `addr`.
  const Allocation* containing(std::int64_t addr) const;

  std::vector<Allocation> records() const;
  std::vector<Allocation> live() const;
  std::uint64_t quarantine_bytes() const { return quarantine_bytes_; }
  std::uint32_t quarantine_capacity() const { return quarantine_capacity_; }
  std::size_t quarantine_size() const { return quarantine_.size(); }
  std::uint64_t free_bytes() const;
  Address begin() const { return begin_; }
  Address end() const { return end_; }

  void clear();

 private:
  void insert_free(Address begin, std::uint32_t length);
  Allocation evict_oldest();

  Address begin_;
  Address end_;
  std::uint32_t quarantine_capacity_;
  std::map<Address, Allocation> records_;
  std::map<Address, std::uint32_t> free_;
  std::deque<Address> quarantine_;
  std::uint64_t quarantine_bytes_ = 0;
};

}  // namespace scope::memguard
