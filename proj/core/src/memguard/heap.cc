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

#include "scope/memguard/heap.h"

#include <iterator>
#include <stdexcept>

#include "scope/plc/program.h"

namespace scope::memguard {

const char* to_string(AllocKind kind) {
  switch (kind) {
    case AllocKind::kHeap:
      return "heap";
    case AllocKind::kStackFrame:
      return "stack-frame";
    case AllocKind::kGlobal:
      return "global";
  }
  return "unknown";
}

const char* to_string(AllocState state) {
  switch (state) {
    case AllocState::kLive:
      return "live";
    case AllocState::kQuarantined:
      return "quarantined";
    case AllocState::kReleased:
      return "released";
  }
  return "unknown";
}

std::uint32_t heap_chunk_size(std::uint32_t size) {
  return plc::kRedzone + plc::round_up(size, plc::kGranule) + plc::kRedzone;
}

HeapAllocator::HeapAllocator(Address begin, Address end, std::uint32_t quarantine_capacity)
    : begin_(begin), end_(end), quarantine_capacity_(quarantine_capacity) {
  if (begin % plc::kGranule != 0 || end % plc::kGranule != 0 || end < begin) {
    throw std::invalid_argument("heap bounds must be ordered and granule aligned");
  }
  clear();
}

void HeapAllocator::clear() {
  records_.clear();
  free_.clear();
  quarantine_.clear();
  quarantine_bytes_ = 0;
  if (end_ > begin_) free_[begin_] = end_ - begin_;
}

void HeapAllocator::insert_free(Address begin, std::uint32_t length) {
  auto [it, inserted] = free_.emplace(begin, length);
  if (!inserted) throw std::logic_error("heap span freed twice");
  if (it != free_.begin()) {
    auto prev = std::prev(it);
    if (prev->first + prev->second == it->first) {
      prev->second += it->second;
      free_.erase(it);
      it = prev;
    }
  }
  auto next = std::next(it);
  if (next != free_.end() && it->first + it->second == next->first) {
    it->second += next->second;
    free_.erase(next);
  }
}

Allocation HeapAllocator::evict_oldest() {
  const Address base = quarantine_.front();
  quarantine_.pop_front();
  auto node = records_.extract(base);
  Allocation alloc = node.mapped();
  quarantine_bytes_ -= alloc.size;
  insert_free(alloc.chunk_begin(), alloc.chunk_end() - alloc.chunk_begin());
  alloc.state = AllocState::kReleased;
  return alloc;
}

HeapAllocator::AllocResult HeapAllocator::allocate(std::uint32_t size, plc::InstrId site) {
  if (size == 0) throw std::invalid_argument("allocation size must be at least 1");
  const std::uint64_t need = heap_chunk_size(size);
  AllocResult result;
  for (;;) {
    for (auto it = free_.begin(); it != free_.end(); ++it) {
      if (it->second < need) continue;
      const Address chunk = it->first;
      const std::uint32_t rest = it->second - static_cast<std::uint32_t>(need);
      free_.erase(it);
      if (rest > 0) free_[chunk + static_cast<std::uint32_t>(need)] = rest;
      Allocation alloc;
      alloc.base = chunk + plc::kRedzone;
      alloc.size = size;
      alloc.kind = AllocKind::kHeap;
      alloc.state = AllocState::kLive;
      alloc.redzone_left = plc::kRedzone;
      alloc.redzone_right = static_cast<std::uint32_t>(need) - plc::kRedzone - size;
      alloc.site = site;
      records_[alloc.base] = alloc;
      result.allocation = alloc;
      return result;
    }
    if (quarantine_.empty()) break;
    result.evicted.push_back(evict_oldest());
  }
  return result;
}

FreeStatus HeapAllocator::classify_free(Address base) const {
  const auto it = records_.find(base);
  if (it == records_.end()) return FreeStatus::kBadFree;
  return it->second.state == AllocState::kLive ? FreeStatus::kOk : FreeStatus::kDoubleFree;
}

HeapAllocator::FreeResult HeapAllocator::release(Address base) {
  FreeResult result;
  result.status = classify_free(base);
  if (result.status != FreeStatus::kOk) return result;
  auto& alloc = records_.at(base);
  alloc.state = AllocState::kQuarantined;
  result.freed = alloc;
  quarantine_.push_back(base);
  quarantine_bytes_ += alloc.size;
  while (quarantine_bytes_ > quarantine_capacity_ && !quarantine_.empty()) {
    result.evicted.push_back(evict_oldest());
  }
  return result;
}

const Allocation* HeapAllocator::find(Address base) const {
  const auto it = records_.find(base);
  return it == records_.end() ? nullptr : &it->second;
}

const Allocation* HeapAllocator::containing(std::int64_t addr) const {
  if (addr < begin_ || addr >= end_) return nullptr;
  auto it = records_.upper_bound(static_cast<Address>(addr));
  if (it == records_.begin()) return nullptr;
  --it;
  return it->second.contains(addr) ? &it->second : nullptr;
}

std::vector<Allocation> HeapAllocator::records() const {
  std::vector<Allocation> out;
  out.reserve(records_.size());
  for (const auto& [base, alloc] : records_) out.push_back(alloc);
  return out;
}

std::vector<Allocation> HeapAllocator::live() const {
  std::vector<Allocation> out;
  for (const auto& [base, alloc] : records_) {
    if (alloc.state == AllocState::kLive) out.push_back(alloc);
  }
  return out;
}

std::uint64_t HeapAllocator::free_bytes() const {
  std::uint64_t total = 0;
  for (const auto& [begin, length] : free_) total += length;
  return total;
}

}  // namespace scope::memguard
