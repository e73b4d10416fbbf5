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

#include "scope/memguard/guard.h"

#include <deque>
#include <set>

namespace scope::memguard {

using plc::AccessKind;
using plc::Address;

namespace {

void layout_frame(ShadowMemory& shadow, const plc::Frame& frame) {
  shadow.poison(frame.start, frame.footprint(), poison::kStackRedzone);
  shadow.unpoison(frame.base, frame.locals);
}

void layout_heap_chunk(ShadowMemory& shadow, const Allocation& alloc) {
  shadow.poison(alloc.chunk_begin(), alloc.chunk_end() - alloc.chunk_begin(), poison::kHeapRedzone);
  if (alloc.state == AllocState::kLive) {
    shadow.unpoison(alloc.base, alloc.size);
  } else {
    shadow.poison(alloc.base, alloc.size, poison::kHeapFreed);
  }
}

}  // namespace

Guard::Guard(const plc::Program& program, plc::DataMemory& mem, GuardMode mode,
             std::uint32_t quarantine_bytes)
    : program_(program),
      mem_(mem),
      mode_(mode),
      shadow_(mode == GuardMode::kShadowed ? mem.size() : 0),
      heap_(mem.layout().heap_begin(), mem.layout().heap_end(), quarantine_bytes) {
  if (program.globals_size() > mem.layout().globals_end) {
    throw std::invalid_argument("globals do not fit the globals region");
  }
  reset();
}

void Guard::poison_static(ShadowMemory& shadow) const {
  const auto& layout = mem_.layout();
  shadow.poison(0, layout.globals_end, poison::kGlobalRedzone);
  for (const auto& g : program_.globals) shadow.unpoison(g.offset, g.size);
  shadow.poison(layout.stack_begin(), layout.stack_end - layout.stack_begin(), poison::kStackRedzone);
  shadow.poison(layout.heap_begin(), layout.heap_end() - layout.heap_begin(), poison::kHeapUnallocated);
}

void Guard::reset() {
  heap_.clear();
  if (shadowed()) poison_static(shadow_);
}

Address Guard::allocate(std::uint32_t size, plc::InstrId site) {
  auto result = heap_.allocate(size, site);
  if (shadowed()) {
    for (const auto& gone : result.evicted) {
      shadow_.poison(gone.chunk_begin(), gone.chunk_end() - gone.chunk_begin(), poison::kHeapUnallocated);
    }
  }
  if (!result.allocation) {
    throw plc::Fault(plc::FaultKind::kOutOfMemory, "heap exhausted allocating " + std::to_string(size));
  }
  if (shadowed()) layout_heap_chunk(shadow_, *result.allocation);
  return result.allocation->base;
}

void Guard::release(Address addr, plc::InstrId) {
  // Unchecked double or wild frees are accepted silently: without the guard
  // there is nothing to notice them.
  auto result = heap_.release(addr);
  if (!shadowed() || result.status != FreeStatus::kOk) return;
  shadow_.poison(result.freed->base, result.freed->size, poison::kHeapFreed);
  for (const auto& gone : result.evicted) {
    shadow_.poison(gone.chunk_begin(), gone.chunk_end() - gone.chunk_begin(), poison::kHeapUnallocated);
  }
}

void Guard::frame_entered(const plc::Frame& frame) {
  if (shadowed()) layout_frame(shadow_, frame);
}

void Guard::frame_exited(const plc::Frame& frame) {
  if (shadowed()) shadow_.poison(frame.start, frame.footprint(), poison::kStackAfterReturn);
}

std::optional<Violation> Guard::check_access(std::int64_t addr, std::int64_t len, AccessKind kind,
                                             plc::InstrId site) const {
  if (!shadowed() || len <= 0) return std::nullopt;
  // Outside the array the interpreter raises a hard fault instead.
  if (addr < 0 || addr + len > static_cast<std::int64_t>(mem_.size())) return std::nullopt;
  const auto hit = shadow_.first_poisoned(addr, len);
  if (!hit) return std::nullopt;
  const auto cls = classify(hit->code).value_or(ViolationClass::kHeapBufferOverflow);
  return Violation{cls, site, hit->address, len, kind, 0};
}

std::optional<Violation> Guard::check_free(std::int64_t addr, plc::InstrId site) const {
  if (!shadowed() || addr == 0) return std::nullopt;
  const auto status = addr < 0 || addr > UINT32_MAX ? FreeStatus::kBadFree
                                                    : heap_.classify_free(static_cast<Address>(addr));
  if (status == FreeStatus::kOk) return std::nullopt;
  const auto* alloc = status == FreeStatus::kDoubleFree ? heap_.find(static_cast<Address>(addr)) : nullptr;
  const auto cls = status == FreeStatus::kDoubleFree ? ViolationClass::kDoubleFree : ViolationClass::kBadFree;
  return Violation{cls, site, addr, alloc != nullptr ? alloc->size : 0, AccessKind::kFree, 0};
}

std::optional<Violation> Guard::check(const plc::Instruction& instr, const plc::MachineState& state) const {
  if (!shadowed() || !plc::is_memory_access(instr.opcode)) return std::nullopt;
  const auto accesses = plc::describe_access(instr, state, mem_);
  for (std::uint32_t i = 0; i < accesses.count; ++i) {
    const auto& a = accesses.items[i];
    std::optional<Violation> v;
    switch (a.kind) {
      case AccessKind::kRead:
      case AccessKind::kWrite:
        v = check_access(a.address, a.length, a.kind, instr.id);
        break;
      case AccessKind::kFree:
        v = check_free(a.address, instr.id);
        break;
      case AccessKind::kAlloc:
        break;
    }
    if (v) return v;
  }
  return std::nullopt;
}

std::vector<Violation> Guard::leak_check(
    const std::array<std::int64_t, plc::kRegisterCount>& registers) const {
  std::set<Address> reached;
  std::deque<const Allocation*> work;
  const auto visit = [&](std::int64_t value) {
    const auto* alloc = heap_.containing(value);
    if (alloc != nullptr && alloc->state == AllocState::kLive && reached.insert(alloc->base).second) {
      work.push_back(alloc);
    }
  };
  for (auto r : registers) visit(r);
  const auto globals_end = program_.globals_size();
  for (Address a = 0; a + 8 <= globals_end; a += 8) visit(static_cast<std::int64_t>(mem_.read(a, 8)));
  while (!work.empty()) {
    const auto* alloc = work.front();
    work.pop_front();
    const Address end = alloc->base + plc::round_up(alloc->size, plc::kGranule);
    for (Address a = alloc->base; a + 8 <= end; a += 8) visit(static_cast<std::int64_t>(mem_.read(a, 8)));
  }
  std::vector<Violation> leaks;
  for (const auto& alloc : heap_.live()) {
    if (reached.count(alloc.base) == 0) {
      leaks.push_back({ViolationClass::kMemoryLeak, alloc.site, alloc.base, alloc.size, AccessKind::kAlloc, 0});
    }
  }
  return leaks;
}

ShadowMemory Guard::rebuild_shadow() const {
  ShadowMemory shadow(mem_.size());
  poison_static(shadow);
  const auto touched_begin = mem_.stack_touched_begin();
  const auto touched_end = mem_.stack_touched_end();
  if (touched_end > touched_begin) {
    shadow.poison(touched_begin, touched_end - touched_begin, poison::kStackAfterReturn);
  }
  for (const auto& frame : mem_.frames()) layout_frame(shadow, frame);
  for (const auto& alloc : heap_.records()) layout_heap_chunk(shadow, alloc);
  return shadow;
}

std::vector<Allocation> Guard::allocations() const {
  std::vector<Allocation> out;
  for (const auto& g : program_.globals) {
    out.push_back({g.offset, g.size, AllocKind::kGlobal, AllocState::kLive, 0, g.slot_size() - g.size, {}});
  }
  for (const auto& f : mem_.frames()) {
    out.push_back({f.base, f.locals, AllocKind::kStackFrame, AllocState::kLive, plc::kRedzone,
                   f.end() - f.base - f.locals, {}});
  }
  const auto heap = heap_.records();
  out.insert(out.end(), heap.begin(), heap.end());
  return out;
}

double MemoryReport::memory_ratio() const {
  return data_bytes == 0 ? 1.0 : static_cast<double>(data_bytes + shadow_bytes) / static_cast<double>(data_bytes);
}

double MemoryReport::instruction_ratio() const {
  return original_instructions == 0
             ? 1.0
             : static_cast<double>(instrumented_instructions) / static_cast<double>(original_instructions);
}

MemoryReport memory_report(const Guard& guard, const plc::Program& original, std::uint64_t check_sites) {
  MemoryReport report;
  report.data_bytes = guard.memory().size();
  report.shadow_bytes = guard.shadowed() ? guard.shadow().cells().size() : 0;
  for (const auto& a : guard.allocations()) {
    report.redzone_bytes += a.redzone_left + a.redzone_right;
    if (a.kind == AllocKind::kHeap && a.state == AllocState::kLive) report.live_heap_bytes += a.size;
  }
  report.quarantine_bytes = guard.heap().quarantine_bytes();
  report.original_instructions = original.instruction_count();
  report.instrumented_instructions = report.original_instructions + check_sites;
  return report;
}

}  // namespace scope::memguard
