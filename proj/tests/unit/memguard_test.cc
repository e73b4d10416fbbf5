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

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "scope/memguard/guard.h"
#include "scope/plc/assembler.h"

namespace scope::memguard {
namespace {

using plc::AccessKind;
using plc::InstrId;

struct Fixture {
  explicit Fixture(std::string_view listing = "main:\n  HALT\n")
      : program(plc::assemble(listing)), guard(program, mem, GuardMode::kShadowed) {}

  plc::Program program;
  plc::DataMemory mem;
  Guard guard;
};

std::optional<ViolationClass> probe(const Guard& g, std::int64_t addr, std::int64_t len = 1,
                                    AccessKind kind = AccessKind::kRead) {
  const auto v = g.check_access(addr, len, kind, InstrId{0});
  return v ? std::optional(v->cls) : std::nullopt;
}

TEST(Shadow, UnpoisonEncodesPartialGranule) {
  ShadowMemory s(64);
  s.fill(poison::kHeapRedzone);
  s.unpoison(8, 13);
  EXPECT_EQ(s.cells()[1], 0);
  EXPECT_EQ(s.cells()[2], 5);
  EXPECT_EQ(s.cells()[3], poison::kHeapRedzone);
  EXPECT_TRUE(s.addressable(20));
  EXPECT_FALSE(s.addressable(21));
  EXPECT_EQ(s.code_of(21), poison::kHeapRedzone);
  const auto hit = s.first_poisoned(16, 8);
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(hit->address, 21);
  EXPECT_FALSE(s.first_poisoned(8, 13).has_value());
  EXPECT_FALSE(s.first_poisoned(8, 0).has_value());
}

TEST(Shadow, SixtyFourKibNeedsEightKibOfShadow) {
  Fixture f;
  EXPECT_EQ(f.guard.shadow().cells().size(), 8192u);
  EXPECT_EQ(memory_report(f.guard, f.program, 0).shadow_bytes, 8192u);
}

TEST(Classify, PoisonCodesMapToClasses) {
  EXPECT_EQ(classify(poison::kStackRedzone), ViolationClass::kStackBufferOverflow);
  EXPECT_EQ(classify(poison::kStackAfterReturn), ViolationClass::kUseAfterReturn);
  EXPECT_EQ(classify(poison::kGlobalRedzone), ViolationClass::kGlobalBufferOverflow);
  EXPECT_EQ(classify(poison::kHeapRedzone), ViolationClass::kHeapBufferOverflow);
  EXPECT_EQ(classify(poison::kHeapUnallocated), ViolationClass::kHeapBufferOverflow);
  EXPECT_EQ(classify(poison::kHeapFreed), ViolationClass::kUseAfterFree);
  for (std::uint8_t k = 0; k < 8; ++k) EXPECT_FALSE(classify(k).has_value());
}

TEST(Violation, JsonRoundTripAndNames) {
  const Violation v{ViolationClass::kUseAfterFree, InstrId{12}, 24600, 4, AccessKind::kWrite, 77};
  EXPECT_EQ(violation_from_json(to_json(v)), v);
  for (auto cls : kAllViolationClasses) EXPECT_EQ(parse_violation_class(to_string(cls)), cls);
  EXPECT_FALSE(parse_violation_class("buffer-overflow").has_value());
}

TEST(Heap, SixteenBytePayloadIsFlankedByTwoRedzoneGranules) {
  Fixture f;
  const auto b = f.guard.allocate(16, InstrId{0});
  const auto& cells = f.guard.shadow().cells();
  const auto g = b / kShadowScale;
  EXPECT_EQ(cells[g - 2], poison::kHeapRedzone);
  EXPECT_EQ(cells[g - 1], poison::kHeapRedzone);
  EXPECT_EQ(cells[g], 0);
  EXPECT_EQ(cells[g + 1], 0);
  EXPECT_EQ(cells[g + 2], poison::kHeapRedzone);
  EXPECT_EQ(cells[g + 3], poison::kHeapRedzone);
}

TEST(Heap, ThirteenBytePayloadEndsInPartialGranule) {
  Fixture f;
  const auto b = f.guard.allocate(13, InstrId{0});
  EXPECT_EQ(f.guard.shadow().cell_for(b + 8), 5);
  EXPECT_FALSE(probe(f.guard, b + 12).has_value());
  EXPECT_EQ(probe(f.guard, b + 13), ViolationClass::kHeapBufferOverflow);
}

TEST(Heap, SuccessiveAllocationsAreDisjointAndFlanked) {
  Fixture f;
  std::vector<plc::Address> bases;
  for (int i = 0; i < 3; ++i) bases.push_back(f.guard.allocate(8, InstrId{0}));
  // Brute-force scan of every heap byte against the expected payload set.
  const auto& layout = f.mem.layout();
  for (plc::Address a = layout.heap_begin(); a < layout.heap_end(); ++a) {
    int owners = 0;
    for (auto b : bases) owners += a >= b && a < b + 8;
    ASSERT_LE(owners, 1);
    ASSERT_EQ(f.guard.shadow().addressable(a), owners == 1) << a;
  }
  for (auto b : bases) {
    EXPECT_FALSE(f.guard.shadow().addressable(b - 1));
    EXPECT_FALSE(f.guard.shadow().addressable(b + 8));
  }
}

TEST(Heap, UseAfterFreeAndDoubleFree) {
  Fixture f;
  const auto a = f.guard.allocate(16, InstrId{0});
  f.guard.release(a, InstrId{1});
  EXPECT_EQ(probe(f.guard, a), ViolationClass::kUseAfterFree);
  const auto df = f.guard.check_free(a, InstrId{2});
  ASSERT_TRUE(df.has_value());
  EXPECT_EQ(df->cls, ViolationClass::kDoubleFree);
  EXPECT_EQ(df->size, 16);
  const auto wild = f.guard.check_free(a + 8, InstrId{2});
  ASSERT_TRUE(wild.has_value());
  EXPECT_EQ(wild->cls, ViolationClass::kBadFree);
  EXPECT_FALSE(f.guard.check_free(0, InstrId{2}).has_value());
}

TEST(Heap, QuarantinePreventsImmediateReuse) {
  Fixture f;
  const auto a = f.guard.allocate(16, InstrId{0});
  f.guard.release(a, InstrId{0});
  const auto b = f.guard.allocate(16, InstrId{0});
  EXPECT_NE(a, b);
  EXPECT_GE(b, a + 16);
}

TEST(Heap, QuarantineEvictsOldestBeyondCapacity) {
  HeapAllocator heap(24576, 65536, 128);
  const auto a = heap.allocate(72, InstrId{0}).allocation->base;
  const auto b = heap.allocate(72, InstrId{0}).allocation->base;
  EXPECT_TRUE(heap.release(a).evicted.empty());
  const auto r = heap.release(b);
  ASSERT_EQ(r.evicted.size(), 1u);
  EXPECT_EQ(r.evicted[0].base, a);
  EXPECT_EQ(heap.quarantine_size(), 1u);
  EXPECT_LE(heap.quarantine_bytes(), 128u);
  EXPECT_EQ(heap.classify_free(a), FreeStatus::kBadFree);
  EXPECT_EQ(heap.classify_free(b), FreeStatus::kDoubleFree);
}

TEST(Heap, ExhaustionDrainsQuarantineBeforeFailing) {
  HeapAllocator heap(0, 1024, 4096);
  std::vector<plc::Address> live;
  for (;;) {
    auto r = heap.allocate(64, InstrId{0});
    if (!r.allocation) break;
    live.push_back(r.allocation->base);
  }
  ASSERT_FALSE(live.empty());
  for (auto a : live) heap.release(a);
  auto r = heap.allocate(64, InstrId{0});
  ASSERT_TRUE(r.allocation.has_value());
  EXPECT_FALSE(r.evicted.empty());
}

TEST(Access, HeapBoundaries) {
  Fixture f;
  const auto b = f.guard.allocate(16, InstrId{0});
  EXPECT_EQ(probe(f.guard, b + 16, 1, AccessKind::kWrite), ViolationClass::kHeapBufferOverflow);
  EXPECT_FALSE(probe(f.guard, b + 15).has_value());
  const auto v = f.guard.check_access(b + 14, 4, AccessKind::kRead, InstrId{3});
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->cls, ViolationClass::kHeapBufferOverflow);
  EXPECT_EQ(v->address, b + 16);
  EXPECT_EQ(v->size, 4);
  EXPECT_EQ(to_index(v->instr_id), 3u);
  EXPECT_EQ(probe(f.guard, b - 1), ViolationClass::kHeapBufferOverflow);
}

TEST(Access, OutOfArrayIsLeftToTheInterpreter) {
  Fixture f;
  EXPECT_FALSE(probe(f.guard, 65535, 4).has_value());
  EXPECT_FALSE(probe(f.guard, -4, 4).has_value());
}

TEST(Access, GlobalRedzone) {
  Fixture f(".global a 13\n.global b 8\nmain:\n  HALT\n");
  EXPECT_FALSE(probe(f.guard, 0, 13).has_value());
  EXPECT_EQ(probe(f.guard, 13), ViolationClass::kGlobalBufferOverflow);
  EXPECT_EQ(probe(f.guard, 31), ViolationClass::kGlobalBufferOverflow);
  EXPECT_FALSE(probe(f.guard, 32, 8).has_value());
  EXPECT_EQ(probe(f.guard, 40), ViolationClass::kGlobalBufferOverflow);
}

TEST(Access, StackFrameAndUseAfterReturn) {
  Fixture f;
  const auto frame = f.mem.push_frame(16);
  f.guard.frame_entered(frame);
  EXPECT_FALSE(probe(f.guard, frame.base, 16).has_value());
  EXPECT_EQ(probe(f.guard, frame.base + 16), ViolationClass::kStackBufferOverflow);
  EXPECT_EQ(probe(f.guard, frame.base - 1), ViolationClass::kStackBufferOverflow);
  f.guard.frame_exited(f.mem.pop_frame());
  EXPECT_EQ(probe(f.guard, frame.base), ViolationClass::kUseAfterReturn);
}

TEST(Access, InnerExitLeavesOuterLocalsAddressable) {
  Fixture f;
  const auto outer = f.mem.push_frame(24);
  f.guard.frame_entered(outer);
  const auto inner = f.mem.push_frame(8);
  f.guard.frame_entered(inner);
  f.guard.frame_exited(f.mem.pop_frame());
  // Oracle scan over both frame ranges.
  for (plc::Address a = outer.start; a < inner.end(); ++a) {
    const bool in_outer_locals = a >= outer.base && a < outer.base + 24;
    ASSERT_EQ(f.guard.shadow().addressable(a), in_outer_locals) << a;
    if (a >= inner.start) ASSERT_EQ(f.guard.shadow().code_of(a), poison::kStackAfterReturn);
  }
}

TEST(Leaks, OverwrittenRootsLeak) {
  Fixture f;
  std::array<std::int64_t, plc::kRegisterCount> regs{};
  regs[1] = f.guard.allocate(32, InstrId{4});
  EXPECT_TRUE(f.guard.leak_check(regs).empty());
  regs[1] = 0;
  const auto leaks = f.guard.leak_check(regs);
  ASSERT_EQ(leaks.size(), 1u);
  EXPECT_EQ(leaks[0].cls, ViolationClass::kMemoryLeak);
  EXPECT_EQ(to_index(leaks[0].instr_id), 4u);
}

TEST(Leaks, GlobalWordIsARoot) {
  Fixture f(".global keep 8\nmain:\n  HALT\n");
  const auto a = f.guard.allocate(32, InstrId{0});
  f.mem.write(0, 8, a);
  EXPECT_TRUE(f.guard.leak_check({}).empty());
}

TEST(Leaks, ChainsAreFollowed) {
  Fixture f;
  std::array<std::int64_t, plc::kRegisterCount> regs{};
  const auto a = f.guard.allocate(16, InstrId{0});
  const auto b = f.guard.allocate(16, InstrId{0});
  f.mem.write(a, 8, b);
  regs[0] = a;
  EXPECT_TRUE(f.guard.leak_check(regs).empty());
  regs[0] = 0;
  EXPECT_EQ(f.guard.leak_check(regs).size(), 2u);
}

// Brute-force reachability: iterate to a fixed point over pointer words.
std::set<plc::Address> reachable_oracle(const std::vector<plc::Address>& nodes,
                                        const std::map<plc::Address, std::vector<plc::Address>>& edges,
                                        const std::vector<plc::Address>& roots) {
  std::set<plc::Address> reached(roots.begin(), roots.end());
  bool grew = true;
  while (grew) {
    grew = false;
    for (auto n : nodes) {
      if (reached.count(n) == 0) continue;
      for (auto m : edges.at(n)) grew |= reached.insert(m).second;
    }
  }
  return reached;
}

TEST(Leaks, RandomGraphsMatchReachabilityOracle) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    Fixture f;
    std::vector<plc::Address> nodes;
    for (int i = 0; i < 10; ++i) nodes.push_back(f.guard.allocate(32, InstrId{0}));
    std::map<plc::Address, std::vector<plc::Address>> edges;
    for (auto n : nodes) {
      auto& out = edges[n];
      for (int w = 0; w < 4; ++w) {
        if (rng() % 3 == 0) {
          const auto m = nodes[rng() % nodes.size()];
          f.mem.write(n + 8 * w, 8, m);
          out.push_back(m);
        }
      }
    }
    std::array<std::int64_t, plc::kRegisterCount> regs{};
    std::vector<plc::Address> roots;
    for (int r = 0; r < 2; ++r) {
      const auto n = nodes[rng() % nodes.size()];
      regs[r] = n;
      roots.push_back(n);
    }
    const auto reached = reachable_oracle(nodes, edges, roots);
    std::set<plc::Address> leaked;
    for (const auto& v : f.guard.leak_check(regs)) leaked.insert(static_cast<plc::Address>(v.address));
    for (auto n : nodes) ASSERT_EQ(leaked.count(n) == 1, reached.count(n) == 0);
  }
}

TEST(Report, InstructionRatioArithmetic) {
  MemoryReport r;
  r.original_instructions = 100;
  r.instrumented_instructions = 120;
  EXPECT_DOUBLE_EQ(r.instruction_ratio(), 1.20);
}

TEST(Guard, LayoutOnlyModeNeverReports) {
  const auto program = plc::assemble("main:\n  HALT\n");
  plc::DataMemory mem;
  Guard plain(program, mem, GuardMode::kLayoutOnly);
  plc::DataMemory mem2;
  Guard shadowed(program, mem2, GuardMode::kShadowed);
  const auto a = plain.allocate(16, InstrId{0});
  EXPECT_EQ(a, shadowed.allocate(16, InstrId{0}));
  plain.release(a, InstrId{0});
  EXPECT_FALSE(plain.check_access(a, 1, AccessKind::kRead, InstrId{0}).has_value());
  EXPECT_FALSE(plain.check_free(a, InstrId{0}).has_value());
}

// Byte-level model of the heap, kept without any shadow encoding.
struct ByteOracle {
  std::map<plc::Address, std::uint32_t> live;
  std::map<plc::Address, std::uint32_t> freed;  // still quarantined

  std::optional<std::pair<std::int64_t, ViolationClass>> check(std::int64_t addr, std::int64_t len) const {
    for (std::int64_t a = addr; a < addr + len; ++a) {
      bool ok = false;
      for (const auto& [b, s] : live) ok |= a >= b && a < b + s;
      if (ok) continue;
      for (const auto& [b, s] : freed) {
        if (a >= b && a < b + plc::round_up(s, plc::kGranule)) return std::pair(a, ViolationClass::kUseAfterFree);
      }
      return std::pair(a, ViolationClass::kHeapBufferOverflow);
    }
    return std::nullopt;
  }
};

TEST(Property, IncrementalShadowMatchesRebuildAndByteOracle) {
  Fixture f;
  ByteOracle oracle;
  std::mt19937_64 rng(2024);
  std::vector<plc::Address> live;
  const auto& layout = f.mem.layout();
  int checked = 0;
  for (int op = 0; op < 10000; ++op) {
    auto choice = rng() % 10;
    if (choice < 3 && live.size() >= 64) choice = 4;  // keep the heap from filling up
    if (choice < 3 || live.empty()) {
      const auto size = static_cast<std::uint32_t>(1 + rng() % 200);
      const auto a = f.guard.allocate(size, InstrId{0});
      live.push_back(a);
      oracle.live[a] = size;
    } else if (choice < 5) {
      const auto i = rng() % live.size();
      const auto a = live[i];
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
      ASSERT_FALSE(f.guard.check_free(a, InstrId{0}).has_value());
      f.guard.release(a, InstrId{0});
      oracle.freed[a] = oracle.live.at(a);
      oracle.live.erase(a);
      // Mirror the quarantine: anything the heap no longer tracks is gone.
      for (auto it = oracle.freed.begin(); it != oracle.freed.end();) {
        const auto* rec = f.guard.heap().find(it->first);
        it = rec == nullptr || rec->state != AllocState::kQuarantined ? oracle.freed.erase(it) : std::next(it);
      }
    } else {
      // Accesses biased towards chunk edges.
      const auto anchor = live[rng() % live.size()];
      const auto addr = static_cast<std::int64_t>(anchor) + static_cast<std::int64_t>(rng() % 260) - 24;
      const auto len = static_cast<std::int64_t>(1 + rng() % 9);
      if (addr < layout.heap_begin() || addr + len > layout.heap_end()) continue;
      const auto got = f.guard.check_access(addr, len, AccessKind::kRead, InstrId{0});
      const auto want = oracle.check(addr, len);
      ASSERT_EQ(got.has_value(), want.has_value()) << "op " << op << " addr " << addr << " len " << len;
      if (got) {
        ASSERT_EQ(got->address, want->first);
        ASSERT_EQ(got->cls, want->second);
      }
      ++checked;
    }
    if (op % 500 == 0) ASSERT_EQ(f.guard.rebuild_shadow(), f.guard.shadow()) << "op " << op;
  }
  EXPECT_EQ(f.guard.rebuild_shadow(), f.guard.shadow());
  EXPECT_GT(checked, 3000);
}

}  // namespace
}  // namespace scope::memguard
