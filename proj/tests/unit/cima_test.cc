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

#include <random>

#include "scope/cima/executor.h"
#include "scope/cima/instrument.h"
#include "scope/harness/programs.h"
#include "scope/plc/assembler.h"
#include "support/oracles.h"

namespace scope::cima {
namespace {

using plc::Position;

struct Run {
  plc::MachineState state;
  plc::DataMemory mem;
};

// Plain interpreter over a layout-only guard, as in mode None.
Run run_plain(const plc::Program& p) {
  Run r{plc::MachineState::for_program(p, {4, 2, 4}), plc::DataMemory{}};
  memguard::Guard guard(p, r.mem, memguard::GuardMode::kLayoutOnly);
  plc::begin_logic_phase(p, r.state, r.mem, guard);
  plc::run_logic_phase(p, r.state, r.mem, guard, 10000);
  return r;
}

Run run_mitigated(const InstrumentedProgram& ip, MitigationLog& log, ExecResult* out = nullptr) {
  Run r{plc::MachineState::for_program(ip.program, {4, 2, 4}), plc::DataMemory{}};
  memguard::Guard guard(ip.program, r.mem, memguard::GuardMode::kShadowed);
  plc::begin_logic_phase(ip.program, r.state, r.mem, guard);
  const auto res = execute_mitigated(ip, r.state, r.mem, guard, log, 10000);
  if (out) *out = res;
  return r;
}

void expect_same_outcome(const Run& a, const Run& b) {
  EXPECT_TRUE(plc::same_observables(a.state, b.state));
  EXPECT_EQ(a.state.registers, b.state.registers);
  EXPECT_EQ(a.state.io.do_, b.state.io.do_);
  EXPECT_TRUE(std::equal(a.mem.bytes().begin(), a.mem.bytes().end(), b.mem.bytes().begin()));
}

std::uint32_t id_of(const plc::Program& p, std::uint32_t block, std::uint32_t index) {
  return to_index(p.blocks[block].instructions[index].id);
}

TEST(Cfg, StoreBeforeHaltTargetsHalt) {
  const auto p = plc::assemble(".global g 8\nmain:\n  STORE [@g], #1, #1\n  HALT\n");
  const auto cfg = build_cfg(p);
  ASSERT_EQ(cfg.targets.size(), 1u);
  EXPECT_EQ(to_index(cfg.targets.at(plc::InstrId{0})), 1u);
}

TEST(Cfg, StoreBeforeJmpTargetsJumpHead) {
  const auto p = plc::assemble(
      ".global g 8\nmain:\n  STORE [@g], #1, #1\n  JMP b2\nb1:\n  HALT\nb2:\n  OR r1, #1, #0\n  HALT\n");
  const auto cfg = build_cfg(p);
  EXPECT_EQ(to_index(cfg.targets.at(plc::InstrId{0})), id_of(p, 2, 0));
  EXPECT_EQ(bypass_target(p, {plc::BlockId{0}, 0}), (Position{plc::BlockId{2}, 0}));
}

TEST(Cfg, NoMemoryAccessesMeansNoTargets) {
  const auto p = plc::assemble("main:\n  AND r1, r2, r3\n  CJMP r1, main, out\nout:\n  HALT\n");
  const auto cfg = build_cfg(p);
  EXPECT_TRUE(cfg.targets.empty());
  const std::vector<Edge> want{{plc::BlockId{0}, plc::BlockId{0}, EdgeKind::kBranchTaken},
                               {plc::BlockId{0}, plc::BlockId{1}, EdgeKind::kBranchNotTaken}};
  EXPECT_EQ(cfg.edges, want);
}

TEST(Cfg, TargetsMatchListingWalkOnBundledPrograms) {
  for (const auto& name : harness::listing_names()) {
    SCOPED_TRACE(name);
    const auto p = harness::load_program(name);
    const auto cfg = build_cfg(p);
    std::size_t accesses = 0;
    for (std::uint32_t b = 0; b < p.blocks.size(); ++b) {
      for (std::uint32_t i = 0; i < p.blocks[b].instructions.size(); ++i) {
        const auto& instr = p.blocks[b].instructions[i];
        if (!plc::is_memory_access(instr.opcode)) continue;
        ++accesses;
        EXPECT_EQ(to_index(cfg.targets.at(instr.id)), oracle::successor_id(p, b, i));
      }
    }
    EXPECT_EQ(cfg.targets.size(), accesses);
  }
}

TEST(Cfg, DotNamesEveryBlock) {
  const auto p = harness::load_program("openswat_stage1");
  const auto dot = to_dot(p, build_cfg(p));
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  for (const auto& b : p.blocks) EXPECT_NE(dot.find(b.label), std::string::npos) << b.label;
}

TEST(Instrument, SplitsWhenTargetIsInTheSameBlock) {
  const auto p = plc::assemble(".global g 8\nmain:\n  LOAD r1, [@g], #1\n  ADD r2, r1, #1\n  HALT\n");
  const auto ip = instrument(p);
  ASSERT_EQ(ip.program.blocks.size(), 2u);
  const auto& head = ip.program.blocks[0];
  const auto& tail = ip.program.blocks[1];
  ASSERT_EQ(head.instructions.size(), 1u);
  EXPECT_EQ(head.instructions[0].opcode, plc::Opcode::kLoad);
  EXPECT_EQ(head.fallthrough, plc::BlockId{1});
  EXPECT_EQ(tail.label, "main.1");
  ASSERT_EQ(tail.instructions.size(), 2u);
  EXPECT_EQ(tail.instructions[0].opcode, plc::Opcode::kAdd);
  EXPECT_EQ(ip.provenance, (std::vector<plc::BlockId>{plc::BlockId{0}, plc::BlockId{0}}));
  EXPECT_EQ(ip.bypass.at(0), (Position{plc::BlockId{1}, 0}));
  EXPECT_NE(std::find(ip.cfg.edges.begin(), ip.cfg.edges.end(),
                      Edge{plc::BlockId{0}, plc::BlockId{1}, EdgeKind::kFallthrough}),
            ip.cfg.edges.end());
  EXPECT_EQ(ip.program.instruction_count(), p.instruction_count());
  EXPECT_EQ(ip.check_sites, (std::vector<plc::InstrId>{plc::InstrId{0}}));
  EXPECT_NO_THROW(plc::validate(ip.program));
}

TEST(Instrument, NoSplitBeforeJmp) {
  const auto p = plc::assemble(
      ".global g 8\nmain:\n  STORE [@g], #1, #1\n  JMP b2\nb2:\n  OR r1, #1, #0\n  HALT\n");
  const auto ip = instrument(p);
  EXPECT_EQ(ip.program.blocks.size(), 2u);
  EXPECT_EQ(ip.program.blocks[0], p.blocks[0]);
  EXPECT_EQ(ip.bypass.at(0), (Position{plc::BlockId{1}, 0}));
}

TEST(Instrument, BlocksWithoutAccessesAreUnchanged) {
  const auto p = plc::assemble("main:\n  AND r1, r2, r3\n  HALT\n");
  const auto ip = instrument(p);
  ASSERT_EQ(ip.program.blocks.size(), 1u);
  EXPECT_EQ(ip.program.blocks[0], p.blocks[0]);
  EXPECT_TRUE(ip.check_sites.empty());
}

TEST(Instrument, RejectsAnInstrumentedProgram) {
  const auto ip = instrument(harness::load_program("heap_overflow"));
  EXPECT_THROW(instrument(ip.program), InstrumentError);
}

TEST(Instrument, CollapseRecoversOriginalCfgOnBundledPrograms) {
  for (const auto& name : harness::listing_names()) {
    SCOPED_TRACE(name);
    const auto p = harness::load_program(name);
    EXPECT_EQ(collapse(instrument(p)), build_cfg(p));
  }
}

// Random structured listings: blocks of mixed ALU and memory instructions
// ending in JMP, CJMP or HALT.
std::string random_listing(std::mt19937_64& rng) {
  const int blocks = 1 + static_cast<int>(rng() % 6);
  std::string s = ".global g 32\n";
  for (int b = 0; b < blocks; ++b) {
    s += "b" + std::to_string(b) + ":\n";
    const int n = static_cast<int>(rng() % 7);
    for (int i = 0; i < n; ++i) {
      switch (rng() % 4) {
        case 0: s += "  LOAD r1, [@g+" + std::to_string(rng() % 24) + "], #4\n"; break;
        case 1: s += "  STORE [@g+" + std::to_string(rng() % 24) + "], r1, #2\n"; break;
        case 2: s += "  MEMCPY [@g], [@g+8], #4\n"; break;
        default: s += "  ADD r1, r1, #1\n"; break;
      }
    }
    const auto target = [&] { return "b" + std::to_string(rng() % blocks); };
    switch (rng() % 3) {
      case 0: s += "  JMP " + target() + "\n"; break;
      case 1: s += "  CJMP r1, " + target() + ", " + target() + "\n"; break;
      default: s += "  HALT\n"; break;
    }
  }
  return s;
}

TEST(Instrument, CollapseRecoversOriginalCfgOnRandomPrograms) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 500; ++i) {
    const auto listing = random_listing(rng);
    SCOPED_TRACE(listing);
    const auto p = plc::assemble(listing);
    const auto ip = instrument(p);
    ASSERT_NO_THROW(plc::validate(ip.program));
    ASSERT_EQ(collapse(ip), build_cfg(p));
    ASSERT_EQ(ip.program.instruction_count(), p.instruction_count());
    for (const auto& [i, t] : build_cfg(p).targets) {
      ASSERT_EQ(ip.program.at(*ip.bypass.at(to_index(i))).id, t);
    }
  }
}

TEST(Executor, SkippedStoreMatchesDeletedInstructionRun) {
  const auto p = plc::assemble(
      ".global g 8\nmain:\n  OR r1, #5, #0\n  STORE [@g+8], #7, #1\n  ADD r2, r1, #1\n  COIL DO0, r2\n  HALT\n");
  MitigationLog log;
  ExecResult res;
  const auto mitigated = run_mitigated(instrument(p), log, &res);
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log.entries[0].cls, memguard::ViolationClass::kGlobalBufferOverflow);
  EXPECT_EQ(to_index(log.entries[0].skipped), 1u);
  EXPECT_EQ(to_index(log.entries[0].resumed_at), 2u);
  EXPECT_EQ(res.skipped, 1u);
  EXPECT_EQ(res.executed, 4u);
  expect_same_outcome(mitigated, run_plain(oracle::delete_instructions(p, {1})));
  EXPECT_EQ(mitigated.state.io.do_[0], 1);
}

TEST(Executor, AdjacentIllegalStoresFormOneRun) {
  const auto p = plc::assemble(
      ".global g 8\nmain:\n  STORE [@g+8], #1, #1\n  STORE [@g+9], #1, #1\n  OR r3, #1, #0\n  HALT\n");
  MitigationLog log;
  const auto mitigated = run_mitigated(instrument(p), log);
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log.entries[0].run_len, 2u);
  EXPECT_EQ(to_index(log.entries[0].resumed_at), 2u);
  EXPECT_EQ(log.entries[0].skipped_ids, (std::vector<plc::InstrId>{plc::InstrId{0}, plc::InstrId{1}}));
  EXPECT_EQ(mitigated.state.registers[3], 1);
  expect_same_outcome(mitigated, run_plain(oracle::delete_instructions(p, {0, 1})));
}

TEST(Executor, SeparatedViolationsAreSeparateRuns) {
  const auto p = plc::assemble(
      ".global g 8\nmain:\n  STORE [@g+8], #1, #1\n  OR r3, #1, #0\n  STORE [@g+9], #1, #1\n  HALT\n");
  MitigationLog log;
  run_mitigated(instrument(p), log);
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log.entries[0].run_len, 1u);
  EXPECT_EQ(log.entries[1].run_len, 1u);
}

TEST(Executor, SkipChainBeyondCapIsAConfigurationError) {
  const auto p = plc::assemble(".global g 8\nloop:\n  STORE [@g+8], #1, #1\n  JMP loop\n");
  const auto ip = instrument(p);
  EXPECT_EQ(ip.chain_cap(plc::BlockId{0}), 8u);
  MitigationLog log;
  EXPECT_THROW(run_mitigated(ip, log), ConfigurationError);
}

TEST(Executor, AbortPolicyStopsAtFirstViolation) {
  const auto p = plc::assemble(
      ".global g 8\nmain:\n  OR r1, #1, #0\n  STORE [@g+8], #7, #1\n  OR r2, #1, #0\n  HALT\n");
  const auto ip = instrument(p);
  plc::DataMemory mem;
  auto state = plc::MachineState::for_program(ip.program);
  memguard::Guard guard(ip.program, mem, memguard::GuardMode::kShadowed);
  plc::begin_logic_phase(ip.program, state, mem, guard);
  const auto res = execute_instrumented(ip, state, mem, guard, ViolationPolicy::kAbort, 100);
  ASSERT_TRUE(res.aborted_on.has_value());
  EXPECT_EQ(to_index(res.aborted_on->instr_id), 1u);
  EXPECT_EQ(state.registers[1], 1);
  EXPECT_EQ(state.registers[2], 0);
  EXPECT_FALSE(state.pc.halted);
}

TEST(Executor, BenignRunIsBitIdenticalToPlainRun) {
  const auto p = plc::assemble(
      ".global g 16\nmain:\n  STORE [@g+4], #7, #4\n  LOAD r3, [@g+4], #4\n  MEMCPY [@g+8], [@g], #8\n"
      "  ALLOC r5, #24\n  STORE [r5+16], r3, #8\n  FREE r5\n  COIL DO1, r3\n  HALT\n");
  MitigationLog log;
  ExecResult res;
  const auto mitigated = run_mitigated(instrument(p), log, &res);
  EXPECT_TRUE(log.empty());
  EXPECT_TRUE(res.violations.empty());
  EXPECT_EQ(res.checks, 6u);
  expect_same_outcome(mitigated, run_plain(p));
}

TEST(Executor, MitigationLogLineHasTheDocumentedFields) {
  MitigationEntry e{12, plc::InstrId{3}, memguard::ViolationClass::kUseAfterFree, plc::InstrId{4}, 1, {plc::InstrId{3}}};
  const auto line = to_json_line(e);
  for (const char* key : {"\"cycle\"", "\"skipped\"", "\"class\"", "\"resumed_at\"", "\"run_len\""}) {
    EXPECT_NE(line.find(key), std::string::npos) << key;
  }
  EXPECT_EQ(line.find('\n'), std::string::npos);
}

}  // namespace
}  // namespace scope::cima
