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

#include "scope/harness/attack.h"
#include "scope/harness/profiles.h"
#include "scope/harness/programs.h"
#include "scope/plc/assembler.h"
#include "scope/runtime/control_delay.h"
#include "scope/runtime/mso.h"
#include "scope/runtime/plc_instance.h"
#include "support/oracles.h"

namespace scope::runtime {
namespace {

CycleConfig config_for(MitigationMode mode, std::int64_t tc = 10000) {
  CycleConfig c;
  c.mode = mode;
  c.cycle_time_us = tc;
  return c;
}

TEST(Modes, NamesRoundTrip) {
  for (auto m : {MitigationMode::kNone, MitigationMode::kAbortOnViolation, MitigationMode::kCima}) {
    EXPECT_EQ(parse_mode(to_string(m)), m);
  }
  EXPECT_FALSE(parse_mode("asan").has_value());
}

TEST(CycleConfig, DowntimeRoundsUp) {
  auto c = config_for(MitigationMode::kAbortOnViolation);
  EXPECT_EQ(c.delta_us(), 1'000'000);
  EXPECT_EQ(c.downtime_cycles(), 100u);
  c.restart_delta_us = 25'001;
  EXPECT_EQ(c.downtime_cycles(), 3u);
  c.cycle_time_us = 0;
  EXPECT_THROW(c.check(), std::invalid_argument);
}

TEST(Scan, TrivialProgramMeetsDeadline) {
  PlcInstance plc(plc::assemble("entry:\n  HALT\n"), {}, config_for(MitigationMode::kNone));
  const auto r = plc.run_scan_cycle({});
  EXPECT_TRUE(r.completed());
  EXPECT_GT(r.exec_us, 0.0);
  EXPECT_GE(r.total_us, r.exec_us);
  EXPECT_TRUE(r.deadline_met);
  EXPECT_EQ(r.executed, 1u);
}

TEST(Scan, TimersAdvanceByCycleTime) {
  PlcInstance plc(plc::assemble("main:\n  CONTACT r0, DI0\n  TON r1, T0, r0, #30000\n  COIL DO0, r1\n  HALT\n"),
                  {1, 0, 1}, config_for(MitigationMode::kNone));
  ScanInputs in{{1}, {}, {}};
  plc.run_scan_cycle(in);
  plc.run_scan_cycle(in);
  EXPECT_EQ(plc.outputs()[0], 0);
  plc.run_scan_cycle(in);
  EXPECT_EQ(plc.outputs()[0], 1);
}

TEST(Scan, NetPayloadIsCopiedAndTruncated) {
  PlcInstance plc(plc::assemble(".global rx 4\n.net rx r60\nmain:\n  LOAD r1, [@rx], #4\n  HALT\n"), {},
                  config_for(MitigationMode::kCima));
  plc.run_scan_cycle({{}, {}, {1, 2, 3, 4, 5, 6}});
  EXPECT_EQ(plc.state().registers[60], 6);
  EXPECT_EQ(plc.state().registers[1], 0x04030201);
  plc.run_scan_cycle({{}, {}, {9}});
  EXPECT_EQ(plc.state().registers[1], 9);
}

TEST(Scan, IoBindingsLatchAndDrive) {
  PlcInstance plc(plc::assemble(".io AI0->r1\n.io DO1<-r2\nmain:\n  GT r2, r1, #100\n  HALT\n"), {0, 1, 2},
                  config_for(MitigationMode::kNone));
  plc.run_scan_cycle({{}, {500}, {}});
  EXPECT_EQ(plc.outputs(), (std::vector<std::uint8_t>{0, 1}));
}

struct Attacked : ::testing::Test {
  // DO0 follows AI0 > 500 in every corpus program.
  static ScanInputs nominal(bool high) { return {{}, {static_cast<std::uint16_t>(high ? 1000 : 0)}, {}}; }

  ScanInputs attacked(bool high) {
    auto in = nominal(high);
    harness::inject(harness::default_scenario(program), in);
    return in;
  }

  plc::Program program = harness::load_program("heap_overflow");
};

TEST_F(Attacked, CimaCompletesAndLogs) {
  PlcInstance plc(program, harness::kCorpusWidths, config_for(MitigationMode::kCima));
  plc.run_scan_cycle(nominal(false));
  const auto r = plc.run_scan_cycle(attacked(true));
  EXPECT_TRUE(r.completed());
  EXPECT_FALSE(r.aborted);
  EXPECT_EQ(r.violations, 1u);
  EXPECT_EQ(r.skipped, 1u);
  ASSERT_EQ(plc.mitigation_log().size(), 1u);
  EXPECT_EQ(plc.mitigation_log().entries[0].cls, memguard::ViolationClass::kHeapBufferOverflow);
  EXPECT_EQ(plc.outputs()[0], 1);
  EXPECT_TRUE(plc.online());
}

TEST_F(Attacked, AbortHoldsOutputsThenRestarts) {
  auto cfg = config_for(MitigationMode::kAbortOnViolation);
  cfg.restart_delta_us = 30000;
  PlcInstance plc(program, harness::kCorpusWidths, cfg);
  plc.run_scan_cycle(nominal(true));
  ASSERT_EQ(plc.outputs()[0], 1);
  const auto r = plc.run_scan_cycle(attacked(false));
  EXPECT_TRUE(r.aborted);
  EXPECT_FALSE(r.completed());
  EXPECT_EQ(plc.outputs()[0], 1);
  EXPECT_FALSE(plc.online());
  // Three cycles of downtime, the aborted one included.
  EXPECT_TRUE(plc.run_scan_cycle(nominal(false)).offline);
  EXPECT_TRUE(plc.run_scan_cycle(nominal(false)).offline);
  EXPECT_EQ(plc.outputs()[0], 1);
  const auto back = plc.run_scan_cycle(nominal(false));
  EXPECT_TRUE(back.completed());
  EXPECT_EQ(plc.restarts(), 1u);
  EXPECT_EQ(plc.outputs()[0], 0);
}

TEST_F(Attacked, NoneModeRunsTheOverflowUnnoticed) {
  PlcInstance plc(program, harness::kCorpusWidths, config_for(MitigationMode::kNone));
  const auto r = plc.run_scan_cycle(attacked(true));
  EXPECT_TRUE(r.completed());
  EXPECT_EQ(r.violations, 0u);
  EXPECT_TRUE(plc.violations().empty());
}

TEST(Scan, FuelExhaustionFailsTheCycle) {
  auto cfg = config_for(MitigationMode::kNone);
  cfg.fuel = 100;
  cfg.restart_delta_us = 10000;
  PlcInstance plc(plc::assemble("main:\n  JMP main\n"), {}, cfg);
  const auto r = plc.run_scan_cycle({});
  EXPECT_TRUE(r.failed);
  EXPECT_FALSE(r.fault.empty());
  EXPECT_FALSE(r.deadline_met);
}

TEST(Mso, ReferenceTotalsArithmetic) {
  const std::vector<double> base{273.48};
  const std::vector<double> inst{419.69};
  const auto m = compute_mso(base, inst, 10000);
  EXPECT_NEAR(m.mso_us, 146.21, 0.01);
  EXPECT_NEAR(m.mso_pct, 53.46, 0.01);
  const std::vector<double> base2{253.87};
  const std::vector<double> inst2{470.91};
  const auto m2 = compute_mso(base2, inst2, 30000);
  EXPECT_NEAR(m2.mso_us, 217.04, 0.01);
  EXPECT_NEAR(m2.mso_pct, 85.49, 0.01);
}

TEST(Mso, IdenticalSamplesHaveZeroOverhead) {
  const std::vector<double> s{10, 20, 30};
  const auto m = compute_mso(s, s, 10000);
  EXPECT_EQ(m.mso_us, 0);
  EXPECT_EQ(m.mso_pct, 0);
  EXPECT_EQ(m.worst_mso_us, 0);
  EXPECT_TRUE(m.tolerable_avg);
  EXPECT_TRUE(m.tolerable_worst);
}

TEST(Mso, WorstCaseIsMaxMinusMax) {
  const std::vector<double> base{1, 9, 2};
  const std::vector<double> inst{8, 3, 12};
  EXPECT_DOUBLE_EQ(compute_mso(base, inst, 100).worst_mso_us, 3.0);
}

TEST(Mso, RecordsSkipWarmupAndIncompleteCycles) {
  std::vector<ScanRecord> recs(6);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    recs[i].cycle_index = i;
    recs[i].total_us = static_cast<double>(10 * (i + 1));
  }
  recs[4].aborted = true;
  recs[5].offline = true;
  EXPECT_EQ(totals_of(recs, 2), (std::vector<double>{30, 40}));
  EXPECT_THROW(stats_of({}), std::invalid_argument);
}

TEST(Tolerable, AverageCase) {
  const std::vector<double> mean{522.39};
  EXPECT_TRUE(tolerable_average(mean, 10000));
  const std::vector<double> exact{10000};
  EXPECT_TRUE(tolerable_average(exact, 10000));
  const std::vector<double> over{30001};
  EXPECT_FALSE(tolerable_average(over, 30000));
  const std::vector<double> secuts{470.91};
  EXPECT_TRUE(tolerable_average(secuts, 30000));
}

TEST(Tolerable, WorstCase) {
  const std::vector<double> swat{4342.27};
  EXPECT_TRUE(tolerable_worst(swat, 10000));
  const std::vector<double> secuts{4124.57};
  EXPECT_TRUE(tolerable_worst(secuts, 30000));
  const std::vector<double> one_late{10, 20, 10001, 5};
  EXPECT_FALSE(tolerable_worst(one_late, 10000));
  EXPECT_TRUE(tolerable_average(one_late, 10000));
}

TEST(ControlDelay, ThreeCases) {
  EXPECT_EQ(control_delay(Completed{522.39, 10000}), 0.0);
  EXPECT_EQ(control_delay(Completed{10500, 10000}), 500.0);
  EXPECT_EQ(control_delay(Aborted{50000}), 50000.0);
  EXPECT_EQ(control_delay(Completed{10000, 10000}), 0.0);
}

TEST(ControlDelay, GridMatchesCaseSplit) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> scan(0, 40000), tc(100, 30000), delta(0, 2e6);
  for (int i = 0; i < 1000; ++i) {
    const double s = scan(rng), t = tc(rng), d = delta(rng);
    const bool aborted = i % 3 == 0;
    const DelayCase c = aborted ? DelayCase{Aborted{d}} : DelayCase{Completed{s, t}};
    ASSERT_EQ(control_delay(c), oracle::tau(aborted, d, s, t));
  }
}

}  // namespace
}  // namespace scope::runtime
