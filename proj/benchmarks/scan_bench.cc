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

#include <benchmark/benchmark.h>

#include <random>

#include "scope/cima/instrument.h"
#include "scope/harness/attack.h"
#include "scope/harness/profiles.h"
#include "scope/harness/programs.h"
#include "scope/memguard/guard.h"
#include "scope/plant/swat.h"
#include "scope/runtime/plc_instance.h"

namespace {

using namespace scope;

// One Open-SWaT scan per iteration; arg 0 selects the mode, arg 1 enables
// an attack on every scan.
void BM_ScanCycle(benchmark::State& state) {
  const auto mode = static_cast<runtime::MitigationMode>(state.range(0));
  const bool attack = state.range(1) != 0;
  const auto& prof = harness::profile(harness::ProfileId::kOpenSwat);
  const auto program = harness::load_program(prof.program);
  runtime::CycleConfig cfg;
  cfg.mode = mode;
  runtime::PlcInstance plc(program, prof.widths, cfg);
  runtime::ScanInputs in;
  in.ai.assign(prof.widths.ai, 5000);
  in.di.assign(prof.widths.di, 1);
  if (attack) harness::inject(harness::default_scenario(program), in);
  for (auto _ : state) {
    auto rec = plc.run_scan_cycle(in);
    benchmark::DoNotOptimize(rec);
  }
  state.SetLabel(runtime::to_string(mode));
}
BENCHMARK(BM_ScanCycle)->Args({0, 0})->Args({1, 0})->Args({2, 0})->Args({2, 1});

void BM_CheckAccess(benchmark::State& state) {
  const auto program = harness::load_program("heap_overflow");
  plc::DataMemory mem;
  memguard::Guard guard(program, mem, memguard::GuardMode::kShadowed);
  const auto base = guard.allocate(256, plc::InstrId{0});
  const auto len = state.range(0);
  for (auto _ : state) {
    auto v = guard.check_access(base, len, plc::AccessKind::kRead, plc::InstrId{0});
    benchmark::DoNotOptimize(v);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * len);
}
BENCHMARK(BM_CheckAccess)->Arg(1)->Arg(8)->Arg(64)->Arg(256);

void BM_Instrument(benchmark::State& state) {
  const auto program = harness::load_program("openswat_stage1");
  for (auto _ : state) {
    auto ip = cima::instrument(program);
    benchmark::DoNotOptimize(ip);
  }
}
BENCHMARK(BM_Instrument);

void BM_RebuildShadow(benchmark::State& state) {
  const auto program = harness::load_program("heap_overflow");
  plc::DataMemory mem;
  memguard::Guard guard(program, mem, memguard::GuardMode::kShadowed);
  std::mt19937 rng(1);
  for (int i = 0; i < state.range(0); ++i) guard.allocate(1 + rng() % 128, plc::InstrId{0});
  for (auto _ : state) {
    auto s = guard.rebuild_shadow();
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_RebuildShadow)->Arg(0)->Arg(64)->Arg(200);

void BM_TankStep(benchmark::State& state) {
  const auto model = plant::swat_stage1_model();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 50);
  const auto u = plant::tank_command(true);
  for (auto _ : state) {
    x = plant::lti_step(model, x, u);
    if (x(0) > 90) x(0) = 50;
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_TankStep);

}  // namespace
BENCHMARK_MAIN();
