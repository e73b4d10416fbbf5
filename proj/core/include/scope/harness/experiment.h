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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scope/cima/executor.h"
#include "scope/harness/attack.h"
#include "scope/harness/profiles.h"
#include "scope/harness/register_server.h"
#include "scope/memguard/guard.h"
#include "scope/plant/simulate.h"
#include "scope/plant/swat.h"
#include "scope/runtime/mso.h"
#include "scope/runtime/plc_instance.h"

namespace scope::harness {

inline constexpr std::uint64_t kWarmupCycles = 100;

struct ExperimentConfig {
  ProfileId profile = ProfileId::kOpenSwat;
  runtime::MitigationMode mode = runtime::MitigationMode::kCima;
  std::uint64_t n_cycles = 50000;
  // Inject at cycles K, 2K, ... below n_cycles; 0 disables attacks.
  std::uint64_t attack_every = 0;
  std::optional<AttackKind> attack_kind;  // defaults to the program's victim
  std::uint64_t seed = 1;
  std::int64_t restart_delta_us = 0;  // 0: 100 cycle times
  bool warmup = true;
  bool leak_check = false;
  plant::TankConstants tank{};

  std::uint64_t warmup_cycles() const { return warmup && n_cycles > kWarmupCycles ? kWarmupCycles : 0; }
  bool is_attack_cycle(std::uint64_t t) const { return attack_every > 0 && t > 0 && t % attack_every == 0; }
  std::uint64_t injection_count() const { return attack_every == 0 ? 0 : (n_cycles - 1) / attack_every; }
};

struct PlantResult {
  plant::Verdict verdict;
  std::vector<double> levels;        // x_0 .. x_n
  std::vector<std::uint8_t> valve;   // DO0 in force during each step
};

struct PlcResult {
  std::uint32_t index = 0;
  std::vector<runtime::ScanRecord> baseline;
  std::vector<runtime::ScanRecord> instrumented;
  std::optional<runtime::MsoReport> mso;  // nullopt when no completed samples
  std::uint64_t completed = 0;
  std::uint64_t aborted = 0;
  std::uint64_t failed = 0;
  std::uint64_t offline = 0;
  std::uint64_t injections = 0;
  std::uint64_t restarts = 0;
  std::vector<memguard::Violation> violations;
  cima::MitigationLog mitigation_log;
  std::optional<PlantResult> plant;
  std::optional<PlantResult> baseline_plant;
};

struct Report {
  ExperimentConfig config;
  std::vector<PlcResult> plcs;
  memguard::MemoryReport memory;
  std::uint64_t check_sites = 0;
  std::vector<std::string> invariant_failures;
  bool crashed = false;  // a PLC failed hard and was restarted

  bool ok() const { return invariant_failures.empty(); }
};

using SnapshotSink = std::function<void(const RegisterSnapshot&)>;

// Runs the baseline (uninstrumented, unattacked) and instrumented passes
// interleaved cycle by cycle, PLCs round-robin on the calling thread.
Report run_experiment(const ExperimentConfig& config, const SnapshotSink& sink = {});

// Re-derives the tolerability flags from the stored samples.
bool verdicts_recomputable(const Report& report);

}  // namespace scope::harness
