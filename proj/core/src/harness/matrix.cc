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

#include "scope/harness/matrix.h"

#include <algorithm>
#include <random>

#include "scope/harness/programs.h"
#include "scope/harness/profiles.h"
#include "scope/runtime/plc_instance.h"

namespace scope::harness {

namespace {

using runtime::MitigationMode;

struct CorpusRun {
  std::vector<runtime::ScanRecord> records;
  std::vector<memguard::Violation> violations;
  std::size_t log_entries = 0;
  std::uint64_t checks = 0;

  bool all_completed() const {
    return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.completed(); });
  }
};

runtime::ScanInputs random_inputs(const plc::Program& program, std::mt19937_64& rng) {
  runtime::ScanInputs in;
  std::bernoulli_distribution bit(0.5);
  std::uniform_int_distribution<int> analog(0, 2000);
  in.di.resize(kCorpusWidths.di);
  for (auto& b : in.di) b = bit(rng) ? 1 : 0;
  in.ai.resize(kCorpusWidths.ai);
  for (auto& a : in.ai) a = static_cast<std::uint16_t>(analog(rng));
  in.net = benign_payload(program, rng);
  return in;
}

CorpusRun run_corpus(const plc::Program& program, MitigationMode mode, const AttackScenario* attack,
                     std::uint64_t attack_at, std::uint64_t cycles, std::uint64_t seed) {
  runtime::CycleConfig cfg;
  cfg.cycle_time_us = 10000;
  cfg.n_cycles = cycles;
  cfg.mode = mode;
  cfg.leak_check = true;
  runtime::PlcInstance plc(program, kCorpusWidths, cfg);
  std::mt19937_64 rng(seed);
  CorpusRun run;
  for (std::uint64_t t = 0; t < cycles; ++t) {
    auto in = random_inputs(program, rng);
    if (attack != nullptr && t == attack_at) inject(*attack, in);
    run.records.push_back(plc.run_scan_cycle(in));
    run.checks += run.records.back().checks;
  }
  plc.leak_check();
  run.violations = plc.violations();
  run.log_entries = plc.mitigation_log().size();
  return run;
}

const char* row_title(AttackKind kind) {
  switch (kind) {
    case AttackKind::kStackOverflowControlHijack:
      return "Stack buffer overflow";
    case AttackKind::kHeapOverflow:
      return "Heap buffer overflow";
    case AttackKind::kGlobalOverflow:
      return "Global buffer overflow";
    case AttackKind::kUseAfterFree:
      return "Use-after-free";
    case AttackKind::kUseAfterReturn:
      return "Use-after-return";
    case AttackKind::kLeak:
      return "Memory leak";
    case AttackKind::kDoubleFree:
      return "Double-free";
    case AttackKind::kUninitRead:
      return "Uninitialized memory read";
    case AttackKind::kRedzoneBypass:
      return "Overflow past the redzone";
  }
  return "?";
}

}  // namespace

bool DetectionMatrix::conforms() const {
  return !rows.empty() && false_positives == 0 &&
         std::all_of(rows.begin(), rows.end(), [](const MatrixRow& r) { return r.conforms; });
}

DetectionMatrix detection_matrix(const MatrixConfig& config) {
  DetectionMatrix matrix;
  std::uint64_t seed = config.seed;
  for (const auto& name : corpus_names()) {
    const auto program = load_program(name);
    const auto scenario = default_scenario(program);
    MatrixRow row;
    row.program = name;
    row.attack = scenario.kind;
    row.vulnerability = row_title(scenario.kind);
    row.expected = expected_class(scenario.kind);
    row.kind = row.expected ? RowKind::kCovered
               : scenario.kind == AttackKind::kUninitRead ? RowKind::kUncovered
                                                          : RowKind::kBlindSpot;

    const auto benign = run_corpus(program, MitigationMode::kCima, nullptr, 0, config.benign_cycles, ++seed);
    row.benign_accesses = benign.checks;
    row.false_positives = benign.violations.size();

    const auto detect = run_corpus(program, MitigationMode::kAbortOnViolation, &scenario, config.attack_at,
                                   config.attack_cycles, ++seed);
    if (!detect.violations.empty()) row.observed = detect.violations.front().cls;
    row.detected = row.expected && std::any_of(detect.violations.begin(), detect.violations.end(),
                                               [&](const auto& v) { return v.cls == *row.expected; });

    const auto mitigate = run_corpus(program, MitigationMode::kCima, &scenario, config.attack_at,
                                     config.attack_cycles, ++seed);
    const bool access_class = row.expected && *row.expected != memguard::ViolationClass::kMemoryLeak;
    row.mitigated = row.detected && mitigate.all_completed() && (!access_class || mitigate.log_entries == 1);

    switch (row.kind) {
      case RowKind::kCovered:
        row.conforms = row.detected && row.mitigated && row.false_positives == 0;
        row.detail = row.conforms ? "detected and mitigated" : "expected detection";
        break;
      case RowKind::kUncovered:
        row.conforms = detect.violations.empty() && row.false_positives == 0;
        row.detail = "uncovered: reads of addressable but unwritten bytes raise nothing";
        break;
      case RowKind::kBlindSpot:
        row.conforms = detect.violations.empty() && row.false_positives == 0;
        row.detail = "known miss: the write skips the redzone into a live neighbour";
        break;
    }
    matrix.benign_accesses += row.benign_accesses;
    matrix.false_positives += row.false_positives;
    matrix.rows.push_back(std::move(row));
  }
  return matrix;
}

}  // namespace scope::harness
