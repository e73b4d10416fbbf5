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

#include "scope/runtime/mso.h"

#include <algorithm>
#include <numeric>

namespace scope::runtime {

SampleStats stats_of(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("empty sample set");
  SampleStats s;
  s.n = samples.size();
  s.mean_us = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(s.n);
  s.max_us = *std::max_element(samples.begin(), samples.end());
  return s;
}

bool tolerable_average(std::span<const double> totals, double cycle_time_us) {
  return stats_of(totals).mean_us <= cycle_time_us;
}

bool tolerable_worst(std::span<const double> totals, double cycle_time_us) {
  return stats_of(totals).max_us <= cycle_time_us;
}

MsoReport compute_mso(std::span<const double> baseline_totals, std::span<const double> instrumented_totals,
                      double cycle_time_us) {
  MsoReport r;
  r.baseline = stats_of(baseline_totals);
  r.instrumented = stats_of(instrumented_totals);
  r.mso_us = r.instrumented.mean_us - r.baseline.mean_us;
  r.mso_pct = r.baseline.mean_us == 0 ? 0 : 100.0 * r.mso_us / r.baseline.mean_us;
  r.worst_mso_us = r.instrumented.max_us - r.baseline.max_us;
  r.tolerable_avg = r.instrumented.mean_us <= cycle_time_us;
  r.tolerable_worst = r.instrumented.max_us <= cycle_time_us;
  r.cycle_time_us = cycle_time_us;
  r.n = r.instrumented.n;
  return r;
}

namespace {

template <typename Field>
std::vector<double> collect(const std::vector<ScanRecord>& records, std::size_t warmup, Field field) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    if (rec.cycle_index < warmup || !rec.completed()) continue;
    out.push_back(field(rec));
  }
  return out;
}

}  // namespace

std::vector<double> totals_of(const std::vector<ScanRecord>& records, std::size_t warmup) {
  return collect(records, warmup, [](const ScanRecord& r) { return r.total_us; });
}

PhaseStats phase_stats(const std::vector<ScanRecord>& records, std::size_t warmup) {
  PhaseStats p;
  p.input_scan = stats_of(collect(records, warmup, [](const ScanRecord& r) { return r.input_scan_us; }));
  p.exec = stats_of(collect(records, warmup, [](const ScanRecord& r) { return r.exec_us; }));
  p.output = stats_of(collect(records, warmup, [](const ScanRecord& r) { return r.output_us; }));
  p.total = stats_of(totals_of(records, warmup));
  return p;
}

MsoReport compute_mso(const std::vector<ScanRecord>& baseline, const std::vector<ScanRecord>& instrumented,
                      double cycle_time_us, std::size_t warmup) {
  auto r = compute_mso(totals_of(baseline, warmup), totals_of(instrumented, warmup), cycle_time_us);
  r.baseline_phases = phase_stats(baseline, warmup);
  r.instrumented_phases = phase_stats(instrumented, warmup);
  return r;
}

}  // namespace scope::runtime
