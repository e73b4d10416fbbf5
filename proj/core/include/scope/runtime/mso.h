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

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "scope/runtime/plc_instance.h"

namespace scope::runtime {

struct SampleStats {
  double mean_us = 0;
  double max_us = 0;
  std::size_t n = 0;
};

// Throws std::invalid_argument on an empty sample set.
SampleStats stats_of(std::span<const double> samples);

struct PhaseStats {
  SampleStats input_scan;
  SampleStats exec;
  SampleStats output;
  SampleStats total;
};

struct MsoReport {
  SampleStats baseline;
  SampleStats instrumented;
  PhaseStats baseline_phases;
  PhaseStats instrumented_phases;
  double mso_us = 0;
  double mso_pct = 0;
  // max(instrumented) - max(baseline); not a per-cycle pairing.
  double worst_mso_us = 0;
  bool tolerable_avg = false;
  bool tolerable_worst = false;
  double cycle_time_us = 0;
  std::size_t n = 0;
};

// Mean scan time at most T_c.
bool tolerable_average(std::span<const double> totals, double cycle_time_us);
// Every scan time at most T_c.
bool tolerable_worst(std::span<const double> totals, double cycle_time_us);

MsoReport compute_mso(std::span<const double> baseline_totals, std::span<const double> instrumented_totals,
                      double cycle_time_us);

// Uses completed records only, skipping the first `warmup` cycle indices.
MsoReport compute_mso(const std::vector<ScanRecord>& baseline, const std::vector<ScanRecord>& instrumented,
                      double cycle_time_us, std::size_t warmup = 0);

PhaseStats phase_stats(const std::vector<ScanRecord>& records, std::size_t warmup = 0);
std::vector<double> totals_of(const std::vector<ScanRecord>& records, std::size_t warmup = 0);

}  // namespace scope::runtime
