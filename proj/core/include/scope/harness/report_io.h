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

#include <iosfwd>
#include <string>

#include "scope/harness/experiment.h"
#include "scope/harness/matrix.h"

namespace scope::harness {

inline constexpr int kReportVersion = 1;

// Fields whose values depend on host timing; everything else is a pure
// function of the configuration and seed.
inline constexpr const char* kTimingKeys[] = {"mso", "samples", "timing"};

std::string report_to_json(const Report& report, int indent = 2);
// Per-PLC phase table: mean/max of each phase in both passes, MSO us and %.
std::string report_to_text(const Report& report);
// One row per PLC, cycle and pass.
void write_samples_csv(std::ostream& out, const Report& report);

std::string matrix_to_json(const DetectionMatrix& matrix, int indent = 2);
std::string matrix_to_text(const DetectionMatrix& matrix);

}  // namespace scope::harness
