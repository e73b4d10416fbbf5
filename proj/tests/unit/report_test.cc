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

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scope/harness/report_io.h"
#include "scope/runtime/mso.h"

#ifndef SCOPE_TEST_DATA_DIR
#error "SCOPE_TEST_DATA_DIR must point at tests/data"
#endif

namespace scope::harness {
namespace {

using nlohmann::json;

ExperimentConfig golden_config() {
  ExperimentConfig c;
  c.profile = ProfileId::kOpenSecuts;
  c.mode = runtime::MitigationMode::kCima;
  c.n_cycles = 300;
  c.attack_every = 50;
  c.seed = 1;
  return c;
}

json strip_timing(json j) {
  for (auto& plc : j.at("plcs")) {
    for (const char* key : kTimingKeys) plc.erase(key);
  }
  return j;
}

TEST(ReportJson, CarriesVersionAndSections) {
  const auto j = json::parse(report_to_json(run_experiment(golden_config())));
  EXPECT_EQ(j.at("report_version"), kReportVersion);
  for (const char* key : {"config", "plcs", "memory", "invariant_failures", "fidelity_notes"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  const auto& plc = j.at("plcs").at(0);
  for (const char* key : {"mso", "samples", "violations", "mitigation_log", "completed", "aborted"}) {
    EXPECT_TRUE(plc.contains(key)) << key;
  }
  EXPECT_EQ(plc.at("mitigation_log").size(), 5u);
  EXPECT_EQ(plc.at("mso").at("worst_mso_definition"), "max(instrumented) - max(baseline)");
}

TEST(ReportJson, MatchesGoldenApartFromTiming) {
  std::ifstream in(std::string(SCOPE_TEST_DATA_DIR) + "/golden_opensecuts_cima.json");
  ASSERT_TRUE(in.good());
  const auto golden = json::parse(in);
  const auto got = strip_timing(json::parse(report_to_json(run_experiment(golden_config()))));
  EXPECT_EQ(got, golden) << got.dump(2);
}

TEST(ReportJson, SameSeedSameReport) {
  const auto a = strip_timing(json::parse(report_to_json(run_experiment(golden_config()))));
  const auto b = strip_timing(json::parse(report_to_json(run_experiment(golden_config()))));
  EXPECT_EQ(a.dump(), b.dump());
  auto other = golden_config();
  other.seed = 2;
  const auto c = strip_timing(json::parse(report_to_json(run_experiment(other))));
  EXPECT_EQ(c.at("plcs")[0].at("mitigation_log"), a.at("plcs")[0].at("mitigation_log"));
}

TEST(ReportJson, TolerabilityFlagsRecomputeFromEmbeddedSamples) {
  auto c = golden_config();
  c.profile = ProfileId::kOpenSwat;
  c.n_cycles = 400;
  const auto j = json::parse(report_to_json(run_experiment(c)));
  const double tc = j.at("config").at("cycle_time_us");
  for (const auto& plc : j.at("plcs")) {
    const auto base = plc.at("samples").at("baseline_total_us").get<std::vector<double>>();
    const auto inst = plc.at("samples").at("instrumented_total_us").get<std::vector<double>>();
    ASSERT_EQ(inst.size(), 300u);
    const auto& mso = plc.at("mso");
    EXPECT_EQ(runtime::tolerable_average(inst, tc), mso.at("tolerable_avg").get<bool>());
    EXPECT_EQ(runtime::tolerable_worst(inst, tc), mso.at("tolerable_worst").get<bool>());
    const auto again = runtime::compute_mso(base, inst, tc);
    EXPECT_DOUBLE_EQ(again.mso_us, mso.at("mso_us").get<double>());
    EXPECT_DOUBLE_EQ(again.worst_mso_us, mso.at("worst_mso_us").get<double>());
  }
}

TEST(ReportText, HasPhaseRows) {
  const auto text = report_to_text(run_experiment(golden_config()));
  for (const char* row : {"input scan", "logic", "output update", "total", "MSO"}) {
    EXPECT_NE(text.find(row), std::string::npos) << row;
  }
}

TEST(ReportCsv, OneRowPerCycleAndPass) {
  std::ostringstream out;
  write_samples_csv(out, run_experiment(golden_config()));
  const auto text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 2 * 300);
}

TEST(MatrixJson, RowsAndTotals) {
  MatrixConfig cfg;
  cfg.benign_cycles = 100;
  const auto m = detection_matrix(cfg);
  const auto j = json::parse(matrix_to_json(m));
  EXPECT_EQ(j.at("rows").size(), m.rows.size());
  EXPECT_EQ(j.at("false_positives"), 0);
  EXPECT_TRUE(j.at("conforms").get<bool>());
  const auto text = matrix_to_text(m);
  EXPECT_NE(text.find("uncovered"), std::string::npos);
  EXPECT_NE(text.find("known blind spot"), std::string::npos);
}

}  // namespace
}  // namespace scope::harness
