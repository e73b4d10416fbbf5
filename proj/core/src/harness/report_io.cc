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

#include "scope/harness/report_io.h"

#include <cstdio>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace scope::harness {

namespace {

using nlohmann::json;

json stats_json(const runtime::SampleStats& s) { return {{"mean_us", s.mean_us}, {"max_us", s.max_us}, {"n", s.n}}; }

json phases_json(const runtime::PhaseStats& p) {
  return {{"input_scan", stats_json(p.input_scan)},
          {"logic", stats_json(p.exec)},
          {"output_update", stats_json(p.output)},
          {"total", stats_json(p.total)}};
}

json mso_json(const runtime::MsoReport& m) {
  return {{"baseline", stats_json(m.baseline)},
          {"instrumented", stats_json(m.instrumented)},
          {"phases", {{"baseline", phases_json(m.baseline_phases)}, {"instrumented", phases_json(m.instrumented_phases)}}},
          {"mso_us", m.mso_us},
          {"mso_pct", m.mso_pct},
          {"worst_mso_us", m.worst_mso_us},
          {"worst_mso_definition", "max(instrumented) - max(baseline)"},
          {"tolerable_avg", m.tolerable_avg},
          {"tolerable_worst", m.tolerable_worst},
          {"cycle_time_us", m.cycle_time_us}};
}

json verdict_json(const plant::Verdict& v) {
  if (v.resilient) return {{"resilient", true}};
  return {{"resilient", false},
          {"t", v.t},
          {"component", v.component},
          {"bound", v.bound == plant::Bound::kUpper ? "omega" : "theta"},
          {"value", v.value}};
}

json plant_json(const PlantResult& p) {
  double lo = p.levels.front();
  double hi = lo;
  for (double v : p.levels) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {{"verdict", verdict_json(p.verdict)}, {"min_level", lo}, {"max_level", hi}, {"steps", p.valve.size()}};
}

std::string fmt(double v, int precision = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace

std::string report_to_json(const Report& report, int indent) {
  const auto& cfg = report.config;
  const auto& prof = profile(cfg.profile);
  json j;
  j["report_version"] = kReportVersion;
  j["config"] = {{"profile", prof.name},
                 {"program", prof.program},
                 {"mode", runtime::to_string(cfg.mode)},
                 {"n_cycles", cfg.n_cycles},
                 {"attack_every", cfg.attack_every},
                 {"attack_kind", cfg.attack_kind ? json(to_string(*cfg.attack_kind)) : json(nullptr)},
                 {"seed", cfg.seed},
                 {"cycle_time_us", prof.cycle_time_us},
                 {"restart_delta_us", cfg.restart_delta_us > 0 ? cfg.restart_delta_us : 100 * prof.cycle_time_us},
                 {"warmup_cycles", cfg.warmup_cycles()},
                 {"leak_check", cfg.leak_check},
                 {"plc_count", prof.plc_count},
                 {"io", {{"di", prof.widths.di}, {"ai", prof.widths.ai}, {"do", prof.widths.do_}}}};
  const auto warmup = cfg.warmup_cycles();
  json plcs = json::array();
  for (const auto& r : report.plcs) {
    json p = {{"plc", r.index + 1},       {"completed", r.completed}, {"aborted", r.aborted},
              {"failed", r.failed},       {"offline", r.offline},     {"injections", r.injections},
              {"restarts", r.restarts}};
    p["mso"] = r.mso ? mso_json(*r.mso) : json(nullptr);
    p["samples"] = {{"baseline_total_us", runtime::totals_of(r.baseline, warmup)},
                    {"instrumented_total_us", runtime::totals_of(r.instrumented, warmup)}};
    json violations = json::array();
    for (const auto& v : r.violations) violations.push_back(json::parse(memguard::to_json(v)));
    p["violations"] = violations;
    json log = json::array();
    for (const auto& e : r.mitigation_log.entries) log.push_back(json::parse(cima::to_json_line(e)));
    p["mitigation_log"] = log;
    if (r.plant) p["plant"] = plant_json(*r.plant);
    if (r.baseline_plant) p["baseline_plant"] = plant_json(*r.baseline_plant);
    plcs.push_back(p);
  }
  j["plcs"] = plcs;
  const auto& m = report.memory;
  j["memory"] = {{"data_bytes", m.data_bytes},
                 {"shadow_bytes", m.shadow_bytes},
                 {"redzone_bytes", m.redzone_bytes},
                 {"quarantine_bytes", m.quarantine_bytes},
                 {"live_heap_bytes", m.live_heap_bytes},
                 {"original_instructions", m.original_instructions},
                 {"instrumented_instructions", m.instrumented_instructions},
                 {"memory_ratio", m.memory_ratio()},
                 {"instruction_ratio", m.instruction_ratio()}};
  j["invariant_failures"] = report.invariant_failures;
  j["crashed"] = report.crashed;
  j["fidelity_notes"] = {"inter-PLC network traffic and its load on scan time are not modeled",
                         "scan times are measured on the host and are not comparable to PLC hardware"};
  return j.dump(indent);
}

std::string report_to_text(const Report& report) {
  std::ostringstream out;
  const auto& cfg = report.config;
  const auto& prof = profile(cfg.profile);
  out << prof.name << "  mode=" << runtime::to_string(cfg.mode) << "  cycles=" << cfg.n_cycles
      << "  T_c=" << prof.cycle_time_us << "us\n";
  for (const auto& r : report.plcs) {
    out << "\nPLC" << r.index + 1 << ": completed " << r.completed << ", aborted " << r.aborted << ", failed "
        << r.failed << ", offline " << r.offline << ", injections " << r.injections << ", mitigations "
        << r.mitigation_log.size() << "\n";
    if (!r.mso) {
      out << "  no completed samples\n";
    } else {
      const auto& m = *r.mso;
      char line[160];
      std::snprintf(line, sizeof line, "  %-14s %12s %12s %12s %12s %10s %8s\n", "phase", "T_s mean", "T_s max",
                    "T^_s mean", "T^_s max", "MSO us", "MSO %");
      out << line;
      const auto row = [&](const char* name, const runtime::SampleStats& b, const runtime::SampleStats& i) {
        const double mso = i.mean_us - b.mean_us;
        const double pct = b.mean_us == 0 ? 0 : 100.0 * mso / b.mean_us;
        std::snprintf(line, sizeof line, "  %-14s %12.2f %12.2f %12.2f %12.2f %10.2f %8.2f\n", name, b.mean_us,
                      b.max_us, i.mean_us, i.max_us, mso, pct);
        out << line;
      };
      row("input scan", m.baseline_phases.input_scan, m.instrumented_phases.input_scan);
      row("logic", m.baseline_phases.exec, m.instrumented_phases.exec);
      row("output update", m.baseline_phases.output, m.instrumented_phases.output);
      row("total", m.baseline, m.instrumented);
      out << "  worst-case MSO (max - max): " << fmt(m.worst_mso_us) << " us; tolerable average "
          << (m.tolerable_avg ? "yes" : "no") << ", worst " << (m.tolerable_worst ? "yes" : "no") << "\n";
    }
    if (r.plant) {
      const auto& v = r.plant->verdict;
      out << "  plant: " << (v.resilient ? "resilient" : "violated");
      if (!v.resilient) {
        out << " at t=" << v.t << " (" << (v.bound == plant::Bound::kUpper ? "above omega" : "below theta")
            << ", x=" << fmt(v.value) << ")";
      }
      out << "\n";
    }
  }
  if (!report.invariant_failures.empty()) {
    out << "\ninvariant failures:\n";
    for (const auto& f : report.invariant_failures) out << "  " << f << "\n";
  }
  return out.str();
}

void write_samples_csv(std::ostream& out, const Report& report) {
  out << "plc,cycle,pass,input_scan_us,exec_us,output_us,total_us,completed,aborted,failed,offline,executed,"
         "violations\n";
  const auto rows = [&](std::uint32_t plc, const char* pass, const std::vector<runtime::ScanRecord>& recs) {
    for (const auto& r : recs) {
      out << plc << ',' << r.cycle_index << ',' << pass << ',' << fmt(r.input_scan_us, 3) << ','
          << fmt(r.exec_us, 3) << ',' << fmt(r.output_us, 3) << ',' << fmt(r.total_us, 3) << ','
          << r.completed() << ',' << r.aborted << ',' << r.failed << ',' << r.offline << ',' << r.executed << ','
          << r.violations << '\n';
    }
  };
  for (const auto& r : report.plcs) {
    rows(r.index + 1, "baseline", r.baseline);
    rows(r.index + 1, "instrumented", r.instrumented);
  }
}

std::string matrix_to_json(const DetectionMatrix& matrix, int indent) {
  json rows = json::array();
  for (const auto& r : matrix.rows) {
    const char* kind = r.kind == RowKind::kCovered ? "covered" : r.kind == RowKind::kUncovered ? "uncovered" : "blind-spot";
    rows.push_back({{"vulnerability", r.vulnerability},
                    {"program", r.program},
                    {"kind", kind},
                    {"expected", r.expected ? json(memguard::to_string(*r.expected)) : json(nullptr)},
                    {"observed", r.observed ? json(memguard::to_string(*r.observed)) : json(nullptr)},
                    {"detected", r.detected},
                    {"mitigated", r.mitigated},
                    {"benign_accesses", r.benign_accesses},
                    {"false_positives", r.false_positives},
                    {"conforms", r.conforms},
                    {"detail", r.detail}});
  }
  const json j = {{"rows", rows},
                  {"benign_accesses", matrix.benign_accesses},
                  {"false_positives", matrix.false_positives},
                  {"conforms", matrix.conforms()}};
  return j.dump(indent);
}

std::string matrix_to_text(const DetectionMatrix& matrix) {
  std::ostringstream out;
  char line[200];
  std::snprintf(line, sizeof line, "%-28s %-10s %-9s %-10s %-16s %s\n", "vulnerability", "detected", "mitigated",
                "false pos", "benign accesses", "note");
  out << line;
  for (const auto& r : matrix.rows) {
    const char* detected = r.kind == RowKind::kUncovered ? "uncovered" : r.detected ? "yes" : "no";
    const char* mitigated = r.kind == RowKind::kCovered ? (r.mitigated ? "yes" : "no") : "-";
    std::snprintf(line, sizeof line, "%-28s %-10s %-9s %-10llu %-16llu %s\n", r.vulnerability.c_str(), detected,
                  mitigated, static_cast<unsigned long long>(r.false_positives),
                  static_cast<unsigned long long>(r.benign_accesses),
                  r.kind == RowKind::kBlindSpot ? "known blind spot" : r.conforms ? "" : "MISMATCH");
    out << line;
  }
  out << "benign accesses " << matrix.benign_accesses << ", false positives " << matrix.false_positives
      << ", conforms " << (matrix.conforms() ? "yes" : "no") << "\n";
  return out.str();
}

}  // namespace scope::harness
