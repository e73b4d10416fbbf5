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

#include "scope/harness/experiment.h"

#include <cmath>
#include <memory>
#include <random>

#include "scope/cima/instrument.h"
#include "scope/harness/programs.h"

namespace scope::harness {

namespace {

using runtime::MitigationMode;
using runtime::PlcInstance;
using runtime::ScanInputs;
using runtime::ScanRecord;

// Field noise shared by both passes of one PLC so they see the same inputs.
class InputSource {
 public:
  InputSource(const Profile& profile, std::uint64_t seed, std::uint32_t plc)
      : profile_(profile), rng_(seed * 1000003u + plc), noisy_(plc != 0) {
    base_di_.assign(profile.widths.di, 0);
    std::bernoulli_distribution on(0.7);
    for (auto& b : base_di_) b = on(rng_) ? 1 : 0;
    // Healthy, auto and remote for the pumps; no faults asserted.
    if (profile.id == ProfileId::kOpenSwat) {
      base_di_[0] = base_di_[1] = 1;
      base_di_[2] = base_di_[5] = base_di_[8] = 0;
    }
  }

  ScanInputs next(std::uint64_t t) {
    ScanInputs in;
    in.di = base_di_;
    if (profile_.id == ProfileId::kOpenSecuts) {
      const auto phase = t % 1000;
      in.di[0] = phase >= 100 && phase < 300;
      in.di[1] = phase >= 600 && phase < 700;
      in.di[2] = (phase >= 250 && phase < 350) || (phase >= 650 && phase < 750);
      in.di[3] = secuts_barrier_;
      in.di[4] = 0;
      in.di[5] = 1;
    }
    if (noisy_) {
      std::bernoulli_distribution flip(0.02);
      for (auto& b : in.di) {
        if (flip(rng_)) b ^= 1;
      }
    }
    in.ai.assign(profile_.widths.ai, 0);
    std::uniform_int_distribution<int> analog(0, 10000);
    for (std::size_t i = 1; i < in.ai.size(); ++i) in.ai[i] = static_cast<std::uint16_t>(analog(rng_));
    return in;
  }

  // Barrier feedback follows the command with one scan of lag.
  void observe_outputs(const std::vector<std::uint8_t>& outputs) {
    if (profile_.id == ProfileId::kOpenSecuts && !outputs.empty()) secuts_barrier_ = outputs[0];
  }

 private:
  const Profile& profile_;
  std::mt19937_64 rng_;
  bool noisy_;
  std::vector<std::uint8_t> base_di_;
  std::uint8_t secuts_barrier_ = 0;
};

struct Tank {
  plant::LtiModel model;
  Eigen::VectorXd x;
  PlantResult result;

  explicit Tank(const plant::TankConstants& c) : model(plant::swat_stage1_model(c)), x(1) {
    x << c.x0;
    result.levels.push_back(c.x0);
  }

  void apply(std::uint8_t valve) {
    x = plant::lti_step(model, x, plant::tank_command(valve != 0));
    result.levels.push_back(x[0]);
    result.valve.push_back(valve);
  }

  void finish() {
    std::vector<Eigen::VectorXd> states;
    states.reserve(result.levels.size());
    for (double v : result.levels) states.push_back(Eigen::VectorXd::Constant(1, v));
    result.verdict = plant::check_resiliency(states, model.theta, model.omega);
  }
};

struct Lane {
  std::unique_ptr<PlcInstance> baseline;
  std::unique_ptr<PlcInstance> instrumented;
  std::unique_ptr<InputSource> inputs;
  std::unique_ptr<InputSource> inputs_shadow;  // keeps the SecUTS feedback per pass
  std::optional<Tank> tank;
  std::optional<Tank> baseline_tank;
  PlcResult result;
};

std::optional<runtime::MsoReport> safe_mso(const PlcResult& r, double cycle_time, std::uint64_t warmup) {
  if (runtime::totals_of(r.baseline, warmup).empty() || runtime::totals_of(r.instrumented, warmup).empty()) {
    return std::nullopt;
  }
  return runtime::compute_mso(r.baseline, r.instrumented, cycle_time, warmup);
}

}  // namespace

Report run_experiment(const ExperimentConfig& config, const SnapshotSink& sink) {
  const Profile& prof = profile(config.profile);
  const plc::Program program = load_program(prof.program);
  std::optional<AttackScenario> scenario;
  if (config.attack_every > 0) {
    scenario = config.attack_kind ? make_scenario(program, *config.attack_kind) : default_scenario(program);
  }

  runtime::CycleConfig base_cfg;
  base_cfg.cycle_time_us = prof.cycle_time_us;
  base_cfg.n_cycles = config.n_cycles;
  base_cfg.mode = MitigationMode::kNone;
  base_cfg.restart_delta_us = config.restart_delta_us;
  base_cfg.leak_check = config.leak_check;
  runtime::CycleConfig inst_cfg = base_cfg;
  inst_cfg.mode = config.mode;

  Report report;
  report.config = config;
  std::vector<Lane> lanes(prof.plc_count);
  for (std::uint32_t p = 0; p < prof.plc_count; ++p) {
    auto& lane = lanes[p];
    lane.baseline = std::make_unique<PlcInstance>(program, prof.widths, base_cfg);
    lane.instrumented = std::make_unique<PlcInstance>(program, prof.widths, inst_cfg);
    // Identical seeds give both passes the same noise sequence.
    lane.inputs = std::make_unique<InputSource>(prof, config.seed, p);
    lane.inputs_shadow = std::make_unique<InputSource>(prof, config.seed, p);
    if (prof.has_tank) {
      lane.tank.emplace(config.tank);
      lane.baseline_tank.emplace(config.tank);
    }
    lane.result.index = p;
    lane.result.baseline.reserve(config.n_cycles);
    lane.result.instrumented.reserve(config.n_cycles);
  }

  std::uint64_t total_violations = 0;
  bool stopped = false;
  for (std::uint64_t t = 0; t < config.n_cycles && !stopped; ++t) {
    for (auto& lane : lanes) {
      auto base_in = lane.inputs_shadow->next(t);
      auto inst_in = lane.inputs->next(t);
      if (lane.baseline_tank) base_in.ai[0] = plant::level_to_ai(lane.baseline_tank->x[0]);
      if (lane.tank) inst_in.ai[0] = plant::level_to_ai(lane.tank->x[0]);
      const bool attack = scenario && config.is_attack_cycle(t);
      if (attack) {
        inject(*scenario, inst_in);
        ++lane.result.injections;
      }

      ScanRecord base_rec;
      ScanRecord inst_rec;
      try {
        base_rec = lane.baseline->run_scan_cycle(base_in);
        inst_rec = lane.instrumented->run_scan_cycle(inst_in);
      } catch (const cima::ConfigurationError& e) {
        report.invariant_failures.push_back(std::string("configuration error: ") + e.what());
        report.crashed = true;
        stopped = true;
        break;
      }
      lane.inputs_shadow->observe_outputs(lane.baseline->outputs());
      lane.inputs->observe_outputs(lane.instrumented->outputs());
      if (lane.baseline_tank) lane.baseline_tank->apply(lane.baseline->outputs().at(0));
      if (lane.tank) lane.tank->apply(lane.instrumented->outputs().at(0));

      if (inst_rec.completed()) ++lane.result.completed;
      if (inst_rec.aborted) ++lane.result.aborted;
      if (inst_rec.failed) {
        ++lane.result.failed;
        report.crashed = true;
      }
      if (inst_rec.offline) ++lane.result.offline;
      total_violations += inst_rec.violations;

      // Before the first injection both passes see identical inputs and
      // plant states, so they must run the same instruction sequence.
      const bool benign_prefix = !scenario || t < config.attack_every;
      if (benign_prefix && base_rec.completed() && inst_rec.completed() && base_rec.executed != inst_rec.executed) {
        report.invariant_failures.push_back("executed-count mismatch on PLC" + std::to_string(lane.result.index + 1) +
                                            " cycle " + std::to_string(t));
      }
      lane.result.baseline.push_back(std::move(base_rec));
      lane.result.instrumented.push_back(std::move(inst_rec));
    }
    if (sink && !stopped) {
      const auto& first = lanes.front();
      RegisterSnapshot snap;
      snap.level = first.tank ? first.tank->x[0] : 0.0;
      snap.last_scan_us = first.result.instrumented.back().total_us;
      snap.cycle = t + 1;
      snap.violations = total_violations;
      sink(snap);
    }
  }

  const auto warmup = config.warmup_cycles();
  for (auto& lane : lanes) {
    auto& r = lane.result;
    if (config.leak_check) lane.instrumented->leak_check();
    r.violations = lane.instrumented->violations();
    r.mitigation_log = lane.instrumented->mitigation_log();
    r.restarts = lane.instrumented->restarts();
    r.mso = safe_mso(r, static_cast<double>(prof.cycle_time_us), warmup);
    if (lane.tank) {
      lane.tank->finish();
      lane.baseline_tank->finish();
      r.plant = std::move(lane.tank->result);
      r.baseline_plant = std::move(lane.baseline_tank->result);
    }
    if (config.mode == MitigationMode::kCima && (r.aborted > 0 || r.failed > 0)) {
      report.invariant_failures.push_back("PLC" + std::to_string(r.index + 1) + " did not complete every cycle under CIMA");
    }
    if (config.mode == MitigationMode::kCima && r.mitigation_log.size() != r.injections) {
      report.invariant_failures.push_back("PLC" + std::to_string(r.index + 1) + " mitigation log length " +
                                          std::to_string(r.mitigation_log.size()) + " differs from " +
                                          std::to_string(r.injections) + " injections");
    }
  }
  const auto& first = *lanes.front().instrumented;
  if (first.instrumented() != nullptr) report.check_sites = first.instrumented()->check_sites.size();
  else report.check_sites = cima::instrument(program).check_sites.size();
  report.memory = memguard::memory_report(first.guard(), program, report.check_sites);
  for (auto& lane : lanes) report.plcs.push_back(std::move(lane.result));
  return report;
}

bool verdicts_recomputable(const Report& report) {
  const auto warmup = report.config.warmup_cycles();
  const double tc = static_cast<double>(profile(report.config.profile).cycle_time_us);
  for (const auto& plc : report.plcs) {
    if (!plc.mso) continue;
    const auto totals = runtime::totals_of(plc.instrumented, warmup);
    if (runtime::tolerable_average(totals, tc) != plc.mso->tolerable_avg) return false;
    if (runtime::tolerable_worst(totals, tc) != plc.mso->tolerable_worst) return false;
  }
  return true;
}

}  // namespace scope::harness
