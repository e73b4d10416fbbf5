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

#include "scope/runtime/plc_instance.h"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "scope/plc/interpreter.h"

namespace scope::runtime {

namespace {

using Clock = std::chrono::steady_clock;

double micros(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::micro>(b - a).count();
}

template <typename T>
void latch(std::vector<T>& dst, const std::vector<T>& src) {
  const auto n = std::min(dst.size(), src.size());
  std::copy_n(src.begin(), n, dst.begin());
  std::fill(dst.begin() + static_cast<std::ptrdiff_t>(n), dst.end(), T{0});
}

}  // namespace

const char* to_string(MitigationMode mode) {
  switch (mode) {
    case MitigationMode::kNone:
      return "none";
    case MitigationMode::kAbortOnViolation:
      return "abort";
    case MitigationMode::kCima:
      return "cima";
  }
  return "unknown";
}

std::optional<MitigationMode> parse_mode(std::string_view name) {
  for (auto m : {MitigationMode::kNone, MitigationMode::kAbortOnViolation, MitigationMode::kCima}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

std::uint64_t CycleConfig::downtime_cycles() const {
  const auto delta = delta_us();
  return static_cast<std::uint64_t>((delta + cycle_time_us - 1) / cycle_time_us);
}

void CycleConfig::check() const {
  if (cycle_time_us <= 0) throw std::invalid_argument("cycle time must be positive");
  if (n_cycles < 1) throw std::invalid_argument("at least one cycle is required");
  if (restart_delta_us < 0) throw std::invalid_argument("restart delay must not be negative");
  if (fuel == 0) throw std::invalid_argument("fuel must be positive");
  layout.check();
}

PlcInstance::PlcInstance(plc::Program program, plc::IoWidths widths, CycleConfig config)
    : program_(std::move(program)), widths_(widths), config_(config), mem_(config.layout) {
  config_.check();
  plc::validate(program_);
  if (config_.mode != MitigationMode::kNone) {
    instrumented_ = std::make_unique<cima::InstrumentedProgram>(cima::instrument(program_));
  }
  const auto guard_mode =
      config_.mode == MitigationMode::kNone ? memguard::GuardMode::kLayoutOnly : memguard::GuardMode::kShadowed;
  guard_ = std::make_unique<memguard::Guard>(program_, mem_, guard_mode);
  cold_restart();
  restarts_ = 0;
}

void PlcInstance::cold_restart() {
  state_ = plc::MachineState::for_program(program_, widths_);
  mem_.clear();
  guard_->reset();
  committed_do_.assign(widths_.do_, 0);
  ++restarts_;
}

void PlcInstance::input_scan(const ScanInputs& inputs) {
  latch(state_.io.di, inputs.di);
  latch(state_.io.ai, inputs.ai);
  state_.io.net = inputs.net;
  if (program_.net) {
    const auto* rx = program_.find_global(program_.net->global);
    auto bytes = mem_.bytes().subspan(rx->offset, rx->size);
    std::fill(bytes.begin(), bytes.end(), 0);
    const auto n = std::min<std::size_t>(inputs.net.size(), rx->size);
    std::copy_n(inputs.net.begin(), n, bytes.begin());
    state_.registers[program_.net->length_reg] = static_cast<std::int64_t>(inputs.net.size());
  }
  for (const auto& binding : program_.io_map) {
    if (binding.direction() != plc::BindingDirection::kToRegister) continue;
    const bool analog = binding.channel == plc::ChannelKind::kAnalogIn;
    const auto width = analog ? state_.io.ai.size() : state_.io.di.size();
    if (binding.index >= width) {
      throw plc::Fault(plc::FaultKind::kBadChannel, "input binding beyond image width");
    }
    state_.registers[binding.reg] = analog ? state_.io.ai[binding.index] : state_.io.di[binding.index];
  }
}

void PlcInstance::output_update() {
  for (const auto& binding : program_.io_map) {
    if (binding.direction() != plc::BindingDirection::kFromRegister) continue;
    if (binding.index >= state_.io.do_.size()) {
      throw plc::Fault(plc::FaultKind::kBadChannel, "output binding beyond image width");
    }
    state_.io.do_[binding.index] = state_.registers[binding.reg] != 0 ? 1 : 0;
  }
  committed_do_ = state_.io.do_;
}

void PlcInstance::go_offline() {
  downtime_left_ = config_.downtime_cycles();
  restart_pending_ = true;
}

ScanRecord PlcInstance::run_scan_cycle(const ScanInputs& inputs) {
  ScanRecord record;
  record.cycle_index = next_cycle_++;

  if (downtime_left_ > 0) {
    // The cycle that aborted already consumed one unit of downtime.
    --downtime_left_;
    if (downtime_left_ > 0) {
      record.offline = true;
      record.deadline_met = false;
      return record;
    }
  }
  if (restart_pending_) {
    restart_pending_ = false;
    cold_restart();
  }

  state_.cycle_index = record.cycle_index;
  state_.cycle_dt_us = config_.cycle_time_us;
  const auto t0 = Clock::now();
  Clock::time_point t1 = t0;
  Clock::time_point t2 = t0;
  try {
    input_scan(inputs);
    t1 = Clock::now();
    if (config_.mode == MitigationMode::kNone) {
      plc::begin_logic_phase(program_, state_, mem_, *guard_);
      record.executed = plc::run_logic_phase(program_, state_, mem_, *guard_, config_.fuel);
    } else {
      plc::begin_logic_phase(instrumented_->program, state_, mem_, *guard_);
      const auto policy = config_.mode == MitigationMode::kCima ? cima::ViolationPolicy::kSkip
                                                                  : cima::ViolationPolicy::kAbort;
      auto result = cima::execute_instrumented(*instrumented_, state_, mem_, *guard_, policy, config_.fuel, &log_);
      record.executed = result.executed;
      record.skipped = static_cast<std::uint32_t>(result.skipped);
      record.checks = static_cast<std::uint32_t>(result.checks);
      record.violations = static_cast<std::uint32_t>(result.violations.size());
      violations_.insert(violations_.end(), result.violations.begin(), result.violations.end());
      record.aborted = result.aborted_on.has_value();
    }
    t2 = Clock::now();
    if (!record.aborted) output_update();
  } catch (const cima::ConfigurationError&) {
    throw;
  } catch (const plc::Fault& fault) {
    record.failed = true;
    record.fault = fault.what();
    if (t1 == t0) t1 = Clock::now();
    t2 = Clock::now();
  }
  const auto t3 = Clock::now();

  record.input_scan_us = micros(t0, t1);
  record.exec_us = micros(t1, t2);
  record.output_us = micros(t2, t3);
  record.total_us = micros(t0, t3);
  record.deadline_met = record.completed() && record.total_us <= static_cast<double>(config_.cycle_time_us);
  if (record.aborted || record.failed) go_offline();
  return record;
}

std::vector<memguard::Violation> PlcInstance::leak_check() {
  auto leaks = guard_->leak_check(state_.registers);
  for (auto& v : leaks) v.cycle_index = state_.cycle_index;
  violations_.insert(violations_.end(), leaks.begin(), leaks.end());
  return leaks;
}

}  // namespace scope::runtime
