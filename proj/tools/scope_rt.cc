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

// scope-rt: run soft-PLC experiments, the detection matrix, and standalone
// control-delay studies.

#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "scope/cima/cfg.h"
#include "scope/cima/instrument.h"
#include "scope/harness/experiment.h"
#include "scope/harness/matrix.h"
#include "scope/harness/programs.h"
#include "scope/harness/register_server.h"
#include "scope/harness/report_io.h"
#include "scope/plant/model_io.h"
#include "scope/plant/simulate.h"

namespace {

using namespace scope;

struct RunOptions {
  std::string profile = "openswat";
  std::string mode = "cima";
  std::uint64_t cycles = 50000;
  std::uint64_t attack_every = 0;
  std::string attack;
  std::uint64_t seed = 1;
  std::int64_t delta_us = 0;
  bool no_warmup = false;
  bool leak_check = false;
  std::string out;
  std::string csv;
  int serve = -1;
  double linger_s = 0;
  std::string dump_cfg;
  bool quiet = false;
};

struct MatrixOptions {
  std::uint64_t benign_cycles = 5000;
  std::uint64_t seed = 7;
  std::string out;
};

struct PlantOptions {
  std::string model;
  double tau_us = 0;
  std::size_t onset = 0;
  std::size_t steps = 0;
  std::string csv;
};

volatile std::sig_atomic_t g_interrupted = 0;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int cmd_run(const RunOptions& o) {
  harness::ExperimentConfig cfg;
  const auto profile = harness::parse_profile(o.profile);
  if (!profile) throw CLI::ValidationError("--profile", "unknown profile " + o.profile);
  const auto mode = runtime::parse_mode(o.mode);
  if (!mode) throw CLI::ValidationError("--mode", "unknown mode " + o.mode);
  cfg.profile = *profile;
  cfg.mode = *mode;
  cfg.n_cycles = o.cycles;
  cfg.attack_every = o.attack_every;
  cfg.seed = o.seed;
  cfg.restart_delta_us = o.delta_us;
  cfg.warmup = !o.no_warmup;
  cfg.leak_check = o.leak_check;
  if (!o.attack.empty()) {
    cfg.attack_kind = harness::parse_attack_kind(o.attack);
    if (!cfg.attack_kind) throw CLI::ValidationError("--attack", "unknown attack " + o.attack);
  }

  const auto& prof = harness::profile(cfg.profile);
  if (!o.dump_cfg.empty()) {
    const auto ip = cima::instrument(harness::load_program(prof.program));
    write_file(o.dump_cfg, cima::to_dot(ip.program, ip.cfg));
  }

  harness::RegisterServer server;
  harness::SnapshotSink sink;
  if (o.serve >= 0) {
    server.start(static_cast<std::uint16_t>(o.serve));
    std::cerr << "serving holding registers on 127.0.0.1:" << server.port() << "\n";
    sink = [&server](const harness::RegisterSnapshot& s) { server.publish(s); };
  }

  const auto report = harness::run_experiment(cfg, sink);

  if (!o.out.empty()) write_file(o.out, harness::report_to_json(report) + "\n");
  if (!o.csv.empty()) {
    std::ofstream csv(o.csv);
    if (!csv) throw std::runtime_error("cannot write " + o.csv);
    harness::write_samples_csv(csv, report);
  }
  if (!o.quiet) std::cout << harness::report_to_text(report);

  if (server.running() && o.linger_s > 0) {
    const auto until = std::chrono::steady_clock::now() + std::chrono::duration<double>(o.linger_s);
    while (!g_interrupted && std::chrono::steady_clock::now() < until) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  }
  server.stop();
  return report.ok() ? 0 : 1;
}

int cmd_matrix(const MatrixOptions& o) {
  harness::MatrixConfig cfg;
  cfg.benign_cycles = o.benign_cycles;
  cfg.seed = o.seed;
  const auto matrix = harness::detection_matrix(cfg);
  std::cout << harness::matrix_to_text(matrix);
  if (!o.out.empty()) write_file(o.out, harness::matrix_to_json(matrix) + "\n");
  return matrix.conforms() ? 0 : 1;
}

// The model file may carry the study alongside the model: "x0", "u" (the
// nominal command, applied outside the delay), "held" (defaults to "u"),
// "onset" and "steps".
int cmd_plant(const PlantOptions& o) {
  std::ifstream in(o.model);
  if (!in) throw std::runtime_error("cannot read " + o.model);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto model = plant::model_from_json(text);
  const auto j = nlohmann::json::parse(text);
  const auto vec = [&](const char* key, Eigen::Index n) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    if (j.contains(key)) {
      const auto vals = j.at(key).get<std::vector<double>>();
      if (static_cast<Eigen::Index>(vals.size()) != n) throw plant::DimensionError(std::string(key) + " has wrong size");
      for (Eigen::Index i = 0; i < n; ++i) v(i) = vals[static_cast<std::size_t>(i)];
    }
    return v;
  };
  const Eigen::VectorXd x0 = vec("x0", model.k());
  const Eigen::VectorXd u = vec("u", model.m());
  plant::DelaySpec delay;
  delay.tau_us = o.tau_us;
  delay.onset_t = o.onset ? o.onset : j.value("onset", std::size_t{0});
  delay.held_command = j.contains("held") ? vec("held", model.m()) : u;
  const auto held = plant::held_steps(o.tau_us, model.step_us);
  std::size_t steps = o.steps ? o.steps : j.value("steps", std::size_t{0});
  if (steps == 0) steps = delay.onset_t + held + 1;
  const auto traj = plant::simulate_with_delay(
      model, x0, [&](std::size_t, const Eigen::VectorXd&) { return u; }, delay, steps);
  const auto verdict = plant::check_resiliency(traj, model.theta, model.omega);

  std::cout << "held steps: " << held << " (tau " << o.tau_us << " us, step " << model.step_us << " us)\n";
  if (verdict.resilient) {
    std::cout << "resilient over " << steps << " steps\n";
  } else {
    std::cout << "violated at t=" << verdict.t << ": x[" << verdict.component << "]=" << verdict.value
              << (verdict.bound == plant::Bound::kUpper ? " > omega" : " < theta") << "\n";
  }
  if (!o.csv.empty()) {
    std::ofstream csv(o.csv);
    if (!csv) throw std::runtime_error("cannot write " + o.csv);
    plant::write_trajectory_csv(csv, traj);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Memory-safety instrumentation and mitigation for a simulated soft PLC"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a profile with baseline and instrumented passes");
  run_cmd->add_option("--profile", run.profile, "openswat | opensecuts")->capture_default_str();
  run_cmd->add_option("--mode", run.mode, "none | abort | cima")->capture_default_str();
  run_cmd->add_option("--cycles", run.cycles, "Scan cycles per PLC")->capture_default_str()->check(CLI::PositiveNumber);
  run_cmd->add_option("--attack-every", run.attack_every, "Inject at cycles K, 2K, ...; 0 disables")
      ->capture_default_str();
  run_cmd->add_option("--attack", run.attack, "Attack kind; defaults to the program's declared victim");
  run_cmd->add_option("--seed", run.seed, "Input seed")->capture_default_str();
  run_cmd->add_option("--delta", run.delta_us, "Restart time in us; 0 means 100 cycle times")->capture_default_str();
  run_cmd->add_flag("--no-warmup", run.no_warmup, "Keep the first cycles in the statistics");
  run_cmd->add_flag("--leak-check", run.leak_check, "Run a leak check after the last cycle");
  run_cmd->add_option("--out", run.out, "Report JSON path");
  run_cmd->add_option("--csv", run.csv, "Per-cycle samples CSV path");
  run_cmd->add_option("--serve", run.serve, "Serve holding registers over Modbus/TCP on this port (0: ephemeral)");
  run_cmd->add_option("--linger", run.linger_s, "Seconds to keep serving after the run");
  run_cmd->add_option("--dump-cfg", run.dump_cfg, "Write the instrumented CFG as Graphviz dot");
  run_cmd->add_flag("-q,--quiet", run.quiet, "Do not print the summary table");

  MatrixOptions matrix;
  auto* matrix_cmd = app.add_subcommand("matrix", "Detection matrix over the vulnerable corpus");
  matrix_cmd->add_option("--benign-cycles", matrix.benign_cycles, "Benign cycles per corpus program")
      ->capture_default_str();
  matrix_cmd->add_option("--seed", matrix.seed, "Input seed")->capture_default_str();
  matrix_cmd->add_option("--out", matrix.out, "Matrix JSON path");

  PlantOptions plant_opts;
  auto* plant_cmd = app.add_subcommand("plant", "Simulate a plant under a held command");
  plant_cmd->add_option("--model", plant_opts.model, "Model JSON")->required()->check(CLI::ExistingFile);
  plant_cmd->add_option("--tau", plant_opts.tau_us, "Control delay in us")->required()->check(CLI::NonNegativeNumber);
  plant_cmd->add_option("--onset", plant_opts.onset, "Step where the delay begins");
  plant_cmd->add_option("--steps", plant_opts.steps, "Horizon in steps");
  plant_cmd->add_option("--csv", plant_opts.csv, "Trajectory CSV path");

  CLI11_PARSE(app, argc, argv);
  std::signal(SIGINT, [](int) { g_interrupted = 1; });

  try {
    if (*run_cmd) return cmd_run(run);
    if (*matrix_cmd) return cmd_matrix(matrix);
    if (*plant_cmd) return cmd_plant(plant_opts);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "scope-rt: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
