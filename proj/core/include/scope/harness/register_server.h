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

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace scope::harness {

// Values published by the experiment coordinator after each cycle.
struct RegisterSnapshot {
  double level = 0;
  double last_scan_us = 0;
  std::uint64_t cycle = 0;
  std::uint64_t violations = 0;

  // 0: level x100, 1: last scan us, 2/3: cycle low/high word, 4: violations.
  std::array<std::uint16_t, 5> registers() const;
};

inline constexpr std::uint8_t kUnitId = 1;

namespace modbus {
inline constexpr std::uint8_t kReadHoldingRegisters = 0x03;
inline constexpr std::uint8_t kIllegalFunction = 0x01;
inline constexpr std::uint8_t kIllegalDataAddress = 0x02;
inline constexpr std::uint8_t kIllegalDataValue = 0x03;
inline constexpr std::uint8_t kGatewayTargetFailed = 0x0B;
}  // namespace modbus

// Answers one MBAP-framed request. Returns an empty vector when the frame
// is too short to carry a header and cannot be answered at all.
std::vector<std::uint8_t> handle_request(std::span<const std::uint8_t> frame, const RegisterSnapshot& snapshot);

// Read-only Modbus/TCP endpoint serving the latest snapshot. One thread
// accepts; each connection gets its own thread.
class RegisterServer {
 public:
  RegisterServer() = default;
  ~RegisterServer();
  RegisterServer(const RegisterServer&) = delete;
  RegisterServer& operator=(const RegisterServer&) = delete;

  // Binds 127.0.0.1:`port` (0 picks an ephemeral port). Throws std::system_error.
  void start(std::uint16_t port);
  void stop();
  std::uint16_t port() const { return port_; }
  bool running() const { return running_.load(); }

  void publish(const RegisterSnapshot& snapshot);
  RegisterSnapshot snapshot() const;

 private:
  void accept_loop();
  void serve(int fd);

  mutable std::mutex mutex_;
  std::shared_ptr<const RegisterSnapshot> current_ = std::make_shared<RegisterSnapshot>();
  std::atomic<bool> running_{false};
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::thread acceptor_;
  std::mutex workers_mutex_;
  std::vector<std::thread> workers_;
};

}  // namespace scope::harness
