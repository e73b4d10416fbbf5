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

#include "scope/harness/register_server.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <system_error>

namespace scope::harness {

std::array<std::uint16_t, 5> RegisterSnapshot::registers() const {
  const auto clamp16 = [](double v) {
    return static_cast<std::uint16_t>(std::clamp<long long>(std::llround(v), 0, 0xFFFF));
  };
  return {clamp16(level * 100.0), clamp16(last_scan_us), static_cast<std::uint16_t>(cycle & 0xFFFF),
          static_cast<std::uint16_t>((cycle >> 16) & 0xFFFF),
          static_cast<std::uint16_t>(std::min<std::uint64_t>(violations, 0xFFFF))};
}

namespace {

std::uint16_t be16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

std::vector<std::uint8_t> frame(std::uint16_t transaction, std::uint8_t unit,
                                const std::vector<std::uint8_t>& pdu) {
  std::vector<std::uint8_t> out;
  put16(out, transaction);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(pdu.size() + 1));
  out.push_back(unit);
  out.insert(out.end(), pdu.begin(), pdu.end());
  return out;
}

constexpr std::size_t kHeader = 7;

}  // namespace

std::vector<std::uint8_t> handle_request(std::span<const std::uint8_t> req, const RegisterSnapshot& snapshot) {
  if (req.size() < kHeader + 1) return {};
  const auto transaction = be16(req, 0);
  const auto protocol = be16(req, 2);
  const auto length = be16(req, 4);
  const auto unit = req[6];
  const auto function = req[7];
  const auto exception = [&](std::uint8_t code) {
    return frame(transaction, unit, {static_cast<std::uint8_t>(function | 0x80), code});
  };
  if (protocol != 0 || length != req.size() - 6) return exception(modbus::kIllegalDataValue);
  if (unit != kUnitId) return exception(modbus::kGatewayTargetFailed);
  if (function != modbus::kReadHoldingRegisters) return exception(modbus::kIllegalFunction);
  if (req.size() != kHeader + 5) return exception(modbus::kIllegalDataValue);
  const auto address = be16(req, 8);
  const auto quantity = be16(req, 10);
  const auto regs = snapshot.registers();
  if (quantity < 1 || quantity > 125) return exception(modbus::kIllegalDataValue);
  if (address + quantity > regs.size()) return exception(modbus::kIllegalDataAddress);
  std::vector<std::uint8_t> pdu{function, static_cast<std::uint8_t>(2 * quantity)};
  for (std::uint32_t i = 0; i < quantity; ++i) put16(pdu, regs[address + i]);
  return frame(transaction, unit, pdu);
}

RegisterServer::~RegisterServer() { stop(); }

void RegisterServer::publish(const RegisterSnapshot& snapshot) {
  auto next = std::make_shared<const RegisterSnapshot>(snapshot);
  std::lock_guard lock(mutex_);
  current_ = std::move(next);
}

RegisterSnapshot RegisterServer::snapshot() const {
  std::shared_ptr<const RegisterSnapshot> held;
  {
    std::lock_guard lock(mutex_);
    held = current_;
  }
  return *held;
}

void RegisterServer::start(std::uint16_t port) {
  if (running_) return;
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::system_error(errno, std::generic_category(), "socket");
  const int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listen_fd_, 16) < 0) {
    const int err = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw std::system_error(err, std::generic_category(), "bind/listen");
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void RegisterServer::stop() {
  if (!running_.exchange(false)) return;
  if (acceptor_.joinable()) acceptor_.join();
  ::close(listen_fd_);
  listen_fd_ = -1;
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(workers_mutex_);
    workers.swap(workers_);
  }
  for (auto& w : workers) w.join();
}

void RegisterServer::accept_loop() {
  while (running_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    if (::poll(&pfd, 1, 100) <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    std::lock_guard lock(workers_mutex_);
    workers_.emplace_back([this, fd] { serve(fd); });
  }
}

void RegisterServer::serve(int fd) {
  std::vector<std::uint8_t> buffer;
  std::uint8_t chunk[512];
  while (running_) {
    pollfd pfd{fd, POLLIN, 0};
    if (::poll(&pfd, 1, 100) <= 0) continue;
    const auto n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n <= 0) break;
    buffer.insert(buffer.end(), chunk, chunk + n);
    // Split the stream on MBAP lengths; answer each complete frame.
    bool failed = false;
    while (buffer.size() >= 6) {
      const std::size_t total = 6 + ((buffer[4] << 8) | buffer[5]);
      if (total < kHeader + 1 || total > 260) {
        failed = true;
        break;
      }
      if (buffer.size() < total) break;
      const auto reply = handle_request({buffer.data(), total}, snapshot());
      buffer.erase(buffer.begin(), buffer.begin() + static_cast<std::ptrdiff_t>(total));
      if (reply.empty() || ::send(fd, reply.data(), reply.size(), MSG_NOSIGNAL) < 0) {
        failed = true;
        break;
      }
    }
    if (failed) break;
  }
  ::close(fd);
}

}  // namespace scope::harness
