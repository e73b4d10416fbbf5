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

#include "scope/plc/memory.h"

#include <algorithm>
#include <cstring>

namespace scope::plc {

const char* to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::kOutOfBounds:
      return "out-of-bounds";
    case FaultKind::kStackExhausted:
      return "stack-exhausted";
    case FaultKind::kBadReturn:
      return "bad-return";
    case FaultKind::kNoFrame:
      return "no-frame";
    case FaultKind::kOutOfMemory:
      return "out-of-memory";
    case FaultKind::kBadChannel:
      return "bad-channel";
    case FaultKind::kBadOperand:
      return "bad-operand";
    case FaultKind::kFuelExhausted:
      return "fuel-exhausted";
  }
  return "unknown";
}

Fault::Fault(FaultKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

FuelExhausted::FuelExhausted(std::uint64_t budget)
    : Fault(FaultKind::kFuelExhausted,
            "logic phase did not halt within " + std::to_string(budget) + " instructions") {}

void MemoryLayout::check() const {
  const bool ordered = globals_end <= stack_end && stack_end <= size;
  const bool aligned = globals_end % kGranule == 0 && stack_end % kGranule == 0 && size % kGranule == 0;
  if (!ordered || !aligned) {
    throw std::invalid_argument("memory layout regions must be ordered and granule aligned");
  }
}

DataMemory::DataMemory(MemoryLayout layout) : layout_(layout), bytes_(layout.size, 0) {
  layout_.check();
  clear();
}

void DataMemory::clear() {
  std::fill(bytes_.begin(), bytes_.end(), 0);
  frames_.clear();
  cursor_ = layout_.growth == StackGrowth::kUp ? layout_.stack_begin() : layout_.stack_end;
  touched_begin_ = cursor_;
  touched_end_ = cursor_;
}

void DataMemory::check_range(std::int64_t addr, std::int64_t len) const {
  if (addr < 0 || len < 0 || addr + len > static_cast<std::int64_t>(bytes_.size())) {
    throw Fault(FaultKind::kOutOfBounds, "access of " + std::to_string(len) + " byte(s) at " +
                                             std::to_string(addr));
  }
}

std::uint64_t DataMemory::read(std::int64_t addr, std::uint32_t width) const {
  check_range(addr, width);
  std::uint64_t value = 0;
  for (std::uint32_t i = 0; i < width; ++i) {
    value |= static_cast<std::uint64_t>(bytes_[addr + i]) << (8 * i);
  }
  return value;
}

void DataMemory::write(std::int64_t addr, std::uint32_t width, std::uint64_t value) {
  check_range(addr, width);
  for (std::uint32_t i = 0; i < width; ++i) {
    bytes_[addr + i] = static_cast<std::uint8_t>(value >> (8 * i));
  }
}

void DataMemory::copy(std::int64_t dst, std::int64_t src, std::int64_t len) {
  check_range(src, len);
  check_range(dst, len);
  if (len > 0) std::memmove(bytes_.data() + dst, bytes_.data() + src, static_cast<std::size_t>(len));
}

Frame DataMemory::push_frame(std::uint32_t locals) {
  const auto footprint = frame_footprint(locals);
  Frame frame;
  if (layout_.growth == StackGrowth::kUp) {
    if (cursor_ + footprint > layout_.stack_end) {
      throw Fault(FaultKind::kStackExhausted, "frame of " + std::to_string(locals) + " bytes");
    }
    frame.start = cursor_;
    cursor_ += footprint;
  } else {
    if (cursor_ < layout_.stack_begin() + footprint) {
      throw Fault(FaultKind::kStackExhausted, "frame of " + std::to_string(locals) + " bytes");
    }
    cursor_ -= footprint;
    frame.start = cursor_;
  }
  frame.base = frame.start + kRedzone;
  frame.locals = locals;
  touched_begin_ = std::min(touched_begin_, frame.start);
  touched_end_ = std::max(touched_end_, frame.end());
  frames_.push_back(frame);
  return frame;
}

Frame DataMemory::pop_frame() {
  if (frames_.empty()) throw Fault(FaultKind::kNoFrame, "pop with no live frame");
  const Frame frame = frames_.back();
  frames_.pop_back();
  cursor_ = layout_.growth == StackGrowth::kUp ? frame.start : frame.end();
  return frame;
}

}  // namespace scope::plc
