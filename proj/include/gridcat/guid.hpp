// Copyright 2026 The gridcat Authors
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
#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>

#include "gridcat/util.hpp"

namespace gridcat {

/// 128-bit identifier linking a logical name to its physical replicas.
/// Layout: 64-bit microsecond timestamp (big-endian), 16-bit per-process
/// sequence, 48-bit node tag. Big-endian packing makes byte order
/// non-decreasing in creation time.
struct Guid {
  std::array<std::uint8_t, 16> bytes{};

  /// Canonical 8-4-4-4-12 lowercase hex form.
  std::string text() const;
  std::string_view rawView() const {
    return std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  }

  std::uint64_t timestampMicros() const;
  std::uint16_t sequence() const;

  static Guid pack(std::uint64_t micros, std::uint16_t seq, std::uint64_t nodeTag48);
  /// Parses the canonical text form; throws InvalidArgument.
  static Guid parse(std::string_view text);

  friend bool operator==(const Guid&, const Guid&) = default;
  friend auto operator<=>(const Guid& a, const Guid& b) = default;
};

/// Issues process-unique, time-ordered GUIDs. Thread-safe.
class GuidGenerator {
 public:
  GuidGenerator(MicrosClock clock, std::uint64_t rngSeed);

  Guid next();

 private:
  MicrosClock clock_;
  std::uint64_t nodeTag_;  // 48-bit
  std::mutex mu_;
  std::uint64_t lastMicros_ = 0;
  std::uint16_t seq_ = 0;
};

/// Storage-internal path for a GUID: "//D1/D2/<guid>" with D1 = h mod 100 and
/// D2 = h mod 100000, h the FNV-1a 64 hash of the GUID bytes.
std::string guidToInternalPath(const Guid& g);

}  // namespace gridcat
