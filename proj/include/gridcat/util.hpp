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

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace gridcat {

// ---------------------------------------------------------------------------
// Clocks. All timestamps in the store are caller-supplied; these are the
// default sources. Tests inject counters instead.
// ---------------------------------------------------------------------------

using MicrosClock = std::function<std::uint64_t()>;

/// Wall clock in microseconds since the UNIX epoch.
std::uint64_t wallMicros();

/// Wraps a clock so consecutive calls are strictly increasing. Thread-safe.
MicrosClock monotonicClock(MicrosClock base);

/// Deterministic clock for tests: starts at `start`, advances `step` per call.
MicrosClock counterClock(std::uint64_t start, std::uint64_t step = 1);

// ---------------------------------------------------------------------------
// Hashing / deterministic RNG.
// ---------------------------------------------------------------------------

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

/// splitmix64 finalizer; used to spread fnv output over the token ring.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Minimal deterministic generator. Identical sequences on every platform,
/// unlike the standard <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x1234567887654321ULL) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  /// Uniform in [lo, hi] inclusive.
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  /// Uniform double in [0, 1).
  double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return real() < p; }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Little-endian binary IO, shared by the segment, snapshot, journal and
// envelope codecs.
// ---------------------------------------------------------------------------

void putU8(std::string& out, std::uint8_t v);
void putU16(std::string& out, std::uint16_t v);
void putU32(std::string& out, std::uint32_t v);
void putU64(std::string& out, std::uint64_t v);
void putBytes(std::string& out, std::string_view v);  // u32 length prefix

/// Cursor over an immutable byte buffer; throws TruncatedFile on overrun.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  std::string_view bytes();  // u32 length prefix
  std::string_view raw(std::size_t n);

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  bool atEnd() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const;
  std::string_view data_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Text helpers.
// ---------------------------------------------------------------------------

std::string toHex(std::string_view bytes);
std::string fromHex(std::string_view hex);  // throws InvalidArgument

/// Escapes '%' and control bytes as %XX; the inverse of unescapeField.
std::string escapeField(std::string_view raw);
std::string unescapeField(std::string_view escaped);

/// Length-prefixed, order-preserving framing for lists of byte strings.
std::string frameJoin(const std::vector<std::string>& parts);
std::vector<std::string> frameSplit(std::string_view framed);

/// Shell-style glob over a single name: '*', '?', '[...]'. No '/' special
/// casing and no '**'.
bool globMatch(std::string_view pattern, std::string_view name);

std::vector<std::string> splitString(std::string_view s, char sep);

}  // namespace gridcat
