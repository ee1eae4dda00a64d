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

#include "gridcat/util.hpp"

#include <atomic>
#include <chrono>
#include <memory>

#include "gridcat/errors.hpp"

namespace gridcat {

std::uint64_t wallMicros() {
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(
                                        std::chrono::system_clock::now().time_since_epoch())
                                        .count());
}

MicrosClock monotonicClock(MicrosClock base) {
  auto last = std::make_shared<std::atomic<std::uint64_t>>(0);
  return [base = std::move(base), last]() {
    std::uint64_t now = base();
    std::uint64_t prev = last->load();
    while (true) {
      std::uint64_t next = now > prev ? now : prev + 1;
      if (last->compare_exchange_weak(prev, next)) return next;
    }
  };
}

MicrosClock counterClock(std::uint64_t start, std::uint64_t step) {
  auto state = std::make_shared<std::atomic<std::uint64_t>>(start);
  return [state, step]() { return state->fetch_add(step); };
}

void putU8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void putU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void putU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void putU64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void putBytes(std::string& out, std::string_view v) {
  putU32(out, static_cast<std::uint32_t>(v.size()));
  out.append(v);
}

void ByteReader::need(std::size_t n) const {
  if (pos_ + n > data_.size()) raise(Errc::TruncatedFile, "unexpected end of data");
}

std::uint8_t ByteReader::u8() {
  need(1);
  return static_cast<std::uint8_t>(data_[pos_++]);
}

std::uint16_t ByteReader::u16() {
  need(2);
  std::uint16_t v = 0;
  for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
  pos_ += 4;
  return v;
}

std::uint64_t ByteReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
  pos_ += 8;
  return v;
}

std::string_view ByteReader::bytes() {
  std::uint32_t n = u32();
  return raw(n);
}

std::string_view ByteReader::raw(std::size_t n) {
  need(n);
  std::string_view v = data_.substr(pos_, n);
  pos_ += n;
  return v;
}

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

std::string toHex(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(kHexDigits[c >> 4]);
    out.push_back(kHexDigits[c & 0xf]);
  }
  return out;
}

std::string fromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) raise(Errc::InvalidArgument, "odd hex length");
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hexValue(hex[i]);
    int lo = hexValue(hex[i + 1]);
    if (hi < 0 || lo < 0) raise(Errc::InvalidArgument, "bad hex digit");
    out.push_back(static_cast<char>((hi << 4) | lo));
  }
  return out;
}

std::string escapeField(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    if (c == '%' || c < 0x20) {
      out.push_back('%');
      out.push_back(kHexDigits[c >> 4]);
      out.push_back(kHexDigits[c & 0xf]);
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

std::string unescapeField(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] == '%') {
      if (i + 2 >= escaped.size()) raise(Errc::InvalidArgument, "truncated escape");
      int hi = hexValue(escaped[i + 1]);
      int lo = hexValue(escaped[i + 2]);
      if (hi < 0 || lo < 0) raise(Errc::InvalidArgument, "bad escape");
      out.push_back(static_cast<char>((hi << 4) | lo));
      i += 2;
    } else {
      out.push_back(escaped[i]);
    }
  }
  return out;
}

std::string frameJoin(const std::vector<std::string>& parts) {
  std::string out;
  putU32(out, static_cast<std::uint32_t>(parts.size()));
  for (const auto& p : parts) putBytes(out, p);
  return out;
}

std::vector<std::string> frameSplit(std::string_view framed) {
  ByteReader r(framed);
  std::uint32_t n = r.u32();
  std::vector<std::string> parts;
  parts.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) parts.emplace_back(r.bytes());
  if (!r.atEnd()) raise(Errc::InvalidArgument, "trailing bytes in frame");
  return parts;
}

namespace {
// Character class match: pattern[pi] == '['. Returns end index or npos on
// malformed class.
bool classMatch(std::string_view pattern, std::size_t& pi, char c) {
  std::size_t i = pi + 1;
  bool negate = false;
  if (i < pattern.size() && (pattern[i] == '!' || pattern[i] == '^')) {
    negate = true;
    ++i;
  }
  bool matched = false;
  bool first = true;
  for (; i < pattern.size(); ++i, first = false) {
    if (pattern[i] == ']' && !first) break;
    if (i + 2 < pattern.size() && pattern[i + 1] == '-' && pattern[i + 2] != ']') {
      if (c >= pattern[i] && c <= pattern[i + 2]) matched = true;
      i += 2;
    } else if (pattern[i] == c) {
      matched = true;
    }
  }
  if (i >= pattern.size()) return false;  // unterminated class: no match
  pi = i;
  return matched != negate;
}
}  // namespace

bool globMatch(std::string_view pattern, std::string_view name) {
  std::size_t pi = 0, ni = 0;
  std::size_t starPi = std::string_view::npos, starNi = 0;
  while (ni < name.size()) {
    if (pi < pattern.size() && pattern[pi] == '*') {
      starPi = ++pi;
      starNi = ni;
    } else if (pi < pattern.size() &&
               (pattern[pi] == '?' ||
                (pattern[pi] == '[' ? classMatch(pattern, pi, name[ni]) : pattern[pi] == name[ni]))) {
      ++pi;
      ++ni;
    } else if (starPi != std::string_view::npos) {
      pi = starPi;
      ni = ++starNi;
    } else {
      return false;
    }
  }
  while (pi < pattern.size() && pattern[pi] == '*') ++pi;
  return pi == pattern.size();
}

std::vector<std::string> splitString(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = s.find(sep, start);
    if (end == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, end - start));
    start = end + 1;
  }
}

}  // namespace gridcat
