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

#include "gridcat/guid.hpp"

#include "gridcat/errors.hpp"

namespace gridcat {

std::string Guid::text() const {
  std::string hex = toHex(rawView());
  std::string out;
  out.reserve(36);
  out.append(hex, 0, 8);
  out.push_back('-');
  out.append(hex, 8, 4);
  out.push_back('-');
  out.append(hex, 12, 4);
  out.push_back('-');
  out.append(hex, 16, 4);
  out.push_back('-');
  out.append(hex, 20, 12);
  return out;
}

std::uint64_t Guid::timestampMicros() const {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | bytes[static_cast<std::size_t>(i)];
  return v;
}

std::uint16_t Guid::sequence() const {
  return static_cast<std::uint16_t>((bytes[8] << 8) | bytes[9]);
}

Guid Guid::pack(std::uint64_t micros, std::uint16_t seq, std::uint64_t nodeTag48) {
  Guid g;
  for (int i = 0; i < 8; ++i) g.bytes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(micros >> (8 * (7 - i)));
  g.bytes[8] = static_cast<std::uint8_t>(seq >> 8);
  g.bytes[9] = static_cast<std::uint8_t>(seq & 0xff);
  for (int i = 0; i < 6; ++i)
    g.bytes[static_cast<std::size_t>(10 + i)] = static_cast<std::uint8_t>(nodeTag48 >> (8 * (5 - i)));
  return g;
}

Guid Guid::parse(std::string_view text) {
  if (text.size() != 36 || text[8] != '-' || text[13] != '-' || text[18] != '-' || text[23] != '-')
    raise(Errc::InvalidArgument, "bad guid: " + std::string(text));
  std::string hex;
  hex.reserve(32);
  for (char c : text)
    if (c != '-') hex.push_back(c);
  std::string raw = fromHex(hex);
  Guid g;
  for (std::size_t i = 0; i < 16; ++i) g.bytes[i] = static_cast<std::uint8_t>(raw[i]);
  return g;
}

GuidGenerator::GuidGenerator(MicrosClock clock, std::uint64_t rngSeed) : clock_(std::move(clock)) {
  Rng rng(rngSeed);
  nodeTag_ = rng.next() & 0xffffffffffffULL;
}

Guid GuidGenerator::next() {
  std::scoped_lock lock(mu_);
  std::uint64_t now = clock_();
  if (now < lastMicros_) now = lastMicros_;
  if (now == lastMicros_) {
    ++seq_;
    if (seq_ == 0) {  // sequence wrapped within one microsecond
      now = ++lastMicros_;
    }
  } else {
    lastMicros_ = now;
    seq_ = 0;
  }
  return Guid::pack(lastMicros_, seq_, nodeTag_);
}

std::string guidToInternalPath(const Guid& g) {
  std::uint64_t h = fnv1a64(g.rawView());
  return "//" + std::to_string(h % 100) + "/" + std::to_string(h % 100000) + "/" + g.text();
}

}  // namespace gridcat
