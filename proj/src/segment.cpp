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

#include "gridcat/segment.hpp"

#include <algorithm>

#include "gridcat/digest.hpp"
#include "gridcat/errors.hpp"
#include "gridcat/util.hpp"

namespace gridcat {

namespace {
constexpr std::string_view kMagic = "GCSG";
constexpr std::uint16_t kFormatVersion = 1;
constexpr std::uint8_t kFlagTombstone = 0x01;
}  // namespace

void appendCellRecord(std::string& out, const Cell& c) {
  putBytes(out, c.pk);
  putBytes(out, c.ck);
  putU8(out, c.tombstone ? kFlagTombstone : 0);
  putU64(out, c.ts);
  putU32(out, c.writerId);
  putBytes(out, c.value);
}

std::size_t readCellRecord(std::string_view body, std::size_t offset, Cell& out) {
  ByteReader r(body.substr(offset));
  out.pk = std::string(r.bytes());
  out.ck = std::string(r.bytes());
  out.tombstone = (r.u8() & kFlagTombstone) != 0;
  out.ts = r.u64();
  out.writerId = r.u32();
  out.value = std::string(r.bytes());
  return offset + r.pos();
}

std::shared_ptr<const Segment> Segment::fromSorted(std::vector<Cell> cells) {
  auto seg = std::shared_ptr<Segment>(new Segment());
  seg->offsets_.reserve(cells.size());
  for (const Cell& c : cells) {
    seg->offsets_.push_back(seg->body_.size());
    appendCellRecord(seg->body_, c);
  }
  if (!cells.empty()) {
    seg->minKey_ = cellKey(cells.front());
    seg->maxKey_ = cellKey(cells.back());
  }
  return seg;
}

std::pair<std::string_view, std::string_view> Segment::keyAt(std::size_t idx) const {
  ByteReader r(std::string_view(body_).substr(offsets_[idx]));
  std::string_view pk = r.bytes();
  std::string_view ck = r.bytes();
  return {pk, ck};
}

Cell Segment::cellAt(std::size_t idx) const {
  Cell c;
  readCellRecord(body_, offsets_[idx], c);
  return c;
}

std::size_t Segment::lowerBound(std::string_view pk, std::string_view ck) const {
  std::size_t lo = 0, hi = offsets_.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    auto [mpk, mck] = keyAt(mid);
    if (mpk < pk || (mpk == pk && mck < ck))
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

bool Segment::find(std::string_view pk, std::string_view ck, Cell& out) const {
  std::size_t idx = lowerBound(pk, ck);
  if (idx >= offsets_.size()) return false;
  auto [mpk, mck] = keyAt(idx);
  if (mpk != pk || mck != ck) return false;
  out = cellAt(idx);
  return true;
}

void Segment::scan(std::string_view pk, std::string_view ckPrefix, std::vector<Cell>& out) const {
  for (std::size_t idx = lowerBound(pk, ckPrefix); idx < offsets_.size(); ++idx) {
    auto [mpk, mck] = keyAt(idx);
    if (mpk != pk || mck.substr(0, ckPrefix.size()) != ckPrefix) break;
    out.push_back(cellAt(idx));
  }
}

std::string Segment::encode() const {
  std::string out;
  out.append(kMagic);
  putU16(out, kFormatVersion);
  putU32(out, static_cast<std::uint32_t>(offsets_.size()));
  out.append(body_);
  putBytes(out, minKey_.first);
  putBytes(out, minKey_.second);
  putBytes(out, maxKey_.first);
  putBytes(out, maxKey_.second);
  putU32(out, crc32Of(body_));
  return out;
}

std::shared_ptr<const Segment> Segment::decode(std::string_view fileBytes) {
  ByteReader r(fileBytes);
  if (r.raw(4) != kMagic) raise(Errc::StorageIo, "bad segment magic");
  if (r.u16() != kFormatVersion) raise(Errc::StorageIo, "unsupported segment version");
  std::uint32_t count = r.u32();

  auto seg = std::shared_ptr<Segment>(new Segment());
  std::size_t bodyStart = r.pos();
  Cell scratch;
  seg->offsets_.reserve(count);
  std::size_t offset = 0;
  std::string_view rest = fileBytes.substr(bodyStart);
  for (std::uint32_t i = 0; i < count; ++i) {
    seg->offsets_.push_back(offset);
    offset = readCellRecord(rest, offset, scratch);
  }
  seg->body_ = std::string(rest.substr(0, offset));

  ByteReader f(rest.substr(offset));
  seg->minKey_.first = std::string(f.bytes());
  seg->minKey_.second = std::string(f.bytes());
  seg->maxKey_.first = std::string(f.bytes());
  seg->maxKey_.second = std::string(f.bytes());
  std::uint32_t crc = f.u32();
  if (!f.atEnd()) raise(Errc::StorageIo, "trailing bytes after segment footer");
  if (crc != crc32Of(seg->body_)) raise(Errc::StorageIo, "segment body CRC mismatch");
  return seg;
}

}  // namespace gridcat
