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
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gridcat {

/// One versioned value under a (partition key, clustering key) pair.
/// The merge winner between two cells with equal keys is the greater
/// (writeTimestamp, writerId) pair.
struct Cell {
  std::string pk;
  std::string ck;
  std::string value;
  bool tombstone = false;
  std::uint64_t ts = 0;  // microseconds
  std::uint32_t writerId = 0;

  bool newerThan(const Cell& other) const {
    return ts != other.ts ? ts > other.ts : writerId > other.writerId;
  }
};

using CellKey = std::pair<std::string, std::string>;

inline CellKey cellKey(const Cell& c) { return {c.pk, c.ck}; }

/// Immutable sorted run of cells, held in its serialized body form plus a
/// record offset index; also the on-disk file content (format "GCSG").
class Segment {
 public:
  /// Builds from cells already sorted by (pk, ck) with unique keys.
  static std::shared_ptr<const Segment> fromSorted(std::vector<Cell> cells);

  /// Full file image: header, body, footer (min/max key, CRC32 of body).
  std::string encode() const;
  /// Validates magic, version and body CRC; throws StorageIo / TruncatedFile.
  static std::shared_ptr<const Segment> decode(std::string_view fileBytes);

  std::size_t recordCount() const { return offsets_.size(); }
  std::size_t bodyBytes() const { return body_.size(); }
  const CellKey& minKey() const { return minKey_; }
  const CellKey& maxKey() const { return maxKey_; }

  Cell cellAt(std::size_t idx) const;

  /// Cell for an exact key, if present.
  bool find(std::string_view pk, std::string_view ck, Cell& out) const;

  /// All cells with the given pk whose ck starts with prefix, in ck order.
  void scan(std::string_view pk, std::string_view ckPrefix, std::vector<Cell>& out) const;

  /// Index of the first record with key >= (pk, ck).
  std::size_t lowerBound(std::string_view pk, std::string_view ck) const;

 private:
  Segment() = default;

  std::pair<std::string_view, std::string_view> keyAt(std::size_t idx) const;

  std::string body_;                   // concatenated records, sorted
  std::vector<std::uint64_t> offsets_; // record start offsets into body_
  CellKey minKey_;
  CellKey maxKey_;
};

using SegmentPtr = std::shared_ptr<const Segment>;

/// Serializes one record into `out` (shared with the journal-style formats).
void appendCellRecord(std::string& out, const Cell& c);
/// Reads one record starting at `offset`; returns offset past it.
std::size_t readCellRecord(std::string_view body, std::size_t offset, Cell& out);

}  // namespace gridcat
