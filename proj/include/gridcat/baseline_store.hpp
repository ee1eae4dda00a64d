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
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "gridcat/backend.hpp"
#include "gridcat/entry.hpp"

namespace gridcat {

struct BaselineConfig {
  std::size_t splitThreshold = 100000;  // LFN rows per table before splitting
  std::size_t pfnTableSizeLimit = 1000000;  // appends per PFN table before rollover
};

/// Single-node backend reproducing the relational layout: an index table
/// routing paths to split LFN tables, append-only timestamp-ordered PFN
/// tables with size rollover, and GUID joins between the two. Serves as the
/// correctness oracle and comparative-benchmark baseline for the ring store.
class BaselineStore : public CatalogueBackend {
 public:
  explicit BaselineStore(BaselineConfig cfg = {});

  // CatalogueBackend
  void putCell(std::string_view pk, std::string_view ck, std::string_view value,
               std::uint64_t tsMicros) override;
  std::optional<std::string> getCell(std::string_view pk, std::string_view ck) override;
  std::vector<std::pair<std::string, std::string>> scanPartition(
      std::string_view pk, std::string_view ckPrefix) override;
  void deleteCell(std::string_view pk, std::string_view ck, std::uint64_t tsMicros) override;
  std::vector<RawCell> dumpAll() override;
  std::string backendName() const override { return "baseline"; }

  /// Table id owning the given full path (longest matching index prefix).
  std::uint64_t route(std::string_view fullPath) const;

  /// Splits the table at the child directory holding the most rows. Throws
  /// NothingToSplit when no child directory holds at least two rows.
  /// Returns the new table's prefix.
  std::string splitTable(std::uint64_t tableId);

  /// Appends one replica row; throws UnknownGuid unless an LFN row with this
  /// guid exists. Rolls over to a fresh PFN table at the size limit.
  void appendPfn(const Guid& guid, std::string_view seName, std::string_view pfn);

  /// Routes, fetches and joins; throws NotFound.
  CatalogEntry lookupByPath(std::string_view fullPath);

  struct TableInfo {
    std::uint64_t id;
    std::string prefix;
    std::size_t rows;
  };
  std::vector<TableInfo> lfnTables() const;
  std::size_t pfnTableCount() const;
  std::size_t lfnRowCount() const;

  void saveTo(const std::string& dir) const;
  static std::unique_ptr<BaselineStore> loadFrom(const std::string& dir);

 private:
  struct LfnRow {
    std::string entryNoPfns;  // canonical encoding with pfns stripped
    std::string guidText;
  };
  struct LfnTable {
    std::uint64_t id = 0;
    std::string prefix;                    // absolute directory prefix, ends '/'
    std::map<std::string, LfnRow> rows;    // keyed by path remainder
  };
  struct PfnRow {
    std::string guidText;
    std::string seName;
    std::string pfn;
    bool erased = false;
  };
  struct PfnTable {
    std::uint64_t id = 0;
    std::vector<PfnRow> rows;
    std::size_t appendCount = 0;  // includes erased rows; drives rollover
  };
  struct PfnRef {
    std::size_t tableIdx;
    std::size_t rowIdx;
  };

  std::size_t routeIdx(std::string_view fullPath) const;
  std::size_t tableIdxById(std::uint64_t tableId) const;
  void upsertRow(const std::string& fullPath, const CatalogEntry& e, std::string_view guidText);
  void erasePfnsOf(const std::string& guidText);
  void appendPfnLocked(const std::string& guidText, std::string_view seName,
                       std::string_view pfn);
  std::vector<PhysicalLocation> joinPfns(const std::string& guidText) const;
  std::string renderJoined(const LfnRow& row) const;
  void maybeSplit(std::size_t tableIdx);
  std::string splitLocked(std::size_t tableIdx);

  BaselineConfig cfg_;
  mutable std::shared_mutex mu_;
  std::vector<LfnTable> lfnTables_;
  std::vector<PfnTable> pfnTables_;
  std::map<std::string, std::uint64_t, std::greater<>> index_;  // prefix -> table id
  std::map<std::string, std::vector<PfnRef>> guidIndex_;
  std::map<std::string, std::string> guidToPath_;  // guid text -> full path
  std::uint64_t nextLfnId_ = 0;
  std::uint64_t nextPfnId_ = 0;
};

}  // namespace gridcat
