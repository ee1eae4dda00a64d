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

#include "gridcat/baseline_store.hpp"

#include <algorithm>
#include <cassert>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "gridcat/errors.hpp"
#include "gridcat/util.hpp"

namespace gridcat {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string seqKey(std::size_t idx) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016zx", idx);
  return std::string(buf, 16);
}

std::string readFile(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) raise(Errc::StorageIo, "cannot open " + p.string());
  std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return data;
}

void writeFile(const fs::path& p, std::string_view data) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) raise(Errc::StorageIo, "cannot open " + p.string());
  f.write(data.data(), static_cast<std::streamsize>(data.size()));
  f.flush();
  if (!f) raise(Errc::StorageIo, "short write to " + p.string());
}

}  // namespace

BaselineStore::BaselineStore(BaselineConfig cfg) : cfg_(cfg) {
  LfnTable root;
  root.id = nextLfnId_++;
  root.prefix = "/";
  index_.emplace("/", root.id);
  lfnTables_.push_back(std::move(root));
}

std::size_t BaselineStore::routeIdx(std::string_view fullPath) const {
  // Descending order meets the longest matching prefix first.
  for (const auto& [prefix, id] : index_) {
    if (fullPath.substr(0, prefix.size()) == prefix) return tableIdxById(id);
  }
  raise(Errc::InvalidArgument, "no route for " + std::string(fullPath));
}

std::size_t BaselineStore::tableIdxById(std::uint64_t tableId) const {
  for (std::size_t i = 0; i < lfnTables_.size(); ++i)
    if (lfnTables_[i].id == tableId) return i;
  raise(Errc::InvalidArgument, "no such table: " + std::to_string(tableId));
}

std::uint64_t BaselineStore::route(std::string_view fullPath) const {
  std::shared_lock lock(mu_);
  return lfnTables_[routeIdx(fullPath)].id;
}

void BaselineStore::erasePfnsOf(const std::string& guidText) {
  auto it = guidIndex_.find(guidText);
  if (it == guidIndex_.end()) return;
  for (const PfnRef& ref : it->second) pfnTables_[ref.tableIdx].rows[ref.rowIdx].erased = true;
  guidIndex_.erase(it);
}

void BaselineStore::appendPfnLocked(const std::string& guidText, std::string_view seName,
                                    std::string_view pfn) {
  if (pfnTables_.empty() || pfnTables_.back().appendCount >= cfg_.pfnTableSizeLimit) {
    PfnTable t;
    t.id = nextPfnId_++;
    pfnTables_.push_back(std::move(t));
  }
  PfnTable& t = pfnTables_.back();
  t.rows.push_back(PfnRow{guidText, std::string(seName), std::string(pfn), false});
  ++t.appendCount;
  guidIndex_[guidText].push_back(PfnRef{pfnTables_.size() - 1, t.rows.size() - 1});
}

void BaselineStore::upsertRow(const std::string& fullPath, const CatalogEntry& e,
                              std::string_view guidText) {
  std::size_t idx = routeIdx(fullPath);
  LfnTable& t = lfnTables_[idx];
  std::string rem = fullPath.substr(t.prefix.size());

  auto it = t.rows.find(rem);
  if (it != t.rows.end()) {
    erasePfnsOf(it->second.guidText);
    guidToPath_.erase(it->second.guidText);
  }
  CatalogEntry noPfns = e;
  noPfns.pfns.clear();
  LfnRow row{encodeEntry(noPfns), std::string(guidText)};
  t.rows[rem] = std::move(row);
  guidToPath_[std::string(guidText)] = fullPath;
  for (const PhysicalLocation& loc : e.pfns) appendPfnLocked(std::string(guidText), loc.seName, loc.pfn);
  maybeSplit(idx);
}

void BaselineStore::putCell(std::string_view pk, std::string_view ck, std::string_view value,
                            std::uint64_t) {
  CatalogEntry e = decodeEntry(value);
  std::string fullPath = std::string(pk) + std::string(ck);
  std::unique_lock lock(mu_);
  upsertRow(fullPath, e, e.guid.text());
}

std::vector<PhysicalLocation> BaselineStore::joinPfns(const std::string& guidText) const {
  std::vector<PhysicalLocation> out;
  auto it = guidIndex_.find(guidText);
  if (it == guidIndex_.end()) return out;
  for (const PfnRef& ref : it->second) {
    const PfnRow& row = pfnTables_[ref.tableIdx].rows[ref.rowIdx];
    if (!row.erased) out.push_back(PhysicalLocation{row.seName, row.pfn});
  }
  return out;
}

std::string BaselineStore::renderJoined(const LfnRow& row) const {
  CatalogEntry e = decodeEntry(row.entryNoPfns);
  e.pfns = joinPfns(row.guidText);
  return encodeEntry(e);
}

std::optional<std::string> BaselineStore::getCell(std::string_view pk, std::string_view ck) {
  std::string fullPath = std::string(pk) + std::string(ck);
  std::shared_lock lock(mu_);
  const LfnTable& t = lfnTables_[routeIdx(fullPath)];
  auto it = t.rows.find(fullPath.substr(t.prefix.size()));
  if (it == t.rows.end()) return std::nullopt;
  return renderJoined(it->second);
}

std::vector<std::pair<std::string, std::string>> BaselineStore::scanPartition(
    std::string_view pk, std::string_view ckPrefix) {
  std::shared_lock lock(mu_);
  // All direct children of a directory share its table: any table prefix
  // matching "<pk><child>" must be a prefix of pk itself, child names having
  // no '/'.
  const LfnTable& t = lfnTables_[routeIdx(pk)];
  std::string base = std::string(pk).substr(t.prefix.size());
  std::string remPrefix = base + std::string(ckPrefix);
  std::vector<std::pair<std::string, std::string>> out;
  for (auto it = t.rows.lower_bound(remPrefix); it != t.rows.end(); ++it) {
    if (it->first.compare(0, remPrefix.size(), remPrefix) != 0) break;
    std::string_view leaf = std::string_view(it->first).substr(base.size());
    if (leaf.find('/') != std::string_view::npos) continue;  // deeper row in same table
    out.emplace_back(std::string(leaf), renderJoined(it->second));
  }
  return out;
}

void BaselineStore::deleteCell(std::string_view pk, std::string_view ck, std::uint64_t) {
  std::string fullPath = std::string(pk) + std::string(ck);
  std::unique_lock lock(mu_);
  LfnTable& t = lfnTables_[routeIdx(fullPath)];
  auto it = t.rows.find(fullPath.substr(t.prefix.size()));
  if (it == t.rows.end()) return;
  erasePfnsOf(it->second.guidText);
  guidToPath_.erase(it->second.guidText);
  t.rows.erase(it);
}

std::vector<RawCell> BaselineStore::dumpAll() {
  std::shared_lock lock(mu_);
  std::map<std::pair<std::string, std::string>, std::string> sorted;
  for (const auto& t : lfnTables_) {
    for (const auto& [rem, row] : t.rows) {
      std::string full = t.prefix + rem;
      LogicalPath lp = normalizePath(full);
      sorted[{lp.parent, lp.child}] = renderJoined(row);
    }
  }
  std::vector<RawCell> out;
  out.reserve(sorted.size());
  for (auto& [key, value] : sorted) out.push_back(RawCell{key.first, key.second, std::move(value)});
  return out;
}

void BaselineStore::maybeSplit(std::size_t tableIdx) {
  while (lfnTables_[tableIdx].rows.size() > cfg_.splitThreshold) {
    std::size_t newIdx = lfnTables_.size();
    try {
      splitLocked(tableIdx);
    } catch (const GcError& e) {
      if (e.code() == Errc::NothingToSplit) return;
      throw;
    }
    maybeSplit(newIdx);
  }
}

std::string BaselineStore::splitLocked(std::size_t tableIdx) {
  LfnTable& t = lfnTables_[tableIdx];
  // Count rows per immediate child directory of the table prefix.
  std::map<std::string, std::size_t> counts;
  for (const auto& [rem, row] : t.rows) {
    std::size_t slash = rem.find('/');
    if (slash == std::string::npos) continue;
    ++counts[rem.substr(0, slash)];
  }
  std::string bestSeg;
  std::size_t bestCount = 0;
  for (const auto& [seg, count] : counts) {
    if (count > bestCount) {
      bestSeg = seg;
      bestCount = count;
    }
  }
  if (bestCount < 2) raise(Errc::NothingToSplit, "no child directory with >= 2 rows");

  std::string newPrefix = t.prefix + bestSeg + "/";
  assert(!index_.count(newPrefix));
  LfnTable fresh;
  fresh.id = nextLfnId_++;
  fresh.prefix = newPrefix;

  std::string remBase = bestSeg + "/";
  auto it = t.rows.lower_bound(remBase);
  while (it != t.rows.end() && it->first.compare(0, remBase.size(), remBase) == 0) {
    fresh.rows.emplace(it->first.substr(remBase.size()), std::move(it->second));
    it = t.rows.erase(it);
  }
  index_.emplace(newPrefix, fresh.id);
  lfnTables_.push_back(std::move(fresh));
  return newPrefix;
}

std::string BaselineStore::splitTable(std::uint64_t tableId) {
  std::unique_lock lock(mu_);
  return splitLocked(tableIdxById(tableId));
}

void BaselineStore::appendPfn(const Guid& guid, std::string_view seName, std::string_view pfn) {
  std::unique_lock lock(mu_);
  std::string guidText = guid.text();
  if (!guidToPath_.count(guidText)) raise(Errc::UnknownGuid, guidText);
  appendPfnLocked(guidText, seName, pfn);
}

CatalogEntry BaselineStore::lookupByPath(std::string_view fullPath) {
  std::shared_lock lock(mu_);
  const LfnTable& t = lfnTables_[routeIdx(fullPath)];
  auto it = t.rows.find(std::string(fullPath).substr(t.prefix.size()));
  if (it == t.rows.end()) raise(Errc::NotFound, std::string(fullPath));
  return decodeEntry(renderJoined(it->second));
}

std::vector<BaselineStore::TableInfo> BaselineStore::lfnTables() const {
  std::shared_lock lock(mu_);
  std::vector<TableInfo> out;
  for (const auto& t : lfnTables_) out.push_back(TableInfo{t.id, t.prefix, t.rows.size()});
  return out;
}

std::size_t BaselineStore::pfnTableCount() const {
  std::shared_lock lock(mu_);
  return pfnTables_.size();
}

std::size_t BaselineStore::lfnRowCount() const {
  std::shared_lock lock(mu_);
  std::size_t n = 0;
  for (const auto& t : lfnTables_) n += t.rows.size();
  return n;
}

void BaselineStore::saveTo(const std::string& dir) const {
  std::shared_lock lock(mu_);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) raise(Errc::StorageIo, "cannot create " + dir);

  json manifest;
  manifest["formatVersion"] = 1;
  manifest["nextLfnId"] = nextLfnId_;
  manifest["nextPfnId"] = nextPfnId_;
  manifest["splitThreshold"] = cfg_.splitThreshold;
  manifest["pfnTableSizeLimit"] = cfg_.pfnTableSizeLimit;
  json idx = json::array();
  for (const auto& [prefix, id] : index_) idx.push_back({{"prefix", prefix}, {"table", id}});
  manifest["index"] = idx;

  json lfns = json::array();
  for (const auto& t : lfnTables_) {
    lfns.push_back({{"id", t.id}, {"prefix", t.prefix}});
    std::vector<Cell> cells;
    cells.reserve(t.rows.size());
    for (const auto& [rem, row] : t.rows)
      cells.push_back(Cell{t.prefix, rem, row.entryNoPfns, false, 0, 0});
    writeFile(fs::path(dir) / ("lfn-" + std::to_string(t.id) + ".gcsg"),
              Segment::fromSorted(std::move(cells))->encode());
  }
  manifest["lfnTables"] = lfns;

  json pfns = json::array();
  for (const auto& t : pfnTables_) {
    pfns.push_back({{"id", t.id}, {"appendCount", t.appendCount}});
    std::vector<Cell> cells;
    std::size_t seq = 0;
    for (const auto& row : t.rows) {
      if (row.erased) continue;
      cells.push_back(Cell{"", seqKey(seq++),
                           frameJoin({row.guidText, row.seName, row.pfn}), false, 0, 0});
    }
    writeFile(fs::path(dir) / ("pfn-" + std::to_string(t.id) + ".gcsg"),
              Segment::fromSorted(std::move(cells))->encode());
  }
  manifest["pfnTables"] = pfns;

  writeFile(fs::path(dir) / "manifest.json", manifest.dump(2));
}

std::unique_ptr<BaselineStore> BaselineStore::loadFrom(const std::string& dir) {
  json manifest = json::parse(readFile(fs::path(dir) / "manifest.json"));
  BaselineConfig cfg;
  cfg.splitThreshold = manifest["splitThreshold"].get<std::size_t>();
  cfg.pfnTableSizeLimit = manifest["pfnTableSizeLimit"].get<std::size_t>();
  auto store = std::make_unique<BaselineStore>(cfg);
  store->lfnTables_.clear();
  store->index_.clear();
  store->nextLfnId_ = manifest["nextLfnId"].get<std::uint64_t>();
  store->nextPfnId_ = manifest["nextPfnId"].get<std::uint64_t>();

  for (const auto& item : manifest["index"])
    store->index_.emplace(item["prefix"].get<std::string>(), item["table"].get<std::uint64_t>());

  for (const auto& item : manifest["lfnTables"]) {
    LfnTable t;
    t.id = item["id"].get<std::uint64_t>();
    t.prefix = item["prefix"].get<std::string>();
    auto seg = Segment::decode(readFile(fs::path(dir) / ("lfn-" + std::to_string(t.id) + ".gcsg")));
    for (std::size_t i = 0; i < seg->recordCount(); ++i) {
      Cell c = seg->cellAt(i);
      std::string guidText = decodeEntry(c.value).guid.text();
      store->guidToPath_[guidText] = t.prefix + c.ck;
      t.rows.emplace(c.ck, LfnRow{std::move(c.value), std::move(guidText)});
    }
    store->lfnTables_.push_back(std::move(t));
  }

  for (const auto& item : manifest["pfnTables"]) {
    PfnTable t;
    t.id = item["id"].get<std::uint64_t>();
    t.appendCount = item["appendCount"].get<std::size_t>();
    auto seg = Segment::decode(readFile(fs::path(dir) / ("pfn-" + std::to_string(t.id) + ".gcsg")));
    for (std::size_t i = 0; i < seg->recordCount(); ++i) {
      Cell c = seg->cellAt(i);
      auto parts = frameSplit(c.value);
      store->guidIndex_[parts[0]].push_back(PfnRef{store->pfnTables_.size(), t.rows.size()});
      t.rows.push_back(PfnRow{std::move(parts[0]), std::move(parts[1]), std::move(parts[2]), false});
    }
    store->pfnTables_.push_back(std::move(t));
  }
  return store;
}

}  // namespace gridcat
