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

#include "gridcat/catalogue.hpp"

#include <algorithm>

#include "gridcat/errors.hpp"

namespace gridcat {

std::vector<CatalogEntry> dumpBackendEntries(CatalogueBackend& backend) {
  std::vector<CatalogEntry> out;
  for (const RawCell& cell : backend.dumpAll()) out.push_back(decodeEntry(cell.value));
  return out;
}

Catalogue::Catalogue(CatalogueBackend& backend, CatalogueOptions opts)
    : backend_(backend), opts_(opts) {
  clock_ = opts_.clock ? opts_.clock : monotonicClock(wallMicros);
  std::uint64_t seed = opts_.guidSeed ? opts_.guidSeed : mix64(clock_() ^ 0x67636174ull);
  guidGen_ = std::make_unique<GuidGenerator>(clock_, seed);
}

void Catalogue::ensureRoot(const std::string& owner, const std::string& gowner,
                           const std::string& perm) {
  if (backend_.getCell("/", "")) return;
  CatalogEntry root;
  root.path = LogicalPath{"/", ""};
  root.type = EntryType::Directory;
  root.owner = owner;
  root.gowner = gowner;
  root.perm = perm;
  root.ctime = clock_() / 1000000;
  root.guid = guidGen_->next();
  backend_.putCell("/", "", encodeEntry(root), clock_());
}

std::optional<CatalogEntry> Catalogue::tryStat(const LogicalPath& lp) {
  auto value = backend_.getCell(lp.parent, lp.child);
  if (!value) return std::nullopt;
  return decodeEntry(*value);
}

CatalogEntry Catalogue::statPath(const LogicalPath& lp) {
  auto e = tryStat(lp);
  if (!e) raise(Errc::NotFound, lp.str());
  return std::move(*e);
}

CatalogEntry Catalogue::stat(const std::string& lfn) { return statPath(normalizePath(lfn)); }

bool Catalogue::exists(const std::string& lfn) {
  LogicalPath lp = normalizePath(lfn);
  return backend_.getCell(lp.parent, lp.child).has_value();
}

CatalogEntry Catalogue::whereis(const std::string& lfn, const std::string& clientSite,
                                bool followLinks, std::vector<std::string>* touched) {
  LogicalPath lp = normalizePath(lfn);
  if (touched) touched->push_back(lp.str());
  CatalogEntry e = statPath(lp);
  if (followLinks) {
    int hops = 0;
    while (e.isLink()) {
      if (++hops > opts_.maxLinkHops) raise(Errc::LinkCycle, lfn);
      lp = normalizePath(*e.link);
      if (touched) touched->push_back(lp.str());
      e = statPath(lp);
    }
  }
  if (opts_.placement && !e.pfns.empty())
    e.pfns = opts_.placement->sortLocations(std::move(e.pfns), clientSite);
  return e;
}

std::vector<CatalogEntry> Catalogue::listDirectory(const std::string& path) {
  LogicalPath lp = normalizePath(path);
  CatalogEntry dir = statPath(lp);
  if (!dir.isDirectory()) raise(Errc::NotADirectory, lp.str());
  std::vector<CatalogEntry> out;
  for (auto& [child, value] : backend_.scanPartition(lp.dirKey(), "")) {
    if (child.empty()) continue;  // root's own row lives in its own partition
    out.push_back(decodeEntry(value));
  }
  return out;
}

std::vector<std::string> Catalogue::find(const FindQuery& q) {
  LogicalPath base = normalizePath(q.basePath);
  CatalogEntry baseEntry = statPath(base);
  if (!baseEntry.isDirectory()) raise(Errc::NotADirectory, base.str());

  std::vector<std::string> out;
  // Depth-first, children in lexicographic order, links never followed.
  auto walk = [&](auto&& self, const std::string& dirKey, int depth) -> void {
    for (auto& [child, value] : backend_.scanPartition(dirKey, "")) {
      if (child.empty()) continue;
      CatalogEntry e = decodeEntry(value);
      std::string full = dirKey + child;
      bool typeOk = !q.typeFilter || e.type == *q.typeFilter;
      if (typeOk && globMatch(q.namePattern, child)) out.push_back(full);
      if (e.isDirectory() && (q.maxDepth < 0 || depth < q.maxDepth))
        self(self, full + "/", depth + 1);
    }
  };
  walk(walk, base.dirKey(), 1);
  return out;
}

CatalogEntry Catalogue::writeEntry(CatalogEntry e) {
  validateEntry(e);
  backend_.putCell(e.path.parent, e.path.child, encodeEntry(e), clock_());
  return e;
}

void Catalogue::requireParentDir(const LogicalPath& lp) {
  auto parent = tryStat(normalizePath(lp.parent));
  if (!parent || !parent->isDirectory()) raise(Errc::ParentMissing, lp.parent);
}

CatalogEntry Catalogue::mkdir(const std::string& path, const std::string& owner,
                              const std::string& gowner, const std::string& perm,
                              bool createParents) {
  LogicalPath lp = normalizePath(path);
  if (lp.isRoot()) {
    if (backend_.getCell("/", "")) raise(Errc::Exists, "/");
    ensureRoot(owner, gowner, perm);
    return stat("/");
  }
  if (tryStat(lp)) raise(Errc::Exists, lp.str());
  if (createParents) {
    ensureRoot(owner, gowner, perm);
    LogicalPath parent = normalizePath(lp.parent);
    if (!parent.isRoot() && !tryStat(parent)) mkdir(parent.str(), owner, gowner, perm, true);
  }
  requireParentDir(lp);

  CatalogEntry e;
  e.path = lp;
  e.type = EntryType::Directory;
  e.owner = owner;
  e.gowner = gowner;
  e.perm = perm;
  e.ctime = clock_() / 1000000;
  e.guid = guidGen_->next();
  return writeEntry(std::move(e));
}

void Catalogue::bumpUsage(const std::string& user, std::int64_t files, std::int64_t bytes) {
  std::scoped_lock lock(quotaMu_);
  QuotaRecord& q = quotas_.try_emplace(user, QuotaRecord{user}).first->second;
  q.usedFiles = static_cast<std::uint64_t>(static_cast<std::int64_t>(q.usedFiles) + files);
  q.usedBytes = static_cast<std::uint64_t>(static_cast<std::int64_t>(q.usedBytes) + bytes);
}

CatalogEntry Catalogue::registerFile(const std::string& lfn, std::uint64_t size,
                                     const std::string& md5, const std::string& owner,
                                     const std::string& gowner, const std::string& perm,
                                     std::uint64_t jobid,
                                     const std::vector<PhysicalLocation>& locations,
                                     const std::optional<Guid>& fixedGuid) {
  LogicalPath lp = normalizePath(lfn);
  if (lp.isRoot()) raise(Errc::InvalidArgument, "cannot register the root");
  if (tryStat(lp)) raise(Errc::Exists, lp.str());
  requireParentDir(lp);

  {
    std::scoped_lock lock(quotaMu_);
    QuotaRecord& q = quotas_.try_emplace(owner, QuotaRecord{owner}).first->second;
    if (q.usedFiles + 1 > q.maxFiles || q.usedBytes + size > q.maxBytes)
      raise(Errc::QuotaExceeded, owner + " over quota");
  }

  CatalogEntry e;
  e.path = lp;
  e.type = EntryType::File;
  e.owner = owner;
  e.gowner = gowner;
  e.perm = perm;
  e.size = size;
  e.md5 = md5;
  e.jobid = jobid;
  e.pfns = locations;
  e.ctime = clock_() / 1000000;
  e.guid = fixedGuid ? *fixedGuid : guidGen_->next();
  CatalogEntry written = writeEntry(std::move(e));
  bumpUsage(owner, 1, static_cast<std::int64_t>(size));
  return written;
}

CatalogEntry Catalogue::symlink(const std::string& linkPath, const std::string& targetPath,
                                const std::string& owner) {
  LogicalPath lp = normalizePath(linkPath);
  if (lp.isRoot()) raise(Errc::InvalidArgument, "cannot link the root");
  if (tryStat(lp)) raise(Errc::Exists, lp.str());
  requireParentDir(lp);
  LogicalPath target = normalizePath(targetPath);  // targets may dangle but must be well-formed

  CatalogEntry e;
  e.path = lp;
  e.type = EntryType::Link;
  e.link = target.str();
  e.owner = owner;
  e.gowner = owner;
  e.perm = "755";
  e.ctime = clock_() / 1000000;
  e.guid = guidGen_->next();
  return writeEntry(std::move(e));
}

std::vector<std::string> Catalogue::remove(const std::string& lfn, bool recursive) {
  LogicalPath lp = normalizePath(lfn);
  if (lp.isRoot()) raise(Errc::InvalidArgument, "cannot remove the root");
  CatalogEntry e = statPath(lp);

  std::vector<std::string> bookingIds;
  auto removeOne = [&](auto&& self, const CatalogEntry& entry) -> void {
    if (entry.isDirectory()) {
      auto children = listDirectory(entry.path.str());
      if (!children.empty() && !recursive)
        raise(Errc::DirectoryNotEmpty, entry.path.str());
      for (const CatalogEntry& child : children) self(self, child);
    }
    backend_.deleteCell(entry.path.parent, entry.path.child, clock_());
    if (entry.isFile()) {
      if (opts_.deleteSink) {
        for (const PhysicalLocation& loc : entry.pfns)
          bookingIds.push_back(opts_.deleteSink->enqueuePendingDelete(entry.path.str(),
                                                                      entry.guid, loc,
                                                                      entry.size));
      }
      bumpUsage(entry.owner, -1, -static_cast<std::int64_t>(entry.size));
    }
  };
  removeOne(removeOne, e);
  return bookingIds;
}

bool Catalogue::checkAccess(const std::string& principal, const std::string& path, char mode) {
  if (mode != 'r' && mode != 'w' && mode != 'x')
    raise(Errc::InvalidArgument, std::string("bad access mode: ") + mode);
  LogicalPath lp = normalizePath(path);
  CatalogEntry target = statPath(lp);

  auto permits = [&](const CatalogEntry& e, char m) {
    int bit = m == 'r' ? 4 : (m == 'w' ? 2 : 1);
    int digit;
    if (principal == e.owner)
      digit = e.perm[0] - '0';
    else if (principal == e.gowner)
      digit = e.perm[1] - '0';
    else
      digit = e.perm[2] - '0';
    return (digit & bit) != 0;
  };

  // Every ancestor directory must grant traversal.
  LogicalPath cursor = lp;
  while (!cursor.isRoot()) {
    cursor = normalizePath(cursor.parent);
    CatalogEntry dir = statPath(cursor);
    if (!permits(dir, 'x')) return false;
  }
  return permits(target, mode);
}

void Catalogue::setQuota(const std::string& user, std::uint64_t maxFiles,
                         std::uint64_t maxBytes) {
  std::scoped_lock lock(quotaMu_);
  QuotaRecord& q = quotas_.try_emplace(user, QuotaRecord{user}).first->second;
  q.maxFiles = maxFiles;
  q.maxBytes = maxBytes;
}

std::optional<QuotaRecord> Catalogue::quota(const std::string& user) const {
  std::scoped_lock lock(quotaMu_);
  auto it = quotas_.find(user);
  if (it == quotas_.end()) return std::nullopt;
  return it->second;
}

std::map<std::string, QuotaRecord> Catalogue::allQuotas() const {
  std::scoped_lock lock(quotaMu_);
  return quotas_;
}

std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> Catalogue::recountUsage() {
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> out;
  for (const CatalogEntry& e : dumpEntries()) {
    if (!e.isFile()) continue;
    auto& [files, bytes] = out[e.owner];
    ++files;
    bytes += e.size;
  }
  return out;
}

std::vector<CatalogEntry> Catalogue::dumpEntries() { return dumpBackendEntries(backend_); }

void Catalogue::auditNamespaceClosure() {
  std::vector<CatalogEntry> entries = dumpEntries();
  std::map<std::string, const CatalogEntry*> byPath;
  for (const CatalogEntry& e : entries) byPath[e.path.str()] = &e;
  for (const CatalogEntry& e : entries) {
    validateEntry(e);
    if (e.path.isRoot()) continue;
    LogicalPath parent = normalizePath(e.path.parent);
    auto it = byPath.find(parent.str());
    if (it == byPath.end())
      raise(Errc::InvalidArgument, "orphan entry: " + e.path.str());
    if (!it->second->isDirectory())
      raise(Errc::InvalidArgument, "parent of " + e.path.str() + " is not a directory");
  }
}

std::uint64_t Catalogue::countEntries() { return dumpEntries().size(); }

}  // namespace gridcat
