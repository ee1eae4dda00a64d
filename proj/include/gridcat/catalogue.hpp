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

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gridcat/backend.hpp"
#include "gridcat/entry.hpp"
#include "gridcat/placement.hpp"

namespace gridcat {

struct QuotaRecord {
  std::string user;
  std::uint64_t maxFiles = UINT64_MAX;
  std::uint64_t maxBytes = UINT64_MAX;
  std::uint64_t usedFiles = 0;
  std::uint64_t usedBytes = 0;
};

struct FindQuery {
  std::string basePath;
  std::string namePattern = "*";
  int maxDepth = -1;  // unlimited when negative
  std::optional<EntryType> typeFilter;
};

/// Receives one pending-delete request per physical replica of a removed
/// file; implemented by the booking area. Returns the booking id.
class DeleteSink {
 public:
  virtual ~DeleteSink() = default;
  virtual std::string enqueuePendingDelete(const std::string& lfn, const Guid& guid,
                                           const PhysicalLocation& location,
                                           std::uint64_t sizeBytes) = 0;
};

struct CatalogueOptions {
  PlacementService* placement = nullptr;  // optional; enables location sorting
  DeleteSink* deleteSink = nullptr;       // optional; receives replica deletions
  MicrosClock clock;                      // monotonic wall clock by default
  std::uint64_t guidSeed = 0;             // 0: derived from the clock
  int maxLinkHops = 16;
};

/// The logical catalogue: whereis, listing, find, mkdir, register, symlink,
/// remove, quota accounting and permission checks over a pluggable cell
/// backend. One row per entry; partition key is the parent directory.
class Catalogue {
 public:
  Catalogue(CatalogueBackend& backend, CatalogueOptions opts = {});

  /// Writes the root directory row if missing.
  void ensureRoot(const std::string& owner = "admin", const std::string& gowner = "admin",
                  const std::string& perm = "755");

  /// Raw entry without link resolution or location sorting.
  CatalogEntry stat(const std::string& lfn);
  bool exists(const std::string& lfn);

  /// Entry with locations sorted for the client site; optionally resolves
  /// link chains (bounded hops). `touched` collects every path visited,
  /// for cache dependency tracking.
  CatalogEntry whereis(const std::string& lfn, const std::string& clientSite = "",
                       bool followLinks = false, std::vector<std::string>* touched = nullptr);

  std::vector<CatalogEntry> listDirectory(const std::string& path);

  std::vector<std::string> find(const FindQuery& q);

  CatalogEntry mkdir(const std::string& path, const std::string& owner,
                     const std::string& gowner, const std::string& perm, bool createParents);

  CatalogEntry registerFile(const std::string& lfn, std::uint64_t size, const std::string& md5,
                            const std::string& owner, const std::string& gowner,
                            const std::string& perm, std::uint64_t jobid,
                            const std::vector<PhysicalLocation>& locations,
                            const std::optional<Guid>& fixedGuid = std::nullopt);

  CatalogEntry symlink(const std::string& linkPath, const std::string& targetPath,
                       const std::string& owner);

  /// Tombstones the entry (recursively for directories when requested) and
  /// enqueues one pending-delete per physical replica. Returns booking ids.
  std::vector<std::string> remove(const std::string& lfn, bool recursive);

  /// Classic owner/group/other permission verdict; mode is 'r', 'w' or 'x'.
  /// Requires execute on every ancestor directory.
  bool checkAccess(const std::string& principal, const std::string& path, char mode);

  // Quota accounting. Users without an explicit record are unlimited but
  // still tracked.
  void setQuota(const std::string& user, std::uint64_t maxFiles, std::uint64_t maxBytes);
  std::optional<QuotaRecord> quota(const std::string& user) const;
  std::map<std::string, QuotaRecord> allQuotas() const;
  /// Ground truth recount by full scan: user -> (files, bytes).
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> recountUsage();

  /// Verifies that every non-root entry has a directory parent row and that
  /// all entries satisfy their type invariants. Throws on violation.
  void auditNamespaceClosure();

  std::uint64_t countEntries();

  Guid newGuid() { return guidGen_->next(); }
  std::uint64_t nowMicros() const { return clock_(); }
  CatalogueBackend& backend() { return backend_; }
  PlacementService* placement() { return opts_.placement; }

  /// Full logical dump, decoded, sorted by (parent, child). Audit hook.
  std::vector<CatalogEntry> dumpEntries();

 private:
  CatalogEntry writeEntry(CatalogEntry e);
  CatalogEntry statPath(const LogicalPath& lp);
  std::optional<CatalogEntry> tryStat(const LogicalPath& lp);
  void requireParentDir(const LogicalPath& lp);
  void bumpUsage(const std::string& user, std::int64_t files, std::int64_t bytes);

  CatalogueBackend& backend_;
  CatalogueOptions opts_;
  MicrosClock clock_;
  std::unique_ptr<GuidGenerator> guidGen_;
  mutable std::mutex quotaMu_;
  std::map<std::string, QuotaRecord> quotas_;
};

/// Union of every cell in the backend, decoded. Shared by audits, snapshot
/// fidelity checks and quota recounts.
std::vector<CatalogEntry> dumpBackendEntries(CatalogueBackend& backend);

}  // namespace gridcat
