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
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gridcat/entry.hpp"

namespace gridcat {

struct StorageElement {
  std::string name;
  std::string endpoint;  // protocol://host:port
  std::uint64_t capacityBytes = 0;
  std::uint64_t usedBytes = 0;
  std::string site;

  double freeRatio() const {
    if (capacityBytes == 0) return 0.0;
    return 1.0 - static_cast<double>(usedBytes) / static_cast<double>(capacityBytes);
  }
};

/// Symmetric inter-site network cost matrix with zero diagonal. Unknown
/// sites cost infinity, so their replicas sort last.
class SiteTopology {
 public:
  static constexpr double kUnknownCost = std::numeric_limits<double>::infinity();

  void addSite(const std::string& site);
  void setCost(const std::string& a, const std::string& b, double cost);
  double cost(const std::string& a, const std::string& b) const;
  const std::set<std::string>& sites() const { return sites_; }

 private:
  std::set<std::string> sites_;
  std::map<std::pair<std::string, std::string>, double> costs_;
};

/// Storage element registry with replica target selection for writes and
/// proximity sorting for reads.
class PlacementService {
 public:
  PlacementService() = default;
  PlacementService(std::vector<StorageElement> ses, SiteTopology topology);

  void addStorageElement(const StorageElement& se);
  const SiteTopology& topology() const { return topology_; }
  std::optional<StorageElement> findSe(const std::string& name) const;
  std::vector<StorageElement> allSes() const;

  /// k distinct elements with room for `size`, minimizing
  /// (cost(clientSite, site), -freeRatio, name). Throws InsufficientCapacity.
  std::vector<StorageElement> selectTargets(const std::string& clientSite, std::uint64_t size,
                                            std::size_t k) const;

  /// Stable sort by (cost(clientSite, site of SE), SE name); locations with
  /// unknown SEs keep relative order at infinite cost. Pure.
  std::vector<PhysicalLocation> sortLocations(std::vector<PhysicalLocation> locations,
                                              const std::string& clientSite) const;

  /// Adjusts accounting on booking commit (+) and delete completion (-).
  /// Throws UnknownSe or InvalidArgument on range violation.
  void recordUsage(const std::string& seName, std::int64_t deltaBytes);

  /// Loads {"storageElements": [...], "topology": {"sites": [...],
  /// "costs": [[a, b, cost], ...]}} from a JSON document.
  static PlacementService fromJson(const std::string& jsonText);
  std::string toJson() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, StorageElement> ses_;
  SiteTopology topology_;
};

}  // namespace gridcat
