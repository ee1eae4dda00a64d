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

#include "gridcat/placement.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "gridcat/errors.hpp"

namespace gridcat {

using nlohmann::json;

void SiteTopology::addSite(const std::string& site) { sites_.insert(site); }

void SiteTopology::setCost(const std::string& a, const std::string& b, double cost) {
  if (cost < 0) raise(Errc::InvalidArgument, "negative site cost");
  sites_.insert(a);
  sites_.insert(b);
  costs_[{std::min(a, b), std::max(a, b)}] = cost;
}

double SiteTopology::cost(const std::string& a, const std::string& b) const {
  if (!sites_.count(a) || !sites_.count(b)) return kUnknownCost;
  if (a == b) return 0.0;
  auto it = costs_.find({std::min(a, b), std::max(a, b)});
  return it == costs_.end() ? kUnknownCost : it->second;
}

PlacementService::PlacementService(std::vector<StorageElement> ses, SiteTopology topology)
    : topology_(std::move(topology)) {
  for (auto& se : ses) ses_.emplace(se.name, std::move(se));
}

void PlacementService::addStorageElement(const StorageElement& se) {
  std::scoped_lock lock(mu_);
  if (se.usedBytes > se.capacityBytes) raise(Errc::InvalidArgument, "usedBytes > capacity");
  ses_[se.name] = se;
}

std::optional<StorageElement> PlacementService::findSe(const std::string& name) const {
  std::scoped_lock lock(mu_);
  auto it = ses_.find(name);
  if (it == ses_.end()) return std::nullopt;
  return it->second;
}

std::vector<StorageElement> PlacementService::allSes() const {
  std::scoped_lock lock(mu_);
  std::vector<StorageElement> out;
  out.reserve(ses_.size());
  for (const auto& [name, se] : ses_) out.push_back(se);
  return out;
}

std::vector<StorageElement> PlacementService::selectTargets(const std::string& clientSite,
                                                            std::uint64_t size,
                                                            std::size_t k) const {
  std::scoped_lock lock(mu_);
  std::vector<const StorageElement*> eligible;
  for (const auto& [name, se] : ses_)
    if (se.capacityBytes - se.usedBytes >= size) eligible.push_back(&se);
  if (eligible.size() < k)
    raise(Errc::InsufficientCapacity, std::to_string(eligible.size()) + " of " +
                                          std::to_string(k) + " required SEs have room");
  std::sort(eligible.begin(), eligible.end(),
            [&](const StorageElement* a, const StorageElement* b) {
              double ca = topology_.cost(clientSite, a->site);
              double cb = topology_.cost(clientSite, b->site);
              if (ca != cb) return ca < cb;
              if (a->freeRatio() != b->freeRatio()) return a->freeRatio() > b->freeRatio();
              return a->name < b->name;
            });
  std::vector<StorageElement> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(*eligible[i]);
  return out;
}

std::vector<PhysicalLocation> PlacementService::sortLocations(
    std::vector<PhysicalLocation> locations, const std::string& clientSite) const {
  std::scoped_lock lock(mu_);
  auto costOf = [&](const PhysicalLocation& loc) {
    auto it = ses_.find(loc.seName);
    if (it == ses_.end()) return SiteTopology::kUnknownCost;
    return topology_.cost(clientSite, it->second.site);
  };
  std::stable_sort(locations.begin(), locations.end(),
                   [&](const PhysicalLocation& a, const PhysicalLocation& b) {
                     double ca = costOf(a);
                     double cb = costOf(b);
                     if (ca != cb) return ca < cb;
                     return a.seName < b.seName;
                   });
  return locations;
}

void PlacementService::recordUsage(const std::string& seName, std::int64_t deltaBytes) {
  std::scoped_lock lock(mu_);
  auto it = ses_.find(seName);
  if (it == ses_.end()) raise(Errc::UnknownSe, seName);
  StorageElement& se = it->second;
  if (deltaBytes < 0) {
    std::uint64_t dec = static_cast<std::uint64_t>(-deltaBytes);
    if (dec > se.usedBytes) raise(Errc::InvalidArgument, "usage below zero on " + seName);
    se.usedBytes -= dec;
  } else {
    std::uint64_t inc = static_cast<std::uint64_t>(deltaBytes);
    if (se.usedBytes + inc > se.capacityBytes)
      raise(Errc::InvalidArgument, "usage above capacity on " + seName);
    se.usedBytes += inc;
  }
}

PlacementService PlacementService::fromJson(const std::string& jsonText) {
  json doc = json::parse(jsonText);
  std::vector<StorageElement> ses;
  for (const auto& item : doc.value("storageElements", json::array())) {
    StorageElement se;
    se.name = item.at("name").get<std::string>();
    se.endpoint = item.at("endpoint").get<std::string>();
    se.capacityBytes = item.at("capacityBytes").get<std::uint64_t>();
    se.usedBytes = item.value("usedBytes", 0ull);
    se.site = item.at("site").get<std::string>();
    if (se.usedBytes > se.capacityBytes) raise(Errc::InvalidArgument, "usedBytes > capacity");
    ses.push_back(std::move(se));
  }
  SiteTopology topo;
  if (doc.contains("topology")) {
    for (const auto& s : doc["topology"].value("sites", json::array()))
      topo.addSite(s.get<std::string>());
    for (const auto& c : doc["topology"].value("costs", json::array())) {
      if (!c.is_array() || c.size() != 3) raise(Errc::InvalidArgument, "cost triplet expected");
      topo.setCost(c[0].get<std::string>(), c[1].get<std::string>(), c[2].get<double>());
    }
  }
  return PlacementService(std::move(ses), std::move(topo));
}

std::string PlacementService::toJson() const {
  std::scoped_lock lock(mu_);
  json doc;
  json ses = json::array();
  for (const auto& [name, se] : ses_)
    ses.push_back({{"name", se.name},
                   {"endpoint", se.endpoint},
                   {"capacityBytes", se.capacityBytes},
                   {"usedBytes", se.usedBytes},
                   {"site", se.site}});
  doc["storageElements"] = ses;
  json sites = json::array();
  for (const auto& s : topology_.sites()) sites.push_back(s);
  doc["topology"]["sites"] = sites;
  json costs = json::array();
  for (const auto& a : topology_.sites())
    for (const auto& b : topology_.sites())
      if (a < b && topology_.cost(a, b) != SiteTopology::kUnknownCost)
        costs.push_back({a, b, topology_.cost(a, b)});
  doc["topology"]["costs"] = costs;
  return doc.dump(2);
}

}  // namespace gridcat
