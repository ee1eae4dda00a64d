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
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridcat/ring_store.hpp"

namespace gridcat {

struct RawCell {
  std::string pk;
  std::string ck;
  std::string value;
};

/// Cell-level storage contract the catalogue runs on. Keys follow the
/// namespace layout: partition key = directory path, clustering key = child
/// name, value = canonical entry encoding.
class CatalogueBackend {
 public:
  virtual ~CatalogueBackend() = default;

  virtual void putCell(std::string_view pk, std::string_view ck, std::string_view value,
                       std::uint64_t tsMicros) = 0;
  virtual std::optional<std::string> getCell(std::string_view pk, std::string_view ck) = 0;
  /// (child, value) pairs in child order.
  virtual std::vector<std::pair<std::string, std::string>> scanPartition(
      std::string_view pk, std::string_view ckPrefix) = 0;
  virtual void deleteCell(std::string_view pk, std::string_view ck, std::uint64_t tsMicros) = 0;
  /// Every live cell, sorted by (pk, ck); audits and recounts only.
  virtual std::vector<RawCell> dumpAll() = 0;
  virtual std::string backendName() const = 0;
};

/// Catalogue backend over the replicated ring store.
class RingBackend : public CatalogueBackend {
 public:
  RingBackend(RingStore& store, ConsistencyConfig cfg, std::uint32_t writerId = 1)
      : store_(store), cfg_(cfg), writerId_(writerId) {}

  void putCell(std::string_view pk, std::string_view ck, std::string_view value,
               std::uint64_t ts) override {
    store_.put(pk, ck, value, cfg_, ts, writerId_);
  }
  std::optional<std::string> getCell(std::string_view pk, std::string_view ck) override {
    auto cell = store_.get(pk, ck, cfg_);
    if (!cell) return std::nullopt;
    return std::move(cell->value);
  }
  std::vector<std::pair<std::string, std::string>> scanPartition(
      std::string_view pk, std::string_view ckPrefix) override {
    std::vector<std::pair<std::string, std::string>> out;
    for (Cell& c : store_.scan(pk, ckPrefix, cfg_))
      out.emplace_back(std::move(c.ck), std::move(c.value));
    return out;
  }
  void deleteCell(std::string_view pk, std::string_view ck, std::uint64_t ts) override {
    store_.erase(pk, ck, cfg_, ts, writerId_);
  }
  std::vector<RawCell> dumpAll() override {
    std::vector<RawCell> out;
    for (Cell& c : store_.dumpMerged())
      out.push_back(RawCell{std::move(c.pk), std::move(c.ck), std::move(c.value)});
    return out;
  }
  std::string backendName() const override { return "ring"; }

  const ConsistencyConfig& consistency() const { return cfg_; }
  RingStore& store() { return store_; }

 private:
  RingStore& store_;
  ConsistencyConfig cfg_;
  std::uint32_t writerId_;
};

/// Flat in-memory map; the trivial oracle backend for equivalence tests.
class ReferenceBackend : public CatalogueBackend {
 public:
  void putCell(std::string_view pk, std::string_view ck, std::string_view value,
               std::uint64_t) override {
    std::scoped_lock lock(mu_);
    map_[{std::string(pk), std::string(ck)}] = std::string(value);
  }
  std::optional<std::string> getCell(std::string_view pk, std::string_view ck) override {
    std::scoped_lock lock(mu_);
    auto it = map_.find({std::string(pk), std::string(ck)});
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  std::vector<std::pair<std::string, std::string>> scanPartition(
      std::string_view pk, std::string_view ckPrefix) override {
    std::scoped_lock lock(mu_);
    std::vector<std::pair<std::string, std::string>> out;
    for (auto it = map_.lower_bound({std::string(pk), std::string(ckPrefix)}); it != map_.end();
         ++it) {
      if (it->first.first != pk) break;
      if (it->first.second.compare(0, ckPrefix.size(), ckPrefix) != 0) break;
      out.emplace_back(it->first.second, it->second);
    }
    return out;
  }
  void deleteCell(std::string_view pk, std::string_view ck, std::uint64_t) override {
    std::scoped_lock lock(mu_);
    map_.erase({std::string(pk), std::string(ck)});
  }
  std::vector<RawCell> dumpAll() override {
    std::scoped_lock lock(mu_);
    std::vector<RawCell> out;
    out.reserve(map_.size());
    for (const auto& [key, value] : map_) out.push_back(RawCell{key.first, key.second, value});
    return out;
  }
  std::string backendName() const override { return "reference"; }

  std::size_t size() const {
    std::scoped_lock lock(mu_);
    return map_.size();
  }

 private:
  mutable std::mutex mu_;
  std::map<std::pair<std::string, std::string>, std::string> map_;
};

}  // namespace gridcat
