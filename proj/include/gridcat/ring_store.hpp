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

#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "gridcat/segment.hpp"
#include "gridcat/util.hpp"

namespace gridcat {

enum class Level { One, Quorum, All };

std::string_view levelName(Level l);
Level levelFromName(std::string_view name);  // throws InvalidArgument

/// Replication factor plus read/write consistency levels. The configuration
/// is strong when writer and reader replica sets must intersect.
struct ConsistencyConfig {
  int rf = 3;
  Level wc = Level::Quorum;
  Level rc = Level::Quorum;

  int numeric(Level l) const {
    switch (l) {
      case Level::One: return 1;
      case Level::Quorum: return rf / 2 + 1;
      case Level::All: return rf;
    }
    return rf;
  }
  int writeNeed() const { return numeric(wc); }
  int readNeed() const { return numeric(rc); }
  bool strong() const { return writeNeed() + readNeed() > rf; }
};

struct RingStoreConfig {
  int vnodesPerNode = 64;
  std::uint64_t ringSeed = 0x414c4943Eull;
  std::size_t flushThresholdBytes = 4u << 20;
  std::size_t compactionSegmentLimit = 4;  // auto-compact when exceeded
  std::uint64_t tombstoneGraceMicros = 3600ull * 1000000;
  std::string dataDir;  // empty: segments stay in memory only
  MicrosClock clock;    // tombstone GC reference; defaults to wall clock
};

struct NodeStats {
  std::string nodeId;
  bool alive = true;
  std::size_t vnodes = 0;
  std::size_t memtableCells = 0;
  std::size_t memtableBytes = 0;
  std::size_t segmentCount = 0;
  std::uint64_t flushCount = 0;
  std::uint64_t compactionCount = 0;
};

/// Embedded replicated key-value store over a token ring with virtual nodes,
/// last-write-wins cells, tunable consistency and an LSM-style per-node
/// engine (memtable plus immutable sorted segments).
///
/// Membership is fixed once operations start; node failure is injected via
/// setNodeAlive. Reads contact the first readNeed() alive replicas in ring
/// order and schedule asynchronous read repair toward stale replicas.
class RingStore {
 public:
  explicit RingStore(RingStoreConfig cfg = {});
  ~RingStore();

  RingStore(const RingStore&) = delete;
  RingStore& operator=(const RingStore&) = delete;

  void addNode(const std::string& nodeId);
  std::vector<std::string> nodeIds() const;

  /// Owners of the rf distinct nodes met walking the ring clockwise from
  /// hash(pk). Throws InsufficientNodes if the cluster is smaller than rf.
  std::vector<std::string> replicasFor(std::string_view pk, int rf) const;

  void put(std::string_view pk, std::string_view ck, std::string_view value,
           const ConsistencyConfig& cfg, std::uint64_t ts, std::uint32_t writerId = 0);

  /// Tombstone write.
  void erase(std::string_view pk, std::string_view ck, const ConsistencyConfig& cfg,
             std::uint64_t ts, std::uint32_t writerId = 0);

  /// Merged live cell, or nullopt when absent or tombstoned.
  std::optional<Cell> get(std::string_view pk, std::string_view ck, const ConsistencyConfig& cfg);

  /// Live cells in partition pk with the given ck prefix, in ck order.
  std::vector<Cell> scan(std::string_view pk, std::string_view ckPrefix,
                         const ConsistencyConfig& cfg);

  /// Drains the node's memtable into a new segment. No-op when empty.
  void flush(const std::string& nodeId);

  /// Merges all of the node's segments into one, dropping shadowed cells and
  /// tombstones past the grace period. No-op with fewer than two segments.
  /// Returns true when a merge happened.
  bool compact(const std::string& nodeId);

  void setNodeAlive(const std::string& nodeId, bool alive);
  bool nodeAlive(const std::string& nodeId) const;

  NodeStats stats(const std::string& nodeId) const;
  std::vector<NodeStats> allStats() const;

  /// Blocks until queued read-repair writes have been applied.
  void waitForRepairs();

  /// Node-local merged view of one key, tombstones included. Test hook.
  std::optional<Cell> peekNode(const std::string& nodeId, std::string_view pk,
                               std::string_view ck) const;

  /// Last-write-wins merge of every node's full content, live cells only,
  /// sorted by (pk, ck). Audits and recounts, not the serving path.
  std::vector<Cell> dumpMerged() const;

  const RingStoreConfig& config() const { return cfg_; }

 private:
  struct MemVal {
    std::string value;
    bool tombstone = false;
    std::uint64_t ts = 0;
    std::uint32_t writerId = 0;
  };

  struct Node {
    std::string id;
    std::vector<std::uint64_t> tokens;
    std::atomic<bool> alive{true};
    mutable std::shared_mutex mu;
    std::map<CellKey, MemVal> memtable;
    std::size_t memBytes = 0;
    std::vector<SegmentPtr> segments;
    std::vector<std::string> segmentFiles;
    std::uint64_t flushCount = 0;
    std::uint64_t compactionCount = 0;
    std::uint64_t nextSegmentId = 0;
  };

  struct RepairTask {
    Node* node;
    Cell cell;
  };

  Node* findNode(const std::string& nodeId) const;
  Node& requireNode(const std::string& nodeId) const;
  std::vector<Node*> replicaNodes(std::string_view pk, int rf) const;

  void applyLocked(Node& node, const Cell& cell);       // node.mu held exclusive
  void applyToNode(Node& node, const Cell& cell);       // takes the lock
  void flushLocked(Node& node);
  bool compactLocked(Node& node);
  std::optional<Cell> readNodeCell(const Node& node, std::string_view pk,
                                   std::string_view ck) const;
  std::map<std::string, Cell> scanNode(const Node& node, std::string_view pk,
                                       std::string_view ckPrefix) const;
  void writeSegmentFile(Node& node, const Segment& seg, std::string& pathOut);
  void enqueueRepair(Node* node, Cell cell);
  void repairLoop();

  RingStoreConfig cfg_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::map<std::uint64_t, Node*> ring_;

  std::mutex repairMu_;
  std::condition_variable repairCv_;
  std::condition_variable repairIdleCv_;
  std::deque<RepairTask> repairQueue_;
  bool repairBusy_ = false;
  bool stopping_ = false;
  std::thread repairThread_;
};

}  // namespace gridcat
