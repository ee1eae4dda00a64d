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

#include "gridcat/ring_store.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "gridcat/errors.hpp"

namespace gridcat {

namespace fs = std::filesystem;

std::string_view levelName(Level l) {
  switch (l) {
    case Level::One: return "ONE";
    case Level::Quorum: return "QUORUM";
    case Level::All: return "ALL";
  }
  return "?";
}

Level levelFromName(std::string_view name) {
  if (name == "ONE") return Level::One;
  if (name == "QUORUM") return Level::Quorum;
  if (name == "ALL") return Level::All;
  raise(Errc::InvalidArgument, "bad consistency level: " + std::string(name));
}

namespace {

std::uint64_t keyPosition(std::string_view pk) { return mix64(fnv1a64(pk)); }

constexpr std::size_t kCellOverhead = 64;

}  // namespace

RingStore::RingStore(RingStoreConfig cfg) : cfg_(std::move(cfg)) {
  if (!cfg_.clock) cfg_.clock = wallMicros;
  repairThread_ = std::thread([this] { repairLoop(); });
}

RingStore::~RingStore() {
  {
    std::scoped_lock lock(repairMu_);
    stopping_ = true;
  }
  repairCv_.notify_all();
  repairThread_.join();
}

void RingStore::addNode(const std::string& nodeId) {
  if (findNode(nodeId)) raise(Errc::InvalidArgument, "duplicate node: " + nodeId);
  auto node = std::make_unique<Node>();
  node->id = nodeId;
  for (int i = 0; i < cfg_.vnodesPerNode; ++i) {
    std::uint64_t token =
        mix64(fnv1a64(nodeId + "#" + std::to_string(i)) ^ cfg_.ringSeed);
    while (ring_.count(token)) token = mix64(token ^ 0x9e3779b97f4a7c15ULL);
    node->tokens.push_back(token);
    ring_.emplace(token, node.get());
  }
  if (!cfg_.dataDir.empty()) {
    std::error_code ec;
    fs::create_directories(fs::path(cfg_.dataDir) / nodeId, ec);
    if (ec) raise(Errc::StorageIo, "cannot create node dir: " + ec.message());
  }
  nodes_.push_back(std::move(node));
}

std::vector<std::string> RingStore::nodeIds() const {
  std::vector<std::string> ids;
  ids.reserve(nodes_.size());
  for (const auto& n : nodes_) ids.push_back(n->id);
  return ids;
}

RingStore::Node* RingStore::findNode(const std::string& nodeId) const {
  for (const auto& n : nodes_)
    if (n->id == nodeId) return n.get();
  return nullptr;
}

RingStore::Node& RingStore::requireNode(const std::string& nodeId) const {
  Node* n = findNode(nodeId);
  if (!n) raise(Errc::UnknownNode, nodeId);
  return *n;
}

std::vector<RingStore::Node*> RingStore::replicaNodes(std::string_view pk, int rf) const {
  if (static_cast<int>(nodes_.size()) < rf)
    raise(Errc::InsufficientNodes, "cluster has " + std::to_string(nodes_.size()) +
                                       " nodes, need " + std::to_string(rf));
  std::vector<Node*> owners;
  owners.reserve(static_cast<std::size_t>(rf));
  auto it = ring_.lower_bound(keyPosition(pk));
  for (std::size_t steps = 0; steps < ring_.size() && owners.size() < static_cast<std::size_t>(rf);
       ++steps) {
    if (it == ring_.end()) it = ring_.begin();
    Node* candidate = it->second;
    if (std::find(owners.begin(), owners.end(), candidate) == owners.end())
      owners.push_back(candidate);
    ++it;
  }
  return owners;
}

std::vector<std::string> RingStore::replicasFor(std::string_view pk, int rf) const {
  std::vector<std::string> ids;
  for (Node* n : replicaNodes(pk, rf)) ids.push_back(n->id);
  return ids;
}

void RingStore::applyLocked(Node& node, const Cell& cell) {
  CellKey key = cellKey(cell);
  auto it = node.memtable.find(key);
  if (it != node.memtable.end()) {
    Cell existing{key.first, key.second, it->second.value, it->second.tombstone, it->second.ts,
                  it->second.writerId};
    if (existing.newerThan(cell)) return;
    node.memBytes -= it->second.value.size();
    it->second = MemVal{cell.value, cell.tombstone, cell.ts, cell.writerId};
    node.memBytes += cell.value.size();
  } else {
    node.memBytes += key.first.size() + key.second.size() + cell.value.size() + kCellOverhead;
    node.memtable.emplace(std::move(key),
                          MemVal{cell.value, cell.tombstone, cell.ts, cell.writerId});
  }
  if (node.memBytes > cfg_.flushThresholdBytes) {
    flushLocked(node);
    if (node.segments.size() > cfg_.compactionSegmentLimit) compactLocked(node);
  }
}

void RingStore::applyToNode(Node& node, const Cell& cell) {
  std::unique_lock lock(node.mu);
  applyLocked(node, cell);
}

void RingStore::put(std::string_view pk, std::string_view ck, std::string_view value,
                    const ConsistencyConfig& cfg, std::uint64_t ts, std::uint32_t writerId) {
  Cell cell{std::string(pk), std::string(ck), std::string(value), false, ts, writerId};
  auto replicas = replicaNodes(pk, cfg.rf);
  std::vector<Node*> alive;
  for (Node* n : replicas)
    if (n->alive.load(std::memory_order_relaxed)) alive.push_back(n);
  if (static_cast<int>(alive.size()) < cfg.writeNeed())
    raise(Errc::Unavailable, "write needs " + std::to_string(cfg.writeNeed()) + " replicas, " +
                                 std::to_string(alive.size()) + " alive");
  // All alive replicas take the write synchronously; the required count is
  // the availability gate, the rest is the best-effort tail.
  for (Node* n : alive) applyToNode(*n, cell);
}

void RingStore::erase(std::string_view pk, std::string_view ck, const ConsistencyConfig& cfg,
                      std::uint64_t ts, std::uint32_t writerId) {
  Cell cell{std::string(pk), std::string(ck), std::string(), true, ts, writerId};
  auto replicas = replicaNodes(pk, cfg.rf);
  std::vector<Node*> alive;
  for (Node* n : replicas)
    if (n->alive.load(std::memory_order_relaxed)) alive.push_back(n);
  if (static_cast<int>(alive.size()) < cfg.writeNeed())
    raise(Errc::Unavailable, "delete needs " + std::to_string(cfg.writeNeed()) + " replicas");
  for (Node* n : alive) applyToNode(*n, cell);
}

std::optional<Cell> RingStore::readNodeCell(const Node& node, std::string_view pk,
                                            std::string_view ck) const {
  std::shared_lock lock(node.mu);
  std::optional<Cell> best;
  auto it = node.memtable.find(CellKey{std::string(pk), std::string(ck)});
  if (it != node.memtable.end())
    best = Cell{std::string(pk), std::string(ck), it->second.value, it->second.tombstone,
                it->second.ts, it->second.writerId};
  Cell fromSeg;
  for (const auto& seg : node.segments) {
    if (seg->find(pk, ck, fromSeg)) {
      if (!best || fromSeg.newerThan(*best)) best = fromSeg;
    }
  }
  return best;
}

std::map<std::string, Cell> RingStore::scanNode(const Node& node, std::string_view pk,
                                                std::string_view ckPrefix) const {
  std::shared_lock lock(node.mu);
  std::map<std::string, Cell> out;
  auto merge = [&out](Cell&& c) {
    auto [it, inserted] = out.try_emplace(c.ck, c);
    if (!inserted && c.newerThan(it->second)) it->second = std::move(c);
  };
  for (const auto& seg : node.segments) {
    std::vector<Cell> cells;
    seg->scan(pk, ckPrefix, cells);
    for (Cell& c : cells) merge(std::move(c));
  }
  auto it = node.memtable.lower_bound(CellKey{std::string(pk), std::string(ckPrefix)});
  for (; it != node.memtable.end(); ++it) {
    if (it->first.first != pk) break;
    if (it->first.second.compare(0, ckPrefix.size(), ckPrefix) != 0) break;
    merge(Cell{it->first.first, it->first.second, it->second.value, it->second.tombstone,
               it->second.ts, it->second.writerId});
  }
  return out;
}

std::optional<Cell> RingStore::get(std::string_view pk, std::string_view ck,
                                   const ConsistencyConfig& cfg) {
  auto replicas = replicaNodes(pk, cfg.rf);
  std::vector<Node*> alive;
  for (Node* n : replicas)
    if (n->alive.load(std::memory_order_relaxed)) alive.push_back(n);
  if (static_cast<int>(alive.size()) < cfg.readNeed())
    raise(Errc::Unavailable, "read needs " + std::to_string(cfg.readNeed()) + " replicas, " +
                                 std::to_string(alive.size()) + " alive");
  alive.resize(static_cast<std::size_t>(cfg.readNeed()));

  std::optional<Cell> winner;
  std::vector<std::pair<Node*, std::optional<Cell>>> views;
  views.reserve(alive.size());
  for (Node* n : alive) {
    auto view = readNodeCell(*n, pk, ck);
    if (view && (!winner || view->newerThan(*winner))) winner = view;
    views.emplace_back(n, std::move(view));
  }
  if (!winner) return std::nullopt;
  for (auto& [n, view] : views) {
    if (!view || winner->newerThan(*view)) enqueueRepair(n, *winner);
  }
  if (winner->tombstone) return std::nullopt;
  return winner;
}

std::vector<Cell> RingStore::scan(std::string_view pk, std::string_view ckPrefix,
                                  const ConsistencyConfig& cfg) {
  auto replicas = replicaNodes(pk, cfg.rf);
  std::vector<Node*> alive;
  for (Node* n : replicas)
    if (n->alive.load(std::memory_order_relaxed)) alive.push_back(n);
  if (static_cast<int>(alive.size()) < cfg.readNeed())
    raise(Errc::Unavailable, "scan needs " + std::to_string(cfg.readNeed()) + " replicas");
  alive.resize(static_cast<std::size_t>(cfg.readNeed()));

  std::map<std::string, Cell> merged;
  std::vector<std::pair<Node*, std::map<std::string, Cell>>> views;
  for (Node* n : alive) {
    auto view = scanNode(*n, pk, ckPrefix);
    for (const auto& [ck2, cell] : view) {
      auto [it, inserted] = merged.try_emplace(ck2, cell);
      if (!inserted && cell.newerThan(it->second)) it->second = cell;
    }
    views.emplace_back(n, std::move(view));
  }
  for (auto& [n, view] : views) {
    for (const auto& [ck2, cell] : merged) {
      auto it = view.find(ck2);
      if (it == view.end() || cell.newerThan(it->second)) enqueueRepair(n, cell);
    }
  }
  std::vector<Cell> out;
  out.reserve(merged.size());
  for (auto& [ck2, cell] : merged)
    if (!cell.tombstone) out.push_back(std::move(cell));
  return out;
}

void RingStore::writeSegmentFile(Node& node, const Segment& seg, std::string& pathOut) {
  if (cfg_.dataDir.empty()) {
    pathOut.clear();
    return;
  }
  fs::path p = fs::path(cfg_.dataDir) / node.id /
               ("seg-" + std::to_string(node.nextSegmentId++) + ".gcsg");
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) raise(Errc::StorageIo, "cannot open " + p.string());
  std::string bytes = seg.encode();
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  f.flush();
  if (!f) raise(Errc::StorageIo, "short write to " + p.string());
  pathOut = p.string();
}

void RingStore::flushLocked(Node& node) {
  if (node.memtable.empty()) return;
  std::vector<Cell> cells;
  cells.reserve(node.memtable.size());
  for (const auto& [key, val] : node.memtable)
    cells.push_back(Cell{key.first, key.second, val.value, val.tombstone, val.ts, val.writerId});
  SegmentPtr seg = Segment::fromSorted(std::move(cells));
  std::string file;
  writeSegmentFile(node, *seg, file);
  node.segments.push_back(std::move(seg));
  node.segmentFiles.push_back(std::move(file));
  node.memtable.clear();
  node.memBytes = 0;
  ++node.flushCount;
}

void RingStore::flush(const std::string& nodeId) {
  Node& node = requireNode(nodeId);
  std::unique_lock lock(node.mu);
  flushLocked(node);
}

namespace {

// Streaming k-way merge over sorted segments: newest wins per key, shadowed
// cells dropped, tombstones discarded once past the grace period.
SegmentPtr mergeSegments(const std::vector<SegmentPtr>& segments, std::uint64_t graceMicros,
                         std::uint64_t nowMicros, std::size_t& outCount) {
  struct Cursor {
    const Segment* seg;
    std::size_t idx = 0;
  };
  std::vector<Cursor> cursors;
  for (const auto& s : segments) cursors.push_back({s.get(), 0});

  std::vector<Cell> merged;
  while (true) {
    const Cell* minCell = nullptr;
    std::vector<std::size_t> atMin;
    std::vector<Cell> heads(cursors.size());
    for (std::size_t i = 0; i < cursors.size(); ++i) {
      if (cursors[i].idx >= cursors[i].seg->recordCount()) continue;
      heads[i] = cursors[i].seg->cellAt(cursors[i].idx);
      if (!minCell || cellKey(heads[i]) < cellKey(*minCell)) {
        minCell = &heads[i];
        atMin.assign(1, i);
      } else if (cellKey(heads[i]) == cellKey(*minCell)) {
        atMin.push_back(i);
      }
    }
    if (!minCell) break;
    Cell winner = heads[atMin[0]];
    for (std::size_t k = 1; k < atMin.size(); ++k)
      if (heads[atMin[k]].newerThan(winner)) winner = heads[atMin[k]];
    for (std::size_t i : atMin) ++cursors[i].idx;
    bool expiredTombstone =
        winner.tombstone && nowMicros >= graceMicros && winner.ts <= nowMicros - graceMicros;
    if (!expiredTombstone) merged.push_back(std::move(winner));
  }
  outCount = merged.size();
  return Segment::fromSorted(std::move(merged));
}

}  // namespace

bool RingStore::compactLocked(Node& node) {
  if (node.segments.size() < 2) return false;
  std::size_t count = 0;
  SegmentPtr merged =
      mergeSegments(node.segments, cfg_.tombstoneGraceMicros, cfg_.clock(), count);
  std::string file;
  writeSegmentFile(node, *merged, file);
  for (const std::string& old : node.segmentFiles) {
    if (old.empty()) continue;
    std::error_code ec;
    fs::remove(old, ec);
  }
  node.segments.assign(1, std::move(merged));
  node.segmentFiles.assign(1, std::move(file));
  ++node.compactionCount;
  return true;
}

bool RingStore::compact(const std::string& nodeId) {
  Node& node = requireNode(nodeId);
  std::unique_lock lock(node.mu);
  return compactLocked(node);
}

void RingStore::setNodeAlive(const std::string& nodeId, bool alive) {
  requireNode(nodeId).alive.store(alive, std::memory_order_relaxed);
}

bool RingStore::nodeAlive(const std::string& nodeId) const {
  return requireNode(nodeId).alive.load(std::memory_order_relaxed);
}

NodeStats RingStore::stats(const std::string& nodeId) const {
  const Node& node = requireNode(nodeId);
  std::shared_lock lock(node.mu);
  NodeStats s;
  s.nodeId = node.id;
  s.alive = node.alive.load(std::memory_order_relaxed);
  s.vnodes = node.tokens.size();
  s.memtableCells = node.memtable.size();
  s.memtableBytes = node.memBytes;
  s.segmentCount = node.segments.size();
  s.flushCount = node.flushCount;
  s.compactionCount = node.compactionCount;
  return s;
}

std::vector<NodeStats> RingStore::allStats() const {
  std::vector<NodeStats> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(stats(n->id));
  return out;
}

std::optional<Cell> RingStore::peekNode(const std::string& nodeId, std::string_view pk,
                                        std::string_view ck) const {
  return readNodeCell(requireNode(nodeId), pk, ck);
}

std::vector<Cell> RingStore::dumpMerged() const {
  std::map<CellKey, Cell> merged;
  auto consider = [&merged](Cell&& c) {
    CellKey key = cellKey(c);
    auto [it, inserted] = merged.try_emplace(std::move(key), c);
    if (!inserted && c.newerThan(it->second)) it->second = std::move(c);
  };
  for (const auto& node : nodes_) {
    std::shared_lock lock(node->mu);
    for (const auto& [key, val] : node->memtable)
      consider(Cell{key.first, key.second, val.value, val.tombstone, val.ts, val.writerId});
    for (const auto& seg : node->segments)
      for (std::size_t i = 0; i < seg->recordCount(); ++i) consider(seg->cellAt(i));
  }
  std::vector<Cell> out;
  out.reserve(merged.size());
  for (auto& [key, cell] : merged)
    if (!cell.tombstone) out.push_back(std::move(cell));
  return out;
}

void RingStore::enqueueRepair(Node* node, Cell cell) {
  {
    std::scoped_lock lock(repairMu_);
    repairQueue_.push_back(RepairTask{node, std::move(cell)});
  }
  repairCv_.notify_one();
}

void RingStore::repairLoop() {
  std::unique_lock lock(repairMu_);
  while (true) {
    repairCv_.wait(lock, [this] { return stopping_ || !repairQueue_.empty(); });
    if (stopping_) return;
    RepairTask task = std::move(repairQueue_.front());
    repairQueue_.pop_front();
    repairBusy_ = true;
    lock.unlock();
    if (task.node->alive.load(std::memory_order_relaxed)) applyToNode(*task.node, task.cell);
    lock.lock();
    repairBusy_ = false;
    if (repairQueue_.empty()) repairIdleCv_.notify_all();
  }
}

void RingStore::waitForRepairs() {
  std::unique_lock lock(repairMu_);
  repairIdleCv_.wait(lock, [this] { return repairQueue_.empty() && !repairBusy_; });
}

}  // namespace gridcat
