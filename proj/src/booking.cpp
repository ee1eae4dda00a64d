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

#include "gridcat/booking.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "gridcat/digest.hpp"
#include "gridcat/errors.hpp"
#include "gridcat/util.hpp"

namespace gridcat {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view bookingStateName(BookingState s) {
  switch (s) {
    case BookingState::Reserved: return "reserved";
    case BookingState::Committed: return "committed";
    case BookingState::Released: return "released";
    case BookingState::Expired: return "expired";
    case BookingState::PendingDelete: return "pending-delete";
    case BookingState::DeleteDone: return "delete-done";
  }
  return "?";
}

BookingState bookingStateFromName(std::string_view name) {
  if (name == "reserved") return BookingState::Reserved;
  if (name == "committed") return BookingState::Committed;
  if (name == "released") return BookingState::Released;
  if (name == "expired") return BookingState::Expired;
  if (name == "pending-delete") return BookingState::PendingDelete;
  if (name == "delete-done") return BookingState::DeleteDone;
  raise(Errc::InvalidArgument, "bad booking state: " + std::string(name));
}

namespace {

json bookingToJson(const Booking& b) {
  json j;
  j["id"] = b.id;
  j["seq"] = b.seq;
  j["lfn"] = b.lfn;
  j["user"] = b.user;
  j["requestedSize"] = b.requestedSize;
  j["state"] = std::string(bookingStateName(b.state));
  j["createdAt"] = b.createdAt;
  j["ttlSeconds"] = b.ttlSeconds;
  j["guid"] = b.guid.text();
  json envs = json::array();
  for (const Envelope& e : b.envelopes) envs.push_back(e.encode());
  j["envelopes"] = envs;
  j["targets"] = b.targets;
  j["deleteSe"] = b.deleteLocation.seName;
  j["deletePfn"] = b.deleteLocation.pfn;
  j["deleteBytes"] = b.deleteBytes;
  j["committedEntry"] = b.committedEntry;
  return j;
}

Booking bookingFromJson(const json& j) {
  Booking b;
  b.id = j.at("id").get<std::string>();
  b.seq = j.at("seq").get<std::uint64_t>();
  b.lfn = j.at("lfn").get<std::string>();
  b.user = j.at("user").get<std::string>();
  b.requestedSize = j.at("requestedSize").get<std::uint64_t>();
  b.state = bookingStateFromName(j.at("state").get<std::string>());
  b.createdAt = j.at("createdAt").get<std::uint64_t>();
  b.ttlSeconds = j.at("ttlSeconds").get<std::uint64_t>();
  b.guid = Guid::parse(j.at("guid").get<std::string>());
  for (const auto& w : j.at("envelopes")) {
    auto e = decodeEnvelope(w.get<std::string>());
    if (!e) raise(Errc::StorageIo, "journal holds an undecodable envelope");
    b.envelopes.push_back(std::move(*e));
  }
  b.targets = j.at("targets").get<std::vector<std::string>>();
  b.deleteLocation.seName = j.at("deleteSe").get<std::string>();
  b.deleteLocation.pfn = j.at("deletePfn").get<std::string>();
  b.deleteBytes = j.at("deleteBytes").get<std::uint64_t>();
  b.committedEntry = j.at("committedEntry").get<std::string>();
  return b;
}

}  // namespace

BookingArea::BookingArea(Catalogue& catalogue, PlacementService& placement, const KeyPair& keys,
                         BookingAreaOptions opts, std::function<std::uint64_t()> nowSeconds)
    : catalogue_(catalogue),
      placement_(placement),
      keys_(keys),
      opts_(std::move(opts)),
      now_(std::move(nowSeconds)) {
  if (!now_) now_ = [] { return wallMicros() / 1000000; };
  if (!opts_.journalPath.empty()) loadJournal();
}

std::string BookingArea::idFor(std::uint64_t seq) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "B%012llu", static_cast<unsigned long long>(seq));
  return buf;
}

// Journal record: u32 length, payload, u32 CRC of payload. Each record is a
// self-contained booking snapshot after the transition, so replay is upsert.
void BookingArea::journalAppend(const Booking& b, BookingState fromState) {
  if (opts_.journalPath.empty()) return;
  json j;
  j["id"] = b.id;
  j["ts"] = now_();
  j["from"] = std::string(bookingStateName(fromState));
  j["to"] = std::string(bookingStateName(b.state));
  j["booking"] = bookingToJson(b);
  std::string payload = j.dump();
  std::string record;
  putU32(record, static_cast<std::uint32_t>(payload.size()));
  record += payload;
  putU32(record, crc32Of(payload));

  std::ofstream f(opts_.journalPath, std::ios::binary | std::ios::app);
  if (!f) raise(Errc::StorageIo, "cannot open journal " + opts_.journalPath);
  f.write(record.data(), static_cast<std::streamsize>(record.size()));
  f.flush();
  if (!f) raise(Errc::StorageIo, "short journal write");
}

void BookingArea::loadJournal() {
  std::ifstream f(opts_.journalPath, std::ios::binary);
  if (!f) return;  // fresh ledger
  std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  f.close();

  std::size_t pos = 0;
  std::size_t validEnd = 0;
  while (pos + 8 <= data.size()) {
    ByteReader r(std::string_view(data).substr(pos));
    std::uint32_t len = r.u32();
    if (pos + 8ull + len > data.size()) break;
    std::string_view payload = r.raw(len);
    std::uint32_t crc = r.u32();
    if (crc != crc32Of(payload)) break;  // torn tail; ignore from here on
    try {
      json j = json::parse(payload);
      Booking b = bookingFromJson(j.at("booking"));
      if (b.seq >= nextSeq_) nextSeq_ = b.seq + 1;
      bookings_[b.id] = std::move(b);
    } catch (const json::exception&) {
      break;
    }
    pos += r.pos();
    validEnd = pos;
  }
  if (validEnd < data.size()) {
    std::error_code ec;
    fs::resize_file(opts_.journalPath, validEnd, ec);
  }
}

void BookingArea::compactJournal() {
  std::scoped_lock lock(mu_);
  if (opts_.journalPath.empty()) return;
  std::string tmp = opts_.journalPath + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) raise(Errc::StorageIo, "cannot open " + tmp);
    for (const auto& [id, b] : bookings_) {
      json j;
      j["id"] = b.id;
      j["ts"] = now_();
      j["from"] = std::string(bookingStateName(b.state));
      j["to"] = std::string(bookingStateName(b.state));
      j["booking"] = bookingToJson(b);
      std::string payload = j.dump();
      std::string record;
      putU32(record, static_cast<std::uint32_t>(payload.size()));
      record += payload;
      putU32(record, crc32Of(payload));
      f.write(record.data(), static_cast<std::streamsize>(record.size()));
    }
    f.flush();
    if (!f) raise(Errc::StorageIo, "short write to " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, opts_.journalPath, ec);
  if (ec) raise(Errc::StorageIo, "journal rename failed: " + ec.message());
}

Booking& BookingArea::require(const std::string& bookingId) {
  auto it = bookings_.find(bookingId);
  if (it == bookings_.end()) raise(Errc::UnknownBooking, bookingId);
  return it->second;
}

bool BookingArea::reservationLive(const Booking& b, std::uint64_t now) const {
  return b.state == BookingState::Reserved && now < b.createdAt + b.ttlSeconds;
}

std::string BookingArea::queueDelete(const Booking& source, const PhysicalLocation& loc,
                                     std::uint64_t bytes) {
  Booking d;
  d.seq = nextSeq_++;
  d.id = idFor(d.seq);
  d.lfn = source.lfn;
  d.user = source.user;
  d.state = BookingState::PendingDelete;
  d.createdAt = now_();
  d.ttlSeconds = 0;
  d.guid = source.guid;
  d.deleteLocation = loc;
  d.deleteBytes = bytes;
  journalAppend(d, BookingState::PendingDelete);
  std::string id = d.id;
  bookings_[id] = std::move(d);
  return id;
}

Booking BookingArea::reserve(const std::string& lfn, const std::string& user,
                             std::uint64_t size, std::size_t replicaCount,
                             const std::string& clientSite) {
  std::string canonical = normalizePath(lfn).str();
  std::scoped_lock lock(mu_);
  std::uint64_t now = now_();

  if (catalogue_.exists(canonical)) raise(Errc::ExistsInCatalogue, canonical);

  // An overdue reservation frees its name here, exactly as a sweep would.
  for (auto& [id, b] : bookings_) {
    if (b.state != BookingState::Reserved || b.lfn != canonical) continue;
    if (now < b.createdAt + b.ttlSeconds) raise(Errc::AlreadyReserved, canonical);
    b.state = BookingState::Expired;
    journalAppend(b, BookingState::Reserved);
    for (std::size_t i = 0; i < b.envelopes.size(); ++i)
      queueDelete(b, PhysicalLocation{b.targets[i], b.envelopes[i].turl}, b.requestedSize);
  }

  if (auto q = catalogue_.quota(user)) {
    if (q->usedFiles + 1 > q->maxFiles || q->usedBytes + size > q->maxBytes)
      raise(Errc::QuotaExceeded, user + " over quota");
  }

  std::vector<StorageElement> targets = placement_.selectTargets(clientSite, size, replicaCount);

  Booking b;
  b.seq = nextSeq_++;
  b.id = idFor(b.seq);
  b.lfn = canonical;
  b.user = user;
  b.requestedSize = size;
  b.state = BookingState::Reserved;
  b.createdAt = now;
  b.ttlSeconds = opts_.defaultTtlSeconds;
  b.guid = catalogue_.newGuid();
  for (const StorageElement& se : targets) {
    b.targets.push_back(se.name);
    b.envelopes.push_back(issueEnvelope(EnvelopeOp::Write, canonical, b.guid, se, size,
                                        std::nullopt, user, opts_.envelopeTtlSeconds, keys_,
                                        now));
  }
  journalAppend(b, BookingState::Reserved);
  Booking copy = b;
  bookings_[b.id] = std::move(b);
  return copy;
}

CatalogEntry BookingArea::commit(const std::string& bookingId, const std::string& md5,
                                 const std::vector<PhysicalLocation>& confirmedLocations) {
  std::scoped_lock lock(mu_);
  Booking& b = require(bookingId);

  if (b.state == BookingState::Committed) return decodeEntry(b.committedEntry);
  if (b.state != BookingState::Reserved)
    raise(Errc::StateConflict, bookingId + " is " + std::string(bookingStateName(b.state)));
  if (now_() >= b.createdAt + b.ttlSeconds) raise(Errc::Expired, bookingId);

  for (const PhysicalLocation& loc : confirmedLocations) {
    bool issued = false;
    for (std::size_t i = 0; i < b.envelopes.size() && !issued; ++i)
      issued = b.targets[i] == loc.seName && b.envelopes[i].turl == loc.pfn;
    if (!issued)
      raise(Errc::LocationMismatch, loc.seName + " " + loc.pfn + " was not issued for " +
                                        bookingId);
  }

  CatalogEntry entry = catalogue_.registerFile(b.lfn, b.requestedSize, md5, b.user, b.user,
                                               "755", 0, confirmedLocations, b.guid);
  b.state = BookingState::Committed;
  b.committedEntry = encodeEntry(entry);
  journalAppend(b, BookingState::Reserved);
  for (const PhysicalLocation& loc : confirmedLocations) {
    if (placement_.findSe(loc.seName)) {
      try {
        placement_.recordUsage(loc.seName, static_cast<std::int64_t>(b.requestedSize));
      } catch (const GcError&) {
        // Accounting is advisory; an over-full SE does not undo the commit.
      }
    }
  }
  return entry;
}

void BookingArea::release(const std::string& bookingId, bool keepFiles,
                          const std::vector<PhysicalLocation>& uploadedLocations) {
  std::scoped_lock lock(mu_);
  Booking& b = require(bookingId);
  if (b.state != BookingState::Reserved)
    raise(Errc::StateConflict, bookingId + " is " + std::string(bookingStateName(b.state)));
  b.state = BookingState::Released;
  journalAppend(b, BookingState::Reserved);
  if (!keepFiles)
    for (const PhysicalLocation& loc : uploadedLocations) queueDelete(b, loc, b.requestedSize);
}

std::vector<Booking> BookingArea::expireSweep(std::uint64_t nowSeconds) {
  std::scoped_lock lock(mu_);
  std::vector<Booking> expired;
  for (auto& [id, b] : bookings_) {
    if (b.state != BookingState::Reserved) continue;
    if (b.createdAt + b.ttlSeconds > nowSeconds) continue;
    b.state = BookingState::Expired;
    journalAppend(b, BookingState::Reserved);
    for (std::size_t i = 0; i < b.envelopes.size(); ++i)
      queueDelete(b, PhysicalLocation{b.targets[i], b.envelopes[i].turl}, b.requestedSize);
    expired.push_back(b);
  }
  return expired;
}

std::vector<Booking> BookingArea::nextDeletes(std::size_t limit) {
  std::scoped_lock lock(mu_);
  std::vector<Booking> out;
  for (const auto& [id, b] : bookings_)
    if (b.state == BookingState::PendingDelete) out.push_back(b);
  std::sort(out.begin(), out.end(),
            [](const Booking& a, const Booking& b) { return a.seq < b.seq; });
  if (out.size() > limit) out.resize(limit);
  return out;
}

void BookingArea::markDeleteDone(const std::string& bookingId) {
  std::scoped_lock lock(mu_);
  Booking& b = require(bookingId);
  if (b.state != BookingState::PendingDelete)
    raise(Errc::StateConflict, bookingId + " is " + std::string(bookingStateName(b.state)));
  b.state = BookingState::DeleteDone;
  journalAppend(b, BookingState::PendingDelete);
  if (placement_.findSe(b.deleteLocation.seName)) {
    try {
      placement_.recordUsage(b.deleteLocation.seName,
                             -static_cast<std::int64_t>(b.deleteBytes));
    } catch (const GcError&) {
      // Usage can legitimately be below the delta when the file was
      // registered outside the booking workflow.
    }
  }
}

std::string BookingArea::enqueuePendingDelete(const std::string& lfn, const Guid& guid,
                                              const PhysicalLocation& location,
                                              std::uint64_t sizeBytes) {
  std::scoped_lock lock(mu_);
  Booking source;
  source.lfn = lfn;
  source.guid = guid;
  return queueDelete(source, location, sizeBytes);
}

std::optional<Booking> BookingArea::get(const std::string& bookingId) const {
  std::scoped_lock lock(mu_);
  auto it = bookings_.find(bookingId);
  if (it == bookings_.end()) return std::nullopt;
  return it->second;
}

std::vector<Booking> BookingArea::all() const {
  std::scoped_lock lock(mu_);
  std::vector<Booking> out;
  out.reserve(bookings_.size());
  for (const auto& [id, b] : bookings_) out.push_back(b);
  return out;
}

}  // namespace gridcat
