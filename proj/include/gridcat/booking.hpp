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
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gridcat/catalogue.hpp"
#include "gridcat/envelope.hpp"

namespace gridcat {

enum class BookingState { Reserved, Committed, Released, Expired, PendingDelete, DeleteDone };

std::string_view bookingStateName(BookingState s);
BookingState bookingStateFromName(std::string_view name);

/// Reservation record driving the reserve -> upload -> commit/release file
/// registration lifecycle, or one pending storage-side deletion.
struct Booking {
  std::string id;
  std::uint64_t seq = 0;  // creation order, drives delete FIFO
  std::string lfn;
  std::string user;
  std::uint64_t requestedSize = 0;
  BookingState state = BookingState::Reserved;
  std::uint64_t createdAt = 0;  // UTC seconds
  std::uint64_t ttlSeconds = 0;
  Guid guid;  // assigned at reservation; the registered file keeps it
  std::vector<Envelope> envelopes;
  std::vector<std::string> targets;  // SE names, aligned with envelopes
  // For pending-delete bookings:
  PhysicalLocation deleteLocation;
  std::uint64_t deleteBytes = 0;
  // Exactly-once commit: canonical encoding of the registered entry.
  std::string committedEntry;
};

struct BookingAreaOptions {
  std::uint64_t defaultTtlSeconds = 24 * 3600;
  std::uint64_t envelopeTtlSeconds = 3600;
  std::string journalPath;  // empty: in-memory ledger (tests only)
};

/// Non-volatile reservation ledger. State transitions append to a
/// CRC-protected journal so a restart reproduces the exact ledger. Also
/// implements the catalogue's DeleteSink, queueing storage-side deletions.
class BookingArea : public DeleteSink {
 public:
  BookingArea(Catalogue& catalogue, PlacementService& placement, const KeyPair& keys,
              BookingAreaOptions opts, std::function<std::uint64_t()> nowSeconds);

  /// Checks quota and catalogue absence, picks targets, issues one write
  /// envelope per target, persists the reservation.
  Booking reserve(const std::string& lfn, const std::string& user, std::uint64_t size,
                  std::size_t replicaCount, const std::string& clientSite);

  /// Registers the file with the confirmed locations. Exactly-once: a
  /// repeated commit returns the original entry without re-registering.
  CatalogEntry commit(const std::string& bookingId, const std::string& md5,
                      const std::vector<PhysicalLocation>& confirmedLocations);

  /// Abandons a reservation. Locations the client reports as uploaded are
  /// queued for deletion unless keepFiles is set.
  void release(const std::string& bookingId, bool keepFiles,
               const std::vector<PhysicalLocation>& uploadedLocations = {});

  /// Moves overdue reservations to expired and queues their targets for
  /// cleanup. Idempotent for a fixed now.
  std::vector<Booking> expireSweep(std::uint64_t nowSeconds);

  /// Oldest pending-delete bookings, FIFO. Does not change state.
  std::vector<Booking> nextDeletes(std::size_t limit);

  /// Completes one deletion: state to delete-done, SE usage decremented.
  void markDeleteDone(const std::string& bookingId);

  // DeleteSink
  std::string enqueuePendingDelete(const std::string& lfn, const Guid& guid,
                                   const PhysicalLocation& location,
                                   std::uint64_t sizeBytes) override;

  std::optional<Booking> get(const std::string& bookingId) const;
  std::vector<Booking> all() const;

  /// Rewrites the journal to one record per live booking.
  void compactJournal();

  const BookingAreaOptions& options() const { return opts_; }

 private:
  std::string nextId();
  void journalAppend(const Booking& b, BookingState fromState);
  void loadJournal();
  Booking& require(const std::string& bookingId);
  void queueDelete(const Booking& source, const PhysicalLocation& loc, std::uint64_t bytes);
  bool reservationLive(const Booking& b, std::uint64_t now) const;

  Catalogue& catalogue_;
  PlacementService& placement_;
  const KeyPair& keys_;
  BookingAreaOptions opts_;
  std::function<std::uint64_t()> now_;

  mutable std::mutex mu_;
  std::map<std::string, Booking> bookings_;
  std::uint64_t nextSeq_ = 1;
};

}  // namespace gridcat
