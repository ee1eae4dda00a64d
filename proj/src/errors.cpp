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

#include "gridcat/errors.hpp"

namespace gridcat {

std::string_view errcName(Errc code) {
  switch (code) {
    case Errc::MalformedPath: return "malformed-path";
    case Errc::InvalidArgument: return "invalid-argument";
    case Errc::NotFound: return "not-found";
    case Errc::Exists: return "exists";
    case Errc::ParentMissing: return "parent-missing";
    case Errc::NotADirectory: return "not-a-directory";
    case Errc::DirectoryNotEmpty: return "directory-not-empty";
    case Errc::LinkCycle: return "link-cycle";
    case Errc::QuotaExceeded: return "quota-exceeded";
    case Errc::Unavailable: return "unavailable";
    case Errc::InsufficientNodes: return "insufficient-nodes";
    case Errc::InsufficientCapacity: return "insufficient-capacity";
    case Errc::UnknownNode: return "unknown-node";
    case Errc::UnknownSe: return "unknown-se";
    case Errc::UnknownBooking: return "unknown-booking";
    case Errc::UnknownGuid: return "unknown-guid";
    case Errc::AlreadyReserved: return "already-reserved";
    case Errc::ExistsInCatalogue: return "exists-in-catalogue";
    case Errc::StateConflict: return "state-conflict";
    case Errc::LocationMismatch: return "location-mismatch";
    case Errc::Expired: return "expired";
    case Errc::InvalidTtl: return "invalid-ttl";
    case Errc::NothingToSplit: return "nothing-to-split";
    case Errc::StorageIo: return "storage-io";
    case Errc::CorruptSnapshot: return "corrupt-snapshot";
    case Errc::TruncatedFile: return "truncated-file";
    case Errc::VersionMismatch: return "version-mismatch";
  }
  return "unknown";
}

}  // namespace gridcat
