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

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridcat {

/// Machine-readable error taxonomy shared by all modules. Every code maps to
/// exactly one HTTP status and one CLI exit code (see service.cpp).
enum class Errc {
  MalformedPath,
  InvalidArgument,
  NotFound,
  Exists,
  ParentMissing,
  NotADirectory,
  DirectoryNotEmpty,
  LinkCycle,
  QuotaExceeded,
  Unavailable,
  InsufficientNodes,
  InsufficientCapacity,
  UnknownNode,
  UnknownSe,
  UnknownBooking,
  UnknownGuid,
  AlreadyReserved,
  ExistsInCatalogue,
  StateConflict,
  LocationMismatch,
  Expired,
  InvalidTtl,
  NothingToSplit,
  StorageIo,
  CorruptSnapshot,
  TruncatedFile,
  VersionMismatch,
};

std::string_view errcName(Errc code);

class GcError : public std::runtime_error {
 public:
  GcError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errcName(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw GcError(code, what);
}

}  // namespace gridcat
