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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridcat/guid.hpp"
#include "gridcat/path.hpp"

namespace gridcat {

/// One physical replica: storage element name plus transport URL of the form
/// protocol://host:port//internal/path
struct PhysicalLocation {
  std::string seName;
  std::string pfn;

  friend bool operator==(const PhysicalLocation&, const PhysicalLocation&) = default;
  friend auto operator<=>(const PhysicalLocation&, const PhysicalLocation&) = default;
};

/// Split of a transport URL into protocol, authority and internal path.
struct PfnParts {
  std::string protocol;
  std::string authority;
  std::string internalPath;  // begins with "//"
};

/// Throws InvalidArgument unless the URL has non-empty protocol and authority
/// and an internal path starting with "//".
PfnParts parsePfn(std::string_view pfn);

enum class EntryType : char { File = 'f', Link = 'l', Directory = 'd' };

char entryTypeChar(EntryType t);
EntryType entryTypeFromChar(char c);  // throws InvalidArgument

/// One namespace row: a file, symbolic link or directory, with physical
/// locations embedded for files.
struct CatalogEntry {
  LogicalPath path;
  std::uint64_t ctime = 0;  // UTC seconds
  std::string owner;
  std::string gowner;
  std::uint64_t jobid = 0;
  std::optional<std::string> link;  // absolute target, links only
  std::optional<std::string> md5;   // 32-char lowercase hex, files only
  std::string perm = "755";         // 3-digit octal
  std::uint64_t size = 0;
  EntryType type = EntryType::File;
  std::vector<PhysicalLocation> pfns;
  Guid guid;

  bool isDirectory() const { return type == EntryType::Directory; }
  bool isLink() const { return type == EntryType::Link; }
  bool isFile() const { return type == EntryType::File; }

  friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

/// Checks all per-type field invariants; throws InvalidArgument on violation.
void validateEntry(const CatalogEntry& e);

/// Canonical wire encoding: "key=value" lines in fixed field order
/// [path, child, ctime, owner, gowner, jobid, link, md5, perm, size, type,
/// pfns, guid], values escaped, absent optionals rendered empty, pfns as a
/// JSON-style array of {se, pfn} objects. Deterministic and injective.
std::string encodeEntry(const CatalogEntry& e);

/// Strict inverse of encodeEntry; throws InvalidArgument on any deviation.
CatalogEntry decodeEntry(std::string_view data);

/// Renders just the pfns array (also used by the HTTP layer).
std::string renderPfns(const std::vector<PhysicalLocation>& pfns);
std::vector<PhysicalLocation> parsePfns(std::string_view rendered);

}  // namespace gridcat
