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

#include <string>
#include <string_view>

namespace gridcat {

/// A catalogue entry key: normalized absolute parent directory (always ends
/// in '/') plus a leaf name. The root is the single entry with parent "/"
/// and an empty child.
struct LogicalPath {
  std::string parent;
  std::string child;

  bool isRoot() const { return parent == "/" && child.empty(); }

  /// Full path string; "/" for the root, no trailing slash otherwise.
  std::string str() const { return isRoot() ? "/" : parent + child; }

  /// Partition key when this entry is used as a directory.
  std::string dirKey() const { return isRoot() ? "/" : parent + child + "/"; }

  friend bool operator==(const LogicalPath&, const LogicalPath&) = default;
  friend auto operator<=>(const LogicalPath& a, const LogicalPath& b) {
    if (auto c = a.parent <=> b.parent; c != 0) return c;
    return a.child <=> b.child;
  }
};

/// Canonical (parent, child) split of an absolute path. Collapses duplicate
/// slashes and '.' segments, resolves '..'. Throws MalformedPath on relative
/// paths, NUL bytes, or '..' escaping the root.
LogicalPath normalizePath(std::string_view raw);

/// Parent directory of a normalized directory key ("/a/b/" -> "/a/").
std::string parentOfDir(std::string_view dirKey);

}  // namespace gridcat
