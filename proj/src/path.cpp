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

#include "gridcat/path.hpp"

#include <vector>

#include "gridcat/errors.hpp"

namespace gridcat {

LogicalPath normalizePath(std::string_view raw) {
  if (raw.empty()) raise(Errc::MalformedPath, "empty path");
  if (raw.front() != '/') raise(Errc::MalformedPath, "relative path: " + std::string(raw));
  if (raw.find('\0') != std::string_view::npos) raise(Errc::MalformedPath, "NUL byte in path");

  std::vector<std::string_view> stack;
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && raw[i] == '/') ++i;
    std::size_t start = i;
    while (i < raw.size() && raw[i] != '/') ++i;
    std::string_view seg = raw.substr(start, i - start);
    if (seg.empty() || seg == ".") continue;
    if (seg == "..") {
      if (stack.empty()) raise(Errc::MalformedPath, "'..' escapes root: " + std::string(raw));
      stack.pop_back();
      continue;
    }
    stack.push_back(seg);
  }

  if (stack.empty()) return LogicalPath{"/", ""};

  std::string parent = "/";
  for (std::size_t k = 0; k + 1 < stack.size(); ++k) {
    parent.append(stack[k]);
    parent.push_back('/');
  }
  return LogicalPath{std::move(parent), std::string(stack.back())};
}

std::string parentOfDir(std::string_view dirKey) {
  if (dirKey == "/") return "/";
  // strip trailing slash, then the leaf.
  std::size_t end = dirKey.size() - 1;
  std::size_t slash = dirKey.rfind('/', end - 1);
  return std::string(dirKey.substr(0, slash + 1));
}

}  // namespace gridcat
