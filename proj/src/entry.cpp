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

#include "gridcat/entry.hpp"

#include <charconv>
#include <cstdio>

#include "gridcat/errors.hpp"
#include "gridcat/util.hpp"

namespace gridcat {

PfnParts parsePfn(std::string_view pfn) {
  std::size_t sep = pfn.find("://");
  if (sep == std::string_view::npos || sep == 0)
    raise(Errc::InvalidArgument, "pfn missing protocol: " + std::string(pfn));
  std::string_view rest = pfn.substr(sep + 3);
  std::size_t internal = rest.find("//");
  if (internal == std::string_view::npos || internal == 0)
    raise(Errc::InvalidArgument, "pfn missing internal path: " + std::string(pfn));
  PfnParts parts;
  parts.protocol = std::string(pfn.substr(0, sep));
  parts.authority = std::string(rest.substr(0, internal));
  parts.internalPath = std::string(rest.substr(internal));
  return parts;
}

char entryTypeChar(EntryType t) { return static_cast<char>(t); }

EntryType entryTypeFromChar(char c) {
  switch (c) {
    case 'f': return EntryType::File;
    case 'l': return EntryType::Link;
    case 'd': return EntryType::Directory;
  }
  raise(Errc::InvalidArgument, std::string("bad entry type: ") + c);
}

namespace {

bool isOctalPerm(std::string_view s) {
  if (s.size() != 3) return false;
  for (char c : s)
    if (c < '0' || c > '7') return false;
  return true;
}

bool isMd5(std::string_view s) {
  if (s.size() != 32) return false;
  for (char c : s)
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  return true;
}

std::uint64_t parseU64(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    raise(Errc::InvalidArgument, std::string("bad number for ") + what);
  return v;
}

void jsonEscapeInto(std::string& out, std::string_view s) {
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
}

std::string jsonUnescape(std::string_view s, std::size_t& i, char terminator) {
  std::string out;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == terminator) return out;
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (++i >= s.size()) raise(Errc::InvalidArgument, "truncated escape in pfns");
    switch (s[i]) {
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 't': out.push_back('\t'); break;
      case 'u': {
        if (i + 4 >= s.size()) raise(Errc::InvalidArgument, "truncated \\u in pfns");
        std::string hex(s.substr(i + 1, 4));
        out.push_back(static_cast<char>(std::stoi(hex, nullptr, 16)));
        i += 4;
        break;
      }
      default: raise(Errc::InvalidArgument, "bad escape in pfns");
    }
  }
  raise(Errc::InvalidArgument, "unterminated string in pfns");
}

void expect(std::string_view s, std::size_t& i, char c) {
  if (i >= s.size() || s[i] != c)
    raise(Errc::InvalidArgument, std::string("expected '") + c + "' in pfns");
  ++i;
}

void expectLit(std::string_view s, std::size_t& i, std::string_view lit) {
  if (s.substr(i, lit.size()) != lit)
    raise(Errc::InvalidArgument, "expected '" + std::string(lit) + "' in pfns");
  i += lit.size();
}

}  // namespace

void validateEntry(const CatalogEntry& e) {
  if (!e.path.parent.starts_with('/') || !e.path.parent.ends_with('/'))
    raise(Errc::InvalidArgument, "bad parent: " + e.path.parent);
  LogicalPath renorm = normalizePath(e.path.str());
  if (renorm != e.path) raise(Errc::InvalidArgument, "non-canonical path: " + e.path.str());
  if (e.path.child.empty() && !e.path.isRoot())
    raise(Errc::InvalidArgument, "empty child outside root");
  if (!isOctalPerm(e.perm)) raise(Errc::InvalidArgument, "bad perm: " + e.perm);
  switch (e.type) {
    case EntryType::File:
      if (!e.md5 || !isMd5(*e.md5)) raise(Errc::InvalidArgument, "file requires md5");
      if (e.link) raise(Errc::InvalidArgument, "file with link");
      for (const auto& loc : e.pfns) parsePfn(loc.pfn);
      break;
    case EntryType::Link:
      if (!e.link || e.link->empty() || (*e.link)[0] != '/')
        raise(Errc::InvalidArgument, "link requires absolute target");
      if (!e.pfns.empty() || e.md5 || e.size != 0)
        raise(Errc::InvalidArgument, "link must have no pfns/md5/size");
      break;
    case EntryType::Directory:
      if (!e.pfns.empty() || e.md5 || e.link || e.size != 0)
        raise(Errc::InvalidArgument, "directory must have no pfns/md5/link/size");
      break;
  }
}

std::string renderPfns(const std::vector<PhysicalLocation>& pfns) {
  std::string out = "[";
  for (std::size_t i = 0; i < pfns.size(); ++i) {
    if (i) out.push_back(',');
    out += "{\"se\":\"";
    jsonEscapeInto(out, pfns[i].seName);
    out += "\",\"pfn\":\"";
    jsonEscapeInto(out, pfns[i].pfn);
    out += "\"}";
  }
  out.push_back(']');
  return out;
}

std::vector<PhysicalLocation> parsePfns(std::string_view s) {
  std::vector<PhysicalLocation> out;
  std::size_t i = 0;
  expect(s, i, '[');
  if (i < s.size() && s[i] == ']') {
    ++i;
  } else {
    while (true) {
      PhysicalLocation loc;
      expectLit(s, i, "{\"se\":\"");
      loc.seName = jsonUnescape(s, i, '"');
      ++i;
      expectLit(s, i, ",\"pfn\":\"");
      loc.pfn = jsonUnescape(s, i, '"');
      ++i;
      expect(s, i, '}');
      out.push_back(std::move(loc));
      if (i < s.size() && s[i] == ',') {
        ++i;
        continue;
      }
      expect(s, i, ']');
      break;
    }
  }
  if (i != s.size()) raise(Errc::InvalidArgument, "trailing bytes after pfns");
  return out;
}

static constexpr std::string_view kFieldNames[] = {
    "path", "child", "ctime", "owner", "gowner", "jobid", "link",
    "md5",  "perm",  "size",  "type",  "pfns",   "guid",
};

std::string encodeEntry(const CatalogEntry& e) {
  std::string out;
  auto field = [&out](std::string_view key, std::string_view value) {
    out.append(key);
    out.push_back('=');
    out.append(escapeField(value));
    out.push_back('\n');
  };
  field("path", e.path.parent);
  field("child", e.path.child);
  field("ctime", std::to_string(e.ctime));
  field("owner", e.owner);
  field("gowner", e.gowner);
  field("jobid", std::to_string(e.jobid));
  field("link", e.link ? *e.link : "");
  field("md5", e.md5 ? *e.md5 : "");
  field("perm", e.perm);
  field("size", e.type == EntryType::File ? std::to_string(e.size) : "");
  field("type", std::string(1, entryTypeChar(e.type)));
  field("pfns", renderPfns(e.pfns));
  field("guid", e.guid.text());
  return out;
}

CatalogEntry decodeEntry(std::string_view data) {
  std::vector<std::string> values;
  values.reserve(13);
  std::size_t pos = 0;
  for (std::string_view key : kFieldNames) {
    std::size_t eol = data.find('\n', pos);
    if (eol == std::string_view::npos) raise(Errc::InvalidArgument, "truncated entry encoding");
    std::string_view line = data.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.substr(0, key.size()) != key || line.size() < key.size() + 1 ||
        line[key.size()] != '=')
      raise(Errc::InvalidArgument, "expected field " + std::string(key));
    values.push_back(unescapeField(line.substr(key.size() + 1)));
  }
  if (pos != data.size()) raise(Errc::InvalidArgument, "trailing bytes after entry");

  CatalogEntry e;
  e.path.parent = values[0];
  e.path.child = values[1];
  e.ctime = parseU64(values[2], "ctime");
  e.owner = values[3];
  e.gowner = values[4];
  e.jobid = parseU64(values[5], "jobid");
  if (!values[6].empty()) e.link = values[6];
  if (!values[7].empty()) e.md5 = values[7];
  e.perm = values[8];
  e.size = values[9].empty() ? 0 : parseU64(values[9], "size");
  if (values[10].size() != 1) raise(Errc::InvalidArgument, "bad type field");
  e.type = entryTypeFromChar(values[10][0]);
  e.pfns = parsePfns(values[11]);
  e.guid = Guid::parse(values[12]);
  return e;
}

}  // namespace gridcat
