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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace gridcat {

/// CRC-32 (IEEE) over a byte range.
std::uint32_t crc32Of(std::string_view data);

/// SHA-256 digest, 32 raw bytes.
std::array<std::uint8_t, 32> sha256(std::string_view data);

std::string sha256Hex(std::string_view data);

/// Standard base64 (with padding).
std::string base64Encode(std::string_view data);
/// Returns false on invalid input.
bool base64Decode(std::string_view text, std::string& out);

}  // namespace gridcat
