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
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "gridcat/guid.hpp"
#include "gridcat/placement.hpp"

namespace gridcat {

enum class EnvelopeOp { Read, Write, Delete };

std::string_view envelopeOpName(EnvelopeOp op);
EnvelopeOp envelopeOpFromName(std::string_view name);  // throws InvalidArgument

/// Detached-signature key pair. The central service holds the private half;
/// storage elements verify with the public half. The concrete primitive
/// (Ed25519) sits behind this sign/verify contract.
class KeyPair {
 public:
  KeyPair();
  ~KeyPair();
  KeyPair(KeyPair&&) noexcept;
  KeyPair& operator=(KeyPair&&) noexcept;
  KeyPair(const KeyPair&) = delete;
  KeyPair& operator=(const KeyPair&) = delete;

  static KeyPair generate();
  static KeyPair fromPrivatePem(const std::string& pem);
  static KeyPair fromPublicPem(const std::string& pem);

  std::string privatePem() const;  // throws InvalidArgument if public-only
  std::string publicPem() const;

  bool canSign() const;
  std::string sign(std::string_view payload) const;
  bool verify(std::string_view payload, std::string_view signature) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Signed, expiring authorization for one operation against one physical
/// file on one storage element.
struct Envelope {
  EnvelopeOp operation = EnvelopeOp::Read;
  std::string lfn;
  Guid guid;
  std::string seName;
  std::string turl;  // endpoint + internal path
  std::uint64_t sizeBytes = 0;
  std::optional<std::string> md5;
  std::string user;
  std::uint64_t issuedAt = 0;   // UTC seconds
  std::uint64_t expiresAt = 0;  // UTC seconds
  std::string signature;        // detached, over payloadBytes()

  /// Canonical payload: version byte then length-prefixed fields in fixed
  /// order. Injective by construction.
  std::string payloadBytes() const;

  /// Wire form "base64(payload).base64(signature)".
  std::string encode() const;
};

enum class EnvelopeVerdict { Valid, Expired, Tampered, Malformed };

std::string_view verdictName(EnvelopeVerdict v);

/// Builds and signs an envelope. turl is derived from the storage element
/// endpoint and the GUID's internal path. Throws InvalidTtl on ttl == 0 and
/// InvalidArgument when a read envelope lacks the md5.
Envelope issueEnvelope(EnvelopeOp op, const std::string& lfn, const Guid& guid,
                       const StorageElement& se, std::uint64_t sizeBytes,
                       const std::optional<std::string>& md5, const std::string& user,
                       std::uint64_t ttlSeconds, const KeyPair& keys,
                       std::uint64_t nowSeconds);

/// Signature first, then the time window. issuedAt tolerates 30 s of clock
/// skew; expiry does not (now == expiresAt is already expired).
EnvelopeVerdict verifyEnvelope(const Envelope& e, const KeyPair& publicKey,
                               std::uint64_t nowSeconds);

/// Wire-level verification: returns Malformed on undecodable input, then
/// delegates. On success also yields the decoded envelope.
EnvelopeVerdict verifyEnvelopeWire(std::string_view wire, const KeyPair& publicKey,
                                   std::uint64_t nowSeconds,
                                   Envelope* decoded = nullptr);

/// Parses the wire form without verifying. Returns nullopt when malformed.
std::optional<Envelope> decodeEnvelope(std::string_view wire);

constexpr std::uint64_t kIssuedAtSkewSeconds = 30;

}  // namespace gridcat
