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

#include "gridcat/envelope.hpp"

#include <openssl/evp.h>
#include <openssl/pem.h>

#include "gridcat/digest.hpp"
#include "gridcat/errors.hpp"
#include "gridcat/util.hpp"

namespace gridcat {

namespace {
constexpr std::uint8_t kPayloadVersion = 1;
}

std::string_view envelopeOpName(EnvelopeOp op) {
  switch (op) {
    case EnvelopeOp::Read: return "read";
    case EnvelopeOp::Write: return "write";
    case EnvelopeOp::Delete: return "delete";
  }
  return "?";
}

EnvelopeOp envelopeOpFromName(std::string_view name) {
  if (name == "read") return EnvelopeOp::Read;
  if (name == "write") return EnvelopeOp::Write;
  if (name == "delete") return EnvelopeOp::Delete;
  raise(Errc::InvalidArgument, "bad envelope operation: " + std::string(name));
}

std::string_view verdictName(EnvelopeVerdict v) {
  switch (v) {
    case EnvelopeVerdict::Valid: return "valid";
    case EnvelopeVerdict::Expired: return "expired";
    case EnvelopeVerdict::Tampered: return "tampered";
    case EnvelopeVerdict::Malformed: return "malformed";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// KeyPair over OpenSSL EVP (Ed25519).
// ---------------------------------------------------------------------------

struct KeyPair::Impl {
  EVP_PKEY* key = nullptr;
  bool hasPrivate = false;

  ~Impl() {
    if (key) EVP_PKEY_free(key);
  }
};

KeyPair::KeyPair() : impl_(std::make_unique<Impl>()) {}
KeyPair::~KeyPair() = default;
KeyPair::KeyPair(KeyPair&&) noexcept = default;
KeyPair& KeyPair::operator=(KeyPair&&) noexcept = default;

KeyPair KeyPair::generate() {
  KeyPair kp;
  EVP_PKEY_CTX* ctx = EVP_PKEY_CTX_new_id(EVP_PKEY_ED25519, nullptr);
  if (!ctx) raise(Errc::InvalidArgument, "cannot create key context");
  EVP_PKEY* key = nullptr;
  if (EVP_PKEY_keygen_init(ctx) != 1 || EVP_PKEY_keygen(ctx, &key) != 1) {
    EVP_PKEY_CTX_free(ctx);
    raise(Errc::InvalidArgument, "key generation failed");
  }
  EVP_PKEY_CTX_free(ctx);
  kp.impl_->key = key;
  kp.impl_->hasPrivate = true;
  return kp;
}

KeyPair KeyPair::fromPrivatePem(const std::string& pem) {
  BIO* bio = BIO_new_mem_buf(pem.data(), static_cast<int>(pem.size()));
  EVP_PKEY* key = PEM_read_bio_PrivateKey(bio, nullptr, nullptr, nullptr);
  BIO_free(bio);
  if (!key) raise(Errc::InvalidArgument, "cannot parse private key PEM");
  KeyPair kp;
  kp.impl_->key = key;
  kp.impl_->hasPrivate = true;
  return kp;
}

KeyPair KeyPair::fromPublicPem(const std::string& pem) {
  BIO* bio = BIO_new_mem_buf(pem.data(), static_cast<int>(pem.size()));
  EVP_PKEY* key = PEM_read_bio_PUBKEY(bio, nullptr, nullptr, nullptr);
  BIO_free(bio);
  if (!key) raise(Errc::InvalidArgument, "cannot parse public key PEM");
  KeyPair kp;
  kp.impl_->key = key;
  kp.impl_->hasPrivate = false;
  return kp;
}

std::string KeyPair::privatePem() const {
  if (!impl_->hasPrivate) raise(Errc::InvalidArgument, "no private key");
  BIO* bio = BIO_new(BIO_s_mem());
  PEM_write_bio_PrivateKey(bio, impl_->key, nullptr, nullptr, 0, nullptr, nullptr);
  char* data = nullptr;
  long n = BIO_get_mem_data(bio, &data);
  std::string out(data, static_cast<std::size_t>(n));
  BIO_free(bio);
  return out;
}

std::string KeyPair::publicPem() const {
  BIO* bio = BIO_new(BIO_s_mem());
  PEM_write_bio_PUBKEY(bio, impl_->key);
  char* data = nullptr;
  long n = BIO_get_mem_data(bio, &data);
  std::string out(data, static_cast<std::size_t>(n));
  BIO_free(bio);
  return out;
}

bool KeyPair::canSign() const { return impl_->hasPrivate; }

std::string KeyPair::sign(std::string_view payload) const {
  if (!impl_->hasPrivate) raise(Errc::InvalidArgument, "signing needs the private key");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  std::size_t sigLen = 0;
  if (EVP_DigestSignInit(ctx, nullptr, nullptr, nullptr, impl_->key) != 1 ||
      EVP_DigestSign(ctx, nullptr, &sigLen,
                     reinterpret_cast<const unsigned char*>(payload.data()), payload.size()) != 1) {
    EVP_MD_CTX_free(ctx);
    raise(Errc::InvalidArgument, "signing failed");
  }
  std::string sig(sigLen, '\0');
  if (EVP_DigestSign(ctx, reinterpret_cast<unsigned char*>(sig.data()), &sigLen,
                     reinterpret_cast<const unsigned char*>(payload.data()), payload.size()) != 1) {
    EVP_MD_CTX_free(ctx);
    raise(Errc::InvalidArgument, "signing failed");
  }
  EVP_MD_CTX_free(ctx);
  sig.resize(sigLen);
  return sig;
}

bool KeyPair::verify(std::string_view payload, std::string_view signature) const {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  bool ok = EVP_DigestVerifyInit(ctx, nullptr, nullptr, nullptr, impl_->key) == 1 &&
            EVP_DigestVerify(ctx, reinterpret_cast<const unsigned char*>(signature.data()),
                             signature.size(),
                             reinterpret_cast<const unsigned char*>(payload.data()),
                             payload.size()) == 1;
  EVP_MD_CTX_free(ctx);
  return ok;
}

// ---------------------------------------------------------------------------
// Envelope payload and wire form.
// ---------------------------------------------------------------------------

std::string Envelope::payloadBytes() const {
  std::string out;
  putU8(out, kPayloadVersion);
  putBytes(out, envelopeOpName(operation));
  putBytes(out, lfn);
  putBytes(out, guid.rawView());
  putBytes(out, seName);
  putBytes(out, turl);
  putU64(out, sizeBytes);
  putBytes(out, md5 ? *md5 : "");
  putBytes(out, user);
  putU64(out, issuedAt);
  putU64(out, expiresAt);
  return out;
}

std::string Envelope::encode() const {
  return base64Encode(payloadBytes()) + "." + base64Encode(signature);
}

namespace {

std::optional<Envelope> parsePayload(std::string_view payload) {
  try {
    ByteReader r(payload);
    if (r.u8() != kPayloadVersion) return std::nullopt;
    Envelope e;
    e.operation = envelopeOpFromName(r.bytes());
    e.lfn = std::string(r.bytes());
    std::string_view guidRaw = r.bytes();
    if (guidRaw.size() != 16) return std::nullopt;
    for (std::size_t i = 0; i < 16; ++i) e.guid.bytes[i] = static_cast<std::uint8_t>(guidRaw[i]);
    e.seName = std::string(r.bytes());
    e.turl = std::string(r.bytes());
    e.sizeBytes = r.u64();
    std::string md5(r.bytes());
    if (!md5.empty()) e.md5 = std::move(md5);
    e.user = std::string(r.bytes());
    e.issuedAt = r.u64();
    e.expiresAt = r.u64();
    if (!r.atEnd()) return std::nullopt;
    return e;
  } catch (const GcError&) {
    return std::nullopt;
  }
}

}  // namespace

Envelope issueEnvelope(EnvelopeOp op, const std::string& lfn, const Guid& guid,
                       const StorageElement& se, std::uint64_t sizeBytes,
                       const std::optional<std::string>& md5, const std::string& user,
                       std::uint64_t ttlSeconds, const KeyPair& keys,
                       std::uint64_t nowSeconds) {
  if (ttlSeconds == 0) raise(Errc::InvalidTtl, "envelope ttl must be positive");
  if (op == EnvelopeOp::Read && !md5) raise(Errc::InvalidArgument, "read envelope requires md5");
  Envelope e;
  e.operation = op;
  e.lfn = lfn;
  e.guid = guid;
  e.seName = se.name;
  e.turl = se.endpoint + guidToInternalPath(guid);
  e.sizeBytes = sizeBytes;
  e.md5 = md5;
  e.user = user;
  e.issuedAt = nowSeconds;
  e.expiresAt = nowSeconds + ttlSeconds;
  e.signature = keys.sign(e.payloadBytes());
  return e;
}

EnvelopeVerdict verifyEnvelope(const Envelope& e, const KeyPair& publicKey,
                               std::uint64_t nowSeconds) {
  if (e.expiresAt <= e.issuedAt) return EnvelopeVerdict::Malformed;
  if (!publicKey.verify(e.payloadBytes(), e.signature)) return EnvelopeVerdict::Tampered;
  if (nowSeconds + kIssuedAtSkewSeconds < e.issuedAt) return EnvelopeVerdict::Expired;
  if (nowSeconds >= e.expiresAt) return EnvelopeVerdict::Expired;
  return EnvelopeVerdict::Valid;
}

std::optional<Envelope> decodeEnvelope(std::string_view wire) {
  std::size_t dot = wire.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  std::string payload, sig;
  if (!base64Decode(wire.substr(0, dot), payload)) return std::nullopt;
  if (!base64Decode(wire.substr(dot + 1), sig)) return std::nullopt;
  auto e = parsePayload(payload);
  if (!e) return std::nullopt;
  e->signature = std::move(sig);
  return e;
}

EnvelopeVerdict verifyEnvelopeWire(std::string_view wire, const KeyPair& publicKey,
                                   std::uint64_t nowSeconds, Envelope* decoded) {
  std::size_t dot = wire.find('.');
  if (dot == std::string_view::npos) return EnvelopeVerdict::Malformed;
  std::string payload, sig;
  if (!base64Decode(wire.substr(0, dot), payload)) return EnvelopeVerdict::Malformed;
  if (!base64Decode(wire.substr(dot + 1), sig)) return EnvelopeVerdict::Malformed;
  // Signature over the raw payload bytes comes first: any bit flip inside a
  // parseable payload must read as tampering, not malformation.
  if (!publicKey.verify(payload, sig)) return EnvelopeVerdict::Tampered;
  auto e = parsePayload(payload);
  if (!e) return EnvelopeVerdict::Malformed;
  e->signature = std::move(sig);
  EnvelopeVerdict v = verifyEnvelope(*e, publicKey, nowSeconds);
  if (decoded && v != EnvelopeVerdict::Malformed) *decoded = std::move(*e);
  return v;
}

}  // namespace gridcat
