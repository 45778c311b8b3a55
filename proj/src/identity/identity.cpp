#include "govlab/identity/identity.hpp"

#include "govlab/core/crypto.hpp"
#include "govlab/core/error.hpp"

#include <sodium.h>

namespace govlab::identity {

static_assert(crypto_sign_SEEDBYTES == kSeedSize);
static_assert(crypto_sign_PUBLICKEYBYTES == kPublicKeySize);
static_assert(crypto_sign_BYTES == kSignatureSize);

Address derive_address(std::span<const std::uint8_t> public_key) {
  if (public_key.size() != kPublicKeySize) {
    throw Error(ErrorKind::kInvalidArgument, "BAD_KEY",
                "public key must be " + std::to_string(kPublicKeySize) + " bytes, got " +
                    std::to_string(public_key.size()));
  }
  Digest h = sha256(public_key);
  return "0x" + to_hex(std::span(h).subspan(h.size() - 20));
}

bool is_address(std::string_view s) {
  if (s.size() != 42 || !s.starts_with("0x")) return false;
  for (char c : s.substr(2)) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

Identity register_identity(std::optional<std::span<const std::uint8_t>> seed) {
  ensure_sodium();
  Bytes entropy;
  if (seed) {
    if (seed->size() != kSeedSize) {
      throw Error(ErrorKind::kInvalidArgument, "BAD_SEED",
                  "seed must be 32 bytes, got " + std::to_string(seed->size()));
    }
    entropy.assign(seed->begin(), seed->end());
  } else {
    entropy = random_bytes(kSeedSize);
  }

  Identity id;
  id.public_key_.resize(crypto_sign_PUBLICKEYBYTES);
  id.secret_key_.resize(crypto_sign_SECRETKEYBYTES);
  crypto_sign_seed_keypair(id.public_key_.data(), id.secret_key_.data(), entropy.data());
  sodium_memzero(entropy.data(), entropy.size());
  id.address_ = derive_address(id.public_key_);
  return id;
}

Identity identity_from_label(std::string_view label) {
  Digest seed = sha256(label);
  return register_identity(std::span<const std::uint8_t>(seed));
}

SignedMessage Identity::sign(std::span<const std::uint8_t> payload) const {
  if (payload.empty()) throw Error(ErrorKind::kInvalidArgument, "EMPTY_PAYLOAD", "cannot sign an empty payload");
  SignedMessage msg;
  msg.payload.assign(payload.begin(), payload.end());
  msg.signer = address_;
  msg.signature.resize(crypto_sign_BYTES);
  crypto_sign_detached(msg.signature.data(), nullptr, payload.data(), payload.size(), secret_key_.data());
  return msg;
}

SignedMessage Identity::sign(std::string_view payload) const {
  return sign(std::span(reinterpret_cast<const std::uint8_t*>(payload.data()), payload.size()));
}

bool verify(std::span<const std::uint8_t> payload, std::span<const std::uint8_t> signature,
            std::span<const std::uint8_t> public_key) {
  if (signature.size() != crypto_sign_BYTES || public_key.size() != crypto_sign_PUBLICKEYBYTES) return false;
  ensure_sodium();
  return crypto_sign_verify_detached(signature.data(), payload.data(), payload.size(), public_key.data()) == 0;
}

}  // namespace govlab::identity
