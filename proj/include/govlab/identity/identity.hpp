#pragma once

// Pseudonymous participant identities. Ed25519 keypairs; the address is the
// last 20 bytes of SHA-256(public_key), lowercase hex with a 0x prefix.

#include "govlab/core/bytes.hpp"

#include <optional>
#include <span>
#include <string>

namespace govlab::identity {

inline constexpr std::size_t kSeedSize = 32;
inline constexpr std::size_t kPublicKeySize = 32;
inline constexpr std::size_t kSignatureSize = 64;

using Address = std::string;

/// Throws Error(kInvalidArgument, "BAD_KEY") unless the key is 32 bytes.
Address derive_address(std::span<const std::uint8_t> public_key);

/// True for "0x" followed by 40 lowercase hex characters.
bool is_address(std::string_view s);

struct SignedMessage {
  Bytes payload;
  Address signer;
  Bytes signature;
};

/// Owns the secret key. There is intentionally no serializer for it.
class Identity {
 public:
  const Bytes& public_key() const noexcept { return public_key_; }
  std::string public_key_hex() const { return to_hex(public_key_); }
  const Address& address() const noexcept { return address_; }

  /// Throws Error(kInvalidArgument, "EMPTY_PAYLOAD") for an empty payload.
  SignedMessage sign(std::span<const std::uint8_t> payload) const;
  SignedMessage sign(std::string_view payload) const;

 private:
  friend Identity register_identity(std::optional<std::span<const std::uint8_t>> seed);
  Identity() = default;

  Bytes public_key_;
  Bytes secret_key_;
  Address address_;
};

/// Deterministic for a given seed; a fresh random seed otherwise.
/// Throws Error(kInvalidArgument, "BAD_SEED") when the seed is not 32 bytes.
Identity register_identity(std::optional<std::span<const std::uint8_t>> seed = std::nullopt);

/// Convenience for synthetic populations: seed = SHA-256(label).
Identity identity_from_label(std::string_view label);

/// Never throws; malformed keys or signatures verify as false.
bool verify(std::span<const std::uint8_t> payload, std::span<const std::uint8_t> signature,
            std::span<const std::uint8_t> public_key);

}  // namespace govlab::identity
