#include "govlab/core/bytes.hpp"
#include "govlab/core/crypto.hpp"
#include "govlab/core/error.hpp"

#include <sodium.h>

#include <mutex>

namespace govlab {

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw Error(ErrorKind::kIo, "CRYPTO_INIT", "libsodium initialisation failed");
  });
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

namespace {
int nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.starts_with("0x")) hex.remove_prefix(2);
  if (hex.size() % 2 != 0) throw Error(ErrorKind::kInvalidArgument, "BAD_HEX", "hex string has odd length");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]);
    int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorKind::kInvalidArgument, "BAD_HEX", "invalid hex character");
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return out;
}

Digest digest_from_hex(std::string_view hex) {
  Bytes raw = from_hex(hex);
  if (raw.size() != 32) throw Error(ErrorKind::kInvalidArgument, "BAD_HEX", "digest must be 32 bytes");
  Digest d{};
  std::copy(raw.begin(), raw.end(), d.begin());
  return d;
}

Digest sha256(std::span<const std::uint8_t> data) {
  ensure_sodium();
  Digest out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Digest sha256(std::string_view data) {
  return sha256(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

Sha256Stream::Sha256Stream() {
  ensure_sodium();
  state_ = std::make_unique<crypto_hash_sha256_state>();
  crypto_hash_sha256_init(state_.get());
}

Sha256Stream::~Sha256Stream() = default;

Sha256Stream& Sha256Stream::update(std::span<const std::uint8_t> data) {
  crypto_hash_sha256_update(state_.get(), data.data(), data.size());
  return *this;
}

Sha256Stream& Sha256Stream::update(std::string_view data) {
  return update(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

Sha256Stream& Sha256Stream::update_u64_be(std::uint64_t v) {
  std::array<std::uint8_t, 8> be{};
  for (int i = 7; i >= 0; --i) {
    be[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
  return update(be);
}

Digest Sha256Stream::finish() {
  Digest out{};
  crypto_hash_sha256_final(state_.get(), out.data());
  return out;
}

Bytes random_bytes(std::size_t n) {
  ensure_sodium();
  Bytes out(n);
  randombytes_buf(out.data(), n);
  return out;
}

}  // namespace govlab
