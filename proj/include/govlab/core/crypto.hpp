#pragma once

#include "govlab/core/bytes.hpp"

#include <memory>

struct crypto_hash_sha256_state;

namespace govlab {

void ensure_sodium();

/// Incremental SHA-256. Integers are absorbed as 8-byte big-endian.
class Sha256Stream {
 public:
  Sha256Stream();
  ~Sha256Stream();
  Sha256Stream(const Sha256Stream&) = delete;
  Sha256Stream& operator=(const Sha256Stream&) = delete;

  Sha256Stream& update(std::span<const std::uint8_t> data);
  Sha256Stream& update(std::string_view data);
  Sha256Stream& update_u64_be(std::uint64_t v);
  Digest finish();

 private:
  std::unique_ptr<crypto_hash_sha256_state> state_;
};

Bytes random_bytes(std::size_t n);

}  // namespace govlab
