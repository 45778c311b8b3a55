#include "govlab/core/crypto.hpp"
#include "govlab/core/error.hpp"
#include "govlab/identity/identity.hpp"

#include <doctest.h>

using namespace govlab;
using namespace govlab::identity;

TEST_SUITE("identity") {
  TEST_CASE("address is 0x + last 20 bytes of SHA-256(public key)") {
    auto id = identity_from_label("alice");
    // Oracle: recompute independently from the raw key.
    const auto digest = sha256(id.public_key());
    const Bytes tail(digest.end() - 20, digest.end());
    CHECK(id.address() == "0x" + to_hex(tail));
    CHECK(id.address().size() == 42);
    CHECK(is_address(id.address()));
    CHECK_FALSE(is_address("0x123"));
    CHECK(derive_address(id.public_key()) == id.address());
    CHECK_THROWS_AS(derive_address(Bytes(31, 1)), Error);
  }

  TEST_CASE("seeded registration is deterministic; random registration is not") {
    Bytes seed(32, 7);
    CHECK(register_identity(seed).address() == register_identity(seed).address());
    CHECK(register_identity().address() != register_identity().address());
    CHECK_THROWS_AS(register_identity(Bytes(16, 0)), Error);
  }

  TEST_CASE("sign and verify") {
    auto id = identity_from_label("bob");
    auto msg = id.sign(std::string_view("hello"));
    CHECK(msg.signer == id.address());
    CHECK(msg.signature.size() == kSignatureSize);
    CHECK(verify(to_bytes("hello"), msg.signature, id.public_key()));
    CHECK_FALSE(verify(to_bytes("hellp"), msg.signature, id.public_key()));
    auto other = identity_from_label("carol");
    CHECK_FALSE(verify(to_bytes("hello"), msg.signature, other.public_key()));
    CHECK_FALSE(verify(to_bytes("hello"), Bytes(10, 0), id.public_key()));
    CHECK_FALSE(verify(to_bytes("hello"), msg.signature, Bytes(5, 0)));
    CHECK_THROWS_AS(id.sign(std::string_view("")), Error);
  }

  TEST_CASE("every single-bit flip of a signature fails to verify") {
    auto id = identity_from_label("dave");
    const auto payload = to_bytes("ballot bytes");
    auto sig = id.sign(payload).signature;
    for (std::size_t i = 0; i < sig.size(); ++i) {
      for (int bit = 0; bit < 8; ++bit) {
        auto bad = sig;
        bad[i] ^= static_cast<std::uint8_t>(1 << bit);
        CHECK_FALSE(verify(payload, bad, id.public_key()));
      }
    }
  }
}
