#include "govlab/core/bytes.hpp"
#include "govlab/core/canonical.hpp"
#include "govlab/core/crypto.hpp"
#include "govlab/core/error.hpp"
#include "govlab/core/ratio.hpp"
#include "govlab/core/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace govlab;

TEST_SUITE("core") {
  TEST_CASE("hex roundtrip and rejects bad input") {
    const Bytes b{0x00, 0x01, 0xab, 0xff};
    CHECK(to_hex(b) == "0001abff");
    CHECK(from_hex("0001abff") == b);
    CHECK(from_hex("0x0001ABFF") == b);
    CHECK_THROWS_AS(from_hex("abc"), Error);
    CHECK_THROWS_AS(from_hex("zz"), Error);
  }

  TEST_CASE("sha256 matches the FIPS 180-2 test vector") {
    CHECK(to_hex(sha256(std::string_view("abc"))) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    Sha256Stream s;
    s.update(std::string_view("a"));
    s.update(std::string_view("bc"));
    CHECK(to_hex(s.finish()) == to_hex(sha256(std::string_view("abc"))));
  }

  TEST_CASE("canonical JSON sorts keys, strips whitespace, rejects floats") {
    Json j = parse_json(R"({ "b": 1, "a": [true, null, "x"] })");
    CHECK(canonical_string(j) == R"({"a":[true,null,"x"],"b":1})");
    CHECK_THROWS_AS(canonical_string(Json{{"x", 0.5}}), Error);
    CHECK_THROWS_AS(parse_json("{"), Error);
  }

  TEST_CASE("ratio parsing") {
    CHECK(parse_ratio("1/5") == Ratio{1, 5});
    CHECK(parse_ratio(" 4/5 ") == Ratio{4, 5});
    CHECK(parse_ratio("3") == Ratio{3, 1});
    CHECK_THROWS_AS(parse_ratio("1/0"), Error);
    CHECK_THROWS_AS(parse_ratio("a/b"), Error);
    CHECK(Ratio{1, 5}.in_open_unit());
    CHECK_FALSE(Ratio{5, 5}.in_open_unit());
    CHECK(Ratio{5, 5}.in_half_open_unit());
  }

  TEST_CASE("seeded rng is deterministic and bounded") {
    SeededRng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    SeededRng r(7);
    for (int i = 0; i < 1000; ++i) CHECK(r.below(3) < 3);
    std::vector<int> v(20);
    std::iota(v.begin(), v.end(), 0);
    auto w = v;
    SeededRng s(9);
    s.shuffle(w);
    CHECK(std::is_permutation(v.begin(), v.end(), w.begin()));
  }

  TEST_CASE("error kinds map to HTTP statuses") {
    CHECK(http_status(ErrorKind::kInvalidArgument) == 422);
    CHECK(http_status(ErrorKind::kNotFound) == 404);
    CHECK(http_status(ErrorKind::kUnauthenticated) == 401);
    CHECK(http_status(ErrorKind::kForbidden) == 403);
    CHECK(http_status(ErrorKind::kConflict) == 409);
    CHECK(http_status(ErrorKind::kCorrupt) == 500);
    Error e(ErrorKind::kConflict, "X", "msg");
    CHECK(e.code() == "X");
    CHECK(e.kind() == ErrorKind::kConflict);
  }
}
