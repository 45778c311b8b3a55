#include "govlab/core/error.hpp"
#include "govlab/core/rng.hpp"
#include "govlab/tally/tally.hpp"
#include "unit/helpers.hpp"
#include "unit/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace govlab;
using namespace govlab::tally;
using spaces::Proposal;
using spaces::ProposalStatus;

namespace {

std::vector<Ballot> ballots_from(const std::vector<std::vector<std::uint64_t>>& allocs) {
  std::vector<Ballot> out;
  for (std::size_t i = 0; i < allocs.size(); ++i) out.push_back({"p", "0xv" + std::to_string(i), allocs[i], 0});
  return out;
}

Winner winner_of(const std::vector<std::vector<std::uint64_t>>& allocs, VotingMethod m) {
  const auto b = ballots_from(allocs);
  return tally_unchecked("p", allocs.at(0).size(), b, m, {1, 4}).winner;
}

struct OpenFixture {
  std::vector<identity::Identity> voters = testutil::identities(3, "tally");
  Proposal proposal;
  OpenFixture() {
    proposal.id = "s-p1";
    proposal.space_id = "s";
    proposal.options = {"a", "b", "c", "d"};
    proposal.open_at = 1000;
    proposal.close_at = 2000;
    proposal.status = ProposalStatus::kOpen;
    proposal.snapshot.space_id = "s";
    for (const auto& v : voters) proposal.snapshot.balances[v.address()] = 100;
  }
  SignedBallot ballot(std::size_t who, std::vector<std::uint64_t> alloc, TimestampMs at = 1500) {
    return sign_ballot(voters[who], Ballot{proposal.id, "", std::move(alloc), at});
  }
  std::optional<Rejection> check(const SignedBallot& b, std::size_t key_of) {
    return validate_ballot(b, proposal, proposal.snapshot, voters[key_of].public_key());
  }
};

}  // namespace

TEST_SUITE("tally") {
  TEST_CASE("quadratic conversion is exact on perfect squares") {
    CHECK(effective_votes_quadratic(4) == 2.0);
    CHECK(effective_votes_quadratic(0) == 0.0);
    CHECK(effective_votes_quadratic(9) == 3.0);
    CHECK(effective_votes_quadratic(100) == 10.0);
    for (std::uint64_t t = 0; t < 5000; ++t) {
      CHECK(std::fabs(effective_votes_quadratic(t) - static_cast<double>(std::sqrt(static_cast<long double>(t)))) <=
            1e-12);
    }
    CHECK(effective_votes(VotingMethod::kWeighted, 37) == 37.0);
  }

  TEST_CASE("split_square") {
    auto r = split_square(72);  // 6^2 * 2
    CHECK(r.outside == 6);
    CHECK(r.squarefree == 2);
    CHECK(split_square(1).squarefree == 1);
    CHECK(split_square(0).outside == 0);
    CHECK(split_square(97).squarefree == 97);
  }

  TEST_CASE("ratio vector anchor (20,20,30,30) -> (0.2,0.2,0.3,0.3) exactly") {
    const std::vector<std::uint64_t> a{20, 20, 30, 30};
    auto r = ratio_vector(a);
    CHECK_FALSE(r.zero);
    CHECK(r.values == std::vector<double>{0.2, 0.2, 0.3, 0.3});
    const std::vector<std::uint64_t> z{0, 0, 0};
    CHECK(ratio_vector(z).zero);
  }

  TEST_CASE("whale flip: weighted picks option 4, quadratic option 1") {
    const std::vector<std::vector<std::uint64_t>> allocs = {
        {100, 0, 0, 0}, {100, 0, 0, 0}, {100, 0, 0, 0}, {0, 0, 0, 400}};
    CHECK(winner_of(allocs, VotingMethod::kWeighted).indices == std::vector<std::size_t>{3});
    CHECK(winner_of(allocs, VotingMethod::kQuadratic).indices == std::vector<std::size_t>{0});
    CHECK(oracle::brute_tally(allocs, 4, false).winners == std::vector<std::size_t>{3});
    CHECK(oracle::brute_tally(allocs, 4, true).winners == std::vector<std::size_t>{0});
  }

  TEST_CASE("exact tie detection across radicals: sqrt2 + sqrt8 == sqrt18") {
    auto w = winner_of({{2, 18}, {8, 0}}, VotingMethod::kQuadratic);
    CHECK(w.is_tie());
    CHECK(w.indices == std::vector<std::size_t>{0, 1});
    // sqrt2 + sqrt3 ~ 3.146 against sqrt10 ~ 3.162: close, not a tie.
    CHECK_FALSE(winner_of({{2, 0}, {3, 0}, {0, 10}}, VotingMethod::kQuadratic).is_tie());
  }

  TEST_CASE("scores, turnout and success threshold") {
    const auto b = ballots_from({{20, 20, 30, 30}, {100, 0, 0, 0}});
    auto r = tally_unchecked("p", 4, b, VotingMethod::kWeighted, {1, 4});
    CHECK(r.scores == std::vector<double>{120, 20, 30, 30});
    CHECK(r.turnout == 2);
    CHECK(r.total_effective == 200);
    CHECK(r.succeeded == std::vector<bool>{true, false, false, false});
    auto empty = tally_unchecked("p", 4, {}, VotingMethod::kQuadratic, {1, 4});
    CHECK(empty.turnout == 0);
    CHECK(empty.winner.indices.size() == 4);
    CHECK(empty.succeeded == std::vector<bool>(4, false));
    auto j = r.to_json();
    CHECK(TallyResult::from_json(j).to_json() == j);
  }

  TEST_CASE("tally refuses open proposals, duplicates and foreign ballots") {
    Proposal p;
    p.id = "p";
    p.options = {"a", "b"};
    p.status = ProposalStatus::kOpen;
    const auto b = ballots_from({{1, 0}});
    CHECK_THROWS_AS(tally::tally(p, b, VotingMethod::kQuadratic, {1, 4}), Error);
    p.status = ProposalStatus::kClosed;
    CHECK(tally::tally(p, b, VotingMethod::kQuadratic, {1, 4}).turnout == 1);
    auto dup = b;
    dup.push_back(b[0]);
    CHECK_THROWS_AS(tally::tally(p, dup, VotingMethod::kQuadratic, {1, 4}), Error);
    auto foreign = b;
    foreign[0].proposal_id = "q";
    CHECK_THROWS_AS(tally::tally(p, foreign, VotingMethod::kQuadratic, {1, 4}), Error);
  }

  TEST_CASE("property: argmax invariance under scaling, 500 random sets") {
    SeededRng rng(2024);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t options = 2 + rng.below(4);
      const std::size_t voters = 1 + rng.below(12);
      std::vector<std::vector<std::uint64_t>> allocs(voters, std::vector<std::uint64_t>(options));
      for (auto& b : allocs) {
        for (auto& x : b) x = rng.below(4) == 0 ? 0 : rng.below(120);
      }
      for (auto m : {VotingMethod::kQuadratic, VotingMethod::kWeighted}) {
        const auto base = winner_of(allocs, m);
        for (std::uint64_t c : {2, 3, 10}) {
          auto scaled = allocs;
          for (auto& b : scaled) {
            for (auto& x : b) x *= c;
          }
          if (winner_of(scaled, m) != base) ++mismatches;
        }
        // And agreement with the brute-force oracle.
        if (oracle::brute_tally(allocs, options, m == VotingMethod::kQuadratic).winners != base.indices) ++mismatches;
      }
    }
    CHECK(mismatches == 0);
  }

  TEST_CASE("ballot validation: accepts a good ballot, rejects tampering and wrong keys") {
    OpenFixture f;
    auto good = f.ballot(0, {20, 20, 30, 30});
    CHECK_FALSE(f.check(good, 0).has_value());

    auto tampered = good;
    tampered.ballot.allocation[0] = 21;
    CHECK(f.check(tampered, 0) == Rejection::kBadSignature);
    auto retimed = good;
    retimed.ballot.cast_at += 1;
    CHECK(f.check(retimed, 0) == Rejection::kBadSignature);
    CHECK(f.check(good, 1) == Rejection::kBadSignature);  // wrong key for the voter
    auto bad_sig = good;
    bad_sig.signature[5] ^= 1;
    CHECK(f.check(bad_sig, 0) == Rejection::kBadSignature);
    auto repointed = good;
    repointed.ballot.proposal_id = "s-p2";
    CHECK(f.check(repointed, 0) == Rejection::kBadSignature);
  }

  TEST_CASE("ballot validation: budget, length, window, membership") {
    OpenFixture f;
    CHECK(f.check(f.ballot(0, {50, 50, 1, 0}), 0) == Rejection::kOverBudget);
    CHECK_FALSE(f.check(f.ballot(0, {25, 25, 25, 25}), 0).has_value());
    CHECK(f.check(f.ballot(0, {1, 2, 3}), 0) == Rejection::kLengthMismatch);
    CHECK(f.check(f.ballot(0, {1, 0, 0, 0}, 2000), 0) == Rejection::kClosed);
    CHECK(f.check(f.ballot(0, {1, 0, 0, 0}, 999), 0) == Rejection::kClosed);
    auto outsider = identity::identity_from_label("outsider");
    auto b = sign_ballot(outsider, Ballot{f.proposal.id, "", {1, 0, 0, 0}, 1500});
    CHECK(validate_ballot(b, f.proposal, f.proposal.snapshot, outsider.public_key()) == Rejection::kUnknownVoter);
    f.proposal.status = ProposalStatus::kClosed;
    CHECK(f.check(f.ballot(0, {1, 0, 0, 0}), 0) == Rejection::kClosed);
  }

  TEST_CASE("last valid ballot wins across three sequential ballots") {
    OpenFixture f;
    BallotBox box;
    auto b1 = f.ballot(0, {100, 0, 0, 0}, 1100);
    auto b2 = f.ballot(0, {0, 100, 0, 0}, 1200);
    auto b3 = f.ballot(0, {0, 0, 50, 50}, 1300);
    for (const auto* b : {&b1, &b2, &b3}) {
      REQUIRE_FALSE(f.check(*b, 0).has_value());
      CHECK(box.record(b->ballot));
    }
    CHECK(box.voters() == 1);
    CHECK(box.latest_for(f.voters[0].address())->allocation == std::vector<std::uint64_t>{0, 0, 50, 50});
    // A replayed older ballot does not displace the latest.
    CHECK_FALSE(box.record(b1.ballot));
    CHECK(box.latest().at(0).allocation == b3.ballot.allocation);
  }

  TEST_CASE("ballot JSON and canonical payload") {
    Ballot b{"p", "0xabc", {1, 2}, 7};
    CHECK(Ballot::from_json(b.to_json()) == b);
    CHECK(b.canonical_payload() == canonical_string(b.to_json()));
    CHECK(b.spent() == 3);
    CHECK_THROWS_AS(Ballot::from_json(Json{{"x", 1}}), Error);
  }
}
