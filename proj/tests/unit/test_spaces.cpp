#include "govlab/core/error.hpp"
#include "govlab/spaces/governance.hpp"

#include <doctest.h>

using namespace govlab;
using namespace govlab::spaces;

namespace {

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

ledger::LedgerSnapshot snap() {
  ledger::LedgerSnapshot s;
  s.space_id = "s";
  s.balances = {{"0xa", 100}, {"0xb", 100}};
  return s;
}

}  // namespace

TEST_SUITE("spaces") {
  TEST_CASE("create space: defaults, caller becomes admin, validation") {
    GovernanceRegistry r;
    SpaceConfig c;
    c.id = "s";
    auto s = r.create_space(c, "0xadmin", 10);
    CHECK(s.is_admin("0xadmin"));
    CHECK(s.config.vote_duration == 48 * kHour);
    CHECK(s.config.success_threshold == Ratio{1, 4});
    CHECK(s.created_at == 10);
    CHECK(code_of([&] { r.create_space(c, "0xadmin", 11); }) == "SPACE_EXISTS");
    SpaceConfig bad = c;
    bad.id = "t";
    bad.vote_duration = 0;
    CHECK(code_of([&] { r.create_space(bad, "0xadmin", 11); }) == "BAD_DURATION");
    bad.vote_duration = kHour;
    bad.success_threshold = {5, 4};
    CHECK(code_of([&] { r.create_space(bad, "0xadmin", 11); }) == "BAD_THRESHOLD");
  }

  TEST_CASE("proposal lifecycle OPEN -> CLOSED -> PUBLISHED") {
    GovernanceRegistry r;
    SpaceConfig c;
    c.id = "s";
    c.vote_duration = kHour;
    r.create_space(c, "0xadmin", 0);
    CHECK(code_of([&] { r.open_proposal("s", {"a", "b"}, "0xeve", 0, snap()); }) == "NOT_ADMIN");
    CHECK(code_of([&] { r.open_proposal("s", {"a"}, "0xadmin", 0, snap()); }) == "TOO_FEW_OPTIONS");
    CHECK(code_of([&] { r.open_proposal("s", {"a", "b"}, "0xadmin", 0, std::nullopt); }) == "NO_SNAPSHOT");

    auto p = r.open_proposal("s", {"a", "b"}, "0xadmin", 100, snap());
    CHECK(p.id == "s-p1");
    CHECK(p.status == ProposalStatus::kOpen);
    CHECK(p.close_at == 100 + kHour);
    CHECK(p.snapshot_ref == snap().digest());
    CHECK(p.accepts_at(100));
    CHECK_FALSE(p.accepts_at(99));
    CHECK_FALSE(p.accepts_at(100 + kHour));

    CHECK(code_of([&] { r.publish(p.id); }) == "ILLEGAL_STATUS");
    CHECK(code_of([&] { r.close_proposal(p.id, 200, "0xadmin"); }) == "PREMATURE_CLOSE");
    CHECK(code_of([&] { r.close_proposal(p.id, 200, "0xeve", true); }) == "NOT_ADMIN");
    auto closed = r.close_proposal(p.id, 100 + kHour, "0xanyone");
    CHECK(closed.status == ProposalStatus::kClosed);
    CHECK_FALSE(closed.force_closed);
    CHECK_FALSE(closed.accepts_at(150));
    CHECK(code_of([&] { r.close_proposal(p.id, 100 + kHour, "0xadmin"); }) == "ALREADY_CLOSED");
    CHECK(r.publish(p.id).status == ProposalStatus::kPublished);
    CHECK(code_of([&] { r.publish(p.id); }) == "ILLEGAL_STATUS");
  }

  TEST_CASE("admin force close before the window ends") {
    GovernanceRegistry r;
    SpaceConfig c;
    c.id = "s";
    r.create_space(c, "0xadmin", 0);
    auto p = r.open_proposal("s", {"a", "b"}, "0xadmin", 0, snap());
    auto closed = r.close_proposal(p.id, 10, "0xadmin", true);
    CHECK(closed.force_closed);
    CHECK(closed.closed_at == 10);
    auto p2 = r.open_proposal("s", {"a", "b", "c"}, "0xadmin", 20, snap());
    CHECK(p2.id == "s-p2");
    CHECK(r.proposals_in("s").size() == 2);
  }

  TEST_CASE("unknown ids") {
    GovernanceRegistry r;
    CHECK(code_of([&] { r.space("x"); }) != "");
    CHECK(code_of([&] { r.proposal("x"); }) != "");
    CHECK_FALSE(r.has_space("x"));
  }

  TEST_CASE("method names") {
    CHECK(parse_voting_method("quadratic") == VotingMethod::kQuadratic);
    CHECK(parse_voting_method("weighted") == VotingMethod::kWeighted);
    CHECK_THROWS_AS(parse_voting_method("ranked"), Error);
  }
}
