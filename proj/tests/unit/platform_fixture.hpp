#pragma once

// A small live platform: one operator, n voters already deliberated to
// VOTING, one equal-power space and an open 4-option proposal.

#include "govlab/gateway/platform.hpp"
#include "govlab/sim/simulate.hpp"
#include "govlab/tally/tally.hpp"
#include "unit/helpers.hpp"

#include <memory>

namespace testutil {

struct World {
  govlab::ManualClock clock{govlab::sim::kSimEpoch};
  govlab::identity::Identity op = govlab::identity::identity_from_label("fixture:operator");
  std::vector<govlab::identity::Identity> voters;
  std::unique_ptr<govlab::gateway::Platform> platform;
  std::string space_id = "space-qe";
  govlab::spaces::Proposal proposal;

  static govlab::gateway::PlatformOptions options(const govlab::identity::Identity& op) {
    govlab::gateway::PlatformOptions o;
    o.seed_case = govlab::sim::builtin_seed_case();
    o.responder = std::make_shared<govlab::deliberation::EchoResponder>();
    o.operators = {op.address()};
    return o;
  }

  // open: also open the proposal; deliberated: walk everyone to VOTING.
  explicit World(std::size_t n, bool deliberated = true, bool open = true,
                 govlab::spaces::VotingMethod method = govlab::spaces::VotingMethod::kQuadratic) {
    voters = identities(n, "fixture:voter");
    platform = std::make_unique<govlab::gateway::Platform>(options(op), clock.as_clock());
    platform->register_participant(op.public_key());
    std::vector<govlab::identity::Address> members;
    for (const auto& v : voters) members.push_back(platform->register_participant(v.public_key()));
    govlab::spaces::SpaceConfig cfg;
    cfg.id = space_id;
    cfg.method = method;
    cfg.condition = "qe";
    cfg.admins = {op.address()};
    clock.advance(1000);
    platform->create_space(cfg, op.address());
    clock.advance(1000);
    platform->mint(space_id, op.address(), members);
    if (deliberated) govlab::sim::deliberate(*platform, clock, members);
    if (open) {
      clock.advance(1000);
      proposal = platform->open_proposal(space_id, {"A", "B", "C", "D"}, op.address());
    }
  }

  govlab::tally::SignedBallot ballot(std::size_t who, std::vector<std::uint64_t> alloc) {
    clock.advance(1000);
    return govlab::tally::sign_ballot(voters[who],
                                      govlab::tally::Ballot{proposal.id, voters[who].address(), std::move(alloc),
                                                            clock.now()});
  }

  void finish() {
    clock.set(proposal.close_at);
    platform->close_proposal(proposal.id, op.address());
    platform->publish(proposal.id, op.address());
  }
};

}  // namespace testutil
