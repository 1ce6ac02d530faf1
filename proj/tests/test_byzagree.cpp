#include "doctest.h"
#include "smpc/byzagree.hpp"
#include "smpc/errors.hpp"

using namespace smpc::byzagree;

namespace {

AgreementInstance instance(std::size_t n, std::size_t f, NodeId general = 0) {
  AgreementInstance inst;
  for (NodeId p = 0; p < n; ++p) inst.participants.push_back(p);
  inst.general = general;
  inst.f_bound = f;
  inst.instance_id = 77;
  return inst;
}

}  // namespace

TEST_CASE("fault-free broadcast") {
  TagAuthority auth(1);
  auto r = run_broadcast(instance(4, 0), "v", nullptr, auth);
  CHECK(r.relay_rounds == 1);
  CHECK(r.outcomes.size() == 4);
  for (const auto& [id, o] : r.outcomes) {
    CHECK(o.decided_value == "v");
    CHECK_FALSE(o.default_used);
  }
  CHECK(r.honest_messages == honest_message_count(4, 0));
  CHECK(honest_message_count(4, 0) == 3);
  CHECK(honest_message_count(4, 1) == 3 + 3 * 2);
}

TEST_CASE("equivocating general on four participants") {
  // Every split of the three honest recipients between two values.
  for (unsigned mask = 0; mask < 8; ++mask) {
    std::set<NodeId> first;
    for (NodeId p = 1; p <= 3; ++p) {
      if (mask & (1u << (p - 1))) first.insert(p);
    }
    TagAuthority auth(mask + 10);
    auto adv = equivocating_general(0, "v1", "v2", first);
    auto r = run_broadcast(instance(4, 1), "v1", adv.get(), auth);
    CHECK(r.outcomes.size() == 3);
    CHECK(agreement_holds(r));
    CHECK(r.relay_rounds == 2);
    const auto& o = r.outcomes.begin()->second;
    if (mask == 0 || mask == 7) {
      CHECK_FALSE(o.default_used);
    } else {
      CHECK(o.default_used);
      CHECK(o.decided_value == "0");
    }
  }
}

TEST_CASE("byzantine relay cannot move honest participants") {
  for (CoalitionAdversary::Choice c : {0u, 1u, 2u, 3u}) {
    TagAuthority auth(c + 100);
    CoalitionAdversary adv({2}, {"x", "y"}, [c](std::size_t, NodeId, NodeId) { return c; });
    auto r = run_broadcast(instance(5, 1), "v", &adv, auth);
    CHECK(validity_holds(r, "v"));
    CHECK(agreement_holds(r));
  }
}

TEST_CASE("forged tags are rejected") {
  TagAuthority auth(5);
  CoalitionAdversary adv({3}, {"evil"}, [](std::size_t, NodeId, NodeId) { return 2u; });
  auto r = run_broadcast(instance(4, 1), "v", &adv, auth);
  CHECK(validity_holds(r, "v"));
  CHECK(r.rejected_relays > 0);
}

TEST_CASE("silent general yields the default") {
  TagAuthority auth(6);
  SilentAdversary adv({0});
  auto r = run_broadcast(instance(4, 1), "v", &adv, auth);
  CHECK(agreement_holds(r));
  for (const auto& [id, o] : r.outcomes) CHECK(o.default_used);
}

TEST_CASE("tags bind signer and value") {
  TagAuthority auth(7);
  auto s = auth.signer_for(3);
  auto t = s.sign("hello");
  CHECK(auth.verify(3, "hello", t));
  CHECK_FALSE(auth.verify(3, "hellO", t));
  CHECK_FALSE(auth.verify(4, "hello", t));
  CHECK_FALSE(auth.verify(4, "never signed", 12345));
  CHECK(auth.minted() == 1);
}

TEST_CASE("digest payloads report their true size") {
  TagAuthority auth(8);
  auto inst = instance(3, 0);
  inst.payload_bytes = 1000;
  auto r = run_broadcast(inst, "digest", nullptr, auth);
  CHECK(r.bytes >= 2 * 1000);
}

TEST_CASE("malformed instances") {
  TagAuthority auth(9);
  AgreementInstance empty;
  CHECK_THROWS_AS(run_broadcast(empty, "v", nullptr, auth), smpc::ConfigError);
  auto inst = instance(3, 0, 7);
  CHECK_THROWS_AS(run_broadcast(inst, "v", nullptr, auth), smpc::ConfigError);
}
