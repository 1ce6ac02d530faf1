#include "doctest.h"
#include "smpc/engine.hpp"
#include "smpc/errors.hpp"

using namespace smpc;

namespace {

RoundMessage msg(NodeId from, NodeId to, PayloadKind kind, std::uint64_t v, NodeId subject = 0) {
  RoundMessage m;
  m.sender = from;
  m.receiver = to;
  m.kind = kind;
  m.subject = subject;
  m.elements = {FieldElement(v, kMersenne61)};
  m.bytes = 8;
  return m;
}

}  // namespace

TEST_CASE("messages arrive after the barrier") {
  auto t = complete_graph(3);
  AdversaryScript script;
  RunMetrics metrics;
  Engine e(t, script, metrics);
  e.begin_round(1);
  e.send(msg(0, 1, PayloadKind::Raw, 5));
  e.send(msg(2, 1, PayloadKind::Raw, 6));
  e.deliver();
  REQUIRE(e.inbox(1).size() == 2);
  CHECK(e.inbox(1)[0].elements[0].value() == 5);
  CHECK(e.inbox(0).empty());
  e.deliver();
  CHECK(e.inbox(1).empty());
  CHECK(metrics.rounds.size() == 1);
  CHECK(metrics.rounds[0].messages == 2);
  CHECK(metrics.rounds[0].bytes == 16);
  CHECK(metrics.rounds[0].comm_rounds == 1);
  CHECK_THROWS_AS(e.send(msg(0, 7, PayloadKind::Raw, 1)), ArgumentError);
}

TEST_CASE("tamper and withhold follow their filters") {
  auto t = complete_graph(4);
  AdversaryScript script;
  script.model = AdversaryScript::Model::Malicious;
  script.corrupted = {2};
  AdversaryAction tamper;
  tamper.kind = ActionKind::Tamper;
  tamper.actor = 2;
  tamper.round = 1;
  tamper.payload = PayloadKind::Share;
  tamper.target = 0;
  tamper.delta = 10;
  AdversaryAction withhold;
  withhold.kind = ActionKind::Withhold;
  withhold.actor = 2;
  withhold.payload = PayloadKind::Share;
  withhold.target = 3;
  script.actions = {tamper, withhold};
  script.validate(t);

  RunMetrics metrics;
  Engine e(t, script, metrics);
  e.begin_round(1);
  e.send(msg(2, 0, PayloadKind::Share, 1));
  e.send(msg(2, 1, PayloadKind::Share, 1));
  e.send(msg(2, 3, PayloadKind::Share, 1));
  e.send(msg(2, 0, PayloadKind::Raw, 1));
  e.send(msg(1, 0, PayloadKind::Share, 1));
  e.deliver();
  REQUIRE(e.inbox(0).size() == 3);
  for (const auto& m : e.inbox(0)) {
    const bool hit = m.sender == 2 && m.kind == PayloadKind::Share;
    CHECK(m.elements[0].value() == (hit ? 11u : 1u));
  }
  CHECK(e.inbox(1)[0].elements[0].value() == 1);
  CHECK(e.inbox(3).empty());
  CHECK(metrics.rounds[0].withheld == 1);
  CHECK(metrics.rounds[0].messages == 5);
  CHECK(metrics.rounds[0].delivered == 4);

  e.begin_round(2);
  e.send(msg(2, 0, PayloadKind::Share, 1));
  e.deliver();
  CHECK(e.inbox(0)[0].elements[0].value() == 1);
}

TEST_CASE("negative deltas wrap in the field") {
  auto t = complete_graph(2);
  AdversaryScript script;
  script.model = AdversaryScript::Model::Malicious;
  script.corrupted = {0};
  AdversaryAction a;
  a.kind = ActionKind::Tamper;
  a.actor = 0;
  a.delta = -3;
  script.actions = {a};
  RunMetrics metrics;
  Engine e(t, script, metrics);
  e.begin_round(1);
  e.send(msg(0, 1, PayloadKind::Raw, 1));
  e.deliver();
  CHECK(e.inbox(1)[0].elements[0].value() == kMersenne61 - 2);
}

TEST_CASE("transcript holds what corrupted nodes receive") {
  auto t = complete_graph(3);
  AdversaryScript script;
  script.corrupted = {1};
  RunMetrics metrics;
  Engine e(t, script, metrics);
  e.begin_round(1);
  e.send(msg(0, 1, PayloadKind::Share, 4));
  e.send(msg(0, 2, PayloadKind::Share, 5));
  e.send(msg(1, 2, PayloadKind::Share, 6));
  e.deliver();
  REQUIRE(e.transcript().size() == 1);
  CHECK(e.transcript()[0].observer == 1);
  CHECK(e.transcript()[0].message.elements[0].value() == 4);
}

TEST_CASE("script validation") {
  auto t = complete_graph(3);
  AdversaryScript s;
  s.corrupted = {5};
  CHECK_THROWS_AS(s.validate(t), ConfigError);
  s.corrupted = {1};
  AdversaryAction a;
  a.kind = ActionKind::Tamper;
  a.actor = 1;
  s.actions = {a};
  CHECK_THROWS_AS(s.validate(t), ConfigError);
  s.model = AdversaryScript::Model::Malicious;
  CHECK_NOTHROW(s.validate(t));
  s.actions[0].actor = 0;
  CHECK_THROWS_AS(s.validate(t), ConfigError);
}

TEST_CASE("metrics comparison ignores wall clock") {
  RunMetrics a, b;
  a.rounds.push_back({});
  b.rounds.push_back({});
  a.rounds[0].messages = b.rounds[0].messages = 3;
  a.rounds[0].millis = 1.0;
  b.rounds[0].millis = 7.0;
  CHECK(a.same_counts(b));
  b.rounds[0].bytes = 1;
  CHECK_FALSE(a.same_counts(b));
}

TEST_CASE("payload names round trip") {
  for (auto k : {PayloadKind::Raw, PayloadKind::Share, PayloadKind::VerifiableShare, PayloadKind::Commitments,
                 PayloadKind::AggregatePair, PayloadKind::Relay}) {
    CHECK(payload_from_string(to_string(k)) == k);
  }
  CHECK_FALSE(payload_from_string("bogus").has_value());
}

TEST_CASE("worker pool covers every index once") {
  std::vector<int> hits(1000, 0);
  for_each_index(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS(for_each_index(10, 3, [](std::size_t i) {
    if (i == 5) throw ArgumentError("x");
  }));
}
