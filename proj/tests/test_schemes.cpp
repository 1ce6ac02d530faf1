#include <cmath>
#include <random>

#include "doctest.h"
#include "smpc/errors.hpp"
#include "smpc/schemes.hpp"

using namespace smpc;

namespace {

std::vector<FieldElement> elems(std::initializer_list<std::uint64_t> v, std::uint64_t mod = kMersenne61) {
  std::vector<FieldElement> out;
  for (auto x : v) out.emplace_back(x, mod);
  return out;
}

Vicinity vicinity(std::vector<FieldElement> m, std::vector<FieldElement> a, std::size_t d, std::size_t f = 0) {
  Vicinity v;
  v.messages = std::move(m);
  v.weights = std::move(a);
  v.d = d;
  v.f = f;
  return v;
}

FieldElement dot(const std::vector<FieldElement>& m, const std::vector<FieldElement>& a) {
  // Independent of plain_round: widen to 128 bits and reduce once per term.
  const std::uint64_t p = m.front().modulus();
  unsigned __int128 acc = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    acc = (acc + static_cast<unsigned __int128>(m[k].value()) * a[k].value()) % p;
  }
  return FieldElement(static_cast<std::uint64_t>(acc), p);
}

AdversaryScript malicious(std::set<NodeId> corrupted, std::vector<AdversaryAction> actions) {
  AdversaryScript s;
  s.model = AdversaryScript::Model::Malicious;
  s.corrupted = std::move(corrupted);
  s.actions = std::move(actions);
  return s;
}

AdversaryAction action(ActionKind kind, NodeId actor, PayloadKind payload, std::optional<NodeId> target = {}) {
  AdversaryAction a;
  a.kind = kind;
  a.actor = actor;
  a.payload = payload;
  a.target = target;
  a.delta = 5;
  return a;
}

}  // namespace

TEST_CASE("plain weighted sum") {
  CHECK(plain_round(elems({1, 2, 3}), elems({1, 1, 1})).value.value() == 6);
  CHECK(plain_round(elems({1, 2, 3}), elems({0, 0, 0})).value.value() == 0);
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<FieldElement> m, a;
    for (int k = 0; k < 10; ++k) {
      m.push_back(FieldElement::random(kMersenne61, rng));
      a.push_back(FieldElement::random(kMersenne61, rng));
    }
    CHECK(plain_round(m, a).value == dot(m, a));
  }
  const std::vector<double> rm{1.5, -2.0}, ra{2.0, 0.5};
  CHECK(plain_round(std::span<const double>(rm), std::span<const double>(ra)) == doctest::Approx(2.0));
}

TEST_CASE("perturbation") {
  const std::vector<double> m{1.0, 2.0, 3.0}, a{0.5, -1.0, 2.0};
  Rng zero(1);
  CHECK(perturb_round(m, a, NoiseKind::Uniform, 0.0, zero) == doctest::Approx(4.5));

  // Replay the noise stream straight from the underlying generator.
  const double sigma = 0.25;
  Rng rng(42);
  const double got = perturb_round(m, a, NoiseKind::Uniform, sigma, rng);
  std::mt19937_64 replay(42);
  double expect = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double u = static_cast<double>(replay() >> 11) * 0x1.0p-53;
    expect += a[k] * (m[k] + (2.0 * u - 1.0) * sigma);
  }
  CHECK(got == expect);

  for (auto kind : {NoiseKind::Uniform, NoiseKind::Gaussian}) {
    Rng r(7);
    const int reps = 10'000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < reps; ++i) {
      const double v = perturb_round(m, a, kind, 1.0, r);
      sum += v;
      sq += v * v;
    }
    const double mean = sum / reps;
    const double stderr_ = std::sqrt((sq / reps - mean * mean) / reps);
    CHECK(std::fabs(mean - 4.5) < 3.0 * stderr_);
  }
}

TEST_CASE("sss sum recovery in every mode") {
  for (auto mode : {SssMode::PerMessage, SssMode::Broadcast, SssMode::Additive}) {
    auto r = sss_round(vicinity(elems({1, 2, 3}), elems({1, 1, 1}), 2), mode, 11);
    CHECK(r.outcome.status == NodeStatus::Ok);
    CHECK(r.outcome.value.value() == 6);
  }
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    const std::size_t k = 1 + uniform_below(rng, 12);
    std::vector<FieldElement> m, a;
    for (std::size_t j = 0; j < k; ++j) {
      m.push_back(FieldElement::random(kMersenne61, rng));
      a.push_back(FieldElement::random(kMersenne61, rng));
    }
    const std::size_t d = 1 + uniform_below(rng, k);
    for (auto mode : {SssMode::PerMessage, SssMode::Broadcast, SssMode::Additive}) {
      CHECK(sss_round(vicinity(m, a, d), mode, t).outcome.value == dot(m, a));
    }
  }
}

TEST_CASE("sss with a withheld aggregate") {
  auto script = malicious({3}, {action(ActionKind::Withhold, 3, PayloadKind::Aggregate, 0)});
  auto v = vicinity(elems({1, 2, 3}), elems({1, 1, 1}), 2);
  auto r = sss_round(v, SssMode::PerMessage, 1, script);
  CHECK(r.outcome.status == NodeStatus::Ok);
  CHECK(r.outcome.value.value() == 6);
  auto add = sss_round(v, SssMode::Additive, 1, script);
  CHECK(add.outcome.status == NodeStatus::Aborted);
  v.d = 3;
  CHECK(sss_round(v, SssMode::PerMessage, 1, script).outcome.status == NodeStatus::Aborted);
}

TEST_CASE("sss transcripts of a lone observer") {
  AdversaryScript script;
  script.corrupted = {1};
  auto r = sss_round(vicinity(elems({10, 20, 30}), elems({1, 1, 1}), 2), SssMode::PerMessage, 3, script);
  // One share from each dealer, nothing else.
  std::size_t shares = 0;
  for (const auto& e : r.transcript) {
    CHECK(e.observer == 1);
    if (e.message.kind == PayloadKind::Share) ++shares;
  }
  CHECK(shares == 3);
}

TEST_CASE("homomorphic scheme on toy keys") {
  const std::uint64_t p = 101;
  auto r = homomorphic_round(vicinity(elems({1, 2, 3}, p), elems({1, 1, 1}, p), 2), 32, 9);
  CHECK(r.outcome.status == NodeStatus::Ok);
  CHECK(r.outcome.value.value() == 6);
  CHECK(homomorphic_round(vicinity(elems({1, 2, 3}, p), elems({0, 0, 0}, p), 2), 32, 9).outcome.value.value() == 0);

  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    std::vector<FieldElement> m;
    for (int k = 0; k < 3; ++k) m.push_back(FieldElement::random(kMersenne61, rng));
    auto a = elems({2, 3, 5});
    for (std::size_t d : {1u, 2u, 3u}) {
      CHECK(homomorphic_round(vicinity(m, a, d), 256, t).outcome.value == dot(m, a));
    }
  }
  CHECK_THROWS_AS(homomorphic_round(vicinity(elems({1, 2, 3}), elems({1, 1, 1}), 2), 64, 1), ConfigError);
}

TEST_CASE("homomorphic abort on missing partials") {
  auto script = malicious({2}, {action(ActionKind::Withhold, 2, PayloadKind::Partial, 0)});
  auto v = vicinity(elems({1, 2, 3}), elems({1, 1, 1}), 3);
  CHECK(homomorphic_round(v, 256, 4, script).outcome.status == NodeStatus::Aborted);
  v.d = 2;
  auto r = homomorphic_round(v, 256, 4, script);
  CHECK(r.outcome.status == NodeStatus::Ok);
  CHECK(r.outcome.value.value() == 6);
}

TEST_CASE("malicious scheme, honest run") {
  auto m = elems({1, 2, 3, 4});
  auto a = elems({4, 3, 2, 1});
  auto r = malicious_sss_round(vicinity(m, a, 3, 1), "fast", 1);
  CHECK(r.outcome.status == NodeStatus::Ok);
  CHECK(r.outcome.verified);
  CHECK(r.outcome.value.value() == 20);
  CHECK(r.metrics.total_detections() == 0);
}

TEST_CASE("malicious scheme excludes tampered aggregates and shares") {
  auto m = elems({7, 8, 9, 10});
  auto a = elems({1, 2, 3, 4});
  const auto expect = dot(m, a);

  auto agg = malicious({2}, {action(ActionKind::Tamper, 2, PayloadKind::AggregatePair, 0)});
  auto r = malicious_sss_round(vicinity(m, a, 2, 1), "fast", 3, agg);
  CHECK(r.outcome.status == NodeStatus::Ok);
  CHECK(r.outcome.verified);
  CHECK(r.outcome.value == expect);
  CHECK(r.metrics.total_detections() >= 1);

  auto share = malicious({2}, {action(ActionKind::Tamper, 2, PayloadKind::VerifiableShare, 3)});
  r = malicious_sss_round(vicinity(m, a, 2, 1), "fast", 3, share);
  CHECK(r.outcome.status == NodeStatus::Ok);
  CHECK(r.outcome.value == expect);
  CHECK(r.metrics.total_detections() >= 1);
  bool complaint = false;
  for (const auto& e : r.metrics.events) complaint = complaint || e.find("rejects dealer 2") != std::string::npos;
  CHECK(complaint);
}

TEST_CASE("malicious scheme aborts instead of answering wrongly") {
  auto m = elems({7, 8, 9, 10});
  auto a = elems({1, 2, 3, 4});
  const auto expect = dot(m, a);
  auto safe = [&](const VicinityRun& r) {
    return r.outcome.status == NodeStatus::Aborted || (r.outcome.verified && r.outcome.value == expect);
  };

  auto starve = malicious({2, 3}, {action(ActionKind::Withhold, 2, PayloadKind::AggregatePair),
                                   action(ActionKind::Withhold, 3, PayloadKind::AggregatePair)});
  auto r = malicious_sss_round(vicinity(m, a, 3, 1), "fast", 5, starve);
  CHECK(r.outcome.status == NodeStatus::Aborted);
  CHECK_FALSE(r.outcome.abort_reason.empty());

  auto silent = malicious({2}, {action(ActionKind::Withhold, 2, PayloadKind::Commitments)});
  r = malicious_sss_round(vicinity(m, a, 3, 1), "fast", 5, silent);
  CHECK(r.outcome.status == NodeStatus::Aborted);

  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto eq = malicious({2}, {action(ActionKind::Equivocate, 2, PayloadKind::Commitments)});
    CHECK(safe(malicious_sss_round(vicinity(m, a, 3, 1), "fast", seed, eq)));
  }
}

TEST_CASE("malicious scheme preconditions") {
  auto v = vicinity(elems({1, 2, 3}), elems({1, 1, 1}), 2, 2);
  CHECK_THROWS_AS(malicious_sss_round(v, "fast", 1), ConfigError);
  v.f = 1;
  CHECK_THROWS_AS(malicious_sss_round(v, "tiny", 1), ConfigError);
  auto small = vicinity(elems({1, 2, 3}, 11), elems({1, 1, 1}, 11), 2, 1);
  auto r = malicious_sss_round(small, "tiny", 1);
  CHECK(r.outcome.status == NodeStatus::Ok);
  CHECK(r.outcome.value.value() == 6);
}

TEST_CASE("policy and key sizes") {
  auto t = Topology::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
  SchemeConfig cfg;
  cfg.d = 3;
  auto p = make_policy(t, cfg);
  CHECK(p.d == std::vector<std::size_t>{3, 1, 1, 1});
  cfg.per_node_d = {2, 1, 1, 1};
  CHECK(make_policy(t, cfg).d[0] == 2);
  cfg.per_node_d.clear();
  cfg.d = 0;
  CHECK_THROWS_AS(make_policy(t, cfg), ConfigError);
  CHECK(min_key_bits(kMersenne61, 3) == 2 * 61 + 2 + 2);
  CHECK(min_key_bits(kMersenne61, 4) == 2 * 61 + 3 + 2);
}

TEST_CASE("names parse back") {
  for (auto id : {SchemeId::Plain, SchemeId::Perturbation, SchemeId::Sss, SchemeId::Homomorphic, SchemeId::Malicious}) {
    CHECK(parse_scheme(to_string(id)) == id);
  }
  for (auto m : {SssMode::PerMessage, SssMode::Broadcast, SssMode::Additive}) CHECK(parse_sss_mode(to_string(m)) == m);
  for (auto w : {WeightChooser::None, WeightChooser::Target, WeightChooser::Sender}) {
    CHECK(parse_chooser(to_string(w)) == w);
  }
  CHECK_THROWS_AS(parse_scheme("magic"), ConfigError);
}
