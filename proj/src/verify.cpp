#include "smpc/verify.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "smpc/bigint.hpp"
#include "smpc/byzagree.hpp"
#include "smpc/errors.hpp"
#include "smpc/numerics.hpp"
#include "smpc/paillier.hpp"
#include "smpc/pedersen.hpp"
#include "smpc/schemes.hpp"
#include "smpc/shamir.hpp"
#include "smpc/simulator.hpp"
#include "smpc/topology.hpp"

namespace smpc {

namespace {

struct Checker {
  SuiteResult& r;
  void operator()(bool ok, const std::string& what) {
    ++r.checks;
    if (!ok) r.failures.push_back(what);
  }
};

void field_suite(Checker& check, std::uint64_t seed) {
  Rng rng(seed);
  PrimeField f;
  for (int k = 0; k < 1000; ++k) {
    auto a = f.random(rng), b = f.random_nonzero(rng);
    check((a + b) - b == a, "additive inverse");
    check(b * b.inv() == f.one(), "multiplicative inverse");
    check(FieldElement::from_signed(a.to_signed(), f.modulus()) == a, "signed round trip");
  }
  FixedPointCodec codec;
  for (int k = 0; k < 1000; ++k) {
    double x = (uniform_unit(rng) - 0.5) * 1e6;
    check(std::fabs(codec.decode(codec.encode(x)) - x) <= 0.5 / 1e6 + 1e-9, "codec accuracy");
  }
  bool threw = false;
  try {
    codec.encode(codec.max_magnitude() * 2);
  } catch (const OverflowError&) {
    threw = true;
  }
  check(threw, "codec overflow detection");
}

void shamir_suite(Checker& check, std::uint64_t seed) {
  Rng rng(seed);
  PrimeField f;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 2 + uniform_below(rng, 20);
    const std::size_t d = 1 + uniform_below(rng, n);
    std::vector<FieldElement> pts;
    for (std::size_t l = 1; l <= n; ++l) pts.push_back(f.element(l));
    auto s = f.random(rng);
    auto set = shamir::deal(s, d, pts, rng);
    std::vector<shamir::Share> subset;
    for (std::size_t l = n - d; l < n; ++l) subset.push_back(set.shares[l]);
    check(shamir::reconstruct(subset, d) == s, "reconstruction from any d shares");
    auto add = shamir::deal_additive(s, n, rng);
    FieldElement sum = f.zero();
    for (const auto& v : add) sum += v;
    check(sum == s, "additive shares sum to the secret");
  }
}

void paillier_suite(Checker& check, std::uint64_t seed) {
  Rng rng(seed);
  auto kp = paillier::keygen(256, rng);
  for (int k = 0; k < 20; ++k) {
    mpz_class a = random_below(rng, kp.pub.n), b = random_below(rng, kp.pub.n), w = random_below(rng, 1000);
    auto ca = paillier::encrypt(kp.pub, a, rng), cb = paillier::encrypt(kp.pub, b, rng);
    check(paillier::decrypt(kp.priv, kp.pub, ca) == a, "decrypt(encrypt(m)) = m");
    check(paillier::decrypt(kp.priv, kp.pub, paillier::hom_add(kp.pub, ca, cb)) == (a + b) % kp.pub.n, "hom add");
    check(paillier::decrypt(kp.priv, kp.pub, paillier::hom_scale(kp.pub, ca, w)) == (a * w) % kp.pub.n, "hom scale");
  }
  check(kp.pub.ciphertext_bytes() == 64, "ciphertext size at 256-bit keys");
  for (std::size_t holders : {3u, 5u}) {
    for (std::size_t t : {std::size_t{2}, holders}) {
      auto pair = paillier::keygen(256, rng);
      std::vector<std::uint32_t> ids;
      for (std::uint32_t h = 0; h < holders; ++h) ids.push_back(10 + h);
      mpz_class m = random_below(rng, pair.pub.n);
      auto c = paillier::encrypt(pair.pub, m, rng);
      auto split = paillier::split_key(std::move(pair.priv), pair.pub, ids, t, rng);
      std::vector<paillier::PartialDecryption> parts;
      for (std::size_t k = holders - t; k < holders; ++k) parts.push_back(paillier::partial_decrypt(pair.pub, c, split.shares[k]));
      check(paillier::combine_partials(parts, split.info, pair.pub) == m, "threshold decryption with t partials");
      if (t > 1) {
        parts.pop_back();
        bool threw = false;
        try {
          paillier::combine_partials(parts, split.info, pair.pub);
        } catch (const InsufficientShares&) {
          threw = true;
        }
        check(threw, "t - 1 partials are refused");
      }
    }
  }
}

void pedersen_suite(Checker& check, std::uint64_t seed) {
  Rng rng(seed);
  for (const char* profile : {"tiny", "fast"}) {
    const auto& g = pedersen::group_profile(profile);
    pedersen::validate(g);
    std::vector<FieldElement> pts;
    for (std::uint64_t l = 1; l <= std::min<std::uint64_t>(6, g.q - 1); ++l) pts.emplace_back(l, g.q);
    for (int k = 0; k < 10; ++k) {
      auto s = FieldElement::random(g.q, rng), t = FieldElement::random(g.q, rng);
      auto dealing = pedersen::vss_deal(g, s, t, 3, pts, rng);
      bool all = true;
      for (const auto& sh : dealing.shares) all = all && pedersen::vss_verify(g, sh, dealing.commitments);
      check(all, std::string(profile) + ": honest shares verify");
      auto bad = dealing.shares[0];
      bad.sigma += FieldElement(1, g.q);
      check(!pedersen::vss_verify(g, bad, dealing.commitments), std::string(profile) + ": tampered share fails");
      check(pedersen::parse_commitments(pedersen::serialize(dealing.commitments)) == dealing.commitments,
            "commitment serialization round trip");
    }
  }
  const auto& g = pedersen::group_profile("tiny");
  check(pedersen::commit(g, {3, g.q}, {5, g.q}) == (pow_mod(g.g, 3, g.p) * pow_mod(g.h, 5, g.p)) % g.p,
        "commitment definition");
}

void byzagree_suite(Checker& check, std::uint64_t seed) {
  for (std::size_t n = 2; n <= 7; ++n) {
    for (std::size_t f = 0; f + 1 < n && f <= 3; ++f) {
      byzagree::AgreementInstance inst;
      for (byzagree::NodeId p = 0; p < n; ++p) inst.participants.push_back(p);
      inst.f_bound = f;
      inst.instance_id = seed;
      byzagree::TagAuthority auth(seed);
      auto honest = byzagree::run_broadcast(inst, "v", nullptr, auth);
      check(byzagree::validity_holds(honest, "v"), "validity with an honest general");
      check(honest.relay_rounds == f + 1, "f + 1 relay rounds");
      check(honest.honest_messages == byzagree::honest_message_count(n, f), "honest message count");
      if (f >= 1) {
        std::set<byzagree::NodeId> half;
        for (byzagree::NodeId p = 1; p < n; p += 2) half.insert(p);
        auto eq = byzagree::equivocating_general(0, "a", "b", half);
        byzagree::TagAuthority auth2(seed + 1);
        auto r = byzagree::run_broadcast(inst, "a", eq.get(), auth2);
        check(byzagree::agreement_holds(r), "agreement under an equivocating general");
      }
    }
  }
}

std::vector<FieldElement> random_elems(std::size_t k, Rng& rng, std::uint64_t mod) {
  std::vector<FieldElement> v;
  for (std::size_t i = 0; i < k; ++i) v.push_back(FieldElement::random(mod, rng));
  return v;
}

void schemes_suite(Checker& check, std::uint64_t seed) {
  Rng rng(seed);
  for (int trial = 0; trial < 20; ++trial) {
    Vicinity v;
    const std::size_t k = 1 + uniform_below(rng, 8);
    v.messages = random_elems(k, rng, kMersenne61);
    v.weights = random_elems(k, rng, kMersenne61);
    v.d = 1 + uniform_below(rng, k);
    const auto oracle = plain_round(v.messages, v.weights).value;
    for (auto mode : {SssMode::PerMessage, SssMode::Additive}) {
      check(sss_round(v, mode, seed + trial).outcome.value == oracle, "sss " + to_string(mode) + " equals the plain sum");
    }
    check(homomorphic_round(v, 256, seed + trial).outcome.value == oracle, "homomorphic equals the plain sum");
    if (v.d >= 1) {
      check(malicious_sss_round(v, "fast", seed + trial).outcome.value == oracle, "malicious equals the plain sum");
    }
  }
}

void numerics_suite(Checker& check, std::uint64_t seed) {
  for (int trial = 0; trial < 5; ++trial) {
    auto topo = erdos_renyi(40, 0.15, seed + trial);
    auto sys = numerics::random_dominant_system(topo, seed + trial);
    auto direct = numerics::solve_dense(sys.dense(), sys.b);
    auto iter = numerics::jacobi_solve(sys, {}, 1e-10, 10'000);
    double err = 0;
    for (std::size_t i = 0; i < direct.size(); ++i) err = std::max(err, std::fabs(direct[i] - iter.x[i]));
    check(iter.converged && err < 1e-8, "jacobi matches the direct solve");
    check(numerics::spectral_radius_check(sys, 200).sufficient(), "dominant systems pass the spectral check");
  }
  auto r = numerics::random_ratings(15, 6, 0.6, seed);
  std::vector<double> b(15);
  Rng rng(seed);
  for (auto& x : b) x = 1 + 4 * uniform_unit(rng);
  auto aug = numerics::build_augmented(r, b, 1e-6);
  auto sol = numerics::solve_dense(aug.system.dense(), aug.system.b);
  auto w = aug.weights(sol);
  auto ne = numerics::normal_equations_solution(r, b);
  double rel = 0;
  for (std::size_t i = 0; i < ne.size(); ++i) rel = std::max(rel, std::fabs(w[i] - ne[i]) / std::max(1.0, std::fabs(ne[i])));
  check(rel < 1e-4, "augmented system reproduces the normal equations");
}

void topio_suite(Checker& check, std::uint64_t seed) {
  for (int trial = 0; trial < 20; ++trial) {
    auto t = erdos_renyi(30, 0.1, seed + trial);
    check(parse_edge_list(emit_edge_list(t)) == t, "edge list round trip");
  }
  check(parse_edge_list("0 1\n1 2").edge_count() == 2, "path parse");
  check(parse_edge_list("0 1\n1 0\n0 1\n").edge_count() == 1, "duplicate edges collapse");
  check(bipartite(3, 4, 1.0, seed).edge_count() == 12, "complete bipartite");
  check(erdos_renyi(50, 0.0, seed).edge_count() == 0, "empty ER graph");
  bool threw = false;
  try {
    parse_edge_list("0 1\nx y\n");
  } catch (const ParseError& e) {
    threw = e.line() == 2;
  }
  check(threw, "malformed line reports its number");
}

void simulator_suite(Checker& check, std::uint64_t seed) {
  auto topo = erdos_renyi(60, 0.1, seed);
  auto sys = numerics::random_dominant_system(topo, seed);
  SchemeConfig plain;
  SchemeConfig sss;
  sss.id = SchemeId::Sss;
  JacobiWorkload w1(sys, {}), w2(sys, {}), w3(sys, {});
  auto a = run(topo, plain, w1, 8, {}, seed);
  auto b = run(topo, plain, w2, 8, {}, seed);
  auto c = run(topo, sss, w3, 8, {}, seed);
  check(a.metrics.same_counts(b.metrics) && a.estimates == b.estimates, "plain run is deterministic");
  double err = 0;
  for (std::size_t i = 0; i < topo.node_count(); ++i) err = std::max(err, std::fabs(a.estimates.back()[i] - c.estimates.back()[i]));
  check(err <= 8.0 / 1e6, "sss matches plain within rounds / c");
  check(c.metrics.total_comm_rounds() == 2 * a.metrics.total_comm_rounds(), "sss doubles the communication rounds");
  auto policy = make_policy(topo, sss);
  check(c.metrics.rounds[0].messages == expected_round_messages(sss, topo, policy), "sss message count");
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"field",    "shamir",   "paillier", "pedersen", "byzagree",
                                                 "schemes",  "privacy-f17", "numerics", "topio", "simulator"};
  return names;
}

PrivacyCounts privacy_f17(std::size_t threshold, std::size_t holders) {
  constexpr std::uint64_t p = 17;
  if (threshold == 0 || threshold > holders || holders >= p) throw ArgumentError("bad privacy parameters");
  PrivacyCounts out;
  out.threshold = threshold;
  std::size_t dealings = 1;
  for (std::size_t k = 1; k < threshold; ++k) dealings *= p;
  out.views_per_secret = dealings;

  auto shares_for = [&](std::uint64_t s, std::size_t code) {
    std::vector<std::uint64_t> words;
    for (std::size_t k = 1; k < threshold; ++k) {
      words.push_back(code % p);
      code /= p;
    }
    Rng scripted = Rng::scripted(words);
    auto poly = shamir::SharingPolynomial::random(FieldElement(s, p), threshold, scripted);
    std::vector<FieldElement> values;
    for (std::uint64_t x = 1; x <= holders; ++x) values.push_back(poly.evaluate(FieldElement(x, p)));
    return values;
  };

  for (std::uint32_t mask = 0; mask < (1u << holders); ++mask) {
    const std::size_t size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size + 1 == threshold) {
      std::map<std::vector<std::uint64_t>, std::size_t> reference;
      for (std::uint64_t s = 0; s < p; ++s) {
        std::map<std::vector<std::uint64_t>, std::size_t> hist;
        for (std::size_t code = 0; code < dealings; ++code) {
          auto values = shares_for(s, code);
          std::vector<std::uint64_t> view;
          for (std::size_t l = 0; l < holders; ++l) {
            if (mask & (1u << l)) view.push_back(values[l].value());
          }
          ++hist[view];
        }
        if (s == 0) {
          reference = std::move(hist);
        } else if (hist != reference) {
          out.identical = false;
        }
      }
      ++out.coalitions_checked;
    } else if (size == threshold) {
      for (std::uint64_t s = 0; s < p; ++s) {
        for (std::size_t code = 0; code < dealings; ++code) {
          auto values = shares_for(s, code);
          std::vector<shamir::Share> shares;
          for (std::size_t l = 0; l < holders; ++l) {
            if (mask & (1u << l)) shares.push_back({FieldElement(l + 1, p), values[l]});
          }
          out.reconstructs = out.reconstructs && shamir::reconstruct(shares, threshold) == FieldElement(s, p);
          ++out.reconstructions;
        }
      }
    }
  }
  return out;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  SuiteResult r;
  r.name = name;
  Checker check{r};
  static const std::map<std::string, std::function<void(Checker&, std::uint64_t)>> suites = {
      {"field", field_suite},       {"shamir", shamir_suite},   {"paillier", paillier_suite},
      {"pedersen", pedersen_suite}, {"byzagree", byzagree_suite}, {"schemes", schemes_suite},
      {"numerics", numerics_suite}, {"topio", topio_suite},     {"simulator", simulator_suite},
      {"privacy-f17",
       [](Checker& c, std::uint64_t) {
         for (std::size_t d : {2u, 3u}) {
           auto counts = privacy_f17(d, d + 2);
           c(counts.identical, "d = " + std::to_string(d) + ": coalition views depend on the secret");
           c(counts.reconstructs, "d = " + std::to_string(d) + ": a d-coalition fails to reconstruct");
         }
       }},
  };
  auto it = suites.find(name);
  if (it == suites.end()) throw ArgumentError("unknown verification suite '" + name + "'");
  try {
    it->second(check, seed);
  } catch (const std::exception& e) {
    r.failures.push_back(std::string("exception: ") + e.what());
  }
  return r;
}

}  // namespace smpc
