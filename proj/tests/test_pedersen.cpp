#include <map>

#include "doctest.h"
#include "smpc/bigint.hpp"
#include "smpc/errors.hpp"
#include "smpc/pedersen.hpp"
#include "smpc/shamir.hpp"

using namespace smpc;
using namespace smpc::pedersen;

namespace {

long powmod_small(long b, long e, long m) {
  long r = 1;
  for (long k = 0; k < e; ++k) r = r * b % m;
  return r;
}

std::vector<FieldElement> pts(std::size_t n, std::uint64_t q) {
  std::vector<FieldElement> p;
  for (std::uint64_t l = 1; l <= n; ++l) p.emplace_back(l, q);
  return p;
}

}  // namespace

TEST_CASE("tiny group") {
  auto g = tiny_group();
  validate(g);
  CHECK(g.p == 23);
  CHECK(g.q == 11);
  CHECK(commit(g, {0, 11}, {0, 11}) == 1);
  CHECK(commit(g, {3, 11}, {5, 11}) == powmod_small(4, 3, 23) * powmod_small(9, 5, 23) % 23);
  CHECK_THROWS_AS(commit_raw(g, 11, 0), ArgumentError);
  CHECK_THROWS_AS(commit_raw(g, -1, 0), ArgumentError);
}

TEST_CASE("derived profiles") {
  for (const char* name : {"fast", "standard"}) {
    const auto& g = group_profile(name);
    validate(g);
    CHECK(g.q == kMersenne61);
    CHECK(pow_mod(g.g, mpz_from_u64(g.q), g.p) == 1);
    CHECK(pow_mod(g.h, mpz_from_u64(g.q), g.p) == 1);
    CHECK(g.g != 1);
    CHECK(g.h != 1);
  }
  CHECK(bit_length(group_profile("fast").p) == 256);
  CHECK(bit_length(group_profile("standard").p) == 2048);
  CHECK(&group_profile("fast") == &group_profile("fast"));
  CHECK(derive_group(256, kMersenne61, "x").p == derive_group(256, kMersenne61, "x").p);
  CHECK_THROWS_AS(group_profile("nope"), ConfigError);
}

TEST_CASE("commitments are homomorphic") {
  const auto& g = group_profile("fast");
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    auto s1 = FieldElement::random(g.q, rng), t1 = FieldElement::random(g.q, rng);
    auto s2 = FieldElement::random(g.q, rng), t2 = FieldElement::random(g.q, rng);
    CHECK((commit(g, s1, t1) * commit(g, s2, t2)) % g.p == commit(g, s1 + s2, t1 + t2));
  }
}

TEST_CASE("vss dealing and verification") {
  auto g = tiny_group();
  Rng rng(2);
  auto d1 = vss_deal(g, {6, 11}, {2, 11}, 1, pts(3, 11), rng);
  CHECK(d1.threshold() == 1);
  for (const auto& s : d1.shares) {
    CHECK(s.sigma == FieldElement(6, 11));
    CHECK(s.tau == FieldElement(2, 11));
  }
  auto d2 = vss_deal(g, {7, 11}, {4, 11}, 2, pts(3, 11), rng);
  CHECK(d2.commitments.entries[0] == commit(g, {7, 11}, {4, 11}));
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = a + 1; b < 3; ++b) {
      std::vector<shamir::Share> sh = {{d2.shares[a].point, d2.shares[a].sigma}, {d2.shares[b].point, d2.shares[b].sigma}};
      CHECK(shamir::reconstruct(sh, 2) == FieldElement(7, 11));
    }
  }
}

TEST_CASE("tampered shares fail") {
  const auto& g = group_profile("fast");
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    auto dealing = vss_deal(g, FieldElement::random(g.q, rng), FieldElement::random(g.q, rng), 3, pts(5, g.q), rng);
    for (auto s : dealing.shares) {
      REQUIRE(vss_verify(g, s, dealing.commitments));
      s.sigma += FieldElement(1, g.q);
      REQUIRE_FALSE(vss_verify(g, s, dealing.commitments));
    }
  }
}

TEST_CASE("cross-dealing verification fails except on collisions") {
  auto g = tiny_group();
  Rng rng(4);
  int accepted = 0, collisions = 0;
  for (int t = 0; t < 1000; ++t) {
    auto a = vss_deal(g, FieldElement::random(11, rng), FieldElement::random(11, rng), 2, pts(3, 11), rng);
    auto b = vss_deal(g, FieldElement::random(11, rng), FieldElement::random(11, rng), 2, pts(3, 11), rng);
    // Oracle: the check passes exactly when g^sigma h^tau matches, which
    // can happen by chance in a group of order 11.
    const auto& s = b.shares[0];
    mpz_class rhs = 1;
    for (std::size_t k = 0; k < a.commitments.size(); ++k) {
      rhs = rhs * pow_mod(a.commitments.entries[k], mpz_from_u64(s.point.pow(k).value()), g.p) % g.p;
    }
    const bool collide = commit(g, s.sigma, s.tau) == rhs;
    collisions += collide;
    accepted += vss_verify(g, s, a.commitments);
  }
  CHECK(accepted == collisions);
  CHECK(collisions < 200);
}

TEST_CASE("combining commitments") {
  auto g = tiny_group();
  Rng rng(5);
  auto d = vss_deal(g, {3, 11}, {1, 11}, 2, pts(3, 11), rng);
  std::vector<CommitmentVector> one = {d.commitments};
  std::vector<FieldElement> c1 = {{1, 11}};
  CHECK(combine_commitments(g, one, c1) == d.commitments);
  std::vector<FieldElement> c0 = {{0, 11}};
  for (const auto& e : combine_commitments(g, one, c0).entries) CHECK(e == 1);

  for (int t = 0; t < 100; ++t) {
    std::vector<VssDealing> deals;
    std::vector<CommitmentVector> vecs;
    std::vector<FieldElement> coeffs;
    for (int j = 0; j < 3; ++j) {
      deals.push_back(vss_deal(g, FieldElement::random(11, rng), FieldElement::random(11, rng), 2, pts(4, 11), rng));
      vecs.push_back(deals.back().commitments);
      coeffs.push_back(FieldElement::random(11, rng));
    }
    auto combined = combine_commitments(g, vecs, coeffs);
    for (std::size_t l = 0; l < 4; ++l) {
      FieldElement S(0, 11), T(0, 11);
      for (int j = 0; j < 3; ++j) {
        S += coeffs[j] * deals[j].shares[l].sigma;
        T += coeffs[j] * deals[j].shares[l].tau;
      }
      REQUIRE(vss_verify(g, deals[0].shares[l].point, S, T, combined));
    }
  }
  std::vector<CommitmentVector> mismatched = {d.commitments, CommitmentVector{{1}}};
  std::vector<FieldElement> c2 = {{1, 11}, {1, 11}};
  CHECK_THROWS_AS(combine_commitments(g, mismatched, c2), ArgumentError);
}

TEST_CASE("binding and hiding by exhaustion in the tiny group") {
  auto g = tiny_group();
  // log_g h in the tiny group, found by search; only it allows openings to
  // collide with s' != s.
  long logh = -1;
  for (long k = 0; k < 11; ++k) {
    if (powmod_small(4, k, 23) == 9) logh = k;
  }
  REQUIRE(logh >= 0);
  for (long s = 0; s < 11; ++s) {
    for (long t = 0; t < 11; ++t) {
      const mpz_class c = commit(g, FieldElement(s, 11), FieldElement(t, 11));
      for (long s2 = 0; s2 < 11; ++s2) {
        for (long t2 = 0; t2 < 11; ++t2) {
          if (s2 == s) continue;
          if (commit(g, FieldElement(s2, 11), FieldElement(t2, 11)) == c) {
            CHECK(((s - s2) + logh * (t - t2)) % 11 == 0);
          }
        }
      }
    }
  }
  for (long s = 0; s < 11; ++s) {
    std::map<long, int> hist;
    for (long t = 0; t < 11; ++t) ++hist[commit(g, FieldElement(s, 11), FieldElement(t, 11)).get_si()];
    CHECK(hist.size() == 11);
  }
}

TEST_CASE("commitment serialization") {
  const auto& g = group_profile("fast");
  Rng rng(6);
  auto d = vss_deal(g, FieldElement::random(g.q, rng), FieldElement::random(g.q, rng), 4, pts(5, g.q), rng);
  CHECK(parse_commitments(serialize(d.commitments)) == d.commitments);
  CHECK_THROWS(parse_commitments("zz"));
}
