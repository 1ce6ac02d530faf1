#include <set>
#include <map>

#include "doctest.h"
#include "smpc/errors.hpp"
#include "smpc/shamir.hpp"

using namespace smpc;
using namespace smpc::shamir;

namespace {

std::vector<FieldElement> points(std::size_t n, std::uint64_t mod) {
  std::vector<FieldElement> p;
  for (std::uint64_t l = 1; l <= n; ++l) p.emplace_back(l, mod);
  return p;
}

}  // namespace

TEST_CASE("threshold one is a constant polynomial") {
  Rng rng(1);
  PrimeField f;
  auto set = deal(f.element(99), 1, points(5, f.modulus()), rng);
  for (const auto& s : set.shares) CHECK(s.value == f.element(99));
}

TEST_CASE("any d shares reconstruct") {
  Rng rng(2);
  PrimeField f;
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = 1 + uniform_below(rng, 20);
    const std::size_t d = 1 + uniform_below(rng, std::min<std::size_t>(n, 10));
    auto s = f.random(rng);
    auto set = deal(s, d, points(n, f.modulus()), rng);
    std::vector<Share> pick = set.shares;
    std::shuffle(pick.begin(), pick.end(), rng);
    pick.resize(d);
    REQUIRE(reconstruct(pick, d) == s);
  }
}

TEST_CASE("a single share leaves every secret possible in F_17") {
  // For each share value and point, count the secrets consistent with it.
  for (std::uint64_t x = 1; x < 17; ++x) {
    for (std::uint64_t y = 0; y < 17; ++y) {
      std::set<std::uint64_t> secrets;
      for (std::uint64_t s = 0; s < 17; ++s) {
        for (std::uint64_t a = 0; a < 17; ++a) {
          if ((s + a * x) % 17 == y) secrets.insert(s);
        }
      }
      CHECK(secrets.size() == 17);
    }
  }
}

TEST_CASE("lagrange weights") {
  const std::uint64_t p = kMersenne61;
  auto lw = precompute_lagrange(points(2, p));
  CHECK(lw.weights[0] == FieldElement(2, p));
  CHECK(lw.weights[1] == FieldElement(p - 1, p));
  CHECK(precompute_lagrange(points(1, p)).weights[0] == FieldElement(1, p));

  Rng rng(3);
  PrimeField f;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 1 + uniform_below(rng, 8);
    auto poly = SharingPolynomial::random(f.random(rng), k, rng);
    std::vector<FieldElement> pts;
    std::set<std::uint64_t> used;
    while (pts.size() < k) {
      auto x = f.random_nonzero(rng);
      if (used.insert(x.value()).second) pts.push_back(x);
    }
    auto w = precompute_lagrange(pts);
    FieldElement acc = f.zero();
    for (std::size_t j = 0; j < k; ++j) {
      // direct Horner evaluation as the oracle
      FieldElement v = f.zero();
      for (std::size_t c = poly.coefficients.size(); c-- > 0;) v = v * pts[j] + poly.coefficients[c];
      acc += w.weights[j] * v;
    }
    REQUIRE(acc == poly.secret());
  }
}

TEST_CASE("sharing is linear") {
  Rng rng(4);
  PrimeField f;
  auto pts = points(6, f.modulus());
  for (int t = 0; t < 100; ++t) {
    auto s1 = f.random(rng), s2 = f.random(rng), a = f.random(rng), b = f.random(rng);
    auto d1 = deal(s1, 3, pts, rng), d2 = deal(s2, 3, pts, rng);
    std::vector<Share> mix;
    for (std::size_t l = 0; l < 3; ++l) mix.push_back({pts[l], a * d1.shares[l].value + b * d2.shares[l].value});
    REQUIRE(reconstruct(mix, 3) == a * s1 + b * s2);
  }
}

TEST_CASE("invalid points are rejected") {
  PrimeField f;
  Rng rng(5);
  std::vector<FieldElement> bad = {f.element(1), f.element(1)};
  CHECK_THROWS(deal(f.one(), 2, bad, rng));
  std::vector<FieldElement> zero = {f.zero(), f.element(2)};
  CHECK_THROWS(deal(f.one(), 2, zero, rng));
  CHECK_THROWS(deal(f.one(), 3, points(2, f.modulus()), rng));
  std::vector<Share> few = {{f.element(1), f.one()}};
  CHECK_THROWS_AS(reconstruct(few, 2), InsufficientShares);
}

TEST_CASE("additive sharing") {
  Rng rng(6);
  PrimeField f;
  auto one = deal_additive(f.element(5), 1, rng);
  CHECK(one.size() == 1);
  CHECK(one[0] == f.element(5));
  for (int t = 0; t < 1000; ++t) {
    auto s = f.random(rng);
    auto parts = deal_additive(s, 1 + uniform_below(rng, 32), rng);
    FieldElement sum = f.zero();
    for (const auto& v : parts) sum += v;
    REQUIRE(sum == s);
  }
}

TEST_CASE("any n-1 additive shares look uniform in F_17") {
  Rng rng(7);
  std::map<std::pair<std::uint64_t, std::uint64_t>, int> counts;
  const int trials = 17 * 17 * 40;
  for (int t = 0; t < trials; ++t) {
    auto parts = deal_additive(FieldElement(11, 17), 3, rng);
    ++counts[{parts[1].value(), parts[2].value()}];
  }
  const double expected = trials / 289.0;
  double chi2 = 0;
  for (std::uint64_t a = 0; a < 17; ++a) {
    for (std::uint64_t b = 0; b < 17; ++b) {
      const double o = counts[{a, b}];
      chi2 += (o - expected) * (o - expected) / expected;
    }
  }
  // 288 degrees of freedom; 99.9th percentile is about 375.
  CHECK(chi2 < 375.0);
}
