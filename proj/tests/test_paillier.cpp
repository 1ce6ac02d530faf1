#include "doctest.h"
#include "smpc/bigint.hpp"
#include "smpc/errors.hpp"
#include "smpc/paillier.hpp"

using namespace smpc;
using namespace smpc::paillier;

namespace {

mpz_class big_pow(const mpz_class& b, const mpz_class& e, const mpz_class& m) {
  mpz_class r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

// Interpolates integer shares at zero over the prime field `p`.
mpz_class interpolate_mod(const std::vector<std::pair<long, mpz_class>>& pts, const mpz_class& p) {
  mpz_class acc = 0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    mpz_class num = 1, den = 1;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k == j) continue;
      num *= -pts[k].first;
      den *= pts[j].first - pts[k].first;
    }
    mpz_class inv;
    den %= p;
    if (den < 0) den += p;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
    acc += pts[j].second * num * inv;
  }
  acc %= p;
  if (acc < 0) acc += p;
  return acc;
}

}  // namespace

TEST_CASE("toy key") {
  auto kp = keygen_from_primes(5, 7);
  CHECK(kp.pub.n == 35);
  CHECK(kp.priv.lambda == 12);
  CHECK(kp.pub.g == 36);
  CHECK(kp.pub.g % kp.pub.n == 1);
  Rng rng(1);
  for (long m = 0; m < 35; ++m) CHECK(decrypt(kp.priv, kp.pub, encrypt(kp.pub, m, rng)) == m);
  auto c = encrypt(kp.pub, 3, mpz_class(2));
  CHECK(c.value == (big_pow(36, 3, 1225) * big_pow(2, 35, 1225)) % 1225);
  CHECK(decrypt(kp.priv, kp.pub, encrypt(kp.pub, 0, mpz_class(2))) == 0);
  CHECK_THROWS_AS(encrypt(kp.pub, 35, rng), ArgumentError);
  CHECK_THROWS_AS(encrypt(kp.pub, -1, rng), ArgumentError);
}

TEST_CASE("keygen sizes") {
  Rng rng(2);
  for (std::size_t bits : {128u, 256u, 512u}) {
    auto kp = keygen(bits, rng);
    CHECK(bit_length(kp.pub.n) == bits);
    CHECK(kp.pub.n % 2 == 1);
    CHECK(kp.pub.g == kp.pub.n + 1);
    CHECK(kp.pub.ciphertext_bytes() == bits / 4);
  }
}

TEST_CASE("homomorphic operations") {
  auto kp = keygen_from_primes(5, 7);
  Rng rng(3);
  auto a = encrypt(kp.pub, 9, rng), b = encrypt(kp.pub, 30, rng);
  CHECK(decrypt(kp.priv, kp.pub, hom_add(kp.pub, a, b)) == (9 + 30) % 35);
  CHECK(decrypt(kp.priv, kp.pub, hom_scale(kp.pub, a, 4)) == 36 % 35);
  CHECK(decrypt(kp.priv, kp.pub, hom_add(kp.pub, a, encrypt(kp.pub, 0, rng))) == 9);
  CHECK(decrypt(kp.priv, kp.pub, hom_scale(kp.pub, a, 1)) == 9);
  auto a2 = encrypt(kp.pub, 9, rng);
  CHECK(decrypt(kp.priv, kp.pub, a2) == 9);

  long sum = 0;
  Ciphertext acc = encrypt(kp.pub, 0, rng);
  for (int k = 0; k < 5; ++k) {
    long m = static_cast<long>(uniform_below(rng, 35));
    sum += m;
    acc = hom_add(kp.pub, acc, encrypt(kp.pub, m, rng));
  }
  CHECK(decrypt(kp.priv, kp.pub, acc) == sum % 35);
  CHECK_THROWS_AS(hom_scale(kp.pub, a, -1), ArgumentError);

  auto other = keygen_from_primes(11, 13);
  CHECK_THROWS_AS(hom_add(kp.pub, a, encrypt(other.pub, 1, rng)), ArgumentError);
}

TEST_CASE("weighted sums decrypt exactly") {
  Rng rng(4);
  auto kp = keygen(256, rng);
  for (int t = 0; t < 20; ++t) {
    mpz_class expect = 0;
    Ciphertext acc = encrypt(kp.pub, 0, rng);
    for (int k = 0; k < 6; ++k) {
      mpz_class m = random_below(rng, kp.pub.n), a = random_below(rng, mpz_class(1) << 61);
      expect += a * m;
      acc = hom_add(kp.pub, acc, hom_scale(kp.pub, encrypt(kp.pub, m, rng), a));
    }
    CHECK(decrypt(kp.priv, kp.pub, acc) == expect % kp.pub.n);
  }
}

TEST_CASE("L rejects corrupted input") { CHECK_THROWS_AS(L(3, 35), CorruptionError); }

TEST_CASE("additive key split") {
  Rng rng(5);
  auto kp = keygen(256, rng);
  const mpz_class lambda = kp.priv.lambda;
  std::vector<std::uint32_t> holders = {4, 7, 9};
  auto m = random_below(rng, kp.pub.n);
  auto c = encrypt(kp.pub, m, rng);
  auto split = split_key(std::move(kp.priv), kp.pub, holders, 3, rng);
  CHECK(split.info.mode == KeyShareMode::Additive);
  mpz_class sum = 0;
  for (const auto& s : split.shares) sum += s.value;
  CHECK(sum == lambda);
  std::vector<PartialDecryption> parts;
  for (const auto& s : split.shares) parts.push_back(partial_decrypt(kp.pub, c, s));
  CHECK(combine_partials(parts, split.info, kp.pub) == m);
  parts.pop_back();
  CHECK_THROWS_AS(combine_partials(parts, split.info, kp.pub), InsufficientShares);
}

TEST_CASE("single holder gets lambda") {
  Rng rng(6);
  auto kp = keygen(128, rng);
  const mpz_class lambda = kp.priv.lambda;
  std::vector<std::uint32_t> holders = {1};
  auto split = split_key(std::move(kp.priv), kp.pub, holders, 1, rng);
  CHECK(split.shares[0].value == lambda);
}

TEST_CASE("shamir key split") {
  Rng rng(7);
  for (int t = 0; t < 5; ++t) {
    auto kp = keygen(256, rng);
    const mpz_class lambda = kp.priv.lambda;
    std::vector<std::uint32_t> holders = {2, 3, 5, 8};
    auto split = split_key(std::move(kp.priv), kp.pub, holders, 2, rng);
    CHECK(split.info.mode == KeyShareMode::Shamir);
    CHECK(split.info.field_prime > lambda);
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = a + 1; b < 4; ++b) {
        std::vector<std::pair<long, mpz_class>> pts = {{static_cast<long>(a + 1), split.shares[a].value},
                                                       {static_cast<long>(b + 1), split.shares[b].value}};
        CHECK(interpolate_mod(pts, split.info.field_prime) == lambda);
      }
    }
    auto m = random_below(rng, kp.pub.n);
    auto c = encrypt(kp.pub, m, rng);
    std::vector<PartialDecryption> parts = {partial_decrypt(kp.pub, c, split.shares[3]),
                                            partial_decrypt(kp.pub, c, split.shares[1])};
    CHECK(combine_partials(parts, split.info, kp.pub) == m);
    parts.pop_back();
    CHECK_THROWS_AS(combine_partials(parts, split.info, kp.pub), InsufficientShares);
  }
}

TEST_CASE("split arguments") {
  Rng rng(9);
  auto kp = keygen(128, rng);
  std::vector<std::uint32_t> holders = {1, 2};
  CHECK_THROWS_AS(split_key(std::move(kp.priv), kp.pub, holders, 3, rng), ArgumentError);
}
