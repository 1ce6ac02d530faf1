#include "smpc/bigint.hpp"

#include <vector>

#include "smpc/errors.hpp"

namespace smpc {

mpz_class random_bits(Rng& rng, std::size_t bits) {
  std::vector<std::uint64_t> words((bits + 63) / 64);
  for (auto& w : words) w = rng();
  if (bits % 64 && !words.empty()) words.back() &= (std::uint64_t{1} << (bits % 64)) - 1;
  mpz_class r;
  if (!words.empty()) mpz_import(r.get_mpz_t(), words.size(), -1, sizeof(std::uint64_t), 0, 0, words.data());
  return r;
}

mpz_class random_below(Rng& rng, const mpz_class& bound) {
  if (bound <= 0) throw ArgumentError("random_below needs a positive bound");
  const std::size_t bits = bit_length(bound);
  for (;;) {
    mpz_class r = random_bits(rng, bits);
    if (r < bound) return r;
  }
}

mpz_class random_prime(Rng& rng, std::size_t bits) {
  if (bits < 3) throw ArgumentError("prime size too small");
  for (;;) {
    mpz_class c = random_bits(rng, bits);
    mpz_setbit(c.get_mpz_t(), bits - 1);
    mpz_setbit(c.get_mpz_t(), bits - 2);
    mpz_class p;
    mpz_nextprime(p.get_mpz_t(), c.get_mpz_t());
    if (bit_length(p) == bits) return p;
  }
}

std::size_t bit_length(const mpz_class& v) {
  return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

std::size_t byte_length(const mpz_class& v) { return (bit_length(v) + 7) / 8; }

mpz_class pow_mod(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
  mpz_class r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return r;
}

std::uint64_t mpz_low_u64(const mpz_class& v) {
  std::uint64_t out = 0;
  std::size_t count = 0;
  mpz_class low = abs(v);
  mpz_fdiv_r_2exp(low.get_mpz_t(), low.get_mpz_t(), 64);
  mpz_export(&out, &count, -1, sizeof out, 0, 0, low.get_mpz_t());
  return out;
}

}  // namespace smpc
