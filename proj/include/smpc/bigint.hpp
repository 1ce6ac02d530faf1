#pragma once

#include <cstddef>
#include <string>

#include <gmpxx.h>

#include "smpc/random.hpp"

namespace smpc {

// Uniform integer with exactly `bits` random bits (top bit may be zero).
mpz_class random_bits(Rng& rng, std::size_t bits);

// Uniform integer in [0, bound).
mpz_class random_below(Rng& rng, const mpz_class& bound);

// Probable prime with exactly `bits` bits; the top two bits are set so that
// the product of two such primes has exactly 2*bits bits.
mpz_class random_prime(Rng& rng, std::size_t bits);

std::size_t bit_length(const mpz_class& v);
std::size_t byte_length(const mpz_class& v);

mpz_class pow_mod(const mpz_class& base, const mpz_class& exp, const mpz_class& mod);

inline mpz_class mpz_from_u64(std::uint64_t v) {
  mpz_class r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
  return r;
}

inline mpz_class mpz_from_i64(std::int64_t v) {
  if (v >= 0) return mpz_from_u64(static_cast<std::uint64_t>(v));
  return -mpz_from_u64(static_cast<std::uint64_t>(-(v + 1)) + 1);
}

// Low 64 bits of |v|.
std::uint64_t mpz_low_u64(const mpz_class& v);

}  // namespace smpc
