#pragma once

#include <cstdint>
#include <span>
#include <string>

#include <gmpxx.h>

#include "smpc/random.hpp"

namespace smpc {

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime_u64(std::uint64_t n) noexcept;

struct FieldParams {
  std::uint64_t modulus = kMersenne61;
  std::string name = "mersenne61";
};

// An element of Z_p for a prime p < 2^63. Elements remember their modulus;
// mixing moduli throws ConfigError.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(std::uint64_t value, std::uint64_t modulus);

  static FieldElement random(std::uint64_t modulus, Rng& rng);
  static FieldElement random_nonzero(std::uint64_t modulus, Rng& rng);
  static FieldElement from_signed(std::int64_t v, std::uint64_t modulus);

  std::uint64_t value() const noexcept { return value_; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return value_ == 0; }

  // Upper half of the field is read as negative.
  std::int64_t to_signed() const noexcept;

  FieldElement inv() const;
  FieldElement pow(std::uint64_t e) const;

  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  FieldElement operator-() const;

  friend bool operator==(const FieldElement& a, const FieldElement& b) noexcept {
    return a.value_ == b.value_ && a.modulus_ == b.modulus_;
  }

  std::string to_string() const { return std::to_string(value_); }

 private:
  void check_same(const FieldElement& o) const;

  std::uint64_t value_ = 0;
  std::uint64_t modulus_ = 0;
};

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept;

// Factory for elements of one prime field; validates primality once.
class PrimeField {
 public:
  explicit PrimeField(FieldParams params = {});
  explicit PrimeField(std::uint64_t modulus, std::string name = {});

  const FieldParams& params() const noexcept { return params_; }
  std::uint64_t modulus() const noexcept { return params_.modulus; }

  FieldElement element(std::uint64_t v) const { return {v % params_.modulus, params_.modulus}; }
  FieldElement from_signed(std::int64_t v) const { return FieldElement::from_signed(v, params_.modulus); }
  FieldElement zero() const { return {0, params_.modulus}; }
  FieldElement one() const { return {1, params_.modulus}; }
  FieldElement random(Rng& rng) const { return FieldElement::random(params_.modulus, rng); }
  FieldElement random_nonzero(Rng& rng) const {
    return FieldElement::random_nonzero(params_.modulus, rng);
  }

  // Bytes needed to carry one element on the wire.
  std::size_t byte_size() const noexcept;

 private:
  FieldParams params_;
};

inline constexpr std::uint64_t kDefaultScale = 1'000'000;

// Maps reals to field elements by scaling with c and rounding; accuracy 1/c.
// Negative reals land in the upper half of the field.
class FixedPointCodec {
 public:
  explicit FixedPointCodec(std::uint64_t scale = kDefaultScale, std::uint64_t modulus = kMersenne61);

  std::uint64_t scale() const noexcept { return scale_; }
  std::uint64_t modulus() const noexcept { return modulus_; }

  // Largest magnitude that encodes without wrapping.
  double max_magnitude() const noexcept;

  FieldElement encode(double x) const;
  double decode(const FieldElement& e) const;

 private:
  std::uint64_t scale_;
  std::uint64_t modulus_;
};

// Decodes an element that carries the product of two scales.
double decode_scaled(const FieldElement& e, double total_scale);

mpz_class lcm_of(std::span<const std::uint64_t> divisors);

struct PremultipliedValue {
  FieldElement value;
  mpz_class multiplier;
};

// Multiplies x (read as a signed integer) by lcm(divisors) so that later
// division by any member of the set is exact.
PremultipliedValue premultiply_lcm(const FieldElement& x, std::span<const std::uint64_t> divisors);

// Exact signed-integer division; DomainError when d does not divide x.
FieldElement exact_divide(const FieldElement& x, std::uint64_t d);

}  // namespace smpc
