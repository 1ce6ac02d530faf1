#include "smpc/field.hpp"

#include <cmath>
#include <numeric>

#include "smpc/errors.hpp"

namespace smpc {

namespace {

using u128 = unsigned __int128;

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) noexcept {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return result;
}

bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) noexcept {
  std::uint64_t x = pow_mod(a % n, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
  u128 z = static_cast<u128>(a) * b;
  if (m == kMersenne61) {
    std::uint64_t lo = static_cast<std::uint64_t>(z) & kMersenne61;
    std::uint64_t hi = static_cast<std::uint64_t>(z >> 61);
    std::uint64_t r = lo + hi;
    if (r >= kMersenne61) r -= kMersenne61;
    return r;
  }
  return static_cast<std::uint64_t>(z % m);
}

bool is_prime_u64(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

FieldElement::FieldElement(std::uint64_t value, std::uint64_t modulus)
    : value_(modulus ? value % modulus : value), modulus_(modulus) {}

FieldElement FieldElement::random(std::uint64_t modulus, Rng& rng) {
  return {uniform_below(rng, modulus), modulus};
}

FieldElement FieldElement::random_nonzero(std::uint64_t modulus, Rng& rng) {
  return {1 + uniform_below(rng, modulus - 1), modulus};
}

FieldElement FieldElement::from_signed(std::int64_t v, std::uint64_t modulus) {
  if (v >= 0) return {static_cast<std::uint64_t>(v) % modulus, modulus};
  std::uint64_t mag = static_cast<std::uint64_t>(-(v + 1)) + 1;
  mag %= modulus;
  return {mag == 0 ? 0 : modulus - mag, modulus};
}

std::int64_t FieldElement::to_signed() const noexcept {
  if (value_ > modulus_ / 2) return -static_cast<std::int64_t>(modulus_ - value_);
  return static_cast<std::int64_t>(value_);
}

void FieldElement::check_same(const FieldElement& o) const {
  if (modulus_ != o.modulus_ || modulus_ == 0) {
    throw ConfigError("field modulus mismatch: " + std::to_string(modulus_) + " vs " +
                      std::to_string(o.modulus_));
  }
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  check_same(o);
  value_ += o.value_;
  if (value_ >= modulus_) value_ -= modulus_;
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  check_same(o);
  value_ = value_ >= o.value_ ? value_ - o.value_ : value_ + (modulus_ - o.value_);
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  check_same(o);
  value_ = mul_mod(value_, o.value_, modulus_);
  return *this;
}

FieldElement FieldElement::operator-() const { return {value_ == 0 ? 0 : modulus_ - value_, modulus_}; }

FieldElement FieldElement::pow(std::uint64_t e) const { return {pow_mod(value_, e, modulus_), modulus_}; }

FieldElement FieldElement::inv() const {
  if (value_ == 0) throw DomainError("inverse of zero");
  return pow(modulus_ - 2);
}

PrimeField::PrimeField(FieldParams params) : params_(std::move(params)) {
  if (params_.modulus >= (std::uint64_t{1} << 63)) throw ConfigError("field modulus must be below 2^63");
  if (!is_prime_u64(params_.modulus)) {
    throw ConfigError("field modulus " + std::to_string(params_.modulus) + " is not prime");
  }
}

PrimeField::PrimeField(std::uint64_t modulus, std::string name)
    : PrimeField(FieldParams{modulus, name.empty() ? "F_" + std::to_string(modulus) : std::move(name)}) {}

std::size_t PrimeField::byte_size() const noexcept {
  std::size_t bits = 64 - static_cast<std::size_t>(__builtin_clzll(params_.modulus));
  return (bits + 7) / 8;
}

FixedPointCodec::FixedPointCodec(std::uint64_t scale, std::uint64_t modulus) : scale_(scale), modulus_(modulus) {
  if (scale == 0) throw ConfigError("codec scale must be positive");
  if (modulus / 2 <= scale) throw ConfigError("codec scale too large for the field");
  if (scale == kDefaultScale && modulus <= (std::uint64_t{1} << 40)) {
    throw ConfigError("the default codec needs a field modulus above 2^40");
  }
}

double FixedPointCodec::max_magnitude() const noexcept {
  return static_cast<double>((modulus_ - 1) / 2) / static_cast<double>(scale_);
}

FieldElement FixedPointCodec::encode(double x) const {
  if (!std::isfinite(x)) throw OverflowError("cannot encode non-finite value");
  long double scaled = static_cast<long double>(x) * static_cast<long double>(scale_);
  const long double half = static_cast<long double>((modulus_ - 1) / 2);
  long double rounded = std::nearbyintl(scaled);
  if (std::fabs(rounded) > half) {
    throw OverflowError("value " + std::to_string(x) + " exceeds codec range at scale " + std::to_string(scale_));
  }
  return FieldElement::from_signed(static_cast<std::int64_t>(rounded), modulus_);
}

double FixedPointCodec::decode(const FieldElement& e) const {
  if (e.modulus() != modulus_) throw ConfigError("codec modulus mismatch");
  return static_cast<double>(e.to_signed()) / static_cast<double>(scale_);
}

double decode_scaled(const FieldElement& e, double total_scale) {
  return static_cast<double>(e.to_signed()) / total_scale;
}

mpz_class lcm_of(std::span<const std::uint64_t> divisors) {
  mpz_class acc = 1;
  for (std::uint64_t d : divisors) {
    if (d == 0) throw ArgumentError("divisor set contains zero");
    mpz_class dz;
    mpz_set_ui(dz.get_mpz_t(), d);
    mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), dz.get_mpz_t());
  }
  return acc;
}

PremultipliedValue premultiply_lcm(const FieldElement& x, std::span<const std::uint64_t> divisors) {
  mpz_class mult = lcm_of(divisors);
  mpz_class v;
  mpz_set_si(v.get_mpz_t(), x.to_signed());
  mpz_class product = v * mult;
  mpz_class half;
  mpz_set_ui(half.get_mpz_t(), (x.modulus() - 1) / 2);
  if (abs(product) > half) throw OverflowError("premultiplied value leaves the representable range");
  return {FieldElement::from_signed(mpz_get_si(product.get_mpz_t()), x.modulus()), mult};
}

FieldElement exact_divide(const FieldElement& x, std::uint64_t d) {
  if (d == 0) throw DomainError("division by zero");
  std::int64_t v = x.to_signed();
  auto sd = static_cast<std::int64_t>(d);
  if (v % sd != 0) throw DomainError("division is not exact");
  return FieldElement::from_signed(v / sd, x.modulus());
}

}  // namespace smpc
