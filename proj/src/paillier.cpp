#include "smpc/paillier.hpp"

#include <algorithm>

#include "smpc/bigint.hpp"
#include "smpc/errors.hpp"

namespace smpc::paillier {

namespace {

std::uint64_t fingerprint(const mpz_class& n) {
  return mix64(mpz_low_u64(n) ^ mix64(bit_length(n)));
}

mpz_class factorial(std::size_t n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

mpz_class invert(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) throw DomainError("value not invertible");
  return r;
}

void check_key(const PublicKey& pk, const Ciphertext& c) {
  if (c.key_id != pk.key_id) throw ArgumentError("ciphertext belongs to a different key");
}

}  // namespace

std::size_t PublicKey::ciphertext_bytes() const { return byte_length(n_squared); }

mpz_class L(const mpz_class& x, const mpz_class& n) {
  mpz_class t = x - 1;
  if (mpz_divisible_p(t.get_mpz_t(), n.get_mpz_t()) == 0) throw CorruptionError("L input is not 1 mod N");
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
  return q;
}

PublicKey make_public_key(const mpz_class& n) {
  if (n < 3 || n % 2 == 0) throw ArgumentError("modulus must be odd and larger than 2");
  PublicKey pk;
  pk.n = n;
  pk.n_squared = n * n;
  pk.g = n + 1;
  pk.security_bits = bit_length(n);
  pk.key_id = fingerprint(n);
  return pk;
}

KeyPair keygen_from_primes(const mpz_class& p, const mpz_class& q) {
  if (p == q) throw ArgumentError("p and q must differ");
  KeyPair kp;
  kp.pub = make_public_key(p * q);
  mpz_class pm = p - 1, qm = q - 1;
  mpz_lcm(kp.priv.lambda.get_mpz_t(), pm.get_mpz_t(), qm.get_mpz_t());
  mpz_class phi = pm * qm;
  mpz_class gcd_check;
  mpz_gcd(gcd_check.get_mpz_t(), kp.pub.n.get_mpz_t(), phi.get_mpz_t());
  if (gcd_check != 1) throw ArgumentError("gcd(N, (p-1)(q-1)) must be 1");
  kp.priv.mu = invert(L(pow_mod(kp.pub.g, kp.priv.lambda, kp.pub.n_squared), kp.pub.n), kp.pub.n);
  return kp;
}

KeyPair keygen(std::size_t security_bits, Rng& rng) {
  if (security_bits < 16 || security_bits % 2) throw ArgumentError("security bits must be even and at least 16");
  for (;;) {
    mpz_class p = random_prime(rng, security_bits / 2);
    mpz_class q = random_prime(rng, security_bits / 2);
    if (p == q) continue;
    mpz_class phi = (p - 1) * (q - 1), n = p * q, g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), phi.get_mpz_t());
    if (g != 1) continue;
    return keygen_from_primes(p, q);
  }
}

Ciphertext encrypt(const PublicKey& pk, const mpz_class& m, const mpz_class& r) {
  if (m < 0 || m >= pk.n) throw ArgumentError("plaintext outside [0, N)");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), pk.n.get_mpz_t());
  if (r <= 0 || g != 1) throw ArgumentError("randomness must be a unit mod N");
  // g^m = (1 + N)^m = 1 + mN mod N^2
  mpz_class gm = (1 + m * pk.n) % pk.n_squared;
  mpz_class c = (gm * pow_mod(r, pk.n, pk.n_squared)) % pk.n_squared;
  return {c, pk.key_id};
}

Ciphertext encrypt(const PublicKey& pk, const mpz_class& m, Rng& rng) {
  for (;;) {
    mpz_class r = random_below(rng, pk.n);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), pk.n.get_mpz_t());
    if (r > 0 && g == 1) return encrypt(pk, m, r);
  }
}

mpz_class decrypt(const PrivateKey& sk, const PublicKey& pk, const Ciphertext& c) {
  check_key(pk, c);
  if (c.value <= 0 || c.value >= pk.n_squared) throw CorruptionError("ciphertext outside [1, N^2)");
  return (L(pow_mod(c.value, sk.lambda, pk.n_squared), pk.n) * sk.mu) % pk.n;
}

Ciphertext hom_add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b) {
  check_key(pk, a);
  check_key(pk, b);
  return {(a.value * b.value) % pk.n_squared, pk.key_id};
}

Ciphertext hom_scale(const PublicKey& pk, const Ciphertext& c, const mpz_class& k) {
  check_key(pk, c);
  if (k < 0) throw ArgumentError("scalar must be non-negative");
  return {pow_mod(c.value, k, pk.n_squared), pk.key_id};
}

ThresholdKeyShares split_key(PrivateKey&& sk, const PublicKey& pk, std::span<const std::uint32_t> holders,
                             std::size_t threshold, Rng& rng) {
  const std::size_t n = holders.size();
  if (n == 0) throw ArgumentError("no key share holders");
  if (threshold == 0 || threshold > n) throw ArgumentError("threshold must lie in [1, holders]");

  ThresholdKeyShares out;
  out.info.threshold = threshold;
  out.info.holders.assign(holders.begin(), holders.end());
  out.info.mu = sk.mu;
  out.info.key_id = pk.key_id;
  mpz_class lambda = std::move(sk.lambda);
  sk.mu = 0;

  // Share coefficients exceed lambda by 128 bits so that partial sums are
  // statistically independent of it.
  const std::size_t mask_bits = bit_length(lambda) + 128;
  mpz_nextprime(out.info.field_prime.get_mpz_t(), mpz_class(mpz_class(1) << (bit_length(lambda) + 1)).get_mpz_t());

  out.shares.reserve(n);
  if (threshold == n) {
    out.info.mode = KeyShareMode::Additive;
    out.info.delta = 1;
    mpz_class rest = lambda;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      mpz_class s = random_bits(rng, mask_bits);
      rest -= s;
      out.shares.push_back({holders[k], s});
    }
    out.shares.push_back({holders[n - 1], rest});
  } else {
    out.info.mode = KeyShareMode::Shamir;
    out.info.delta = factorial(n);
    std::vector<mpz_class> coeffs{lambda};
    for (std::size_t k = 1; k < threshold; ++k) coeffs.push_back(random_bits(rng, mask_bits));
    for (std::size_t k = 0; k < n; ++k) {
      mpz_class x = static_cast<unsigned long>(k + 1);
      mpz_class acc = coeffs.back();
      for (std::size_t c = coeffs.size() - 1; c-- > 0;) acc = acc * x + coeffs[c];
      out.shares.push_back({holders[k], acc});
    }
  }
  return out;
}

PartialDecryption partial_decrypt(const PublicKey& pk, const Ciphertext& c, const KeyShare& share) {
  check_key(pk, c);
  return {share.holder, pow_mod(c.value, share.value, pk.n_squared)};
}

mpz_class combine_partials(std::span<const PartialDecryption> partials, const ThresholdPublicInfo& info,
                           const PublicKey& pk) {
  if (info.key_id != pk.key_id) throw ArgumentError("threshold info belongs to a different key");
  const std::size_t n = info.holders.size();
  // Position of each holder; partials from unknown holders are ignored.
  std::vector<const PartialDecryption*> by_pos(n, nullptr);
  for (const auto& p : partials) {
    auto it = std::find(info.holders.begin(), info.holders.end(), p.holder);
    if (it != info.holders.end()) by_pos[static_cast<std::size_t>(it - info.holders.begin())] = &p;
  }

  mpz_class combined = 1;
  if (info.mode == KeyShareMode::Additive) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!by_pos[k]) throw InsufficientShares("additive key sharing needs every partial decryption");
      combined = (combined * by_pos[k]->value) % pk.n_squared;
    }
    return (L(combined, pk.n) * info.mu) % pk.n;
  }

  std::vector<std::size_t> chosen;
  for (std::size_t k = 0; k < n && chosen.size() < info.threshold; ++k) {
    if (by_pos[k]) chosen.push_back(k);
  }
  if (chosen.size() < info.threshold) throw InsufficientShares("fewer partial decryptions than the threshold");

  // Integer Lagrange coefficients delta * prod x_k / prod (x_k - x_j).
  for (std::size_t j : chosen) {
    mpz_class num = info.delta, den = 1;
    const long xj = static_cast<long>(j + 1);
    for (std::size_t k : chosen) {
      if (k == j) continue;
      const long xk = static_cast<long>(k + 1);
      num *= xk;
      den *= (xk - xj);
    }
    if (mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()) == 0) throw DomainError("non-integral Lagrange coefficient");
    mpz_class coeff;
    mpz_divexact(coeff.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    combined = (combined * pow_mod(by_pos[j]->value, coeff, pk.n_squared)) % pk.n_squared;
  }
  // combined = c^{delta * lambda}
  mpz_class delta_inv = invert(info.delta % pk.n, pk.n);
  return (((L(combined, pk.n) * info.mu) % pk.n) * delta_inv) % pk.n;
}

}  // namespace smpc::paillier
