#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "smpc/random.hpp"

namespace smpc::paillier {

struct PublicKey {
  mpz_class n;
  mpz_class n_squared;
  mpz_class g;  // n + 1
  std::size_t security_bits = 0;
  std::uint64_t key_id = 0;

  std::size_t ciphertext_bytes() const;
};

struct PrivateKey {
  mpz_class lambda;  // lcm(p-1, q-1)
  mpz_class mu;      // L(g^lambda mod n^2)^-1 mod n
};

struct KeyPair {
  PublicKey pub;
  PrivateKey priv;
};

struct Ciphertext {
  mpz_class value;
  std::uint64_t key_id = 0;
};

// Public key for modulus n with g = n + 1.
PublicKey make_public_key(const mpz_class& n);

KeyPair keygen(std::size_t security_bits, Rng& rng);
KeyPair keygen_from_primes(const mpz_class& p, const mpz_class& q);

Ciphertext encrypt(const PublicKey& pk, const mpz_class& m, const mpz_class& r);
Ciphertext encrypt(const PublicKey& pk, const mpz_class& m, Rng& rng);
mpz_class decrypt(const PrivateKey& sk, const PublicKey& pk, const Ciphertext& c);

Ciphertext hom_add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b);
Ciphertext hom_scale(const PublicKey& pk, const Ciphertext& c, const mpz_class& k);

// L(x) = (x - 1) / n; CorruptionError unless x = 1 mod n.
mpz_class L(const mpz_class& x, const mpz_class& n);

// --- dealer-based threshold decryption ---

enum class KeyShareMode { Additive, Shamir };

// Everything the key owner's node and its neighbors may know.
struct ThresholdPublicInfo {
  KeyShareMode mode = KeyShareMode::Additive;
  std::size_t threshold = 0;
  std::vector<std::uint32_t> holders;  // share i is evaluated at point i + 1
  mpz_class mu;
  mpz_class delta;        // holders.size()! in Shamir mode, 1 otherwise
  mpz_class field_prime;  // prime above lambda over which Shamir shares interpolate
  std::uint64_t key_id = 0;
};

struct KeyShare {
  std::uint32_t holder = 0;
  mpz_class value;  // may be negative in additive mode
};

struct ThresholdKeyShares {
  ThresholdPublicInfo info;
  std::vector<KeyShare> shares;  // aligned with info.holders
};

// Consumes the private key. Additive split when threshold == holders.size(),
// integer Shamir sharing otherwise.
ThresholdKeyShares split_key(PrivateKey&& sk, const PublicKey& pk, std::span<const std::uint32_t> holders,
                             std::size_t threshold, Rng& rng);

struct PartialDecryption {
  std::uint32_t holder = 0;
  mpz_class value;  // c^{s_j} mod n^2
};

PartialDecryption partial_decrypt(const PublicKey& pk, const Ciphertext& c, const KeyShare& share);

mpz_class combine_partials(std::span<const PartialDecryption> partials, const ThresholdPublicInfo& info,
                           const PublicKey& pk);

}  // namespace smpc::paillier
