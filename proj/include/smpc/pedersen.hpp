#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "smpc/field.hpp"
#include "smpc/random.hpp"
#include "smpc/shamir.hpp"

namespace smpc::pedersen {

// Order-q subgroup of Z_p^*. Exponents live in F_q, so q must fit a
// FieldElement; production profiles use q = 2^61 - 1 to coincide with the
// secret-sharing field.
struct GroupParams {
  mpz_class p;
  std::uint64_t q = 0;
  mpz_class g;
  mpz_class h;
  std::string profile;

  std::size_t element_bytes() const;
};

// p = 23, q = 11, g = 4, h = 9.
GroupParams tiny_group();

// Deterministic Schnorr group with |p| = p_bits and the given prime order;
// g and h come from hashing `seed` into the subgroup.
GroupParams derive_group(std::size_t p_bits, std::uint64_t q, const std::string& seed);

// "tiny", "fast" (256-bit p) or "standard" (2048-bit p). Derived groups are
// cached per process.
const GroupParams& group_profile(const std::string& name);

// Checks primality, q | p - 1 and that g, h are nontrivial subgroup members.
void validate(const GroupParams& params);

// Hashes (seed, label) to a nontrivial element of the order-q subgroup.
mpz_class hash_to_group(const GroupParams& params, const std::string& seed, const std::string& label);

mpz_class commit(const GroupParams& params, const FieldElement& s, const FieldElement& t);
// Raw-exponent form; ArgumentError unless 0 <= s, t < q.
mpz_class commit_raw(const GroupParams& params, const mpz_class& s, const mpz_class& t);

struct CommitmentVector {
  std::vector<mpz_class> entries;

  std::size_t size() const noexcept { return entries.size(); }
  friend bool operator==(const CommitmentVector&, const CommitmentVector&) = default;
};

std::string serialize(const CommitmentVector& e);
CommitmentVector parse_commitments(const std::string& text);

struct VerifiableShare {
  FieldElement point;
  FieldElement sigma;  // P(point)
  FieldElement tau;    // R(point)
};

struct VssDealing {
  std::vector<VerifiableShare> shares;
  CommitmentVector commitments;

  std::size_t threshold() const noexcept { return commitments.size(); }
};

VssDealing vss_deal(const GroupParams& params, const FieldElement& s, const FieldElement& t, std::size_t threshold,
                    std::span<const FieldElement> points, Rng& rng);

VssDealing vss_deal_polynomials(const GroupParams& params, const shamir::SharingPolynomial& P,
                                const shamir::SharingPolynomial& R, std::span<const FieldElement> points);

CommitmentVector commitments_of(const GroupParams& params, const shamir::SharingPolynomial& P,
                                const shamir::SharingPolynomial& R);

// g^sigma h^tau == prod_j E_j^(i^j) mod p.
bool vss_verify(const GroupParams& params, const FieldElement& point, const FieldElement& sigma,
                const FieldElement& tau, const CommitmentVector& e);
bool vss_verify(const GroupParams& params, const VerifiableShare& share, const CommitmentVector& e);

// Entrywise prod_j (E_k^(j))^(a_j).
CommitmentVector combine_commitments(const GroupParams& params, std::span<const CommitmentVector> vectors,
                                     std::span<const FieldElement> coefficients);

}  // namespace smpc::pedersen
