#include "smpc/pedersen.hpp"

#include <map>
#include <mutex>
#include <sstream>

#include <openssl/sha.h>

#include "smpc/bigint.hpp"
#include "smpc/errors.hpp"

namespace smpc::pedersen {

namespace {

mpz_class expand_hash(const std::string& input, std::size_t bits) {
  std::string out;
  for (std::uint32_t ctr = 0; out.size() * 8 < bits + 128; ++ctr) {
    std::string block = input + '\0' + std::to_string(ctr);
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(block.data()), block.size(), digest);
    out.append(reinterpret_cast<const char*>(digest), sizeof digest);
  }
  mpz_class v;
  mpz_import(v.get_mpz_t(), out.size(), 1, 1, 0, 0, out.data());
  return v;
}

mpz_class q_of(const GroupParams& params) { return mpz_from_u64(params.q); }

void check_exponent(const GroupParams& params, const FieldElement& e) {
  if (e.modulus() != params.q) throw ConfigError("exponent field does not match the group order");
}

bool in_range(const GroupParams& params, const mpz_class& x) { return x > 0 && x < params.p; }

}  // namespace

std::size_t GroupParams::element_bytes() const { return byte_length(p); }

GroupParams tiny_group() { return {23, 11, 4, 9, "tiny"}; }

mpz_class hash_to_group(const GroupParams& params, const std::string& seed, const std::string& label) {
  const mpz_class cofactor = (params.p - 1) / q_of(params);
  for (std::uint32_t attempt = 0;; ++attempt) {
    mpz_class x = expand_hash(seed + "/" + label + "/" + std::to_string(attempt), bit_length(params.p)) % params.p;
    if (x < 2) continue;
    mpz_class y = pow_mod(x, cofactor, params.p);
    if (y != 1) return y;
  }
}

GroupParams derive_group(std::size_t p_bits, std::uint64_t q, const std::string& seed) {
  if (!is_prime_u64(q)) throw ConfigError("group order must be prime");
  const mpz_class qz = mpz_from_u64(q);
  if (p_bits <= bit_length(qz) + 1) throw ConfigError("p must be larger than q");
  // Even k with k*q + 1 of exactly p_bits bits, starting in the lower half.
  const mpz_class lo = ((mpz_class(1) << (p_bits - 1)) + qz - 1) / qz;
  const mpz_class hi = ((mpz_class(1) << p_bits) - 2) / qz;
  mpz_class k = lo + expand_hash(seed + "/cofactor", p_bits) % ((hi - lo) / 2 + 1);
  if (k % 2 != 0) k += 1;
  GroupParams gp;
  gp.q = q;
  gp.profile = seed;
  for (;; k += 2) {
    mpz_class p = k * qz + 1;
    if (bit_length(p) != p_bits) throw ConfigError("no suitable prime found for the requested group size");
    if (mpz_probab_prime_p(p.get_mpz_t(), 30) != 0) {
      gp.p = p;
      break;
    }
  }
  gp.g = hash_to_group(gp, seed, "g");
  gp.h = hash_to_group(gp, seed, "h");
  if (gp.g == gp.h) throw ConfigError("degenerate generators");
  return gp;
}

const GroupParams& group_profile(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, GroupParams> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(name); it != cache.end()) return it->second;
  GroupParams gp;
  if (name == "tiny") {
    gp = tiny_group();
  } else if (name == "fast") {
    gp = derive_group(256, kMersenne61, "smpc-pedersen-fast");
    gp.profile = "fast";
  } else if (name == "standard") {
    gp = derive_group(2048, kMersenne61, "smpc-pedersen-standard");
    gp.profile = "standard";
  } else {
    throw ConfigError("unknown group profile '" + name + "'");
  }
  return cache.emplace(name, std::move(gp)).first->second;
}

void validate(const GroupParams& params) {
  if (!is_prime_u64(params.q)) throw ConfigError("group order is not prime");
  if (mpz_probab_prime_p(params.p.get_mpz_t(), 30) == 0) throw ConfigError("group modulus is not prime");
  const mpz_class qz = q_of(params);
  if ((params.p - 1) % qz != 0) throw ConfigError("q does not divide p - 1");
  for (const mpz_class* gen : {&params.g, &params.h}) {
    if (!in_range(params, *gen) || *gen == 1 || pow_mod(*gen, qz, params.p) != 1) {
      throw ConfigError("generator is not a nontrivial element of the order-q subgroup");
    }
  }
}

mpz_class commit_raw(const GroupParams& params, const mpz_class& s, const mpz_class& t) {
  const mpz_class qz = q_of(params);
  if (s < 0 || s >= qz || t < 0 || t >= qz) throw ArgumentError("commitment exponent outside [0, q)");
  return (pow_mod(params.g, s, params.p) * pow_mod(params.h, t, params.p)) % params.p;
}

mpz_class commit(const GroupParams& params, const FieldElement& s, const FieldElement& t) {
  check_exponent(params, s);
  check_exponent(params, t);
  return commit_raw(params, mpz_from_u64(s.value()), mpz_from_u64(t.value()));
}

std::string serialize(const CommitmentVector& e) {
  std::string out;
  for (std::size_t k = 0; k < e.entries.size(); ++k) {
    if (k) out += ' ';
    out += e.entries[k].get_str(16);
  }
  return out;
}

CommitmentVector parse_commitments(const std::string& text) {
  CommitmentVector e;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    mpz_class v;
    if (v.set_str(tok, 16) != 0) throw ArgumentError("malformed commitment entry '" + tok + "'");
    e.entries.push_back(v);
  }
  return e;
}

CommitmentVector commitments_of(const GroupParams& params, const shamir::SharingPolynomial& P,
                                const shamir::SharingPolynomial& R) {
  if (P.threshold() != R.threshold()) throw ArgumentError("P and R must have the same length");
  CommitmentVector e;
  e.entries.reserve(P.threshold());
  for (std::size_t k = 0; k < P.threshold(); ++k) e.entries.push_back(commit(params, P.coefficients[k], R.coefficients[k]));
  return e;
}

VssDealing vss_deal_polynomials(const GroupParams& params, const shamir::SharingPolynomial& P,
                                const shamir::SharingPolynomial& R, std::span<const FieldElement> points) {
  auto sp = shamir::deal_with(P, points);
  auto sr = shamir::deal_with(R, points);
  VssDealing out;
  out.commitments = commitments_of(params, P, R);
  out.shares.reserve(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    out.shares.push_back({points[k], sp.shares[k].value, sr.shares[k].value});
  }
  return out;
}

VssDealing vss_deal(const GroupParams& params, const FieldElement& s, const FieldElement& t, std::size_t threshold,
                    std::span<const FieldElement> points, Rng& rng) {
  check_exponent(params, s);
  check_exponent(params, t);
  auto P = shamir::SharingPolynomial::random(s, threshold, rng);
  auto R = shamir::SharingPolynomial::random(t, threshold, rng);
  return vss_deal_polynomials(params, P, R, points);
}

bool vss_verify(const GroupParams& params, const FieldElement& point, const FieldElement& sigma,
                const FieldElement& tau, const CommitmentVector& e) {
  if (e.entries.empty()) return false;
  if (point.modulus() != params.q || sigma.modulus() != params.q || tau.modulus() != params.q) return false;
  for (const auto& entry : e.entries) {
    if (!in_range(params, entry)) return false;
  }
  // Horner in the exponent: ((E_{d-1})^i E_{d-2})^i ... E_0.
  const mpz_class i = mpz_from_u64(point.value());
  mpz_class acc = e.entries.back();
  for (std::size_t k = e.entries.size() - 1; k-- > 0;) {
    acc = (pow_mod(acc, i, params.p) * e.entries[k]) % params.p;
  }
  return commit(params, sigma, tau) == acc;
}

bool vss_verify(const GroupParams& params, const VerifiableShare& share, const CommitmentVector& e) {
  return vss_verify(params, share.point, share.sigma, share.tau, e);
}

CommitmentVector combine_commitments(const GroupParams& params, std::span<const CommitmentVector> vectors,
                                     std::span<const FieldElement> coefficients) {
  if (vectors.size() != coefficients.size()) throw ArgumentError("one coefficient per commitment vector required");
  if (vectors.empty()) throw ArgumentError("nothing to combine");
  const std::size_t d = vectors.front().size();
  CommitmentVector out;
  out.entries.assign(d, mpz_class(1));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != d) throw ArgumentError("commitment vectors differ in length");
    check_exponent(params, coefficients[j]);
    if (coefficients[j].is_zero()) continue;
    const mpz_class a = mpz_from_u64(coefficients[j].value());
    for (std::size_t k = 0; k < d; ++k) {
      out.entries[k] = (out.entries[k] * pow_mod(vectors[j].entries[k], a, params.p)) % params.p;
    }
  }
  return out;
}

}  // namespace smpc::pedersen
