#include "smpc/bench.hpp"

#include <chrono>

#include "smpc/bigint.hpp"
#include "smpc/errors.hpp"
#include "smpc/paillier.hpp"
#include "smpc/schemes.hpp"
#include "smpc/shamir.hpp"

namespace smpc {

namespace {

template <class Fn>
double mean_us(std::size_t reps, Fn&& fn) {
  auto start = std::chrono::steady_clock::now();
  for (std::size_t r = 0; r < reps; ++r) fn(r);
  std::chrono::duration<double, std::micro> d = std::chrono::steady_clock::now() - start;
  return d.count() / static_cast<double>(reps);
}

}  // namespace

std::vector<BenchRow> bench_ops(const BenchOptions& o) {
  if (o.reps == 0 || o.keygen_reps == 0) throw ConfigError("benchmark repetitions must be positive");
  if (o.threshold == 0 || o.threshold > o.points) throw ConfigError("threshold must lie in [1, points]");
  PrimeField field(o.modulus);
  const std::size_t elem = field.byte_size();
  const std::size_t crypto_reps = o.crypto_reps ? o.crypto_reps : o.reps;
  Rng rng(o.seed);
  std::vector<BenchRow> rows;
  volatile std::uint64_t sink = 0;

  double x = 1.0;
  rows.push_back({"noise_add", mean_us(o.reps, [&](std::size_t) { x += draw_noise(NoiseKind::Uniform, o.sigma, rng); }),
                  o.reps, sizeof(double), ""});
  sink = sink + static_cast<std::uint64_t>(x);

  std::vector<FieldElement> points;
  for (std::size_t l = 1; l <= o.points; ++l) points.push_back(field.element(l));
  rows.push_back({"poly_generate_evaluate", mean_us(o.reps, [&](std::size_t r) {
                    auto poly = shamir::SharingPolynomial::random(field.element(r), o.threshold, rng);
                    for (const auto& p : points) sink = sink + poly.evaluate(p).value();
                  }),
                  o.reps, elem, std::to_string(o.points) + " evaluations, threshold " + std::to_string(o.threshold)});

  auto dealt = shamir::deal(field.element(42), o.threshold, points, rng);
  std::vector<shamir::Share> first(dealt.shares.begin(), dealt.shares.begin() + static_cast<std::ptrdiff_t>(o.threshold));
  auto lw = shamir::precompute_lagrange(std::span(points).first(o.threshold));
  rows.push_back({"extrapolate", mean_us(o.reps, [&](std::size_t) { sink = sink + shamir::interpolate_at_zero(first, lw).value(); }),
                  o.reps, elem, "precomputed Lagrange weights"});

  paillier::KeyPair kp;
  const double keygen = mean_us(o.keygen_reps, [&](std::size_t) { kp = paillier::keygen(o.key_bits, rng); });
  rows.push_back({"paillier_keygen", keygen, o.keygen_reps, byte_length(kp.pub.n),
                  "public key size; a ciphertext is twice this"});

  const mpz_class m = mpz_from_u64(o.modulus - 1);
  paillier::Ciphertext c;
  rows.push_back({"paillier_encrypt", mean_us(crypto_reps, [&](std::size_t) { c = paillier::encrypt(kp.pub, m, rng); }),
                  crypto_reps, kp.pub.ciphertext_bytes(), ""});
  rows.push_back({"paillier_decrypt", mean_us(crypto_reps, [&](std::size_t) {
                    sink = sink + mpz_low_u64(paillier::decrypt(kp.priv, kp.pub, c));
                  }),
                  crypto_reps, kp.pub.ciphertext_bytes(), ""});
  paillier::Ciphertext acc = c;
  rows.push_back({"paillier_multiply", mean_us(crypto_reps, [&](std::size_t) { acc = paillier::hom_add(kp.pub, acc, c); }),
                  crypto_reps, kp.pub.ciphertext_bytes(), "ciphertext product (plaintext addition)"});
  const mpz_class k = mpz_from_u64(o.modulus - 2);
  rows.push_back({"paillier_scale", mean_us(crypto_reps, [&](std::size_t) { acc = paillier::hom_scale(kp.pub, c, k); }),
                  crypto_reps, kp.pub.ciphertext_bytes(), "ciphertext power by a field-sized weight"});
  return rows;
}

const BenchRow& find_row(const std::vector<BenchRow>& rows, const std::string& operation) {
  for (const auto& r : rows) {
    if (r.operation == operation) return r;
  }
  throw ArgumentError("no benchmark row '" + operation + "'");
}

}  // namespace smpc
