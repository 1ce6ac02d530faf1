#include "smpc/shamir.hpp"

#include <algorithm>

#include "smpc/errors.hpp"

namespace smpc::shamir {

namespace {

void check_points(std::span<const FieldElement> points) {
  for (std::size_t a = 0; a < points.size(); ++a) {
    if (points[a].is_zero()) throw ArgumentError("evaluation point zero is reserved for the secret");
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      if (points[a] == points[b]) throw ArgumentError("repeated evaluation point " + points[a].to_string());
    }
  }
}

}  // namespace

SharingPolynomial SharingPolynomial::random(const FieldElement& secret, std::size_t threshold, Rng& rng) {
  if (threshold == 0) throw ArgumentError("threshold must be at least 1");
  SharingPolynomial poly;
  poly.coefficients.reserve(threshold);
  poly.coefficients.push_back(secret);
  for (std::size_t k = 1; k < threshold; ++k) {
    poly.coefficients.push_back(FieldElement::random(secret.modulus(), rng));
  }
  return poly;
}

FieldElement SharingPolynomial::evaluate(const FieldElement& x) const {
  FieldElement acc = coefficients.back();
  for (std::size_t k = coefficients.size() - 1; k-- > 0;) {
    acc *= x;
    acc += coefficients[k];
  }
  return acc;
}

ShareSet deal_with(const SharingPolynomial& poly, std::span<const FieldElement> points) {
  if (points.size() < poly.threshold()) throw ArgumentError("fewer evaluation points than the threshold");
  check_points(points);
  ShareSet set;
  set.threshold = poly.threshold();
  set.shares.reserve(points.size());
  for (const auto& x : points) set.shares.push_back({x, poly.evaluate(x)});
  return set;
}

ShareSet deal(const FieldElement& secret, std::size_t threshold, std::span<const FieldElement> points, Rng& rng) {
  if (threshold == 0) throw ArgumentError("threshold must be at least 1");
  if (points.size() < threshold) throw ArgumentError("fewer evaluation points than the threshold");
  check_points(points);
  return deal_with(SharingPolynomial::random(secret, threshold, rng), points);
}

LagrangeWeights precompute_lagrange(std::span<const FieldElement> points) {
  if (points.empty()) throw ArgumentError("no interpolation points");
  check_points(points);
  LagrangeWeights lw;
  lw.points.assign(points.begin(), points.end());
  lw.weights.reserve(points.size());
  const std::uint64_t m = points.front().modulus();
  for (std::size_t j = 0; j < points.size(); ++j) {
    FieldElement num{1, m};
    FieldElement den{1, m};
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (k == j) continue;
      num *= points[k];
      den *= points[k] - points[j];
    }
    lw.weights.push_back(num * den.inv());
  }
  return lw;
}

FieldElement interpolate_at_zero(std::span<const Share> shares, const LagrangeWeights& weights) {
  if (shares.size() != weights.points.size()) throw ArgumentError("share count does not match Lagrange weights");
  FieldElement acc{0, weights.points.front().modulus()};
  for (std::size_t j = 0; j < shares.size(); ++j) {
    if (!(shares[j].point == weights.points[j])) throw ArgumentError("share point does not match Lagrange weights");
    acc += weights.weights[j] * shares[j].value;
  }
  return acc;
}

FieldElement reconstruct(std::span<const Share> shares, std::size_t threshold) {
  if (threshold == 0 || shares.size() < threshold) throw InsufficientShares("not enough shares to reconstruct");
  auto subset = shares.first(threshold);
  std::vector<FieldElement> pts;
  pts.reserve(threshold);
  for (const auto& s : subset) pts.push_back(s.point);
  return interpolate_at_zero(subset, precompute_lagrange(pts));
}

std::vector<FieldElement> deal_additive(const FieldElement& secret, std::size_t n, Rng& rng) {
  if (n == 0) throw ArgumentError("additive sharing needs at least one part");
  std::vector<FieldElement> parts;
  parts.reserve(n);
  FieldElement rest = secret;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    parts.push_back(FieldElement::random(secret.modulus(), rng));
    rest -= parts.back();
  }
  parts.push_back(rest);
  return parts;
}

}  // namespace smpc::shamir
