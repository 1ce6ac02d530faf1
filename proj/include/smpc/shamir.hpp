#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smpc/field.hpp"

namespace smpc::shamir {

// P(x) = s + a_1 x + ... + a_{d-1} x^{d-1}; coefficients[0] is the secret.
struct SharingPolynomial {
  std::vector<FieldElement> coefficients;

  static SharingPolynomial random(const FieldElement& secret, std::size_t threshold, Rng& rng);

  const FieldElement& secret() const { return coefficients.front(); }
  std::size_t threshold() const noexcept { return coefficients.size(); }
  FieldElement evaluate(const FieldElement& x) const;
};

struct Share {
  FieldElement point;  // never zero
  FieldElement value;
};

struct ShareSet {
  std::vector<Share> shares;
  std::size_t threshold = 0;
};

// lambda_j such that sum_j lambda_j P(points_j) = P(0) for deg P < |points|.
struct LagrangeWeights {
  std::vector<FieldElement> points;
  std::vector<FieldElement> weights;
};

ShareSet deal(const FieldElement& secret, std::size_t threshold, std::span<const FieldElement> points, Rng& rng);

// Evaluates an already drawn polynomial at every point.
ShareSet deal_with(const SharingPolynomial& poly, std::span<const FieldElement> points);

LagrangeWeights precompute_lagrange(std::span<const FieldElement> points);

// Shares must list exactly the weights' points, in the same order.
FieldElement interpolate_at_zero(std::span<const Share> shares, const LagrangeWeights& weights);

// Interpolates from the first `threshold` shares.
FieldElement reconstruct(std::span<const Share> shares, std::size_t threshold);

// n values, the first n-1 uniform, summing to the secret.
std::vector<FieldElement> deal_additive(const FieldElement& secret, std::size_t n, Rng& rng);

}  // namespace smpc::shamir
