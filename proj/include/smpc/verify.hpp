#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace smpc {

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::vector<std::string> failures;

  bool passed() const noexcept { return failures.empty(); }
};

// field, shamir, paillier, pedersen, byzagree, schemes, privacy-f17,
// numerics, topio, simulator
const std::vector<std::string>& suite_names();

// Throws ArgumentError for an unknown suite.
SuiteResult run_suite(const std::string& name, std::uint64_t seed = 1);

// Exhaustive view counts for Shamir sharing over F_17 with `holders` points.
struct PrivacyCounts {
  std::size_t threshold = 0;
  std::size_t coalitions_checked = 0;  // of size threshold - 1
  std::size_t views_per_secret = 0;    // 17^(threshold-1) dealings each
  bool identical = true;               // view histograms equal across all secrets
  std::size_t reconstructions = 0;     // threshold-sized coalitions x secrets x dealings
  bool reconstructs = true;
};

PrivacyCounts privacy_f17(std::size_t threshold, std::size_t holders);

}  // namespace smpc
