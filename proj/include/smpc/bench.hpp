#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "smpc/field.hpp"

namespace smpc {

struct BenchOptions {
  std::size_t key_bits = 2048;
  std::size_t reps = 10'000;
  std::size_t keygen_reps = 10;
  std::size_t crypto_reps = 0;  // Paillier encrypt/decrypt/multiply; 0 means reps
  std::size_t threshold = 3;
  std::size_t points = 10;
  double sigma = 1.0;
  std::uint64_t modulus = kMersenne61;
  std::uint64_t seed = 1;
};

struct BenchRow {
  std::string operation;
  double mean_us = 0.0;
  std::size_t reps = 0;
  std::size_t bytes = 0;  // payload size of one message carrying the result
  std::string note;
};

// Mean latency of the local primitives, one row each.
std::vector<BenchRow> bench_ops(const BenchOptions& opts);

const BenchRow& find_row(const std::vector<BenchRow>& rows, const std::string& operation);

}  // namespace smpc
