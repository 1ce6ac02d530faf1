#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "smpc/topology.hpp"

namespace smpc::numerics {

struct Entry {
  NodeId col = 0;
  double value = 0.0;
};

// Square system A x = b. Off-diagonal entries per row, sorted by column;
// the diagonal is kept apart and must be nonzero.
struct SparseSystem {
  std::size_t n = 0;
  std::vector<std::vector<Entry>> offdiag;
  std::vector<double> diag;
  std::vector<double> b;

  struct Triplet {
    NodeId row = 0;
    NodeId col = 0;
    double value = 0.0;
  };
  static SparseSystem from_triplets(std::size_t n, const std::vector<Triplet>& entries, std::vector<double> b);

  double at(NodeId i, NodeId j) const;
  std::size_t nonzeros() const;
  std::vector<double> multiply(const std::vector<double>& x) const;
  // Symmetrized off-diagonal pattern.
  Topology topology() const;
  std::vector<std::vector<double>> dense() const;
};

struct JacobiState {
  std::vector<double> x;
  std::size_t round = 0;
  double residual = 0.0;  // ||A x - b||_inf
};

double residual_inf(const SparseSystem& sys, const std::vector<double>& x);

// x_i <- (b_i - sum_{j != i} a_ij x_j) / a_ii
JacobiState jacobi_step(const JacobiState& state, const SparseSystem& sys);

struct SolveResult {
  std::vector<double> x;
  std::size_t rounds = 0;
  double residual = 0.0;
  bool converged = false;
};

// Iterates until ||x^r - x^{r-1}||_inf < tol or max_rounds.
SolveResult jacobi_solve(const SparseSystem& sys, std::vector<double> x0, double tol, std::size_t max_rounds);

struct SpectralEstimate {
  double rho = 0.0;
  std::size_t iterations = 0;
  bool sufficient() const noexcept { return rho < 1.0; }
};

// Power-iteration estimate of rho(I - D^-1 A). Growth is averaged in log
// space over the trailing half of the run so that dominant eigenvalue pairs
// of equal modulus do not oscillate the estimate.
SpectralEstimate spectral_radius_check(const SparseSystem& sys, std::size_t iterations, std::uint64_t seed = 1);

// Divides each row and b_i by a_ii; the solution is unchanged.
SparseSystem precondition(const SparseSystem& sys);

// Dense LU with partial pivoting; DomainError on a singular matrix.
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b);

// Sparse rows x cols user-item matrix.
struct RatingsMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<SparseSystem::Triplet> entries;

  std::vector<std::vector<double>> dense() const;
};

// Unknowns are ordered (w, z): w has one entry per column of R, z one per
// row. The matrix is [[I, R^T], [R, eps I]] and the right-hand side (0, b),
// so w solves (R^T R - eps I) w = R^T b.
struct AugmentedSystem {
  SparseSystem system;
  std::size_t weight_count = 0;
  std::size_t hidden_count = 0;
  double epsilon = 0.0;

  std::vector<double> weights(const std::vector<double>& solution) const;
};

AugmentedSystem build_augmented(const RatingsMatrix& r, const std::vector<double>& b, double epsilon);

// (R^T R)^-1 R^T b through the dense solver.
std::vector<double> normal_equations_solution(const RatingsMatrix& r, const std::vector<double>& b);

RatingsMatrix random_ratings(std::size_t rows, std::size_t cols, double density, std::uint64_t seed);

// Strictly diagonally dominant system with integer entries; off-diagonal
// pattern follows `t`.
SparseSystem random_dominant_system(const Topology& t, std::uint64_t seed, int max_offdiag = 5);

// Matrix-market style: "n nnz" header then 1-indexed "i j value" lines.
SparseSystem parse_system(const std::string& matrix_text, const std::string& vector_text);
std::string emit_matrix(const SparseSystem& sys);
std::string emit_vector(const std::vector<double>& v);
std::vector<double> parse_vector(const std::string& text);

}  // namespace smpc::numerics
