#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "smpc/errors.hpp"
#include "smpc/numerics.hpp"

using namespace smpc;
using namespace smpc::numerics;

namespace {

Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& a) {
  Eigen::MatrixXd m(a.size(), a.empty() ? 0 : a[0].size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) m(i, j) = a[i][j];
  }
  return m;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double max_diff(const std::vector<double>& a, const Eigen::VectorXd& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b(static_cast<Eigen::Index>(i))));
  return d;
}

}  // namespace

TEST_CASE("jacobi on a 2x2 system") {
  auto s = SparseSystem::from_triplets(2, {{0, 0, 4}, {0, 1, 1}, {1, 0, 2}, {1, 1, 5}}, {9, 12});
  auto r = jacobi_solve(s, {}, 1e-12, 500);
  CHECK(r.converged);
  // 4x + y = 9, 2x + 5y = 12
  CHECK(r.x[0] == doctest::Approx(33.0 / 18.0));
  CHECK(r.x[1] == doctest::Approx(30.0 / 18.0));
  CHECK(residual_inf(s, r.x) < 1e-9);
}

TEST_CASE("jacobi agrees with a dense solve") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto t = erdos_renyi(40, 0.15, seed);
    auto s = random_dominant_system(t, seed);
    CHECK(spectral_radius_check(s, 200).sufficient());
    auto r = jacobi_solve(s, {}, 1e-13, 10'000);
    REQUIRE(r.converged);
    Eigen::VectorXd ref = to_eigen(s.dense()).partialPivLu().solve(to_eigen(s.b));
    CHECK(max_diff(r.x, ref) < 1e-9);
    CHECK(max_diff(solve_dense(s.dense(), s.b), ref) < 1e-9);
  }
}

TEST_CASE("spectral radius of a known iteration matrix") {
  // I - D^-1 A = [[0, -1/2], [-1/2, 0]] has radius 1/2.
  auto s = SparseSystem::from_triplets(2, {{0, 0, 2}, {0, 1, 1}, {1, 0, 1}, {1, 1, 2}}, {1, 1});
  CHECK(spectral_radius_check(s, 200).rho == doctest::Approx(0.5).epsilon(1e-6));
  auto bad = SparseSystem::from_triplets(2, {{0, 0, 1}, {0, 1, 2}, {1, 0, 2}, {1, 1, 1}}, {1, 1});
  CHECK_FALSE(spectral_radius_check(bad, 200).sufficient());
}

TEST_CASE("preconditioning keeps the solution") {
  auto t = erdos_renyi(20, 0.3, 3);
  auto s = random_dominant_system(t, 3);
  auto p = precondition(s);
  for (double d : p.diag) CHECK(d == doctest::Approx(1.0));
  CHECK(max_diff(solve_dense(p.dense(), p.b), to_eigen(solve_dense(s.dense(), s.b))) < 1e-10);
}

TEST_CASE("augmented system matches least squares") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto r = random_ratings(30, 8, 0.5, seed);
    std::vector<double> b(r.rows);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = 1.0 + static_cast<double>((i * 7 + seed) % 5);
    Eigen::VectorXd ls = to_eigen(r.dense()).colPivHouseholderQr().solve(to_eigen(b));
    CHECK(max_diff(normal_equations_solution(r, b), ls) < 1e-8);
    auto aug = build_augmented(r, b, 1e-9);
    CHECK(aug.weight_count == 8);
    CHECK(aug.hidden_count == 30);
    auto w = aug.weights(solve_dense(aug.system.dense(), aug.system.b));
    CHECK(max_diff(w, ls) / ls.cwiseAbs().maxCoeff() < 1e-4);
  }
  CHECK_THROWS_AS(build_augmented(random_ratings(4, 2, 1.0, 1), {1, 2, 3, 4}, 0.0), ConfigError);
}

TEST_CASE("matrix files round trip") {
  auto s = random_dominant_system(erdos_renyi(12, 0.3, 4), 4);
  auto back = parse_system(emit_matrix(s), emit_vector(s.b));
  CHECK(back.n == s.n);
  CHECK(back.dense() == s.dense());
  CHECK(back.b == s.b);
  CHECK_THROWS_AS(parse_system("2 1\n1 3 1.0\n", "1\n1\n"), ParseError);
  CHECK_THROWS_AS(parse_vector("1\nabc\n"), ParseError);
}

TEST_CASE("singular and mismatched inputs") {
  CHECK_THROWS_AS(solve_dense({{1, 2}, {2, 4}}, {1, 1}), DomainError);
  auto s = SparseSystem::from_triplets(2, {{0, 0, 2}, {1, 1, 2}}, {1, 1});
  CHECK_THROWS_AS(s.multiply({1, 2, 3}), ArgumentError);
  CHECK_THROWS_AS(jacobi_solve(s, {1}, 1e-9, 10), ArgumentError);
}
