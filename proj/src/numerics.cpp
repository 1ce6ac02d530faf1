#include "smpc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "smpc/errors.hpp"
#include "smpc/random.hpp"

namespace smpc::numerics {

namespace {

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

bool next_content_line(std::istringstream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    auto pos = line.find_first_of("%#");
    if (pos != std::string::npos) line.resize(pos);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

SparseSystem SparseSystem::from_triplets(std::size_t n, const std::vector<Triplet>& entries, std::vector<double> b) {
  if (b.size() != n) throw ConfigError("right-hand side has the wrong length");
  SparseSystem s;
  s.n = n;
  s.offdiag.assign(n, {});
  s.diag.assign(n, 0.0);
  s.b = std::move(b);
  for (const auto& t : entries) {
    if (t.row >= n || t.col >= n) throw ConfigError("matrix entry out of range");
    if (t.row == t.col) {
      s.diag[t.row] += t.value;
    } else if (t.value != 0.0) {
      s.offdiag[t.row].push_back({t.col, t.value});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (s.diag[i] == 0.0) throw ConfigError("zero diagonal entry in row " + std::to_string(i));
    auto& row = s.offdiag[i];
    std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    // merge duplicates
    std::vector<Entry> merged;
    for (const auto& e : row) {
      if (!merged.empty() && merged.back().col == e.col) {
        merged.back().value += e.value;
      } else {
        merged.push_back(e);
      }
    }
    row = std::move(merged);
  }
  return s;
}

double SparseSystem::at(NodeId i, NodeId j) const {
  if (i == j) return diag.at(i);
  for (const auto& e : offdiag.at(i)) {
    if (e.col == j) return e.value;
  }
  return 0.0;
}

std::size_t SparseSystem::nonzeros() const {
  std::size_t c = n;
  for (const auto& r : offdiag) c += r.size();
  return c;
}

std::vector<double> SparseSystem::multiply(const std::vector<double>& x) const {
  if (x.size() != n) throw ArgumentError("vector size does not match the system");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = diag[i] * x[i];
    for (const auto& e : offdiag[i]) acc += e.value * x[e.col];
    y[i] = acc;
  }
  return y;
}

Topology SparseSystem::topology() const {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& e : offdiag[i]) edges.emplace_back(static_cast<NodeId>(i), e.col);
  }
  return Topology::from_edges(n, edges);
}

std::vector<std::vector<double>> SparseSystem::dense() const {
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = diag[i];
    for (const auto& e : offdiag[i]) a[i][e.col] = e.value;
  }
  return a;
}

double residual_inf(const SparseSystem& sys, const std::vector<double>& x) {
  auto ax = sys.multiply(x);
  double m = 0.0;
  for (std::size_t i = 0; i < sys.n; ++i) m = std::max(m, std::fabs(ax[i] - sys.b[i]));
  return m;
}

JacobiState jacobi_step(const JacobiState& state, const SparseSystem& sys) {
  if (state.x.size() != sys.n) throw ArgumentError("iterate has the wrong length");
  JacobiState next;
  next.x.resize(sys.n);
  for (std::size_t i = 0; i < sys.n; ++i) {
    double s = 0.0;
    for (const auto& e : sys.offdiag[i]) s += e.value * state.x[e.col];
    next.x[i] = (sys.b[i] - s) / sys.diag[i];
  }
  next.round = state.round + 1;
  next.residual = residual_inf(sys, next.x);
  return next;
}

SolveResult jacobi_solve(const SparseSystem& sys, std::vector<double> x0, double tol, std::size_t max_rounds) {
  if (x0.empty()) x0.assign(sys.n, 0.0);
  if (x0.size() != sys.n) throw ArgumentError("initial vector does not match the system size");
  JacobiState st{std::move(x0), 0, 0.0};
  st.residual = residual_inf(sys, st.x);
  SolveResult out;
  while (st.round < max_rounds) {
    JacobiState next = jacobi_step(st, sys);
    double delta = 0.0;
    for (std::size_t i = 0; i < sys.n; ++i) delta = std::max(delta, std::fabs(next.x[i] - st.x[i]));
    st = std::move(next);
    if (delta < tol) {
      out.converged = true;
      break;
    }
  }
  out.x = std::move(st.x);
  out.rounds = st.round;
  out.residual = st.residual;
  return out;
}

SpectralEstimate spectral_radius_check(const SparseSystem& sys, std::size_t iterations, std::uint64_t seed) {
  SpectralEstimate est;
  est.iterations = iterations;
  if (sys.n == 0 || iterations == 0) return est;
  Rng rng(seed);
  std::vector<double> v(sys.n);
  for (auto& x : v) x = uniform_unit(rng) * 2.0 - 1.0;
  double norm = inf_norm(v);
  for (auto& x : v) x /= norm;

  const std::size_t tail = std::max<std::size_t>(2, (iterations / 2) & ~std::size_t{1});
  double log_sum = 0.0;
  std::size_t counted = 0;
  std::vector<double> w(sys.n);
  for (std::size_t k = 0; k < iterations; ++k) {
    for (std::size_t i = 0; i < sys.n; ++i) {
      double s = 0.0;
      for (const auto& e : sys.offdiag[i]) s += e.value * v[e.col];
      w[i] = -s / sys.diag[i];
    }
    double g = inf_norm(w);
    if (g == 0.0) return est;  // nilpotent within k steps
    for (std::size_t i = 0; i < sys.n; ++i) v[i] = w[i] / g;
    if (iterations - k <= tail) {
      log_sum += std::log(g);
      ++counted;
    }
  }
  est.rho = counted ? std::exp(log_sum / static_cast<double>(counted)) : 0.0;
  return est;
}

SparseSystem precondition(const SparseSystem& sys) {
  SparseSystem out = sys;
  for (std::size_t i = 0; i < sys.n; ++i) {
    const double d = sys.diag[i];
    if (d == 0.0) throw ConfigError("zero diagonal entry in row " + std::to_string(i));
    for (auto& e : out.offdiag[i]) e.value /= d;
    out.b[i] /= d;
    out.diag[i] = 1.0;
  }
  return out;
}

std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  if (a.size() != n) throw ArgumentError("dimension mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::fabs(a[r][k]) > std::fabs(a[piv][k])) piv = r;
    }
    if (a[piv][k] == 0.0) throw DomainError("singular matrix");
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = a[r][k] / a[k][k];
      if (f == 0.0) continue;
      for (std::size_t c = k; c < n; ++c) a[r][c] -= f * a[k][c];
      b[r] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t c = k + 1; c < n; ++c) s -= a[k][c] * x[c];
    x[k] = s / a[k][k];
  }
  return x;
}

std::vector<std::vector<double>> RatingsMatrix::dense() const {
  std::vector<std::vector<double>> a(rows, std::vector<double>(cols, 0.0));
  for (const auto& t : entries) a.at(t.row).at(t.col) += t.value;
  return a;
}

std::vector<double> AugmentedSystem::weights(const std::vector<double>& solution) const {
  return {solution.begin(), solution.begin() + static_cast<std::ptrdiff_t>(weight_count)};
}

AugmentedSystem build_augmented(const RatingsMatrix& r, const std::vector<double>& b, double epsilon) {
  if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be non-negative");
  if (b.size() != r.rows) throw ArgumentError("b must have one entry per row of R");
  const std::size_t w = r.cols, z = r.rows, n = w + z;
  std::vector<SparseSystem::Triplet> t;
  t.reserve(n + 2 * r.entries.size());
  for (std::size_t k = 0; k < w; ++k) t.push_back({static_cast<NodeId>(k), static_cast<NodeId>(k), 1.0});
  for (std::size_t k = 0; k < z; ++k) t.push_back({static_cast<NodeId>(w + k), static_cast<NodeId>(w + k), epsilon});
  for (const auto& e : r.entries) {
    if (e.row >= r.rows || e.col >= r.cols) throw ArgumentError("ratings entry out of range");
    t.push_back({e.col, static_cast<NodeId>(w + e.row), e.value});  // R^T block
    t.push_back({static_cast<NodeId>(w + e.row), e.col, e.value});  // R block
  }
  std::vector<double> rhs(n, 0.0);
  std::copy(b.begin(), b.end(), rhs.begin() + static_cast<std::ptrdiff_t>(w));

  AugmentedSystem out;
  out.weight_count = w;
  out.hidden_count = z;
  out.epsilon = epsilon;
  if (epsilon == 0.0 && z > 0) {
    // The zero block has no diagonal to divide by; keep the structure but
    // refuse it as a Jacobi system.
    throw ConfigError("epsilon = 0 leaves zero diagonal entries in the augmented system");
  }
  out.system = SparseSystem::from_triplets(n, t, std::move(rhs));
  return out;
}

std::vector<double> normal_equations_solution(const RatingsMatrix& r, const std::vector<double>& b) {
  auto a = r.dense();
  std::vector<std::vector<double>> ata(r.cols, std::vector<double>(r.cols, 0.0));
  std::vector<double> atb(r.cols, 0.0);
  for (std::size_t i = 0; i < r.rows; ++i) {
    for (std::size_t p = 0; p < r.cols; ++p) {
      if (a[i][p] == 0.0) continue;
      atb[p] += a[i][p] * b[i];
      for (std::size_t q = 0; q < r.cols; ++q) ata[p][q] += a[i][p] * a[i][q];
    }
  }
  return solve_dense(std::move(ata), std::move(atb));
}

RatingsMatrix random_ratings(std::size_t rows, std::size_t cols, double density, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xcf));
  RatingsMatrix r;
  r.rows = rows;
  r.cols = cols;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (uniform_unit(rng) < density) {
        r.entries.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), 1.0 + static_cast<double>(uniform_below(rng, 5))});
      }
    }
  }
  return r;
}

SparseSystem random_dominant_system(const Topology& t, std::uint64_t seed, int max_offdiag) {
  Rng rng(derive_seed(seed, 0xd0));
  const std::size_t n = t.node_count();
  std::vector<SparseSystem::Triplet> trip;
  std::vector<double> rowsum(n, 0.0);
  const auto span = static_cast<std::uint64_t>(2 * max_offdiag + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (NodeId j : t.neighbors(static_cast<NodeId>(i))) {
      double v = static_cast<double>(static_cast<std::int64_t>(uniform_below(rng, span)) - max_offdiag);
      if (v == 0.0) v = 1.0;
      trip.push_back({static_cast<NodeId>(i), j, v});
      rowsum[i] += std::fabs(v);
    }
  }
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    double extra = 1.0 + static_cast<double>(uniform_below(rng, 5));
    trip.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i), rowsum[i] + extra});
    b[i] = static_cast<double>(static_cast<std::int64_t>(uniform_below(rng, 201)) - 100) / 10.0;
  }
  return SparseSystem::from_triplets(n, trip, std::move(b));
}

std::vector<double> parse_vector(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> v;
  while (next_content_line(in, line, lineno)) {
    std::istringstream ls(line);
    double x = 0.0;
    std::string extra;
    if (!(ls >> x) || (ls >> extra)) throw ParseError("expected one value per line", lineno);
    v.push_back(x);
  }
  return v;
}

SparseSystem parse_system(const std::string& matrix_text, const std::string& vector_text) {
  std::istringstream in(matrix_text);
  std::string line;
  std::size_t lineno = 0;
  if (!next_content_line(in, line, lineno)) throw ParseError("missing 'n nnz' header", lineno);
  std::size_t n = 0, nnz = 0;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n >> nnz) || (hs >> extra)) throw ParseError("malformed 'n nnz' header", lineno);
  }
  std::vector<SparseSystem::Triplet> t;
  t.reserve(nnz);
  while (next_content_line(in, line, lineno)) {
    std::istringstream ls(line);
    std::size_t i = 0, j = 0;
    double v = 0.0;
    std::string extra;
    if (!(ls >> i >> j >> v) || (ls >> extra)) throw ParseError("expected 'i j value'", lineno);
    if (i == 0 || j == 0 || i > n || j > n) throw ParseError("index out of range", lineno);
    t.push_back({static_cast<NodeId>(i - 1), static_cast<NodeId>(j - 1), v});
  }
  if (t.size() != nnz) throw ParseError("entry count does not match header", lineno);
  return SparseSystem::from_triplets(n, t, parse_vector(vector_text));
}

std::string emit_matrix(const SparseSystem& sys) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << sys.n << ' ' << sys.nonzeros() << '\n';
  for (std::size_t i = 0; i < sys.n; ++i) {
    std::vector<Entry> row = sys.offdiag[i];
    row.push_back({static_cast<NodeId>(i), sys.diag[i]});
    std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    for (const auto& e : row) out << i + 1 << ' ' << e.col + 1 << ' ' << e.value << '\n';
  }
  return out.str();
}

std::string emit_vector(const std::vector<double>& v) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (double x : v) out << x << '\n';
  return out.str();
}

}  // namespace smpc::numerics
