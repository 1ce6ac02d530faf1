#include "smpc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "smpc/errors.hpp"

namespace smpc {

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool parse_id(const std::string& tok, std::uint64_t& out) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) return false;
  try {
    out = std::stoull(tok);
  } catch (const std::exception&) {
    return false;
  }
  return out < std::numeric_limits<NodeId>::max();
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

// Returns N for a "# nodes N" directive.
std::optional<std::uint64_t> nodes_directive(const std::string& line) {
  auto pos = line.find('#');
  if (pos == std::string::npos) return std::nullopt;
  auto toks = tokens(line.substr(pos + 1));
  std::uint64_t n = 0;
  if (toks.size() == 2 && toks[0] == "nodes" && parse_id(toks[1], n)) return n;
  return std::nullopt;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Topology::Topology(std::size_t n) : adjacency_(n) {}

void Topology::add_edge_unchecked(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  edges_.emplace_back(u, v);
}

void Topology::finalize() {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto& adj : adjacency_) adj.clear();
  for (auto [u, v] : edges_) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

Topology Topology::from_edges(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  Topology t(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw ArgumentError("edge endpoint out of range");
    if (u == v) throw ArgumentError("self-loops are not allowed");
    t.add_edge_unchecked(u, v);
  }
  t.finalize();
  return t;
}

bool Topology::has_edge(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count()) return false;
  const auto& adj = adjacency_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

void Topology::set_bipartite_split(std::size_t users, std::size_t items) {
  if (users + items != node_count()) throw ArgumentError("bipartite split must cover every node");
  for (auto [u, v] : edges_) {
    if ((u < users) == (v < users)) throw ArgumentError("edge inside one side of the bipartite split");
  }
  split_ = std::make_pair(users, items);
}

bool Topology::is_connected() const {
  if (node_count() == 0) return true;
  std::vector<char> seen(node_count(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : adjacency_[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == node_count();
}

bool Topology::is_clique(const std::vector<NodeId>& ids) const {
  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      if (!has_edge(ids[a], ids[b])) return false;
    }
  }
  return true;
}

Topology parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::uint64_t> declared;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::uint64_t max_id = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto n = nodes_directive(line)) {
      if (declared) throw ParseError("duplicate nodes directive", lineno);
      declared = *n;
      continue;
    }
    auto toks = tokens(strip_comment(line));
    if (toks.empty()) continue;
    if (toks.size() != 2) throw ParseError("expected 'u v'", lineno);
    std::uint64_t u = 0, v = 0;
    if (!parse_id(toks[0], u) || !parse_id(toks[1], v)) throw ParseError("node ids must be non-negative integers", lineno);
    if (u == v) throw ParseError("self-loop", lineno);
    if (declared && (u >= *declared || v >= *declared)) throw ParseError("node id out of range", lineno);
    max_id = std::max({max_id, u, v});
    any = true;
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  std::size_t n = declared ? *declared : (any ? max_id + 1 : 0);
  if (declared && any && max_id >= *declared) throw ParseError("node id out of range", lineno);
  return Topology::from_edges(n, edges);
}

Topology read_edge_list(const std::string& path) { return parse_edge_list(slurp(path)); }

std::string emit_edge_list(const Topology& t) {
  std::ostringstream out;
  out << "# nodes " << t.node_count() << '\n';
  for (auto [u, v] : t.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

void write_edge_list(const Topology& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << emit_edge_list(t);
}

Topology erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("edge probability must lie in [0, 1]");
  Rng rng(derive_seed(seed, 0xe7));
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (p > 0.0) {
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (p >= 1.0 || uniform_unit(rng) < p) edges.emplace_back(u, v);
      }
    }
  }
  return Topology::from_edges(n, edges);
}

Topology preferential_attachment(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw ArgumentError("attachment count must be positive");
  if (n < k + 1) throw ArgumentError("need at least k + 1 nodes");
  Rng rng(derive_seed(seed, 0xba));
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<NodeId> endpoints;  // each node appears once per incident edge
  for (NodeId u = 0; u <= k; ++u) {
    for (NodeId v = u + 1; v <= k; ++v) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  for (NodeId u = static_cast<NodeId>(k + 1); u < n; ++u) {
    std::set<NodeId> targets;
    while (targets.size() < k) targets.insert(endpoints[uniform_below(rng, endpoints.size())]);
    for (NodeId v : targets) {
      edges.emplace_back(v, u);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  return Topology::from_edges(n, edges);
}

Topology bipartite(std::size_t users, std::size_t items, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) throw ArgumentError("density must lie in [0, 1]");
  Rng rng(derive_seed(seed, 0xb1));
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < users; ++u) {
    for (NodeId j = 0; j < items; ++j) {
      if (density >= 1.0 || (density > 0.0 && uniform_unit(rng) < density)) {
        edges.emplace_back(u, static_cast<NodeId>(users + j));
      }
    }
  }
  Topology t = Topology::from_edges(users + items, edges);
  t.set_bipartite_split(users, items);
  return t;
}

Topology complete_graph(std::size_t n) { return erdos_renyi(n, 1.0, 0); }

RatingsData parse_ratings(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  RatingsData out;
  std::set<std::pair<NodeId, NodeId>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokens(strip_comment(line));
    if (toks.empty()) continue;
    if (toks.size() != 3) throw ParseError("expected 'user item rating'", lineno);
    std::uint64_t u = 0, v = 0;
    if (!parse_id(toks[0], u) || !parse_id(toks[1], v)) throw ParseError("ids must be non-negative integers", lineno);
    double r = 0.0;
    std::size_t used = 0;
    try {
      r = std::stod(toks[2], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != toks[2].size() || !std::isfinite(r)) throw ParseError("rating must be a decimal number", lineno);
    if (!seen.emplace(static_cast<NodeId>(u), static_cast<NodeId>(v)).second) {
      throw ParseError("duplicate rating", lineno);
    }
    out.users = std::max<std::size_t>(out.users, u + 1);
    out.items = std::max<std::size_t>(out.items, v + 1);
    out.entries.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), r});
  }
  return out;
}

Topology ratings_topology(const RatingsData& r) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(r.entries.size());
  for (const auto& e : r.entries) edges.emplace_back(e.user, static_cast<NodeId>(r.users + e.item));
  Topology t = Topology::from_edges(r.users + r.items, edges);
  t.set_bipartite_split(r.users, r.items);
  return t;
}

}  // namespace smpc
