#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smpc/random.hpp"

namespace smpc {

using NodeId = std::uint32_t;

// Undirected simple graph with dense ids in [0, n). Edges are stored
// canonically (u < v, sorted); adjacency lists are sorted.
class Topology {
 public:
  Topology() = default;
  explicit Topology(std::size_t n);

  static Topology from_edges(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  // Directed neighbor relations, sum of degrees.
  std::size_t arc_count() const noexcept { return 2 * edges_.size(); }

  const std::vector<std::pair<NodeId, NodeId>>& edges() const noexcept { return edges_; }
  const std::vector<NodeId>& neighbors(NodeId i) const { return adjacency_.at(i); }
  std::size_t degree(NodeId i) const { return adjacency_.at(i).size(); }
  bool has_edge(NodeId u, NodeId v) const;

  // Users occupy [0, users), items [users, n).
  std::optional<std::pair<std::size_t, std::size_t>> bipartite_split() const noexcept { return split_; }
  void set_bipartite_split(std::size_t users, std::size_t items);

  bool is_connected() const;
  // True when every pair inside `ids` is adjacent.
  bool is_clique(const std::vector<NodeId>& ids) const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.adjacency_.size() == b.adjacency_.size() && a.edges_ == b.edges_;
  }

 private:
  void add_edge_unchecked(NodeId u, NodeId v);
  void finalize();

  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::optional<std::pair<std::size_t, std::size_t>> split_;
};

// "u v" per line, '#' starts a comment. A "# nodes N" line fixes the node
// count (so isolated nodes survive a round trip); otherwise n = max id + 1.
Topology parse_edge_list(const std::string& text);
Topology read_edge_list(const std::string& path);
std::string emit_edge_list(const Topology& t);
void write_edge_list(const Topology& t, const std::string& path);

Topology erdos_renyi(std::size_t n, double p, std::uint64_t seed);
// Barabasi-Albert style: each new node attaches to k distinct existing nodes
// chosen proportionally to degree, starting from a (k+1)-clique.
Topology preferential_attachment(std::size_t n, std::size_t k, std::uint64_t seed);
Topology bipartite(std::size_t users, std::size_t items, double density, std::uint64_t seed);
Topology complete_graph(std::size_t n);

// Sparse user-item ratings: "u v rating" lines, user ids in [0, users),
// item ids in [0, items).
struct Rating {
  NodeId user = 0;
  NodeId item = 0;
  double value = 0.0;
};

struct RatingsData {
  std::size_t users = 0;
  std::size_t items = 0;
  std::vector<Rating> entries;
};

RatingsData parse_ratings(const std::string& text);
// The bipartite graph with item j placed at node users + j.
Topology ratings_topology(const RatingsData& r);

}  // namespace smpc
