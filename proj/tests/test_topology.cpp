#include <algorithm>

#include "doctest.h"
#include "smpc/errors.hpp"
#include "smpc/topology.hpp"

using namespace smpc;

TEST_CASE("edge-list parsing") {
  auto t = parse_edge_list("0 1\n1 2");
  CHECK(t.node_count() == 3);
  CHECK(t.edge_count() == 2);
  CHECK(parse_edge_list("0 1\n0 1\n1 0\n").edge_count() == 1);
  auto c = parse_edge_list("# a comment\n0 1 # trailing\n\n# nodes 5\n");
  CHECK(c.node_count() == 5);
  CHECK(c.neighbors(0) == std::vector<NodeId>{1});
}

TEST_CASE("edge-list errors carry line numbers") {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_edge_list(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("0 1\n1 x\n") == 2);
  CHECK(line_of("0 1\n2\n") == 2);
  CHECK(line_of("0 0\n") == 1);
  CHECK(line_of("# nodes 2\n0 5\n") == 2);
  CHECK(line_of("-1 2\n") == 1);
}

TEST_CASE("emit and parse round trip") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto t = erdos_renyi(5 + seed % 40, 0.2, seed);
    REQUIRE(parse_edge_list(emit_edge_list(t)) == t);
  }
}

TEST_CASE("generators") {
  CHECK(erdos_renyi(30, 0.0, 1).edge_count() == 0);
  CHECK(erdos_renyi(10, 1.0, 1).edge_count() == 45);
  CHECK(erdos_renyi(200, 0.05, 9) == erdos_renyi(200, 0.05, 9));
  auto b = bipartite(3, 4, 1.0, 1);
  CHECK(b.edge_count() == 12);
  for (auto [u, v] : b.edges()) CHECK(((u < 3) != (v < 3)));
  REQUIRE(b.bipartite_split().has_value());
  CHECK(b.bipartite_split()->first == 3);
  CHECK(complete_graph(6).edge_count() == 15);
  CHECK(complete_graph(6).is_clique({0, 1, 2, 3, 4, 5}));
  CHECK_THROWS_AS(erdos_renyi(5, 1.5, 1), ArgumentError);
  CHECK_THROWS_AS(preferential_attachment(5, 0, 1), ArgumentError);
  CHECK_THROWS_AS(bipartite(2, 2, -0.1, 1), ArgumentError);
}

TEST_CASE("preferential attachment is heavier-tailed than ER") {
  const std::size_t n = 10'000;
  auto pa = preferential_attachment(n, 3, 5);
  const double p = static_cast<double>(pa.edge_count()) / (n * (n - 1) / 2.0);
  auto er = erdos_renyi(n, p, 5);
  auto top_share = [](const Topology& t) {
    std::vector<std::size_t> deg;
    for (NodeId i = 0; i < t.node_count(); ++i) deg.push_back(t.degree(i));
    std::sort(deg.rbegin(), deg.rend());
    std::size_t top = 0, all = 0;
    for (std::size_t k = 0; k < deg.size(); ++k) {
      all += deg[k];
      if (k < deg.size() / 100) top += deg[k];
    }
    return static_cast<double>(top) / static_cast<double>(all);
  };
  CHECK(top_share(pa) > 2.0 * top_share(er));
  std::size_t max_pa = 0, max_er = 0;
  for (NodeId i = 0; i < n; ++i) {
    max_pa = std::max(max_pa, pa.degree(i));
    max_er = std::max(max_er, er.degree(i));
  }
  CHECK(max_pa > 3 * max_er);
}

TEST_CASE("ratings files") {
  auto r = parse_ratings("0 0 4.5\n1 2 3\n# c\n2 1 1.25\n");
  CHECK(r.users == 3);
  CHECK(r.items == 3);
  CHECK(r.entries.size() == 3);
  CHECK(r.entries[2].value == doctest::Approx(1.25));
  auto t = ratings_topology(r);
  CHECK(t.node_count() == 6);
  CHECK(t.has_edge(1, 3 + 2));
  CHECK_THROWS_AS(parse_ratings("0 1\n"), ParseError);
}

TEST_CASE("topology invariants") {
  CHECK_THROWS(Topology::from_edges(3, {{0, 0}}));
  CHECK_THROWS(Topology::from_edges(3, {{0, 3}}));
  auto t = Topology::from_edges(4, {{2, 0}, {0, 1}, {1, 2}});
  CHECK(t.neighbors(0) == std::vector<NodeId>{1, 2});
  CHECK(t.arc_count() == 6);
  CHECK_FALSE(t.is_connected());
  CHECK(t.is_clique({0, 1, 2}));
  CHECK_FALSE(t.is_clique({0, 1, 3}));
}
