#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "smpc/config.hpp"
#include "smpc/errors.hpp"

using namespace smpc;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config text") {
  auto c = parse_config(
      "# experiment\n"
      "scheme = sss\n"
      "sss_mode = broadcast   # single polynomial\n"
      "d = 3\n"
      "nodes = 40\n"
      "edge_probability = 0.2\n"
      "seed = 9\n"
      "adversary_model = malicious\n"
      "corrupted = 1, 4\n"
      "action = withhold actor=4 payload=aggregate round=2\n");
  CHECK(c.scheme.id == SchemeId::Sss);
  CHECK(c.scheme.sss_mode == SssMode::Broadcast);
  CHECK(c.scheme.d == 3);
  CHECK(c.nodes == 40);
  CHECK(c.seed == 9);
  CHECK(c.adversary.corrupted == std::set<NodeId>{1, 4});
  REQUIRE(c.adversary.actions.size() == 1);
  CHECK(c.adversary.actions[0].kind == ActionKind::Withhold);
  CHECK(c.adversary.actions[0].round == 2u);
  CHECK(c.adversary.actions[0].payload == PayloadKind::Aggregate);
  CHECK_FALSE(c.adversary.actions[0].target.has_value());
}

TEST_CASE("resolved text reproduces the config") {
  auto c = parse_config("scheme = malicious\nf = 1\nd = 3\ntopology = complete\nnodes = 6\nworkload = field-linear\n"
                        "chained = true\nweight_chooser = sender\nnoise_sigma = 0.125\nadversary_model = malicious\n"
                        "corrupted = 2\naction = tamper actor=2 round=2 payload=commitments delta=-4\n");
  auto again = parse_config(resolved(c));
  CHECK(resolved(again) == resolved(c));
  CHECK(config_hash(again) == config_hash(c));
  CHECK(again.adversary.actions[0].delta == -4);
  auto other = c;
  other.seed += 1;
  CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("config errors name the line") {
  CHECK(error_of("scheme = plain\nbogus = 1\n").find("line 2") != std::string::npos);
  CHECK(error_of("d = three\n").find("line 1") != std::string::npos);
  CHECK(error_of("\n\nscheme plain\n").find("line 3") != std::string::npos);
  CHECK(error_of("action = tamper round=1\n").find("actor") != std::string::npos);
  CHECK(error_of("action = smash actor=1\n") != "");
  CHECK(error_of("action = tamper actor=1 payload=gold\n") != "");
  CHECK(error_of("scheme = magic\n") != "");
}

TEST_CASE("validation") {
  RunConfig c;
  CHECK_NOTHROW(validate(c));
  c.workload = "cf";
  c.epsilon = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = RunConfig{};
  c.scheme.id = SchemeId::Malicious;
  c.scheme.chained = true;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.workload = "field-linear";
  CHECK_NOTHROW(validate(c));
  c = RunConfig{};
  c.adversary.corrupted = {1};
  c.adversary.actions = {parse_action("tamper actor=1")};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.adversary.model = AdversaryScript::Model::Malicious;
  CHECK_NOTHROW(validate(c));
  c.edge_probability = 2.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("prepared runs") {
  RunConfig c;
  c.nodes = 30;
  auto p = prepare_run(c);
  CHECK(p.topology.node_count() == 30);
  CHECK(p.workload->name() == "jacobi");

  c.workload = "cf";
  c.cf_rows = 6;
  c.cf_cols = 4;
  c.cf_density = 1.0;
  auto cf = prepare_run(c);
  CHECK(cf.topology.node_count() == 10);
  CHECK(cf.topology.edge_count() == 24);

  const std::string path = "test_config_thresholds.txt";
  {
    std::ofstream out(path);
    out << "# node d\n0 1\n3 2\n";
  }
  RunConfig d;
  d.nodes = 5;
  d.d_file = path;
  auto pd = prepare_run(d);
  CHECK(pd.scheme.per_node_d == std::vector<std::size_t>{1, 2, 2, 2, 2});
  std::remove(path.c_str());

  RunConfig bad;
  bad.topology = "file";
  bad.topology_file = "/nonexistent/graph.txt";
  CHECK_THROWS(prepare_run(bad));
}
