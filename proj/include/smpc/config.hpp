#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "smpc/engine.hpp"
#include "smpc/schemes.hpp"
#include "smpc/simulator.hpp"
#include "smpc/topology.hpp"

namespace smpc {

// Everything `smpc run` needs. Keys of the text format match the field
// names; see README.md for the full list.
struct RunConfig {
  SchemeConfig scheme;
  std::uint64_t codec_scale = kDefaultScale;
  std::uint64_t weight_scale = 0;  // 0 picks 1 for integer matrices
  std::string d_file;              // "node d" lines; overrides d

  std::string workload = "jacobi";  // jacobi | cf | field-linear
  std::string system_file;          // optional matrix for jacobi
  std::string rhs_file;
  std::string ratings_file;  // "u v rating" for cf
  std::size_t cf_rows = 20;
  std::size_t cf_cols = 10;
  double cf_density = 0.4;
  double epsilon = 1e-6;

  std::string topology = "erdos-renyi";  // erdos-renyi | preferential-attachment | bipartite | complete | file
  std::string topology_file;
  std::size_t nodes = 100;
  double edge_probability = 0.1;
  std::size_t attach = 3;
  std::size_t users = 10;
  std::size_t items = 10;
  double density = 0.5;

  std::size_t rounds = 8;
  std::uint64_t seed = 1;
  bool compare_plain = false;

  AdversaryScript adversary;
  std::vector<std::string> action_specs;

  std::string metrics_out;
  std::string estimates_out;
};

// "key = value" lines; '#' starts a comment; `action` may repeat.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Parses "tamper actor=3 round=2 payload=share target=4 subject=1 delta=5 word=0".
AdversaryAction parse_action(const std::string& spec);

// Throws ConfigError on the first inconsistency.
void validate(const RunConfig& cfg);

// Canonical key = value rendering; parse_config(resolved(c)) reproduces c.
std::string resolved(const RunConfig& cfg);
std::uint64_t fnv1a64(const std::string& s);
std::uint64_t config_hash(const RunConfig& cfg);

// Topology, workload and resolved scheme settings for one run.
struct PreparedRun {
  Topology topology;
  std::unique_ptr<Workload> workload;
  SchemeConfig scheme;
};

PreparedRun prepare_run(const RunConfig& cfg);

}  // namespace smpc
