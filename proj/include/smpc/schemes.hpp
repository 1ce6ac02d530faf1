#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smpc/engine.hpp"
#include "smpc/field.hpp"
#include "smpc/random.hpp"
#include "smpc/topology.hpp"

namespace smpc {

enum class SchemeId { Plain, Perturbation, Sss, Homomorphic, Malicious };
enum class SssMode { PerMessage, Broadcast, Additive };
enum class NoiseKind { Uniform, Gaussian };
enum class WeightChooser { None, Target, Sender };
enum class Domain { Real, Field };

std::string to_string(SchemeId id);
std::string to_string(SssMode m);
std::string to_string(NoiseKind k);
std::string to_string(WeightChooser w);
SchemeId parse_scheme(const std::string& s);
SssMode parse_sss_mode(const std::string& s);
NoiseKind parse_noise(const std::string& s);
WeightChooser parse_chooser(const std::string& s);

struct SchemeConfig {
  SchemeId id = SchemeId::Plain;
  SssMode sss_mode = SssMode::PerMessage;
  std::uint64_t field_modulus = kMersenne61;
  std::size_t d = 2;
  bool clamp_d = true;
  std::vector<std::size_t> per_node_d;  // overrides d when non-empty
  std::size_t f = 0;
  std::optional<std::size_t> two_hop_colluders;
  NoiseKind noise = NoiseKind::Uniform;
  double noise_sigma = 0.0;
  std::size_t key_bits = 256;
  std::string group_profile = "fast";
  bool chained = false;
  WeightChooser weight_chooser = WeightChooser::None;
  std::size_t workers = 1;
};

// d_i per node (0 for isolated nodes) and the per-vicinity fault bound.
struct VicinityPolicy {
  std::vector<std::size_t> d;
  std::size_t f = 0;
};

VicinityPolicy make_policy(const Topology& t, const SchemeConfig& cfg);

// Per-round inputs, aligned with topology.neighbors(i): entry k of row i is
// the weight / message of the k-th neighbor j of i. Field rows are always
// filled; real rows only in the Real domain.
struct RoundInputs {
  Domain domain = Domain::Field;
  std::vector<std::vector<FieldElement>> weights;
  std::vector<std::vector<FieldElement>> messages;
  std::vector<std::vector<double>> real_weights;
  std::vector<std::vector<double>> real_messages;
};

enum class NodeStatus { Idle, Ok, Aborted };

struct NodeOutcome {
  NodeStatus status = NodeStatus::Idle;
  FieldElement value;
  std::optional<double> real;  // set by real-valued schemes
  bool verified = false;
  std::string abort_reason;
};

struct SchemeContext {
  const Topology& topo;
  Engine& engine;
  const SchemeConfig& config;
  const VicinityPolicy& policy;
  const PrimeField& field;
  std::uint64_t seed = 0;
  std::vector<char> targets;  // empty means every node

  bool is_target(NodeId i) const { return targets.empty() || targets.at(i) != 0; }
};

class Scheme {
 public:
  virtual ~Scheme() = default;
  virtual SchemeId id() const = 0;
  // Checks preconditions (ConfigError) and runs one-off distribution steps.
  virtual void setup(SchemeContext& ctx, const RoundInputs& first) = 0;
  virtual std::vector<NodeOutcome> run_round(SchemeContext& ctx, const RoundInputs& in, std::size_t round) = 0;
};

std::unique_ptr<Scheme> make_scheme(const SchemeConfig& cfg);

// Closed-form counts of an honest execution.
std::size_t expected_round_messages(const SchemeConfig& cfg, const Topology& t, const VicinityPolicy& p,
                                    const std::vector<char>& targets = {});
std::size_t expected_setup_messages(const SchemeConfig& cfg, const Topology& t, const VicinityPolicy& p,
                                    const std::vector<char>& targets = {});
std::size_t expected_comm_rounds(const SchemeConfig& cfg);

// Key size needed so that weighted sums of field values never wrap mod N.
std::size_t min_key_bits(std::uint64_t field_modulus, std::size_t max_degree);

// --- single-vicinity entry points ---
// Node 0 receives from neighbors 1..k over the complete graph K_{k+1}.

struct Vicinity {
  std::vector<FieldElement> messages;
  std::vector<FieldElement> weights;
  std::size_t d = 1;
  std::size_t f = 0;
};

struct VicinityRun {
  NodeOutcome outcome;
  RunMetrics metrics;
  std::vector<TranscriptEntry> transcript;
};

NodeOutcome plain_round(std::span<const FieldElement> messages, std::span<const FieldElement> weights);
double plain_round(std::span<const double> messages, std::span<const double> weights);

// Draws one noise value per message from `rng`, in order.
double perturb_round(std::span<const double> messages, std::span<const double> weights, NoiseKind kind,
                     double sigma, Rng& rng);
double draw_noise(NoiseKind kind, double sigma, Rng& rng);

VicinityRun sss_round(const Vicinity& v, SssMode mode, std::uint64_t seed, const AdversaryScript& script = {});
VicinityRun homomorphic_round(const Vicinity& v, std::size_t key_bits, std::uint64_t seed,
                              const AdversaryScript& script = {});
VicinityRun malicious_sss_round(const Vicinity& v, const std::string& group_profile, std::uint64_t seed,
                                const AdversaryScript& script = {});

}  // namespace smpc
