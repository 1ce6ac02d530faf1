#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smpc/engine.hpp"
#include "smpc/field.hpp"
#include "smpc/numerics.hpp"
#include "smpc/schemes.hpp"
#include "smpc/topology.hpp"

namespace smpc {

// A node's view between rounds.
struct NodeState {
  NodeId id = 0;
  FieldElement field_estimate;
  double estimate = 0.0;
  NodeStatus last_status = NodeStatus::Idle;
};

// The iterative computation whose per-round step is a weighted neighbor sum.
class Workload {
 public:
  virtual ~Workload() = default;
  virtual std::string name() const = 0;
  virtual Domain domain() const = 0;
  virtual std::size_t node_count() const = 0;
  // Checks that the workload fits the topology; returns warnings.
  virtual std::vector<std::string> prepare(const Topology& t, const PrimeField& field) = 0;
  // Field rows are zero-filled unless `field_rows` is set.
  virtual RoundInputs inputs(const Topology& t, bool field_rows) const = 0;
  // Folds the weighted sums into the states. Aborted nodes keep their value.
  virtual void apply(const std::vector<NodeOutcome>& outcomes) = 0;
  virtual const std::vector<NodeState>& states() const = 0;
  virtual std::unique_ptr<Workload> clone() const = 0;
};

// x_i <- (b_i - sum_{j != i} A_ij x_j) / A_ii, with the neighbor sum taken by
// the scheme. Field schemes see x_j through the codec and the weights -A_ij
// scaled by weight_scale and rounded.
class JacobiWorkload : public Workload {
 public:
  JacobiWorkload(numerics::SparseSystem system, std::vector<double> x0, std::uint64_t codec_scale = kDefaultScale,
                 std::uint64_t weight_scale = 0);

  std::string name() const override { return "jacobi"; }
  Domain domain() const override { return Domain::Real; }
  std::size_t node_count() const override { return system_.n; }
  std::vector<std::string> prepare(const Topology& t, const PrimeField& field) override;
  RoundInputs inputs(const Topology& t, bool field_rows) const override;
  void apply(const std::vector<NodeOutcome>& outcomes) override;
  const std::vector<NodeState>& states() const override { return states_; }
  std::unique_ptr<Workload> clone() const override { return std::make_unique<JacobiWorkload>(*this); }

  const numerics::SparseSystem& system() const noexcept { return system_; }
  std::uint64_t weight_scale() const noexcept { return weight_scale_; }
  std::vector<double> x() const;

 private:
  numerics::SparseSystem system_;
  std::vector<double> x0_;
  std::uint64_t codec_scale_;
  std::uint64_t weight_scale_;
  std::optional<FixedPointCodec> codec_;
  std::vector<NodeState> states_;
};

// Jacobi on the collaborative-filtering augmented system.
std::unique_ptr<JacobiWorkload> cf_workload(const numerics::RatingsMatrix& r, const std::vector<double>& b,
                                            double epsilon, std::uint64_t weight_scale = 1000);

// x_i <- sum_j a_ji x_j over the field with fixed random weights.
class FieldLinearWorkload : public Workload {
 public:
  FieldLinearWorkload(std::uint64_t seed, std::uint64_t weight_bound = 0);

  std::string name() const override { return "field-linear"; }
  Domain domain() const override { return Domain::Field; }
  std::size_t node_count() const override { return states_.size(); }
  std::vector<std::string> prepare(const Topology& t, const PrimeField& field) override;
  RoundInputs inputs(const Topology& t, bool field_rows) const override;
  void apply(const std::vector<NodeOutcome>& outcomes) override;
  const std::vector<NodeState>& states() const override { return states_; }
  std::unique_ptr<Workload> clone() const override { return std::make_unique<FieldLinearWorkload>(*this); }

  // What the honest computation gives for the next round, from the current states.
  std::vector<FieldElement> oracle_next(const Topology& t) const;

 private:
  std::uint64_t seed_;
  std::uint64_t weight_bound_;  // 0 means uniform over the field
  std::vector<std::vector<FieldElement>> weights_;
  std::vector<NodeState> states_;
};

struct RunOptions {
  std::vector<char> targets;  // empty means every node
  bool keep_outcomes = true;
};

struct RunResult {
  RunMetrics metrics;
  std::vector<std::vector<double>> estimates;              // per round, after the update
  std::vector<std::vector<FieldElement>> field_estimates;  // per round
  std::vector<std::vector<NodeOutcome>> outcomes;          // per round
  std::vector<TranscriptEntry> transcript;
  std::vector<std::string> warnings;
  bool aborted = false;
};

// Setup errors surface as ConfigError; aborts during rounds are recorded.
RunResult run(const Topology& t, const SchemeConfig& cfg, Workload& workload, std::size_t rounds,
              const AdversaryScript& script, std::uint64_t seed, const RunOptions& options = {});

// Everything each corrupted node received, grouped by observer.
std::map<NodeId, std::vector<RoundMessage>> transcript_view(const AdversaryScript& script, const RunResult& run);

}  // namespace smpc
