#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "smpc/field.hpp"
#include "smpc/topology.hpp"

namespace smpc {

enum class PayloadKind : std::uint8_t {
  Raw,            // plain value
  Noisy,          // value plus perturbation
  Share,          // Shamir / additive share
  Aggregate,      // S_li
  AggregatePair,  // (S_li, T_li)
  VerifiableShare,
  Ciphertext,
  CiphertextBroadcast,  // C_i sent back to the neighbors
  Partial,              // partial decryption
  KeyMaterial,          // public key or key share during setup
  Complaint,
  Commitments,  // dealing-level: the committed secret of a dealer
  Relay,        // signed-broadcast relay
};

std::string to_string(PayloadKind k);
std::optional<PayloadKind> payload_from_string(const std::string& s);

struct RoundMessage {
  NodeId sender = 0;
  NodeId receiver = 0;
  std::size_t round = 0;
  std::uint32_t phase = 0;
  PayloadKind kind = PayloadKind::Raw;
  NodeId subject = 0;  // dealer for shares, target node for aggregates
  std::vector<FieldElement> elements;
  std::vector<mpz_class> big;
  double real = 0.0;
  std::size_t bytes = 0;
};

enum class ActionKind { Observe, Tamper, Withhold, Equivocate };
std::string to_string(ActionKind k);

struct AdversaryAction {
  ActionKind kind = ActionKind::Observe;
  NodeId actor = 0;
  std::optional<std::size_t> round;        // every round when empty
  std::optional<PayloadKind> payload;      // any payload when empty
  std::optional<NodeId> target;            // receiver filter
  std::optional<NodeId> subject;           // subject filter
  std::int64_t delta = 1;
  std::size_t word = 0;                    // which payload element to alter

  bool matches(const RoundMessage& m) const;
};

struct AdversaryScript {
  enum class Model { SemiHonest, Malicious };
  Model model = Model::SemiHonest;
  std::set<NodeId> corrupted;
  std::vector<AdversaryAction> actions;
  bool contract_violation = false;

  bool is_corrupted(NodeId id) const { return corrupted.count(id) != 0; }
  bool empty() const noexcept { return corrupted.empty(); }

  // First action of `kind` by `actor` that applies to the given filters.
  const AdversaryAction* find(ActionKind kind, NodeId actor, std::size_t round, PayloadKind payload,
                              std::optional<NodeId> target = std::nullopt,
                              std::optional<NodeId> subject = std::nullopt) const;

  // Semi-honest scripts may only observe; every actor must be corrupted.
  void validate(const Topology& t) const;
};

struct RoundStats {
  std::size_t round = 0;
  std::size_t messages = 0;  // sent, including withheld
  std::size_t delivered = 0;
  std::size_t withheld = 0;
  std::size_t bytes = 0;
  std::size_t comm_rounds = 0;
  std::size_t aborts = 0;
  std::size_t detections = 0;
  double millis = 0.0;

  bool same_counts(const RoundStats& o) const;
};

struct RunMetrics {
  RoundStats setup;  // round 0: key distribution, weight agreement
  std::vector<RoundStats> rounds;
  std::vector<std::string> events;  // abort and detection causes

  std::size_t total_messages() const;
  std::size_t total_bytes() const;
  std::size_t total_comm_rounds() const;
  std::size_t total_aborts() const;
  std::size_t total_detections() const;
  // Everything except wall-clock.
  bool same_counts(const RunMetrics& o) const;
};

struct TranscriptEntry {
  NodeId observer = 0;
  RoundMessage message;
};

// Synchronous mailbox. Nodes send into per-sender outboxes during a phase;
// deliver() is the barrier that applies message-level adversary actions,
// updates metrics and fills the inboxes for the next phase.
class Engine {
 public:
  Engine(const Topology& topo, const AdversaryScript& script, RunMetrics& metrics);

  void begin_round(std::size_t round);
  std::size_t round() const noexcept { return round_; }
  std::uint32_t phase() const noexcept { return phase_; }

  // Safe to call concurrently for distinct senders.
  void send(RoundMessage m);
  void deliver();

  const std::vector<RoundMessage>& inbox(NodeId id) const;

  // Traffic of sub-protocols that are simulated outside the mailbox.
  void account_external(std::size_t messages, std::size_t bytes, std::size_t comm_rounds);
  void record_abort(const std::string& cause);
  void record_detection(const std::string& cause);

  RoundStats& stats();
  const std::vector<TranscriptEntry>& transcript() const noexcept { return transcript_; }
  const Topology& topology() const noexcept { return topo_; }
  const AdversaryScript& script() const noexcept { return script_; }

 private:
  const Topology& topo_;
  const AdversaryScript& script_;
  RunMetrics& metrics_;
  std::size_t round_ = 0;
  std::uint32_t phase_ = 0;
  std::vector<std::vector<RoundMessage>> outbox_;
  std::vector<std::vector<RoundMessage>> inbox_;
  std::vector<TranscriptEntry> transcript_;
};

// Runs fn(i) for i in [0, count) on up to `workers` threads.
void for_each_index(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace smpc
