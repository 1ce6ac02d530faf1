#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smpc/random.hpp"

namespace smpc::byzagree {

using NodeId = std::uint32_t;
using Value = std::string;
using Tag = std::uint64_t;

enum class PayloadKind { CommitmentVector, Coefficient, Opaque };

struct AgreementInstance {
  NodeId general = 0;
  std::vector<NodeId> participants;  // includes the general
  std::size_t f_bound = 0;
  PayloadKind payload_kind = PayloadKind::Opaque;
  Value default_value = "0";
  std::uint64_t instance_id = 0;
  // Wire size of the value when relays carry a digest of it; 0 means the
  // value itself travels.
  std::size_t payload_bytes = 0;

  std::size_t relay_rounds() const noexcept { return f_bound + 1; }
};

class TagAuthority;

// Signing capability bound to one identity. Only the authority creates these.
class Signer {
 public:
  NodeId id() const noexcept { return id_; }
  Tag sign(const Value& v) const;

 private:
  friend class TagAuthority;
  Signer(const TagAuthority* authority, NodeId id) : authority_(authority), id_(id) {}
  const TagAuthority* authority_;
  NodeId id_;
};

// Issues unforgeable tags: verification succeeds only for (signer, value)
// pairs the signer actually submitted.
class TagAuthority {
 public:
  explicit TagAuthority(std::uint64_t secret) : secret_(secret) {}

  Signer signer_for(NodeId id) const { return Signer(this, id); }
  bool verify(NodeId signer, const Value& v, Tag tag) const;
  std::size_t minted() const noexcept { return minted_.size(); }

 private:
  friend class Signer;
  Tag mint(NodeId signer, const Value& v) const;
  Tag compute(NodeId signer, const Value& v) const noexcept;

  std::uint64_t secret_;
  mutable std::set<std::pair<NodeId, Tag>> minted_;
};

struct SignedRelay {
  Value value;
  std::vector<std::pair<NodeId, Tag>> chain;
};

struct Envelope {
  NodeId from = 0;
  NodeId to = 0;
  SignedRelay relay;
};

struct AgreementOutcome {
  Value decided_value;
  std::size_t decided_round = 0;
  bool default_used = false;
  friend bool operator==(const AgreementOutcome&, const AgreementOutcome&) = default;
};

// What the coalition sees when it acts in a relay round.
struct AdversaryView {
  const AgreementInstance* instance = nullptr;
  std::size_t round = 0;                // 1-based relay round
  const std::vector<Envelope>* received = nullptr;  // every relay delivered to a corrupted node so far
  std::map<NodeId, Signer> signers;     // one per corrupted participant
  const TagAuthority* authority = nullptr;
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual bool is_corrupted(NodeId id) const = 0;
  // Messages the coalition emits this round. Envelopes whose sender is not
  // corrupted are dropped by the protocol driver.
  virtual std::vector<Envelope> act(const AdversaryView& view) = 0;
};

// Corrupted nodes that never send anything.
class SilentAdversary : public Adversary {
 public:
  explicit SilentAdversary(std::set<NodeId> corrupted) : corrupted_(std::move(corrupted)) {}
  bool is_corrupted(NodeId id) const override { return corrupted_.count(id) != 0; }
  std::vector<Envelope> act(const AdversaryView&) override { return {}; }

 private:
  std::set<NodeId> corrupted_;
};

// Table-driven coalition. For every (round, corrupted sender, honest
// recipient) the script names an action: 0 sends nothing, k in
// [1, candidates] sends candidate k-1 with the shortest valid chain the
// coalition can assemble (skipped when none exists), and candidates + 1
// sends candidate 0 under a forged tag of an honest signer.
class CoalitionAdversary : public Adversary {
 public:
  using Choice = std::uint32_t;
  using ChoiceFn = std::function<Choice(std::size_t round, NodeId sender, NodeId recipient)>;

  CoalitionAdversary(std::set<NodeId> corrupted, std::vector<Value> candidates, ChoiceFn choose);

  bool is_corrupted(NodeId id) const override { return corrupted_.count(id) != 0; }
  std::vector<Envelope> act(const AdversaryView& view) override;

  Choice forge_choice() const noexcept { return static_cast<Choice>(candidates_.size() + 1); }

 private:
  std::optional<SignedRelay> assemble(const AdversaryView& view, const Value& v, NodeId recipient) const;

  std::set<NodeId> corrupted_;
  std::vector<Value> candidates_;
  ChoiceFn choose_;
};

// General sends `first` to the listed recipients and `second` to the rest;
// other corrupted nodes stay silent.
std::unique_ptr<Adversary> equivocating_general(NodeId general, const Value& first, const Value& second,
                                                std::set<NodeId> first_recipients);

struct BroadcastResult {
  std::map<NodeId, AgreementOutcome> outcomes;  // honest participants only
  std::size_t relay_rounds = 0;
  std::size_t honest_messages = 0;
  std::size_t adversary_messages = 0;
  std::size_t rejected_relays = 0;
  std::size_t bytes = 0;
};

// Runs one signed broadcast instance for exactly f_bound + 1 relay rounds.
// `general_value` is used when the general is honest.
BroadcastResult run_broadcast(const AgreementInstance& instance, const Value& general_value,
                              Adversary* adversary, const TagAuthority& authority);

// Messages sent by honest participants in a fault-free run.
std::size_t honest_message_count(std::size_t participants, std::size_t f_bound);

// Agreement and validity over one result.
bool agreement_holds(const BroadcastResult& r);
bool validity_holds(const BroadcastResult& r, const Value& general_value);

}  // namespace smpc::byzagree
