#include "smpc/byzagree.hpp"

#include <algorithm>

#include "smpc/errors.hpp"

namespace smpc::byzagree {

namespace {

std::uint64_t fnv1a(const std::string& s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Each signer authenticates the value together with the instance and every
// earlier signer in the chain.
Value signed_text(std::uint64_t instance_id, const Value& v, const std::vector<std::pair<NodeId, Tag>>& prefix) {
  std::string s = std::to_string(instance_id) + ':' + v + ':';
  for (const auto& [id, tag] : prefix) s += std::to_string(id) + ',';
  return s;
}

std::size_t relay_bytes(const AgreementInstance& inst, const SignedRelay& r) {
  const std::size_t v = inst.payload_bytes ? inst.payload_bytes : r.value.size();
  return v + r.chain.size() * (sizeof(NodeId) + sizeof(Tag));
}

bool chain_contains(const SignedRelay& r, NodeId id) {
  return std::any_of(r.chain.begin(), r.chain.end(), [&](const auto& e) { return e.first == id; });
}

bool valid_relay(const AgreementInstance& inst, const SignedRelay& r, std::size_t round, NodeId recipient,
                 const TagAuthority& auth) {
  if (r.chain.size() < round || r.chain.size() > inst.participants.size()) return false;
  if (r.chain.front().first != inst.general) return false;
  if (chain_contains(r, recipient)) return false;
  std::vector<std::pair<NodeId, Tag>> prefix;
  std::set<NodeId> seen;
  for (const auto& [id, tag] : r.chain) {
    if (std::find(inst.participants.begin(), inst.participants.end(), id) == inst.participants.end()) return false;
    if (!seen.insert(id).second) return false;
    if (!auth.verify(id, signed_text(inst.instance_id, r.value, prefix), tag)) return false;
    prefix.emplace_back(id, tag);
  }
  return true;
}

SignedRelay extend(const AgreementInstance& inst, SignedRelay r, const Signer& s) {
  Tag t = s.sign(signed_text(inst.instance_id, r.value, r.chain));
  r.chain.emplace_back(s.id(), t);
  return r;
}

}  // namespace

Tag Signer::sign(const Value& v) const { return authority_->mint(id_, v); }

Tag TagAuthority::compute(NodeId signer, const Value& v) const noexcept {
  return mix64(secret_ ^ mix64(signer) ^ fnv1a(v));
}

Tag TagAuthority::mint(NodeId signer, const Value& v) const {
  Tag t = compute(signer, v);
  minted_.emplace(signer, t);
  return t;
}

bool TagAuthority::verify(NodeId signer, const Value& v, Tag tag) const {
  return tag == compute(signer, v) && minted_.count({signer, tag}) != 0;
}

CoalitionAdversary::CoalitionAdversary(std::set<NodeId> corrupted, std::vector<Value> candidates, ChoiceFn choose)
    : corrupted_(std::move(corrupted)), candidates_(std::move(candidates)), choose_(std::move(choose)) {
  if (candidates_.empty()) throw ArgumentError("coalition needs at least one candidate value");
}

std::optional<SignedRelay> CoalitionAdversary::assemble(const AdversaryView& view, const Value& v,
                                                        NodeId recipient) const {
  const AgreementInstance& inst = *view.instance;
  std::vector<SignedRelay> starts;
  if (corrupted_.count(inst.general)) {
    SignedRelay fresh{v, {}};
    starts.push_back(extend(inst, fresh, view.signers.at(inst.general)));
  }
  for (const auto& env : *view.received) {
    if (env.relay.value == v && valid_relay(inst, env.relay, 1, recipient, *view.authority)) starts.push_back(env.relay);
  }
  for (auto& r : starts) {
    if (r.chain.size() > view.round || chain_contains(r, recipient)) continue;
    for (const auto& [id, signer] : view.signers) {
      if (r.chain.size() >= view.round) break;
      if (id == recipient || chain_contains(r, id)) continue;
      r = extend(inst, r, signer);
    }
    if (r.chain.size() == view.round) return r;
  }
  return std::nullopt;
}

std::vector<Envelope> CoalitionAdversary::act(const AdversaryView& view) {
  std::vector<Envelope> out;
  const AgreementInstance& inst = *view.instance;
  for (NodeId sender : corrupted_) {
    if (std::find(inst.participants.begin(), inst.participants.end(), sender) == inst.participants.end()) continue;
    for (NodeId to : inst.participants) {
      if (corrupted_.count(to)) continue;
      Choice c = choose_(view.round, sender, to);
      if (c == 0) continue;
      if (c == forge_choice()) {
        SignedRelay forged{candidates_.front(), {}};
        forged.chain.emplace_back(inst.general, mix64(view.round ^ to));
        for (NodeId p : inst.participants) {
          if (forged.chain.size() >= view.round) break;
          if (p != inst.general && p != to) forged.chain.emplace_back(p, mix64(p ^ view.round));
        }
        out.push_back({sender, to, std::move(forged)});
        continue;
      }
      if (c > candidates_.size()) continue;
      if (auto r = assemble(view, candidates_[c - 1], to)) out.push_back({sender, to, std::move(*r)});
    }
  }
  return out;
}

std::unique_ptr<Adversary> equivocating_general(NodeId general, const Value& first, const Value& second,
                                                std::set<NodeId> first_recipients) {
  auto choose = [general, first_recipients = std::move(first_recipients)](std::size_t round, NodeId sender,
                                                                          NodeId to) -> CoalitionAdversary::Choice {
    if (round != 1 || sender != general) return 0;
    return first_recipients.count(to) ? 1 : 2;
  };
  return std::make_unique<CoalitionAdversary>(std::set<NodeId>{general}, std::vector<Value>{first, second},
                                              std::move(choose));
}

BroadcastResult run_broadcast(const AgreementInstance& inst, const Value& general_value, Adversary* adversary,
                              const TagAuthority& authority) {
  if (inst.participants.empty()) throw ConfigError("broadcast instance without participants");
  if (std::find(inst.participants.begin(), inst.participants.end(), inst.general) == inst.participants.end()) {
    throw ConfigError("the general must be a participant");
  }
  auto corrupted = [&](NodeId id) { return adversary && adversary->is_corrupted(id); };

  struct Honest {
    std::vector<Value> extracted;
  };
  std::map<NodeId, Honest> honest;
  std::map<NodeId, Signer> coalition;
  for (NodeId p : inst.participants) {
    if (corrupted(p)) {
      coalition.emplace(p, authority.signer_for(p));
    } else {
      honest.emplace(p, Honest{});
    }
  }

  BroadcastResult result;
  result.relay_rounds = inst.relay_rounds();
  std::vector<Envelope> outgoing;
  std::vector<Envelope> coalition_inbox;

  if (!corrupted(inst.general)) {
    honest[inst.general].extracted.push_back(general_value);
    SignedRelay r = extend(inst, SignedRelay{general_value, {}}, authority.signer_for(inst.general));
    for (NodeId p : inst.participants) {
      if (p != inst.general) outgoing.push_back({inst.general, p, r});
    }
  }

  for (std::size_t round = 1; round <= inst.relay_rounds(); ++round) {
    result.honest_messages += outgoing.size();
    std::vector<Envelope> to_honest;
    for (auto& env : outgoing) {
      result.bytes += relay_bytes(inst, env.relay);
      if (corrupted(env.to)) {
        coalition_inbox.push_back(std::move(env));
      } else {
        to_honest.push_back(std::move(env));
      }
    }
    outgoing.clear();

    // The coalition acts after seeing this round's honest traffic.
    if (adversary && !coalition.empty()) {
      AdversaryView view{&inst, round, &coalition_inbox, coalition, &authority};
      for (auto& env : adversary->act(view)) {
        if (!corrupted(env.from) || !honest.count(env.to)) continue;
        ++result.adversary_messages;
        result.bytes += relay_bytes(inst, env.relay);
        to_honest.push_back(std::move(env));
      }
    }

    for (const auto& env : to_honest) {
      auto& node = honest.at(env.to);
      if (!valid_relay(inst, env.relay, round, env.to, authority)) {
        ++result.rejected_relays;
        continue;
      }
      if (std::find(node.extracted.begin(), node.extracted.end(), env.relay.value) != node.extracted.end()) continue;
      node.extracted.push_back(env.relay.value);
      // Two distinct values already prove the general faulty.
      if (round == inst.relay_rounds() || node.extracted.size() > 2) continue;
      SignedRelay next = extend(inst, env.relay, authority.signer_for(env.to));
      for (NodeId p : inst.participants) {
        if (p != env.to && !chain_contains(next, p)) outgoing.push_back({env.to, p, next});
      }
    }
  }

  for (const auto& [id, node] : honest) {
    AgreementOutcome o;
    o.decided_round = inst.relay_rounds();
    if (node.extracted.size() == 1) {
      o.decided_value = node.extracted.front();
    } else {
      o.decided_value = inst.default_value;
      o.default_used = true;
    }
    result.outcomes.emplace(id, std::move(o));
  }
  return result;
}

std::size_t honest_message_count(std::size_t n, std::size_t f_bound) {
  if (n == 0) return 0;
  std::size_t count = n - 1;
  if (f_bound >= 1 && n >= 2) count += (n - 1) * (n - 2);
  return count;
}

bool agreement_holds(const BroadcastResult& r) {
  if (r.outcomes.empty()) return true;
  const auto& first = r.outcomes.begin()->second;
  return std::all_of(r.outcomes.begin(), r.outcomes.end(),
                     [&](const auto& kv) { return kv.second.decided_value == first.decided_value; });
}

bool validity_holds(const BroadcastResult& r, const Value& general_value) {
  return std::all_of(r.outcomes.begin(), r.outcomes.end(), [&](const auto& kv) {
    return kv.second.decided_value == general_value && !kv.second.default_used;
  });
}

}  // namespace smpc::byzagree
