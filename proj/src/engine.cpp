#include "smpc/engine.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "smpc/errors.hpp"

namespace smpc {

namespace {

constexpr std::pair<PayloadKind, const char*> kPayloadNames[] = {
    {PayloadKind::Raw, "raw"},
    {PayloadKind::Noisy, "noisy"},
    {PayloadKind::Share, "share"},
    {PayloadKind::Aggregate, "aggregate"},
    {PayloadKind::AggregatePair, "aggregate-pair"},
    {PayloadKind::VerifiableShare, "verifiable-share"},
    {PayloadKind::Ciphertext, "ciphertext"},
    {PayloadKind::CiphertextBroadcast, "ciphertext-broadcast"},
    {PayloadKind::Partial, "partial"},
    {PayloadKind::KeyMaterial, "key-material"},
    {PayloadKind::Complaint, "complaint"},
    {PayloadKind::Commitments, "commitments"},
    {PayloadKind::Relay, "relay"},
};

void tamper(RoundMessage& m, const AdversaryAction& a) {
  if (!m.elements.empty()) {
    auto& e = m.elements[std::min(a.word, m.elements.size() - 1)];
    e += FieldElement::from_signed(a.delta, e.modulus());
  } else if (!m.big.empty()) {
    m.big[std::min(a.word, m.big.size() - 1)] += a.delta;
  } else {
    m.real += static_cast<double>(a.delta);
  }
}

}  // namespace

std::string to_string(PayloadKind k) {
  for (auto [kind, name] : kPayloadNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

std::optional<PayloadKind> payload_from_string(const std::string& s) {
  for (auto [kind, name] : kPayloadNames) {
    if (s == name) return kind;
  }
  return std::nullopt;
}

std::string to_string(ActionKind k) {
  switch (k) {
    case ActionKind::Observe: return "observe";
    case ActionKind::Tamper: return "tamper";
    case ActionKind::Withhold: return "withhold";
    case ActionKind::Equivocate: return "equivocate";
  }
  return "unknown";
}

bool AdversaryAction::matches(const RoundMessage& m) const {
  return m.sender == actor && (!round || *round == m.round) && (!payload || *payload == m.kind) &&
         (!target || *target == m.receiver) && (!subject || *subject == m.subject);
}

const AdversaryAction* AdversaryScript::find(ActionKind kind, NodeId actor, std::size_t round, PayloadKind payload,
                                             std::optional<NodeId> target, std::optional<NodeId> subject) const {
  if (!is_corrupted(actor)) return nullptr;
  for (const auto& a : actions) {
    if (a.kind != kind || a.actor != actor) continue;
    if (a.round && *a.round != round) continue;
    if (a.payload && *a.payload != payload) continue;
    if (a.target && target && *a.target != *target) continue;
    if (a.subject && subject && *a.subject != *subject) continue;
    return &a;
  }
  return nullptr;
}

void AdversaryScript::validate(const Topology& t) const {
  for (NodeId c : corrupted) {
    if (c >= t.node_count()) throw ConfigError("corrupted node " + std::to_string(c) + " is not in the topology");
  }
  for (const auto& a : actions) {
    if (!is_corrupted(a.actor)) throw ConfigError("adversary action by uncorrupted node " + std::to_string(a.actor));
    if (model == Model::SemiHonest && a.kind != ActionKind::Observe) {
      throw ConfigError("semi-honest adversaries may only observe");
    }
  }
}

bool RoundStats::same_counts(const RoundStats& o) const {
  return round == o.round && messages == o.messages && delivered == o.delivered && withheld == o.withheld &&
         bytes == o.bytes && comm_rounds == o.comm_rounds && aborts == o.aborts && detections == o.detections;
}

std::size_t RunMetrics::total_messages() const {
  std::size_t s = setup.messages;
  for (const auto& r : rounds) s += r.messages;
  return s;
}

std::size_t RunMetrics::total_bytes() const {
  std::size_t s = setup.bytes;
  for (const auto& r : rounds) s += r.bytes;
  return s;
}

std::size_t RunMetrics::total_comm_rounds() const {
  std::size_t s = setup.comm_rounds;
  for (const auto& r : rounds) s += r.comm_rounds;
  return s;
}

std::size_t RunMetrics::total_aborts() const {
  std::size_t s = setup.aborts;
  for (const auto& r : rounds) s += r.aborts;
  return s;
}

std::size_t RunMetrics::total_detections() const {
  std::size_t s = setup.detections;
  for (const auto& r : rounds) s += r.detections;
  return s;
}

bool RunMetrics::same_counts(const RunMetrics& o) const {
  if (!setup.same_counts(o.setup) || rounds.size() != o.rounds.size() || events != o.events) return false;
  for (std::size_t k = 0; k < rounds.size(); ++k) {
    if (!rounds[k].same_counts(o.rounds[k])) return false;
  }
  return true;
}

Engine::Engine(const Topology& topo, const AdversaryScript& script, RunMetrics& metrics)
    : topo_(topo), script_(script), metrics_(metrics), outbox_(topo.node_count()), inbox_(topo.node_count()) {}

void Engine::begin_round(std::size_t round) {
  round_ = round;
  phase_ = 0;
  for (auto& box : inbox_) box.clear();
  for (auto& box : outbox_) box.clear();
  if (round > 0) {
    metrics_.rounds.push_back({});
    metrics_.rounds.back().round = round;
  }
}

RoundStats& Engine::stats() { return round_ == 0 ? metrics_.setup : metrics_.rounds.back(); }

void Engine::send(RoundMessage m) {
  if (m.sender >= outbox_.size() || m.receiver >= outbox_.size()) throw ArgumentError("message endpoint out of range");
  m.round = round_;
  m.phase = phase_;
  outbox_[m.sender].push_back(std::move(m));
}

void Engine::deliver() {
  RoundStats& st = stats();
  for (auto& box : inbox_) box.clear();
  bool any = false;
  for (auto& box : outbox_) {
    for (auto& m : box) {
      any = true;
      ++st.messages;
      if (script_.is_corrupted(m.sender)) {
        bool withheld = false;
        for (const auto& a : script_.actions) {
          if (!a.matches(m)) continue;
          if (a.kind == ActionKind::Withhold) withheld = true;
          if (a.kind == ActionKind::Tamper) tamper(m, a);
        }
        if (withheld) {
          ++st.withheld;
          continue;
        }
      }
      st.bytes += m.bytes;
      ++st.delivered;
      if (script_.is_corrupted(m.receiver)) transcript_.push_back({m.receiver, m});
      inbox_[m.receiver].push_back(std::move(m));
    }
    box.clear();
  }
  if (any) ++st.comm_rounds;
  ++phase_;
}

const std::vector<RoundMessage>& Engine::inbox(NodeId id) const {
  const auto& box = inbox_.at(id);
  for (const auto& m : box) {
    if (m.round != round_ || m.phase + 1 != phase_) throw std::logic_error("message read outside its phase");
  }
  return box;
}

void Engine::account_external(std::size_t messages, std::size_t bytes, std::size_t comm_rounds) {
  RoundStats& st = stats();
  st.messages += messages;
  st.delivered += messages;
  st.bytes += bytes;
  st.comm_rounds += comm_rounds;
}

void Engine::record_abort(const std::string& cause) {
  ++stats().aborts;
  metrics_.events.push_back("round " + std::to_string(round_) + " abort: " + cause);
}

void Engine::record_detection(const std::string& cause) {
  ++stats().detections;
  metrics_.events.push_back("round " + std::to_string(round_) + " detection: " + cause);
}

void for_each_index(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  workers = std::min(workers, count);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace smpc
