#include "smpc/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

#include <openssl/sha.h>

#include "smpc/bigint.hpp"
#include "smpc/byzagree.hpp"
#include "smpc/errors.hpp"
#include "smpc/paillier.hpp"
#include "smpc/pedersen.hpp"
#include "smpc/shamir.hpp"

namespace smpc {

namespace {

enum Purpose : std::uint64_t {
  kDeal = 1,
  kBlind = 2,
  kNoise = 3,
  kEncrypt = 4,
  kKeygen = 5,
  kAuthority = 6,
};

Rng node_rng(const SchemeContext& ctx, NodeId node, std::size_t round, Purpose p) {
  return Rng(derive_seed(ctx.seed, node, round * 16 + p));
}

FieldElement point_of(NodeId l, std::uint64_t modulus) { return {std::uint64_t{l} + 1, modulus}; }

std::size_t index_of(const Topology& t, NodeId i, NodeId j) {
  const auto& nb = t.neighbors(i);
  auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) throw std::logic_error("node " + std::to_string(j) + " is not a neighbor of " + std::to_string(i));
  return static_cast<std::size_t>(it - nb.begin());
}

std::uint64_t arc_key(NodeId from, NodeId to) { return (std::uint64_t{from} << 32) | to; }

NodeOutcome ok_outcome(FieldElement v) {
  NodeOutcome o;
  o.status = NodeStatus::Ok;
  o.value = v;
  return o;
}

NodeOutcome abort_outcome(std::string why) {
  NodeOutcome o;
  o.status = NodeStatus::Aborted;
  o.abort_reason = std::move(why);
  return o;
}

void check_inputs(const SchemeContext& ctx, const RoundInputs& in) {
  const std::size_t n = ctx.topo.node_count();
  if (in.weights.size() != n || in.messages.size() != n) throw ConfigError("round inputs do not cover every node");
  for (NodeId i = 0; i < n; ++i) {
    if (!ctx.is_target(i)) continue;
    const std::size_t deg = ctx.topo.degree(i);
    if (in.weights[i].size() != deg || in.messages[i].size() != deg) {
      throw ConfigError("round inputs for node " + std::to_string(i) + " do not match its degree");
    }
    if (in.domain == Domain::Real && (in.real_weights.at(i).size() != deg || in.real_messages.at(i).size() != deg)) {
      throw ConfigError("real round inputs for node " + std::to_string(i) + " do not match its degree");
    }
  }
}

// Records aborts after a parallel phase, in node order.
void record_aborts(Engine& engine, const std::vector<NodeOutcome>& out) {
  for (NodeId i = 0; i < out.size(); ++i) {
    if (out[i].status == NodeStatus::Aborted) engine.record_abort("node " + std::to_string(i) + ": " + out[i].abort_reason);
  }
}

void record_all(Engine& engine, const std::vector<std::vector<std::string>>& per_node, bool detection) {
  for (const auto& list : per_node) {
    for (const auto& s : list) {
      if (detection) {
        engine.record_detection(s);
      } else {
        engine.record_abort(s);
      }
    }
  }
}

std::vector<NodeId> active_dealers(const SchemeContext& ctx) {
  std::vector<NodeId> out;
  for (NodeId j = 0; j < ctx.topo.node_count(); ++j) {
    for (NodeId i : ctx.topo.neighbors(j)) {
      if (ctx.is_target(i)) {
        out.push_back(j);
        break;
      }
    }
  }
  return out;
}

std::vector<NodeId> target_nodes(const SchemeContext& ctx) {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < ctx.topo.node_count(); ++i) {
    if (ctx.is_target(i)) out.push_back(i);
  }
  return out;
}

// Lagrange weights per receiving node, keyed by the point set used.
class LagrangeCache {
 public:
  void resize(std::size_t n) { cache_.assign(n, {}); }

  const shamir::LagrangeWeights& get(NodeId i, const std::vector<FieldElement>& points) {
    std::vector<std::uint64_t> key;
    key.reserve(points.size());
    for (const auto& p : points) key.push_back(p.value());
    auto& slot = cache_.at(i);
    auto it = slot.find(key);
    if (it == slot.end()) it = slot.emplace(std::move(key), shamir::precompute_lagrange(points)).first;
    return it->second;
  }

 private:
  std::vector<std::map<std::vector<std::uint64_t>, shamir::LagrangeWeights>> cache_;
};

// ---------------------------------------------------------------- plain

class DirectScheme : public Scheme {
 public:
  explicit DirectScheme(bool noisy) : noisy_(noisy) {}

  SchemeId id() const override { return noisy_ ? SchemeId::Perturbation : SchemeId::Plain; }

  void setup(SchemeContext& ctx, const RoundInputs&) override {
    if (noisy_ && !(ctx.config.noise_sigma >= 0.0)) throw ConfigError("noise sigma must be non-negative");
  }

  std::vector<NodeOutcome> run_round(SchemeContext& ctx, const RoundInputs& in, std::size_t round) override {
    check_inputs(ctx, in);
    const auto& topo = ctx.topo;
    const bool real = in.domain == Domain::Real;
    const auto dealers = active_dealers(ctx);
    for_each_index(dealers.size(), ctx.config.workers, [&](std::size_t idx) {
      const NodeId j = dealers[idx];
      Rng rng = node_rng(ctx, j, round, kNoise);
      for (NodeId i : topo.neighbors(j)) {
        if (!ctx.is_target(i)) continue;
        const std::size_t k = index_of(topo, i, j);
        RoundMessage m;
        m.sender = j;
        m.receiver = i;
        m.subject = j;
        m.kind = noisy_ ? PayloadKind::Noisy : PayloadKind::Raw;
        if (real) {
          m.real = in.real_messages[i][k];
          if (noisy_) m.real += draw_noise(ctx.config.noise, ctx.config.noise_sigma, rng);
          m.bytes = sizeof(double);
        } else {
          FieldElement v = in.messages[i][k];
          if (noisy_) {
            const double r = draw_noise(ctx.config.noise, ctx.config.noise_sigma, rng);
            v += FieldElement::from_signed(std::llround(r), v.modulus());
          }
          m.elements = {v};
          m.bytes = ctx.field.byte_size();
        }
        ctx.engine.send(std::move(m));
      }
    });
    ctx.engine.deliver();

    std::vector<NodeOutcome> out(topo.node_count());
    const auto targets = target_nodes(ctx);
    for_each_index(targets.size(), ctx.config.workers, [&](std::size_t idx) {
      const NodeId i = targets[idx];
      const auto& box = ctx.engine.inbox(i);
      std::vector<char> seen(topo.degree(i), 0);
      FieldElement acc = ctx.field.zero();
      double racc = 0.0;
      for (const auto& m : box) {
        const std::size_t k = index_of(topo, i, m.sender);
        if (seen[k]) continue;
        seen[k] = 1;
        if (real) {
          racc += in.real_weights[i][k] * m.real;
        } else {
          acc += in.weights[i][k] * m.elements.at(0);
        }
      }
      const auto missing = std::count(seen.begin(), seen.end(), 0);
      if (missing) {
        out[i] = abort_outcome(std::to_string(missing) + " neighbor message(s) missing");
        return;
      }
      out[i] = ok_outcome(acc);
      if (real) out[i].real = racc;
    });
    record_aborts(ctx.engine, out);
    return out;
  }

 private:
  bool noisy_;
};

// ---------------------------------------------------------------- SSS

class SssScheme : public Scheme {
 public:
  explicit SssScheme(SssMode mode) : mode_(mode) {}

  SchemeId id() const override { return SchemeId::Sss; }

  void setup(SchemeContext& ctx, const RoundInputs&) override {
    const auto& topo = ctx.topo;
    const std::size_t n = topo.node_count();
    if (n + 1 >= ctx.field.modulus()) throw ConfigError("field too small to give every node a distinct point");
    cache_.resize(n);
    dealer_threshold_.assign(n, 0);
    recon_threshold_.assign(n, 0);
    for (NodeId i = 0; i < n; ++i) {
      if (!ctx.is_target(i)) continue;
      recon_threshold_[i] = mode_ == SssMode::Additive ? topo.degree(i) : ctx.policy.d[i];
    }
    if (mode_ != SssMode::Broadcast) return;

    for (NodeId j = 0; j < n; ++j) {
      std::size_t dj = 0;
      for (NodeId i : topo.neighbors(j)) {
        if (ctx.is_target(i)) dj = std::max(dj, ctx.policy.d[i]);
      }
      if (ctx.config.two_hop_colluders && dj > 0) dj = 1 + *ctx.config.two_hop_colluders;
      dealer_threshold_[j] = dj;
      for (NodeId i : topo.neighbors(j)) {
        if (ctx.is_target(i) && topo.degree(i) < dj) {
          throw ConfigError("broadcast mode: node " + std::to_string(i) + " has fewer than d^(" + std::to_string(j) +
                            ") = " + std::to_string(dj) + " neighbors");
        }
      }
    }
    for (NodeId i = 0; i < n; ++i) {
      if (!ctx.is_target(i)) continue;
      std::size_t D = 0;
      for (NodeId j : topo.neighbors(i)) D = std::max(D, dealer_threshold_[j]);
      recon_threshold_[i] = D;
    }
  }

  std::vector<NodeOutcome> run_round(SchemeContext& ctx, const RoundInputs& in, std::size_t round) override {
    check_inputs(ctx, in);
    const auto& topo = ctx.topo;
    const std::uint64_t mod = ctx.field.modulus();
    const std::size_t share_bytes = ctx.field.byte_size();

    // S1-S3: deal
    const auto dealers = active_dealers(ctx);
    for_each_index(dealers.size(), ctx.config.workers, [&](std::size_t idx) {
      const NodeId j = dealers[idx];
      Rng rng = node_rng(ctx, j, round, kDeal);
      auto send_share = [&](NodeId l, NodeId subject, FieldElement v) {
        RoundMessage m;
        m.sender = j;
        m.receiver = l;
        m.subject = subject;
        m.kind = PayloadKind::Share;
        m.elements = {v};
        m.bytes = share_bytes;
        ctx.engine.send(std::move(m));
      };
      if (mode_ == SssMode::Broadcast) {
        std::optional<FieldElement> secret;
        std::vector<NodeId> recipients;
        for (NodeId i : topo.neighbors(j)) {
          if (!ctx.is_target(i)) continue;
          const FieldElement& m = in.messages[i][index_of(topo, i, j)];
          if (secret && !(*secret == m)) throw ConfigError("broadcast mode needs one message per sender");
          secret = m;
          recipients.insert(recipients.end(), topo.neighbors(i).begin(), topo.neighbors(i).end());
        }
        std::sort(recipients.begin(), recipients.end());
        recipients.erase(std::unique(recipients.begin(), recipients.end()), recipients.end());
        auto poly = shamir::SharingPolynomial::random(*secret, dealer_threshold_[j], rng);
        for (NodeId l : recipients) send_share(l, j, poly.evaluate(point_of(l, mod)));
        return;
      }
      for (NodeId i : topo.neighbors(j)) {
        if (!ctx.is_target(i)) continue;
        const FieldElement& m = in.messages[i][index_of(topo, i, j)];
        const auto& vicinity = topo.neighbors(i);
        if (mode_ == SssMode::Additive) {
          auto parts = shamir::deal_additive(m, vicinity.size(), rng);
          for (std::size_t k = 0; k < vicinity.size(); ++k) send_share(vicinity[k], i, parts[k]);
        } else {
          auto poly = shamir::SharingPolynomial::random(m, ctx.policy.d[i], rng);
          for (NodeId l : vicinity) send_share(l, i, poly.evaluate(point_of(l, mod)));
        }
      }
    });
    ctx.engine.deliver();

    // S4-S5: aggregate
    const std::size_t n = topo.node_count();
    std::vector<std::vector<std::string>> notes(n);
    for_each_index(n, ctx.config.workers, [&](std::size_t idx) {
      const NodeId l = static_cast<NodeId>(idx);
      std::unordered_map<std::uint64_t, FieldElement> got;
      for (const auto& m : ctx.engine.inbox(l)) got.emplace(arc_key(m.sender, m.subject), m.elements.at(0));
      for (NodeId i : topo.neighbors(l)) {
        if (!ctx.is_target(i)) continue;
        FieldElement s = ctx.field.zero();
        bool complete = true;
        const auto& vicinity = topo.neighbors(i);
        for (std::size_t k = 0; k < vicinity.size(); ++k) {
          const NodeId j = vicinity[k];
          auto it = got.find(arc_key(j, mode_ == SssMode::Broadcast ? j : i));
          if (it == got.end()) {
            notes[l].push_back("node " + std::to_string(l) + " lacks the share from " + std::to_string(j) + " for " +
                               std::to_string(i));
            complete = false;
            break;
          }
          s += in.weights[i][k] * it->second;
        }
        if (!complete) continue;
        RoundMessage m;
        m.sender = l;
        m.receiver = i;
        m.subject = i;
        m.kind = PayloadKind::Aggregate;
        m.elements = {s};
        m.bytes = share_bytes;
        ctx.engine.send(std::move(m));
      }
    });
    record_all(ctx.engine, notes, false);
    ctx.engine.deliver();

    // S6: reconstruct
    std::vector<NodeOutcome> out(n);
    const auto targets = target_nodes(ctx);
    for_each_index(targets.size(), ctx.config.workers, [&](std::size_t idx) {
      const NodeId i = targets[idx];
      if (topo.degree(i) == 0) {
        out[i] = ok_outcome(ctx.field.zero());
        return;
      }
      std::vector<shamir::Share> shares;
      std::vector<char> seen(topo.degree(i), 0);
      for (const auto& m : ctx.engine.inbox(i)) {
        if (m.kind != PayloadKind::Aggregate) continue;
        const std::size_t k = index_of(topo, i, m.sender);
        if (seen[k]) continue;
        seen[k] = 1;
        shares.push_back({point_of(m.sender, mod), m.elements.at(0)});
      }
      const std::size_t need = recon_threshold_[i];
      if (shares.size() < need) {
        out[i] = abort_outcome("received " + std::to_string(shares.size()) + " of " + std::to_string(need) +
                               " required aggregates");
        return;
      }
      if (mode_ == SssMode::Additive) {
        FieldElement s = ctx.field.zero();
        for (const auto& sh : shares) s += sh.value;
        out[i] = ok_outcome(s);
        return;
      }
      shares.resize(need);
      std::vector<FieldElement> pts;
      for (const auto& sh : shares) pts.push_back(sh.point);
      out[i] = ok_outcome(shamir::interpolate_at_zero(shares, cache_.get(i, pts)));
    });
    record_aborts(ctx.engine, out);
    return out;
  }

 private:
  SssMode mode_;
  LagrangeCache cache_;
  std::vector<std::size_t> dealer_threshold_;
  std::vector<std::size_t> recon_threshold_;
};

// ---------------------------------------------------------------- homomorphic

class HomomorphicScheme : public Scheme {
 public:
  SchemeId id() const override { return SchemeId::Homomorphic; }

  void setup(SchemeContext& ctx, const RoundInputs&) override {
    const auto& topo = ctx.topo;
    const std::size_t n = topo.node_count();
    std::size_t max_deg = 0;
    for (NodeId i = 0; i < n; ++i) {
      if (ctx.is_target(i)) max_deg = std::max(max_deg, topo.degree(i));
    }
    const std::size_t need = min_key_bits(ctx.field.modulus(), max_deg);
    if (ctx.config.key_bits < need) {
      throw ConfigError("key size " + std::to_string(ctx.config.key_bits) + " bits cannot carry weighted sums of " +
                        std::to_string(max_deg) + " field values; need at least " + std::to_string(need));
    }
    own_pk_.assign(n, std::nullopt);
    info_.assign(n, std::nullopt);
    known_pk_.assign(n, {});
    shares_.assign(n, {});

    // H0: trusted dealer per node; the private key is consumed by the split.
    const auto targets = target_nodes(ctx);
    for_each_index(targets.size(), ctx.config.workers, [&](std::size_t idx) {
      const NodeId i = targets[idx];
      const auto& vicinity = topo.neighbors(i);
      if (vicinity.empty()) return;
      Rng rng = node_rng(ctx, i, 0, kKeygen);
      auto kp = paillier::keygen(ctx.config.key_bits, rng);
      auto split = paillier::split_key(std::move(kp.priv), kp.pub, vicinity, ctx.policy.d[i], rng);
      for (std::size_t k = 0; k < vicinity.size(); ++k) {
        RoundMessage pub;
        pub.sender = i;
        pub.receiver = vicinity[k];
        pub.subject = i;
        pub.kind = PayloadKind::KeyMaterial;
        pub.big = {kp.pub.n};
        pub.bytes = byte_length(kp.pub.n);
        ctx.engine.send(std::move(pub));
        RoundMessage share;
        share.sender = i;
        share.receiver = vicinity[k];
        share.subject = i;
        share.kind = PayloadKind::KeyMaterial;
        share.big = {kp.pub.n, split.shares[k].value};
        share.bytes = byte_length(split.shares[k].value) + 1;
        ctx.engine.send(std::move(share));
      }
      own_pk_[i] = kp.pub;
      info_[i] = std::move(split.info);
    });
    ctx.engine.deliver();
    for_each_index(n, ctx.config.workers, [&](std::size_t j) {
      for (const auto& m : ctx.engine.inbox(static_cast<NodeId>(j))) {
        if (m.kind != PayloadKind::KeyMaterial || m.big.empty()) continue;
        if (m.big.size() == 1) {
          known_pk_[j].insert_or_assign(m.subject, paillier::make_public_key(m.big[0]));
        } else {
          shares_[j].insert_or_assign(m.subject, paillier::KeyShare{static_cast<NodeId>(j), m.big[1]});
        }
      }
    });
  }

  std::vector<NodeOutcome> run_round(SchemeContext& ctx, const RoundInputs& in, std::size_t round) override {
    check_inputs(ctx, in);
    const auto& topo = ctx.topo;
    const std::size_t n = topo.node_count();
    const std::uint64_t mod = ctx.field.modulus();

    // H1: encrypt under the receiver's key
    const auto dealers = active_dealers(ctx);
    for_each_index(dealers.size(), ctx.config.workers, [&](std::size_t idx) {
      const NodeId j = dealers[idx];
      Rng rng = node_rng(ctx, j, round, kEncrypt);
      for (NodeId i : topo.neighbors(j)) {
        if (!ctx.is_target(i)) continue;
        auto pk = known_pk_[j].find(i);
        if (pk == known_pk_[j].end()) continue;
        const FieldElement& m = in.messages[i][index_of(topo, i, j)];
        auto c = paillier::encrypt(pk->second, mpz_from_u64(m.value()), rng);
        RoundMessage msg;
        msg.sender = j;
        msg.receiver = i;
        msg.subject = i;
        msg.kind = PayloadKind::Ciphertext;
        msg.big = {std::move(c.value)};
        msg.bytes = pk->second.ciphertext_bytes();
        ctx.engine.send(std::move(msg));
      }
    });
    ctx.engine.deliver();

    // H2-H4: aggregate homomorphically and return C_i to the key holders
    std::vector<NodeOutcome> out(n);
    const auto targets = target_nodes(ctx);
    for_each_index(targets.size(), ctx.config.workers, [&](std::size_t idx) {
      const NodeId i = targets[idx];
      const auto& vicinity = topo.neighbors(i);
      if (vicinity.empty()) {
        out[i] = ok_outcome(ctx.field.zero());
        return;
      }
      const auto& pk = *own_pk_[i];
      paillier::Ciphertext acc{1, pk.key_id};
      std::vector<char> seen(vicinity.size(), 0);
      for (const auto& m : ctx.engine.inbox(i)) {
        if (m.kind != PayloadKind::Ciphertext || m.big.empty()) continue;
        const std::size_t k = index_of(topo, i, m.sender);
        if (seen[k]) continue;
        seen[k] = 1;
        paillier::Ciphertext c{m.big[0], pk.key_id};
        acc = paillier::hom_add(pk, acc, paillier::hom_scale(pk, c, mpz_from_u64(in.weights[i][k].value())));
      }
      const auto missing = std::count(seen.begin(), seen.end(), 0);
      if (missing) {
        out[i] = abort_outcome(std::to_string(missing) + " ciphertext(s) missing");
        return;
      }
      for (NodeId j : vicinity) {
        RoundMessage msg;
        msg.sender = i;
        msg.receiver = j;
        msg.subject = i;
        msg.kind = PayloadKind::CiphertextBroadcast;
        msg.big = {acc.value};
        msg.bytes = pk.ciphertext_bytes();
        ctx.engine.send(std::move(msg));
      }
    });
    ctx.engine.deliver();

    // H5: partial decryptions
    for_each_index(n, ctx.config.workers, [&](std::size_t idx) {
      const NodeId j = static_cast<NodeId>(idx);
      for (const auto& m : ctx.engine.inbox(j)) {
        if (m.kind != PayloadKind::CiphertextBroadcast || m.big.empty()) continue;
        auto share = shares_[j].find(m.sender);
        auto pk = known_pk_[j].find(m.sender);
        if (share == shares_[j].end() || pk == known_pk_[j].end()) continue;
        auto w = paillier::partial_decrypt(pk->second, {m.big[0], pk->second.key_id}, share->second);
        RoundMessage msg;
        msg.sender = j;
        msg.receiver = m.sender;
        msg.subject = m.sender;
        msg.kind = PayloadKind::Partial;
        msg.big = {std::move(w.value)};
        msg.bytes = pk->second.ciphertext_bytes();
        ctx.engine.send(std::move(msg));
      }
    });
    ctx.engine.deliver();

    // H6: combine
    for_each_index(targets.size(), ctx.config.workers, [&](std::size_t idx) {
      const NodeId i = targets[idx];
      if (out[i].status != NodeStatus::Idle) return;
      std::vector<paillier::PartialDecryption> partials;
      for (const auto& m : ctx.engine.inbox(i)) {
        if (m.kind == PayloadKind::Partial && !m.big.empty()) partials.push_back({m.sender, m.big[0]});
      }
      try {
        mpz_class plain = paillier::combine_partials(partials, *info_[i], *own_pk_[i]);
        mpz_class reduced = plain % mpz_from_u64(mod);
        out[i] = ok_outcome(FieldElement(mpz_low_u64(reduced), mod));
      } catch (const InsufficientShares& e) {
        out[i] = abort_outcome(e.what());
      } catch (const CorruptionError& e) {
        out[i] = abort_outcome(e.what());
      }
    });
    record_aborts(ctx.engine, out);
    return out;
  }

 private:
  std::vector<std::optional<paillier::PublicKey>> own_pk_;
  std::vector<std::optional<paillier::ThresholdPublicInfo>> info_;
  std::vector<std::map<NodeId, paillier::PublicKey>> known_pk_;  // [holder][owner]
  std::vector<std::map<NodeId, paillier::KeyShare>> shares_;     // [holder][owner]
};

// ---------------------------------------------------------------- malicious

std::string digest_hex(const std::string& s) {
  unsigned char d[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(s.data()), s.size(), d);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : d) {
    out += hex[c >> 4];
    out += hex[c & 15];
  }
  return out;
}

class MaliciousScheme : public Scheme {
 public:
  SchemeId id() const override { return SchemeId::Malicious; }

  void setup(SchemeContext& ctx, const RoundInputs& first) override {
    const auto& topo = ctx.topo;
    const std::size_t n = topo.node_count();
    group_ = &pedersen::group_profile(ctx.config.group_profile);
    if (group_->q != ctx.field.modulus()) {
      throw ConfigError("malicious scheme: field modulus " + std::to_string(ctx.field.modulus()) +
                        " differs from the commitment group order " + std::to_string(group_->q));
    }
    if (n + 1 >= ctx.field.modulus()) throw ConfigError("field too small to give every node a distinct point");
    if (ctx.config.chained && !ctx.targets.empty() &&
        std::any_of(ctx.targets.begin(), ctx.targets.end(), [](char c) { return c == 0; })) {
      throw ConfigError("chained verification needs every node to compute a sum");
    }
    for (NodeId i = 0; i < n; ++i) {
      if (!ctx.is_target(i) || topo.degree(i) == 0) continue;
      auto members = participants(topo, i);
      if (!topo.is_clique(members)) {
        throw ConfigError("malicious scheme: the vicinity of node " + std::to_string(i) +
                          " is not fully connected, so signed broadcast cannot run there");
      }
      if (ctx.policy.f >= ctx.policy.d[i]) {
        throw ConfigError("malicious scheme: f = " + std::to_string(ctx.policy.f) + " must be below d_" +
                          std::to_string(i) + " = " + std::to_string(ctx.policy.d[i]));
      }
    }
    cache_.resize(n);
    blinding_.assign(n, std::nullopt);
    agreed_.clear();
    aborted_ = false;
    agree_weights(ctx, first);
  }

  std::vector<NodeOutcome> run_round(SchemeContext& ctx, const RoundInputs& in, std::size_t round) override {
    check_inputs(ctx, in);
    const auto& topo = ctx.topo;
    const std::size_t n = topo.node_count();
    const std::uint64_t mod = ctx.field.modulus();
    const auto targets = target_nodes(ctx);
    std::vector<NodeOutcome> out(n);
    if (aborted_) {
      for (NodeId i : targets) out[i] = abort_outcome("protocol aborted in an earlier round");
      record_aborts(ctx.engine, out);
      return out;
    }
    previous_ = std::move(agreed_);
    agreed_.clear();
    const bool chained_round = ctx.config.chained && round > 1;

    // MV1 / BS1: VSS dealings, one per arc j -> i
    const auto dealers = active_dealers(ctx);
    std::vector<std::map<NodeId, pedersen::CommitmentVector>> dealt(n);
    for_each_index(dealers.size(), ctx.config.workers, [&](std::size_t idx) {
      const NodeId j = dealers[idx];
      Rng rng = node_rng(ctx, j, round, kDeal);
      Rng blind_rng = node_rng(ctx, j, round, kBlind);
      for (NodeId i : topo.neighbors(j)) {
        if (!ctx.is_target(i)) continue;
        FieldElement s = in.messages[i][index_of(topo, i, j)];
        if (const auto* a = ctx.engine.script().find(ActionKind::Tamper, j, round, PayloadKind::Commitments, i)) {
          s += FieldElement::from_signed(a->delta, mod);
        }
        FieldElement t;
        if (chained_round) {
          if (!blinding_[j]) continue;
          t = *blinding_[j];
        } else {
          t = FieldElement::random(mod, blind_rng);
        }
        const auto& vicinity = topo.neighbors(i);
        std::vector<FieldElement> pts;
        for (NodeId l : vicinity) pts.push_back(point_of(l, mod));
        auto P = shamir::SharingPolynomial::random(s, ctx.policy.d[i], rng);
        auto R = shamir::SharingPolynomial::random(t, ctx.policy.d[i], rng);
        auto dealing = pedersen::vss_deal_polynomials(*group_, P, R, pts);
        for (std::size_t k = 0; k < vicinity.size(); ++k) {
          RoundMessage m;
          m.sender = j;
          m.receiver = vicinity[k];
          m.subject = i;
          m.kind = PayloadKind::VerifiableShare;
          m.elements = {dealing.shares[k].sigma, dealing.shares[k].tau};
          m.bytes = 2 * ctx.field.byte_size();
          ctx.engine.send(std::move(m));
        }
        dealt[j].emplace(i, std::move(dealing.commitments));
      }
    });

    // MV2: agree on every commitment vector through signed broadcast
    std::map<std::uint64_t, std::string> failed;
    std::size_t ds_messages = 0, ds_bytes = 0;
    for (NodeId i : targets) {
      for (NodeId j : topo.neighbors(i)) {
        auto it = dealt[j].find(i);
        if (it == dealt[j].end()) {
          failed[arc_key(j, i)] = "node " + std::to_string(j) + " dealt nothing for " + std::to_string(i);
          continue;
        }
        auto result = broadcast_commitments(ctx, round, j, i, it->second);
        ds_messages += result.messages;
        ds_bytes += result.bytes;
        if (result.vector) {
          agreed_.emplace(arc_key(j, i), std::move(*result.vector));
        } else {
          failed[arc_key(j, i)] = result.failure;
        }
      }
    }
    if (!targets.empty()) ctx.engine.account_external(ds_messages, ds_bytes, ctx.policy.f + 1);
    ctx.engine.deliver();

    // BS6: the committed secret of a chained dealing must match the sum
    // that the dealer verified in the previous round.
    if (chained_round) {
      for (NodeId i : targets) {
        for (NodeId j : topo.neighbors(i)) {
          auto it = agreed_.find(arc_key(j, i));
          if (it == agreed_.end()) continue;
          auto expected = predicted_first_entry(ctx, in, j);
          if (expected && *expected == it->second.entries.front()) continue;
          std::size_t checkers = 0;
          for (NodeId p : participants(topo, i)) {
            if (p != j && !ctx.engine.script().is_corrupted(p) && (topo.has_edge(p, j))) ++checkers;
          }
          ctx.engine.record_detection("node " + std::to_string(j) + " forwarded a value to " + std::to_string(i) +
                                      " inconsistent with its verified sum (" + std::to_string(checkers) +
                                      " honest checkers)");
          failed[arc_key(j, i)] = "inconsistent forward from node " + std::to_string(j);
          aborted_ = true;
        }
      }
    }

    // MV3 / BS2-BS3: verify received shares, aggregate or complain
    std::vector<std::vector<std::string>> complaints(n);
    for_each_index(n, ctx.config.workers, [&](std::size_t idx) {
      const NodeId l = static_cast<NodeId>(idx);
      if (aborted_) return;
      std::unordered_map<std::uint64_t, const RoundMessage*> got;
      for (const auto& m : ctx.engine.inbox(l)) {
        if (m.kind == PayloadKind::VerifiableShare) got.emplace(arc_key(m.sender, m.subject), &m);
      }
      for (NodeId i : topo.neighbors(l)) {
        if (!ctx.is_target(i)) continue;
        const auto& vicinity = topo.neighbors(i);
        FieldElement S = ctx.field.zero(), T = ctx.field.zero();
        std::optional<NodeId> bad;
        std::string why;
        for (std::size_t k = 0; k < vicinity.size() && !bad; ++k) {
          const NodeId j = vicinity[k];
          if (failed.count(arc_key(j, i))) {
            bad = j;
            why = "no agreed commitments";
            break;
          }
          auto m = got.find(arc_key(j, i));
          if (m == got.end() || m->second->elements.size() != 2) {
            bad = j;
            why = "missing share";
            break;
          }
          const auto& sigma = m->second->elements[0];
          const auto& tau = m->second->elements[1];
          if (!pedersen::vss_verify(*group_, point_of(l, mod), sigma, tau, agreed_.at(arc_key(j, i)))) {
            bad = j;
            why = "share fails verification";
            break;
          }
          S += in.weights[i][k] * sigma;
          T += in.weights[i][k] * tau;
        }
        RoundMessage msg;
        msg.sender = l;
        msg.receiver = i;
        msg.subject = i;
        if (bad) {
          if (!ctx.engine.script().is_corrupted(l)) {
            complaints[l].push_back("node " + std::to_string(l) + " rejects dealer " + std::to_string(*bad) +
                                    " for " + std::to_string(i) + ": " + why);
          }
          msg.kind = PayloadKind::Complaint;
          msg.bytes = sizeof(NodeId);
          msg.real = static_cast<double>(*bad);
        } else {
          msg.kind = PayloadKind::AggregatePair;
          msg.elements = {S, T};
          msg.bytes = 2 * ctx.field.byte_size();
        }
        ctx.engine.send(std::move(msg));
      }
    });
    // Complaints of MV3 replace an aggregate one for one.
    record_all(ctx.engine, complaints, true);
    ctx.engine.deliver();

    if (aborted_) {
      for (NodeId i : targets) out[i] = abort_outcome("signed forward check failed; protocol aborted");
      record_aborts(ctx.engine, out);
      return out;
    }

    // BS4-BS5: verify aggregates against the combined commitments
    std::vector<std::vector<std::string>> rejected(n);
    std::vector<std::optional<FieldElement>> next_blinding(n);
    for_each_index(targets.size(), ctx.config.workers, [&](std::size_t idx) {
      const NodeId i = targets[idx];
      const auto& vicinity = topo.neighbors(i);
      if (vicinity.empty()) {
        out[i] = ok_outcome(ctx.field.zero());
        out[i].verified = true;
        next_blinding[i] = ctx.field.zero();
        return;
      }
      for (NodeId j : vicinity) {
        if (auto f = failed.find(arc_key(j, i)); f != failed.end()) {
          out[i] = abort_outcome(f->second);
          return;
        }
      }
      std::vector<pedersen::CommitmentVector> vecs;
      for (NodeId j : vicinity) vecs.push_back(agreed_.at(arc_key(j, i)));
      auto combined = pedersen::combine_commitments(*group_, vecs, in.weights[i]);

      std::vector<shamir::Share> s_shares, t_shares;
      std::vector<char> seen(vicinity.size(), 0);
      for (const auto& m : ctx.engine.inbox(i)) {
        if (m.kind != PayloadKind::AggregatePair) continue;
        const std::size_t k = index_of(topo, i, m.sender);
        if (seen[k]) continue;
        seen[k] = 1;
        const auto x = point_of(m.sender, mod);
        if (m.elements.size() != 2 || !pedersen::vss_verify(*group_, x, m.elements[0], m.elements[1], combined)) {
          rejected[i].push_back("node " + std::to_string(i) + " rejects the aggregate of " + std::to_string(m.sender));
          continue;
        }
        s_shares.push_back({x, m.elements[0]});
        t_shares.push_back({x, m.elements[1]});
      }
      const std::size_t d = ctx.policy.d[i];
      if (s_shares.size() < d) {
        out[i] = abort_outcome("only " + std::to_string(s_shares.size()) + " verified aggregates, need " +
                               std::to_string(d));
        return;
      }
      s_shares.resize(d);
      t_shares.resize(d);
      std::vector<FieldElement> pts;
      for (const auto& sh : s_shares) pts.push_back(sh.point);
      const auto& lw = cache_.get(i, pts);
      FieldElement value = shamir::interpolate_at_zero(s_shares, lw);
      FieldElement blind = shamir::interpolate_at_zero(t_shares, lw);
      if (pedersen::commit(*group_, value, blind) != combined.entries.front()) {
        out[i] = abort_outcome("reconstructed sum does not open the combined commitment");
        return;
      }
      out[i] = ok_outcome(value);
      out[i].verified = true;
      next_blinding[i] = blind;
    });
    record_all(ctx.engine, rejected, true);
    record_aborts(ctx.engine, out);
    blinding_ = std::move(next_blinding);
    for (NodeId i : targets) {
      if (out[i].status == NodeStatus::Aborted) aborted_ = true;
    }
    return out;
  }

 private:
  struct BroadcastOutcome {
    std::optional<pedersen::CommitmentVector> vector;
    std::string failure;
    std::size_t messages = 0;
    std::size_t bytes = 0;
  };

  static std::vector<NodeId> participants(const Topology& topo, NodeId i) {
    std::vector<NodeId> p = topo.neighbors(i);
    p.insert(std::lower_bound(p.begin(), p.end(), i), i);
    return p;
  }

  std::unique_ptr<byzagree::Adversary> relay_adversary(const SchemeContext& ctx, std::size_t round,
                                                       const std::vector<NodeId>& members, NodeId general,
                                                       PayloadKind kind, NodeId target) const {
    const auto& script = ctx.engine.script();
    std::set<NodeId> silent;
    for (NodeId p : members) {
      if (!script.is_corrupted(p)) continue;
      if (script.find(ActionKind::Withhold, p, round, PayloadKind::Relay, target) ||
          (p == general && script.find(ActionKind::Withhold, p, round, kind, target))) {
        silent.insert(p);
      }
    }
    if (silent.empty()) return nullptr;
    return std::make_unique<byzagree::SilentAdversary>(std::move(silent));
  }

  BroadcastOutcome broadcast_commitments(SchemeContext& ctx, std::size_t round, NodeId j, NodeId i,
                                         const pedersen::CommitmentVector& e) {
    byzagree::AgreementInstance inst;
    inst.general = j;
    inst.participants = participants(ctx.topo, i);
    inst.f_bound = ctx.policy.f;
    inst.payload_kind = byzagree::PayloadKind::CommitmentVector;
    inst.instance_id = derive_seed(ctx.seed, arc_key(j, i), round);
    inst.payload_bytes = e.size() * group_->element_bytes();

    std::map<std::string, pedersen::CommitmentVector> table;
    const std::string value = digest_hex(pedersen::serialize(e));
    table.emplace(value, e);

    std::unique_ptr<byzagree::Adversary> adversary;
    if (ctx.engine.script().find(ActionKind::Equivocate, j, round, PayloadKind::Commitments, i)) {
      pedersen::CommitmentVector alt = e;
      alt.entries.front() = (alt.entries.front() * group_->g) % group_->p;
      const std::string alt_value = digest_hex(pedersen::serialize(alt));
      table.emplace(alt_value, alt);
      std::set<NodeId> first_half;
      for (std::size_t k = 0; k < inst.participants.size(); k += 2) first_half.insert(inst.participants[k]);
      adversary = byzagree::equivocating_general(j, value, alt_value, std::move(first_half));
    } else {
      adversary = relay_adversary(ctx, round, inst.participants, j, PayloadKind::Commitments, i);
    }
    byzagree::TagAuthority authority(derive_seed(ctx.seed, inst.instance_id, kAuthority));
    auto r = byzagree::run_broadcast(inst, value, adversary.get(), authority);

    BroadcastOutcome out;
    out.messages = r.honest_messages + r.adversary_messages;
    out.bytes = r.bytes;
    if (!byzagree::agreement_holds(r)) {
      out.failure = "signed broadcast of node " + std::to_string(j) + " violated agreement";
      return out;
    }
    if (r.outcomes.empty()) {
      out.failure = "no honest participant in the vicinity of " + std::to_string(i);
      return out;
    }
    const auto& decided = r.outcomes.begin()->second;
    if (decided.default_used) {
      out.failure = "commitment broadcast of node " + std::to_string(j) + " for " + std::to_string(i) +
                    " ended with the default value";
      return out;
    }
    auto it = table.find(decided.decided_value);
    if (it == table.end()) {
      out.failure = "agreed value from node " + std::to_string(j) + " is not a commitment vector";
      return out;
    }
    out.vector = it->second;
    return out;
  }

  // prod_{k in N_j} (E_0^{(kj)})^{a_kj} over last round's agreed vectors.
  std::optional<mpz_class> predicted_first_entry(const SchemeContext& ctx, const RoundInputs& in, NodeId j) const {
    mpz_class acc = 1;
    const auto& vicinity = ctx.topo.neighbors(j);
    for (std::size_t k = 0; k < vicinity.size(); ++k) {
      auto it = previous_.find(arc_key(vicinity[k], j));
      if (it == previous_.end()) return std::nullopt;
      acc = (acc * pow_mod(it->second.entries.front(), mpz_from_u64(in.weights[j][k].value()), group_->p)) % group_->p;
    }
    return acc;
  }

  // BS0: weights fixed by the chooser and agreed once before the first round.
  void agree_weights(SchemeContext& ctx, const RoundInputs& first) {
    const auto chooser = ctx.config.weight_chooser;
    if (chooser == WeightChooser::None) return;
    check_inputs(ctx, first);
    const auto& topo = ctx.topo;
    std::size_t messages = 0, bytes = 0;
    bool any = false;
    auto run = [&](NodeId general, NodeId i, const std::string& value, std::uint64_t id) {
      byzagree::AgreementInstance inst;
      inst.general = general;
      inst.participants = participants(topo, i);
      inst.f_bound = ctx.policy.f;
      inst.payload_kind = byzagree::PayloadKind::Coefficient;
      inst.instance_id = id;
      auto adversary = relay_adversary(ctx, 0, inst.participants, general, PayloadKind::Relay, i);
      byzagree::TagAuthority authority(derive_seed(ctx.seed, id, kAuthority));
      auto r = byzagree::run_broadcast(inst, value, adversary.get(), authority);
      messages += r.honest_messages + r.adversary_messages;
      bytes += r.bytes;
      any = true;
      bool good = byzagree::agreement_holds(r) && !r.outcomes.empty() &&
                  !r.outcomes.begin()->second.default_used && r.outcomes.begin()->second.decided_value == value;
      if (!good) {
        ctx.engine.record_abort("weight agreement for node " + std::to_string(i) + " by " + std::to_string(general) +
                                " failed");
        aborted_ = true;
      }
    };
    for (NodeId i = 0; i < topo.node_count(); ++i) {
      if (!ctx.is_target(i) || topo.degree(i) == 0) continue;
      const auto& vicinity = topo.neighbors(i);
      if (chooser == WeightChooser::Target) {
        std::string v;
        for (const auto& a : first.weights[i]) v += a.to_string() + ',';
        run(i, i, v, derive_seed(ctx.seed, i, 0xb50));
      } else {
        for (std::size_t k = 0; k < vicinity.size(); ++k) {
          run(vicinity[k], i, first.weights[i][k].to_string(), derive_seed(ctx.seed, arc_key(vicinity[k], i), 0xb50));
        }
      }
    }
    if (any) ctx.engine.account_external(messages, bytes, ctx.policy.f + 1);
  }

  const pedersen::GroupParams* group_ = nullptr;
  LagrangeCache cache_;
  std::vector<std::optional<FieldElement>> blinding_;
  std::unordered_map<std::uint64_t, pedersen::CommitmentVector> agreed_;
  std::unordered_map<std::uint64_t, pedersen::CommitmentVector> previous_;
  bool aborted_ = false;
};

// ---------------------------------------------------------------- vicinity harness

VicinityRun run_vicinity(const Vicinity& v, SchemeConfig cfg, std::uint64_t seed, const AdversaryScript& script) {
  const std::size_t k = v.messages.size();
  if (v.weights.size() != k) throw ArgumentError("one weight per message required");
  const std::uint64_t mod = k ? v.messages.front().modulus() : kMersenne61;
  Topology topo = complete_graph(k + 1);
  cfg.field_modulus = mod;
  cfg.f = v.f;
  cfg.per_node_d.assign(k + 1, std::min(v.d, k));
  cfg.per_node_d[0] = v.d;
  cfg.clamp_d = false;
  script.validate(topo);

  PrimeField field(mod);
  VicinityPolicy policy = make_policy(topo, cfg);
  RoundInputs in;
  in.domain = Domain::Field;
  in.weights.assign(k + 1, {});
  in.messages.assign(k + 1, {});
  in.weights[0] = v.weights;
  in.messages[0] = v.messages;

  VicinityRun run;
  Engine engine(topo, script, run.metrics);
  SchemeContext ctx{topo, engine, cfg, policy, field, seed, std::vector<char>(k + 1, 0)};
  ctx.targets[0] = 1;
  auto scheme = make_scheme(cfg);
  engine.begin_round(0);
  scheme->setup(ctx, in);
  engine.begin_round(1);
  auto out = scheme->run_round(ctx, in, 1);
  run.outcome = out.at(0);
  run.transcript = engine.transcript();
  return run;
}

}  // namespace

std::string to_string(SchemeId id) {
  switch (id) {
    case SchemeId::Plain: return "plain";
    case SchemeId::Perturbation: return "perturbation";
    case SchemeId::Sss: return "sss";
    case SchemeId::Homomorphic: return "homomorphic";
    case SchemeId::Malicious: return "malicious";
  }
  return "unknown";
}

std::string to_string(SssMode m) {
  switch (m) {
    case SssMode::PerMessage: return "per-message";
    case SssMode::Broadcast: return "broadcast";
    case SssMode::Additive: return "additive";
  }
  return "unknown";
}

std::string to_string(NoiseKind k) { return k == NoiseKind::Uniform ? "uniform" : "gaussian"; }

std::string to_string(WeightChooser w) {
  switch (w) {
    case WeightChooser::None: return "none";
    case WeightChooser::Target: return "target";
    case WeightChooser::Sender: return "sender";
  }
  return "unknown";
}

SchemeId parse_scheme(const std::string& s) {
  for (auto id : {SchemeId::Plain, SchemeId::Perturbation, SchemeId::Sss, SchemeId::Homomorphic, SchemeId::Malicious}) {
    if (s == to_string(id)) return id;
  }
  throw ConfigError("unknown scheme '" + s + "'");
}

SssMode parse_sss_mode(const std::string& s) {
  for (auto m : {SssMode::PerMessage, SssMode::Broadcast, SssMode::Additive}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown sss mode '" + s + "'");
}

NoiseKind parse_noise(const std::string& s) {
  if (s == "uniform") return NoiseKind::Uniform;
  if (s == "gaussian") return NoiseKind::Gaussian;
  throw ConfigError("unknown noise distribution '" + s + "'");
}

WeightChooser parse_chooser(const std::string& s) {
  for (auto w : {WeightChooser::None, WeightChooser::Target, WeightChooser::Sender}) {
    if (s == to_string(w)) return w;
  }
  throw ConfigError("unknown weight chooser '" + s + "'");
}

VicinityPolicy make_policy(const Topology& t, const SchemeConfig& cfg) {
  const std::size_t n = t.node_count();
  if (!cfg.per_node_d.empty() && cfg.per_node_d.size() != n) throw ConfigError("per-node thresholds must cover every node");
  VicinityPolicy p;
  p.f = cfg.f;
  p.d.assign(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    const std::size_t deg = t.degree(i);
    if (deg == 0) continue;
    std::size_t d = cfg.per_node_d.empty() ? cfg.d : cfg.per_node_d[i];
    if (d == 0) throw ConfigError("threshold d must be at least 1");
    if (d > deg) {
      if (!cfg.clamp_d) {
        throw ConfigError("d_" + std::to_string(i) + " = " + std::to_string(d) + " exceeds its degree " +
                          std::to_string(deg));
      }
      d = deg;
    }
    p.d[i] = d;
  }
  return p;
}

std::unique_ptr<Scheme> make_scheme(const SchemeConfig& cfg) {
  switch (cfg.id) {
    case SchemeId::Plain: return std::make_unique<DirectScheme>(false);
    case SchemeId::Perturbation: return std::make_unique<DirectScheme>(true);
    case SchemeId::Sss: return std::make_unique<SssScheme>(cfg.sss_mode);
    case SchemeId::Homomorphic: return std::make_unique<HomomorphicScheme>();
    case SchemeId::Malicious: return std::make_unique<MaliciousScheme>();
  }
  throw ConfigError("unknown scheme");
}

std::size_t min_key_bits(std::uint64_t field_modulus, std::size_t max_degree) {
  const std::size_t pbits = 64 - static_cast<std::size_t>(__builtin_clzll(field_modulus));
  std::size_t logdeg = 0;
  while ((std::size_t{1} << logdeg) < max_degree + 1) ++logdeg;
  return 2 * pbits + logdeg + 2;
}

std::size_t expected_round_messages(const SchemeConfig& cfg, const Topology& t, const VicinityPolicy& p,
                                    const std::vector<char>& targets) {
  auto is_target = [&](NodeId i) { return targets.empty() || targets.at(i) != 0; };
  std::size_t total = 0;
  for (NodeId i = 0; i < t.node_count(); ++i) {
    if (!is_target(i)) continue;
    const std::size_t deg = t.degree(i);
    switch (cfg.id) {
      case SchemeId::Plain:
      case SchemeId::Perturbation:
        total += deg;
        break;
      case SchemeId::Sss:
        total += (cfg.sss_mode == SssMode::Broadcast ? 0 : deg * deg) + deg;
        break;
      case SchemeId::Homomorphic:
        total += 3 * deg;
        break;
      case SchemeId::Malicious:
        total += deg * deg + deg * byzagree::honest_message_count(deg + 1, p.f) + deg;
        break;
    }
  }
  if (cfg.id == SchemeId::Sss && cfg.sss_mode == SssMode::Broadcast) {
    for (NodeId j = 0; j < t.node_count(); ++j) {
      std::vector<NodeId> u;
      for (NodeId i : t.neighbors(j)) {
        if (is_target(i)) u.insert(u.end(), t.neighbors(i).begin(), t.neighbors(i).end());
      }
      std::sort(u.begin(), u.end());
      total += static_cast<std::size_t>(std::unique(u.begin(), u.end()) - u.begin());
    }
  }
  return total;
}

std::size_t expected_setup_messages(const SchemeConfig& cfg, const Topology& t, const VicinityPolicy& p,
                                    const std::vector<char>& targets) {
  auto is_target = [&](NodeId i) { return targets.empty() || targets.at(i) != 0; };
  std::size_t total = 0;
  for (NodeId i = 0; i < t.node_count(); ++i) {
    if (!is_target(i)) continue;
    const std::size_t deg = t.degree(i);
    if (cfg.id == SchemeId::Homomorphic) total += 2 * deg;
    if (cfg.id == SchemeId::Malicious && deg > 0) {
      if (cfg.weight_chooser == WeightChooser::Target) total += byzagree::honest_message_count(deg + 1, p.f);
      if (cfg.weight_chooser == WeightChooser::Sender) total += deg * byzagree::honest_message_count(deg + 1, p.f);
    }
  }
  return total;
}

std::size_t expected_comm_rounds(const SchemeConfig& cfg) {
  switch (cfg.id) {
    case SchemeId::Plain:
    case SchemeId::Perturbation: return 1;
    case SchemeId::Sss: return 2;
    case SchemeId::Homomorphic: return 3;
    case SchemeId::Malicious: return 2 + cfg.f + 1;
  }
  return 0;
}

NodeOutcome plain_round(std::span<const FieldElement> messages, std::span<const FieldElement> weights) {
  if (messages.size() != weights.size()) throw ArgumentError("one weight per message required");
  if (messages.empty()) return ok_outcome(FieldElement(0, kMersenne61));
  FieldElement acc(0, messages.front().modulus());
  for (std::size_t k = 0; k < messages.size(); ++k) acc += weights[k] * messages[k];
  return ok_outcome(acc);
}

double plain_round(std::span<const double> messages, std::span<const double> weights) {
  if (messages.size() != weights.size()) throw ArgumentError("one weight per message required");
  double acc = 0.0;
  for (std::size_t k = 0; k < messages.size(); ++k) acc += weights[k] * messages[k];
  return acc;
}

double draw_noise(NoiseKind kind, double sigma, Rng& rng) {
  if (sigma == 0.0) return 0.0;
  if (kind == NoiseKind::Uniform) return (2.0 * uniform_unit(rng) - 1.0) * sigma;
  // Box-Muller, first variate only.
  double u1 = uniform_unit(rng);
  while (u1 <= 0.0) u1 = uniform_unit(rng);
  const double u2 = uniform_unit(rng);
  return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double perturb_round(std::span<const double> messages, std::span<const double> weights, NoiseKind kind, double sigma,
                     Rng& rng) {
  if (messages.size() != weights.size()) throw ArgumentError("one weight per message required");
  double acc = 0.0;
  for (std::size_t k = 0; k < messages.size(); ++k) acc += weights[k] * (messages[k] + draw_noise(kind, sigma, rng));
  return acc;
}

VicinityRun sss_round(const Vicinity& v, SssMode mode, std::uint64_t seed, const AdversaryScript& script) {
  SchemeConfig cfg;
  cfg.id = SchemeId::Sss;
  cfg.sss_mode = mode;
  return run_vicinity(v, cfg, seed, script);
}

VicinityRun homomorphic_round(const Vicinity& v, std::size_t key_bits, std::uint64_t seed,
                              const AdversaryScript& script) {
  SchemeConfig cfg;
  cfg.id = SchemeId::Homomorphic;
  cfg.key_bits = key_bits;
  return run_vicinity(v, cfg, seed, script);
}

VicinityRun malicious_sss_round(const Vicinity& v, const std::string& group_profile, std::uint64_t seed,
                                const AdversaryScript& script) {
  SchemeConfig cfg;
  cfg.id = SchemeId::Malicious;
  cfg.group_profile = group_profile;
  return run_vicinity(v, cfg, seed, script);
}

}  // namespace smpc
