#include "smpc/simulator.hpp"

#include <chrono>
#include <cmath>

#include "smpc/errors.hpp"

namespace smpc {

namespace {

bool all_integral(const numerics::SparseSystem& s) {
  for (const auto& row : s.offdiag) {
    for (const auto& e : row) {
      if (e.value != std::floor(e.value)) return false;
    }
  }
  return true;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

JacobiWorkload::JacobiWorkload(numerics::SparseSystem system, std::vector<double> x0, std::uint64_t codec_scale,
                               std::uint64_t weight_scale)
    : system_(std::move(system)), x0_(std::move(x0)), codec_scale_(codec_scale), weight_scale_(weight_scale) {
  if (x0_.empty()) x0_.assign(system_.n, 0.0);
  if (x0_.size() != system_.n) throw ConfigError("initial vector does not match the system size");
  if (weight_scale_ == 0) weight_scale_ = all_integral(system_) ? 1 : 10'000;
}

std::vector<std::string> JacobiWorkload::prepare(const Topology& t, const PrimeField& field) {
  if (t.node_count() != system_.n) throw ConfigError("system size differs from the topology");
  for (NodeId i = 0; i < system_.n; ++i) {
    for (const auto& e : system_.offdiag[i]) {
      if (!t.has_edge(i, e.col)) {
        throw ConfigError("matrix entry (" + std::to_string(i) + ", " + std::to_string(e.col) +
                          ") has no edge in the topology");
      }
    }
  }
  codec_.emplace(codec_scale_, field.modulus());
  states_.assign(system_.n, {});
  for (NodeId i = 0; i < system_.n; ++i) {
    states_[i].id = i;
    states_[i].estimate = x0_[i];
    states_[i].field_estimate = codec_->encode(x0_[i]);
  }
  std::vector<std::string> warnings;
  auto rho = numerics::spectral_radius_check(system_, 200);
  if (!rho.sufficient()) {
    warnings.push_back("spectral radius estimate " + std::to_string(rho.rho) +
                       " >= 1: Jacobi is not guaranteed to converge and will likely diverge");
  }
  return warnings;
}

RoundInputs JacobiWorkload::inputs(const Topology& t, bool field_rows) const {
  RoundInputs in;
  in.domain = Domain::Real;
  const std::size_t n = system_.n;
  in.weights.resize(n);
  in.messages.resize(n);
  in.real_weights.resize(n);
  in.real_messages.resize(n);
  const std::uint64_t mod = codec_->modulus();
  std::vector<FieldElement> encoded;
  if (field_rows) {
    encoded.reserve(n);
    for (const auto& s : states_) encoded.push_back(codec_->encode(s.estimate));
  }
  // Refuse rounds whose exact sum would leave the signed range of the field.
  const double limit = static_cast<double>(mod / 2);
  for (NodeId i = 0; i < n && field_rows; ++i) {
    double bound = 0.0;
    for (NodeId j : t.neighbors(i)) {
      bound += std::fabs(std::round(-system_.at(i, j) * static_cast<double>(weight_scale_))) *
               std::fabs(states_[j].estimate) * static_cast<double>(codec_scale_);
    }
    if (!(bound < limit)) {
      throw OverflowError("weighted sum at node " + std::to_string(i) + " exceeds the field range");
    }
  }
  for (NodeId i = 0; i < n; ++i) {
    const auto& nb = t.neighbors(i);
    for (NodeId j : nb) {
      const double a = -system_.at(i, j);
      in.real_weights[i].push_back(a);
      in.real_messages[i].push_back(states_[j].estimate);
      if (field_rows) {
        in.weights[i].push_back(
            FieldElement::from_signed(std::llround(a * static_cast<double>(weight_scale_)), mod));
        in.messages[i].push_back(encoded[j]);
      } else {
        in.weights[i].emplace_back(0, mod);
        in.messages[i].emplace_back(0, mod);
      }
    }
  }
  return in;
}

void JacobiWorkload::apply(const std::vector<NodeOutcome>& outcomes) {
  const double total_scale = static_cast<double>(codec_scale_) * static_cast<double>(weight_scale_);
  for (NodeId i = 0; i < system_.n; ++i) {
    const auto& o = outcomes.at(i);
    states_[i].last_status = o.status;
    if (o.status != NodeStatus::Ok) continue;
    const double sum = o.real ? *o.real : decode_scaled(o.value, total_scale);
    states_[i].estimate = (system_.b[i] + sum) / system_.diag[i];
  }
  for (auto& s : states_) {
    if (std::isfinite(s.estimate) && std::fabs(s.estimate) <= codec_->max_magnitude()) {
      s.field_estimate = codec_->encode(s.estimate);
    }
  }
}

std::vector<double> JacobiWorkload::x() const {
  std::vector<double> out;
  out.reserve(states_.size());
  for (const auto& s : states_) out.push_back(s.estimate);
  return out;
}

std::unique_ptr<JacobiWorkload> cf_workload(const numerics::RatingsMatrix& r, const std::vector<double>& b,
                                            double epsilon, std::uint64_t weight_scale) {
  auto aug = numerics::build_augmented(r, b, epsilon);
  return std::make_unique<JacobiWorkload>(aug.system, std::vector<double>{}, kDefaultScale, weight_scale);
}

FieldLinearWorkload::FieldLinearWorkload(std::uint64_t seed, std::uint64_t weight_bound)
    : seed_(seed), weight_bound_(weight_bound) {}

std::vector<std::string> FieldLinearWorkload::prepare(const Topology& t, const PrimeField& field) {
  const std::size_t n = t.node_count();
  weights_.assign(n, {});
  states_.assign(n, {});
  for (NodeId i = 0; i < n; ++i) {
    Rng wr(derive_seed(seed_, i, 0));
    for (std::size_t k = 0; k < t.degree(i); ++k) {
      weights_[i].push_back(weight_bound_ ? field.element(uniform_below(wr, weight_bound_)) : field.random(wr));
    }
    Rng xr(derive_seed(seed_, i, 1));
    states_[i].id = i;
    states_[i].field_estimate = field.random(xr);
    states_[i].estimate = static_cast<double>(states_[i].field_estimate.to_signed());
  }
  return {};
}

RoundInputs FieldLinearWorkload::inputs(const Topology& t, bool) const {
  RoundInputs in;
  in.domain = Domain::Field;
  in.weights = weights_;
  in.messages.resize(states_.size());
  for (NodeId i = 0; i < states_.size(); ++i) {
    for (NodeId j : t.neighbors(i)) in.messages[i].push_back(states_[j].field_estimate);
  }
  return in;
}

void FieldLinearWorkload::apply(const std::vector<NodeOutcome>& outcomes) {
  for (NodeId i = 0; i < states_.size(); ++i) {
    const auto& o = outcomes.at(i);
    states_[i].last_status = o.status;
    if (o.status != NodeStatus::Ok) continue;
    states_[i].field_estimate = o.value;
    states_[i].estimate = static_cast<double>(o.value.to_signed());
  }
}

std::vector<FieldElement> FieldLinearWorkload::oracle_next(const Topology& t) const {
  std::vector<FieldElement> out;
  for (NodeId i = 0; i < states_.size(); ++i) {
    FieldElement acc(0, states_[i].field_estimate.modulus());
    const auto& nb = t.neighbors(i);
    for (std::size_t k = 0; k < nb.size(); ++k) acc += weights_[i][k] * states_[nb[k]].field_estimate;
    out.push_back(acc);
  }
  return out;
}

RunResult run(const Topology& t, const SchemeConfig& cfg, Workload& workload, std::size_t rounds,
              const AdversaryScript& script, std::uint64_t seed, const RunOptions& options) {
  PrimeField field(cfg.field_modulus);
  VicinityPolicy policy = make_policy(t, cfg);
  script.validate(t);
  if (!options.targets.empty() && options.targets.size() != t.node_count()) {
    throw ConfigError("target mask does not match the topology");
  }
  if (cfg.id == SchemeId::Malicious && cfg.chained && workload.domain() != Domain::Field) {
    throw ConfigError("chained verification needs a workload whose update is the weighted sum itself");
  }

  RunResult res;
  res.warnings = workload.prepare(t, field);
  if (workload.node_count() != t.node_count()) throw ConfigError("workload size differs from the topology");

  const bool field_rows =
      workload.domain() == Domain::Field || (cfg.id != SchemeId::Plain && cfg.id != SchemeId::Perturbation);
  Engine engine(t, script, res.metrics);
  SchemeContext ctx{t, engine, cfg, policy, field, seed, options.targets};
  auto scheme = make_scheme(cfg);

  engine.begin_round(0);
  auto start = std::chrono::steady_clock::now();
  scheme->setup(ctx, workload.inputs(t, field_rows));
  engine.stats().millis = elapsed_ms(start);
  res.aborted = engine.stats().aborts > 0;

  for (std::size_t r = 1; r <= rounds; ++r) {
    engine.begin_round(r);
    start = std::chrono::steady_clock::now();
    std::vector<NodeOutcome> out;
    try {
      out = scheme->run_round(ctx, workload.inputs(t, field_rows), r);
    } catch (const OverflowError& e) {
      engine.record_abort(std::string("estimates left the codec range: ") + e.what());
      res.warnings.push_back("round " + std::to_string(r) + ": " + e.what());
      res.aborted = true;
      engine.stats().millis = elapsed_ms(start);
      break;
    }
    workload.apply(out);
    engine.stats().millis = elapsed_ms(start);

    std::vector<double> est;
    std::vector<FieldElement> fest;
    for (const auto& s : workload.states()) {
      est.push_back(s.estimate);
      fest.push_back(s.field_estimate);
      if (s.last_status == NodeStatus::Aborted) res.aborted = true;
    }
    res.estimates.push_back(std::move(est));
    res.field_estimates.push_back(std::move(fest));
    if (options.keep_outcomes) res.outcomes.push_back(std::move(out));
  }
  res.transcript = engine.transcript();
  return res;
}

std::map<NodeId, std::vector<RoundMessage>> transcript_view(const AdversaryScript& script, const RunResult& run) {
  std::map<NodeId, std::vector<RoundMessage>> out;
  for (const auto& e : run.transcript) {
    if (script.is_corrupted(e.observer)) out[e.observer].push_back(e.message);
  }
  return out;
}

}  // namespace smpc
