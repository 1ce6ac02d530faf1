#include "smpc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "smpc/errors.hpp"
#include "smpc/numerics.hpp"

namespace smpc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

std::int64_t to_i64(const std::string& key, const std::string& v) {
  std::int64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<NodeId> to_ids(const std::string& key, const std::string& v) {
  std::vector<NodeId> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(static_cast<NodeId>(to_u64(key, tok)));
  }
  return out;
}

std::string fmt_double(double d) {
  std::ostringstream os;
  os.precision(17);
  os << d;
  return os.str();
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scheme", [](RunConfig& c, const std::string&, const std::string& v) { c.scheme.id = parse_scheme(v); }},
      {"sss_mode", [](RunConfig& c, const std::string&, const std::string& v) { c.scheme.sss_mode = parse_sss_mode(v); }},
      {"field_modulus", [](RunConfig& c, const std::string& k, const std::string& v) { c.scheme.field_modulus = to_u64(k, v); }},
      {"codec_scale", [](RunConfig& c, const std::string& k, const std::string& v) { c.codec_scale = to_u64(k, v); }},
      {"weight_scale", [](RunConfig& c, const std::string& k, const std::string& v) { c.weight_scale = to_u64(k, v); }},
      {"d", [](RunConfig& c, const std::string& k, const std::string& v) { c.scheme.d = to_u64(k, v); }},
      {"d_file", [](RunConfig& c, const std::string&, const std::string& v) { c.d_file = v; }},
      {"clamp_d", [](RunConfig& c, const std::string& k, const std::string& v) { c.scheme.clamp_d = to_bool(k, v); }},
      {"f", [](RunConfig& c, const std::string& k, const std::string& v) { c.scheme.f = to_u64(k, v); }},
      {"two_hop_colluders",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "none") {
           c.scheme.two_hop_colluders.reset();
         } else {
           c.scheme.two_hop_colluders = to_u64(k, v);
         }
       }},
      {"noise", [](RunConfig& c, const std::string&, const std::string& v) { c.scheme.noise = parse_noise(v); }},
      {"noise_sigma", [](RunConfig& c, const std::string& k, const std::string& v) { c.scheme.noise_sigma = to_double(k, v); }},
      {"key_bits", [](RunConfig& c, const std::string& k, const std::string& v) { c.scheme.key_bits = to_u64(k, v); }},
      {"group", [](RunConfig& c, const std::string&, const std::string& v) { c.scheme.group_profile = v; }},
      {"chained", [](RunConfig& c, const std::string& k, const std::string& v) { c.scheme.chained = to_bool(k, v); }},
      {"weight_chooser", [](RunConfig& c, const std::string&, const std::string& v) { c.scheme.weight_chooser = parse_chooser(v); }},
      {"workers", [](RunConfig& c, const std::string& k, const std::string& v) { c.scheme.workers = to_u64(k, v); }},
      {"workload", [](RunConfig& c, const std::string&, const std::string& v) { c.workload = v; }},
      {"system_file", [](RunConfig& c, const std::string&, const std::string& v) { c.system_file = v; }},
      {"rhs_file", [](RunConfig& c, const std::string&, const std::string& v) { c.rhs_file = v; }},
      {"ratings_file", [](RunConfig& c, const std::string&, const std::string& v) { c.ratings_file = v; }},
      {"cf_rows", [](RunConfig& c, const std::string& k, const std::string& v) { c.cf_rows = to_u64(k, v); }},
      {"cf_cols", [](RunConfig& c, const std::string& k, const std::string& v) { c.cf_cols = to_u64(k, v); }},
      {"cf_density", [](RunConfig& c, const std::string& k, const std::string& v) { c.cf_density = to_double(k, v); }},
      {"epsilon", [](RunConfig& c, const std::string& k, const std::string& v) { c.epsilon = to_double(k, v); }},
      {"topology", [](RunConfig& c, const std::string&, const std::string& v) { c.topology = v; }},
      {"topology_file", [](RunConfig& c, const std::string&, const std::string& v) { c.topology_file = v; }},
      {"nodes", [](RunConfig& c, const std::string& k, const std::string& v) { c.nodes = to_u64(k, v); }},
      {"edge_probability", [](RunConfig& c, const std::string& k, const std::string& v) { c.edge_probability = to_double(k, v); }},
      {"attach", [](RunConfig& c, const std::string& k, const std::string& v) { c.attach = to_u64(k, v); }},
      {"users", [](RunConfig& c, const std::string& k, const std::string& v) { c.users = to_u64(k, v); }},
      {"items", [](RunConfig& c, const std::string& k, const std::string& v) { c.items = to_u64(k, v); }},
      {"density", [](RunConfig& c, const std::string& k, const std::string& v) { c.density = to_double(k, v); }},
      {"rounds", [](RunConfig& c, const std::string& k, const std::string& v) { c.rounds = to_u64(k, v); }},
      {"seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_u64(k, v); }},
      {"compare_plain", [](RunConfig& c, const std::string& k, const std::string& v) { c.compare_plain = to_bool(k, v); }},
      {"adversary_model",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "semi-honest") {
           c.adversary.model = AdversaryScript::Model::SemiHonest;
         } else if (v == "malicious") {
           c.adversary.model = AdversaryScript::Model::Malicious;
         } else {
           throw ConfigError(k + ": expected semi-honest or malicious");
         }
       }},
      {"corrupted",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         auto ids = to_ids(k, v);
         c.adversary.corrupted = std::set<NodeId>(ids.begin(), ids.end());
       }},
      {"contract_violation",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.adversary.contract_violation = to_bool(k, v); }},
      {"action",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.adversary.actions.push_back(parse_action(v));
         c.action_specs.push_back(v);
       }},
      {"metrics_out", [](RunConfig& c, const std::string&, const std::string& v) { c.metrics_out = v; }},
      {"estimates_out", [](RunConfig& c, const std::string&, const std::string& v) { c.estimates_out = v; }},
  };
  return table;
}

}  // namespace

AdversaryAction parse_action(const std::string& spec) {
  std::istringstream is(spec);
  std::string kind;
  is >> kind;
  AdversaryAction a;
  if (kind == "observe") {
    a.kind = ActionKind::Observe;
  } else if (kind == "tamper") {
    a.kind = ActionKind::Tamper;
  } else if (kind == "withhold") {
    a.kind = ActionKind::Withhold;
  } else if (kind == "equivocate") {
    a.kind = ActionKind::Equivocate;
  } else {
    throw ConfigError("action: unknown kind '" + kind + "'");
  }
  bool has_actor = false;
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ConfigError("action: expected key=value, got '" + tok + "'");
    const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
    if (k == "actor") {
      a.actor = static_cast<NodeId>(to_u64(k, v));
      has_actor = true;
    } else if (k == "round") {
      a.round = to_u64(k, v);
    } else if (k == "payload") {
      a.payload = payload_from_string(v);
      if (!a.payload) throw ConfigError("action: unknown payload '" + v + "'");
    } else if (k == "target") {
      a.target = static_cast<NodeId>(to_u64(k, v));
    } else if (k == "subject") {
      a.subject = static_cast<NodeId>(to_u64(k, v));
    } else if (k == "delta") {
      a.delta = to_i64(k, v);
    } else if (k == "word") {
      a.word = to_u64(k, v);
    } else {
      throw ConfigError("action: unknown field '" + k + "'");
    }
  }
  if (!has_actor) throw ConfigError("action: actor is required");
  return a;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto& t = setters();
  auto it = t.find(key);
  if (it == t.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, key, value);
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    try {
      apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  PrimeField field(c.scheme.field_modulus);
  FixedPointCodec codec(c.codec_scale, c.scheme.field_modulus);
  if (c.scheme.d == 0) throw ConfigError("d must be at least 1");
  if (c.scheme.workers == 0) throw ConfigError("workers must be at least 1");
  if (c.scheme.noise_sigma < 0) throw ConfigError("noise_sigma must be non-negative");
  if (c.scheme.id == SchemeId::Homomorphic && c.scheme.key_bits < 64) throw ConfigError("key_bits too small");
  if (c.workload != "jacobi" && c.workload != "cf" && c.workload != "field-linear") {
    throw ConfigError("unknown workload '" + c.workload + "'");
  }
  if (c.workload == "cf") {
    if (c.epsilon == 0.0) throw ConfigError("epsilon must be non-zero for the augmented system");
    if (c.ratings_file.empty() && (c.cf_rows == 0 || c.cf_cols == 0)) throw ConfigError("cf_rows and cf_cols must be positive");
  }
  if (c.system_file.empty() != c.rhs_file.empty()) throw ConfigError("system_file and rhs_file go together");
  static const std::set<std::string> topologies = {"erdos-renyi", "preferential-attachment", "bipartite", "complete",
                                                   "file"};
  if (c.workload != "cf" && !topologies.count(c.topology)) throw ConfigError("unknown topology '" + c.topology + "'");
  if (c.topology == "file" && c.topology_file.empty()) throw ConfigError("topology = file needs topology_file");
  if (c.edge_probability < 0 || c.edge_probability > 1) throw ConfigError("edge_probability must lie in [0, 1]");
  if (c.density < 0 || c.density > 1 || c.cf_density < 0 || c.cf_density > 1) throw ConfigError("density must lie in [0, 1]");
  if (c.scheme.id == SchemeId::Malicious && c.scheme.chained && c.workload != "field-linear") {
    throw ConfigError("chained verification needs workload = field-linear");
  }
  for (const auto& a : c.adversary.actions) {
    if (!c.adversary.is_corrupted(a.actor)) throw ConfigError("action by uncorrupted node " + std::to_string(a.actor));
    if (c.adversary.model == AdversaryScript::Model::SemiHonest && a.kind != ActionKind::Observe) {
      throw ConfigError("semi-honest adversaries may only observe");
    }
  }
}

std::string resolved(const RunConfig& c) {
  std::ostringstream os;
  const auto& s = c.scheme;
  os << "scheme = " << to_string(s.id) << '\n'
     << "sss_mode = " << to_string(s.sss_mode) << '\n'
     << "field_modulus = " << s.field_modulus << '\n'
     << "codec_scale = " << c.codec_scale << '\n'
     << "weight_scale = " << c.weight_scale << '\n'
     << "d = " << s.d << '\n';
  if (!c.d_file.empty()) os << "d_file = " << c.d_file << '\n';
  os << "clamp_d = " << (s.clamp_d ? "true" : "false") << '\n'
     << "f = " << s.f << '\n'
     << "two_hop_colluders = " << (s.two_hop_colluders ? std::to_string(*s.two_hop_colluders) : "none") << '\n'
     << "noise = " << to_string(s.noise) << '\n'
     << "noise_sigma = " << fmt_double(s.noise_sigma) << '\n'
     << "key_bits = " << s.key_bits << '\n'
     << "group = " << s.group_profile << '\n'
     << "chained = " << (s.chained ? "true" : "false") << '\n'
     << "weight_chooser = " << to_string(s.weight_chooser) << '\n'
     << "workers = " << s.workers << '\n'
     << "workload = " << c.workload << '\n';
  if (!c.system_file.empty()) os << "system_file = " << c.system_file << "\nrhs_file = " << c.rhs_file << '\n';
  if (!c.ratings_file.empty()) os << "ratings_file = " << c.ratings_file << '\n';
  os << "cf_rows = " << c.cf_rows << '\n'
     << "cf_cols = " << c.cf_cols << '\n'
     << "cf_density = " << fmt_double(c.cf_density) << '\n'
     << "epsilon = " << fmt_double(c.epsilon) << '\n'
     << "topology = " << c.topology << '\n';
  if (!c.topology_file.empty()) os << "topology_file = " << c.topology_file << '\n';
  os << "nodes = " << c.nodes << '\n'
     << "edge_probability = " << fmt_double(c.edge_probability) << '\n'
     << "attach = " << c.attach << '\n'
     << "users = " << c.users << '\n'
     << "items = " << c.items << '\n'
     << "density = " << fmt_double(c.density) << '\n'
     << "rounds = " << c.rounds << '\n'
     << "seed = " << c.seed << '\n'
     << "compare_plain = " << (c.compare_plain ? "true" : "false") << '\n'
     << "adversary_model = "
     << (c.adversary.model == AdversaryScript::Model::Malicious ? "malicious" : "semi-honest") << '\n';
  if (!c.adversary.corrupted.empty()) {
    os << "corrupted = ";
    bool first = true;
    for (NodeId id : c.adversary.corrupted) {
      os << (first ? "" : ",") << id;
      first = false;
    }
    os << '\n';
  }
  if (c.adversary.contract_violation) os << "contract_violation = true\n";
  for (const auto& a : c.action_specs) os << "action = " << a << '\n';
  return os.str();
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t config_hash(const RunConfig& cfg) { return fnv1a64(resolved(cfg)); }

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Topology make_topology(const RunConfig& c) {
  if (c.topology == "erdos-renyi") return erdos_renyi(c.nodes, c.edge_probability, c.seed);
  if (c.topology == "preferential-attachment") return preferential_attachment(c.nodes, c.attach, c.seed);
  if (c.topology == "bipartite") return bipartite(c.users, c.items, c.density, c.seed);
  if (c.topology == "complete") return complete_graph(c.nodes);
  return read_edge_list(c.topology_file);
}

std::vector<std::size_t> read_thresholds(const std::string& path, std::size_t n, std::size_t fallback) {
  std::vector<std::size_t> d(n, fallback);
  std::istringstream is(slurp(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::size_t node = 0, value = 0;
    if (!(ls >> node)) continue;
    if (!(ls >> value) || node >= n) throw ConfigError(path + " line " + std::to_string(lineno) + ": expected 'node d'");
    d[node] = value;
  }
  return d;
}

}  // namespace

PreparedRun prepare_run(const RunConfig& c) {
  validate(c);
  PreparedRun out;
  out.scheme = c.scheme;
  if (c.workload == "cf") {
    numerics::RatingsMatrix r;
    if (!c.ratings_file.empty()) {
      auto data = parse_ratings(slurp(c.ratings_file));
      r.rows = data.users;
      r.cols = data.items;
      for (const auto& e : data.entries) r.entries.push_back({e.user, e.item, e.value});
    } else {
      r = numerics::random_ratings(c.cf_rows, c.cf_cols, c.cf_density, c.seed);
    }
    Rng rng(derive_seed(c.seed, 0xcf));
    std::vector<double> b(r.rows);
    for (auto& x : b) x = 1.0 + std::floor(5.0 * uniform_unit(rng));
    auto w = cf_workload(r, b, c.epsilon, c.weight_scale ? c.weight_scale : 1000);
    out.topology = w->system().topology();
    out.workload = std::move(w);
  } else if (c.workload == "jacobi") {
    numerics::SparseSystem sys;
    if (!c.system_file.empty()) {
      sys = numerics::parse_system(slurp(c.system_file), slurp(c.rhs_file));
      out.topology = sys.topology();
    } else {
      out.topology = make_topology(c);
      sys = numerics::random_dominant_system(out.topology, c.seed);
    }
    out.workload = std::make_unique<JacobiWorkload>(std::move(sys), std::vector<double>{}, c.codec_scale, c.weight_scale);
  } else {
    out.topology = make_topology(c);
    out.workload = std::make_unique<FieldLinearWorkload>(c.seed);
  }
  if (!c.d_file.empty()) out.scheme.per_node_d = read_thresholds(c.d_file, out.topology.node_count(), c.scheme.d);
  c.adversary.validate(out.topology);
  return out;
}

}  // namespace smpc
