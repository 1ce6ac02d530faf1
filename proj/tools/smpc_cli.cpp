#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "smpc/bench.hpp"
#include "smpc/config.hpp"
#include "smpc/errors.hpp"
#include "smpc/simulator.hpp"
#include "smpc/topology.hpp"
#include "smpc/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kAbort = 1;
constexpr int kConfig = 2;
constexpr int kVerify = 3;

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

// Writes to `path`, or stdout when empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw smpc::ConfigError("cannot write " + path);
  out << text;
}

int bench_ops(const smpc::BenchOptions& o, const std::string& out) {
  std::ostringstream key;
  key << "bench key_bits=" << o.key_bits << " reps=" << o.reps << " keygen_reps=" << o.keygen_reps
      << " crypto_reps=" << o.crypto_reps << " threshold=" << o.threshold << " points=" << o.points
      << " modulus=" << o.modulus << " seed=" << o.seed;
  const std::string hash = hex64(smpc::fnv1a64(key.str()));
  auto rows = smpc::bench_ops(o);
  std::ostringstream csv;
  csv << "config_hash,seed,operation,mean_us,reps,bytes,note\n";
  for (const auto& r : rows) {
    csv << hash << ',' << o.seed << ',' << r.operation << ',' << std::setprecision(6) << r.mean_us << ',' << r.reps
        << ',' << r.bytes << ",\"" << r.note << "\"\n";
  }
  emit(out, csv.str());

  std::cerr << std::left << std::setw(24) << "operation" << std::right << std::setw(14) << "mean (us)" << std::setw(10)
            << "bytes\n";
  for (const auto& r : rows) {
    std::cerr << std::left << std::setw(24) << r.operation << std::right << std::setw(14) << std::fixed
              << std::setprecision(2) << r.mean_us << std::setw(9) << r.bytes << '\n';
  }
  const auto& enc = smpc::find_row(rows, "paillier_encrypt");
  const auto& share = smpc::find_row(rows, "poly_generate_evaluate");
  std::cerr << "encrypt / share generation ratio: " << std::setprecision(1) << enc.mean_us / share.mean_us << '\n';
  std::cerr << "ciphertext size at " << o.key_bits << "-bit keys: " << enc.bytes
            << " bytes (N^2 is twice the key size; the published table lists 2048 for this row)\n";
  return kOk;
}

std::string metrics_csv(const smpc::RunConfig& cfg, const smpc::RunResult& r, const std::string& hash) {
  std::ostringstream os;
  os << "config_hash,seed,round,scheme,messages,delivered,withheld,bytes,comm_rounds,millis,aborts,detections\n";
  auto row = [&](const smpc::RoundStats& s) {
    os << hash << ',' << cfg.seed << ',' << s.round << ',' << smpc::to_string(cfg.scheme.id) << ',' << s.messages << ','
       << s.delivered << ',' << s.withheld << ',' << s.bytes << ',' << s.comm_rounds << ',' << std::fixed
       << std::setprecision(3) << s.millis << ',' << s.aborts << ',' << s.detections << '\n';
  };
  row(r.metrics.setup);
  for (const auto& s : r.metrics.rounds) row(s);
  return os.str();
}

std::string estimates_csv(const smpc::RunConfig& cfg, const smpc::Workload& w, const std::string& hash) {
  std::ostringstream os;
  os << "config_hash,seed,node,estimate,field_value\n";
  os << std::setprecision(17);
  for (const auto& s : w.states()) {
    os << hash << ',' << cfg.seed << ',' << s.id << ',' << s.estimate << ',' << s.field_estimate.value() << '\n';
  }
  return os.str();
}

int run_command(const std::string& config_path, const std::vector<std::string>& overrides) {
  smpc::RunConfig cfg = config_path.empty() ? smpc::RunConfig{} : smpc::load_config(config_path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw smpc::ConfigError("--set expects key=value, got '" + kv + "'");
    smpc::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  auto prepared = smpc::prepare_run(cfg);
  const std::string hash = hex64(smpc::config_hash(cfg));
  std::cerr << "# resolved config (hash " << hash << ")\n";
  std::istringstream lines(smpc::resolved(cfg));
  for (std::string line; std::getline(lines, line);) std::cerr << "#   " << line << '\n';

  std::unique_ptr<smpc::Workload> paired = cfg.compare_plain ? prepared.workload->clone() : nullptr;
  auto result = smpc::run(prepared.topology, prepared.scheme, *prepared.workload, cfg.rounds, cfg.adversary, cfg.seed);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';

  emit(cfg.metrics_out, metrics_csv(cfg, result, hash));
  if (!cfg.estimates_out.empty()) emit(cfg.estimates_out, estimates_csv(cfg, *prepared.workload, hash));

  const auto& m = result.metrics;
  std::cerr << "scheme " << smpc::to_string(cfg.scheme.id) << " on " << prepared.topology.node_count() << " nodes, "
            << prepared.topology.edge_count() << " edges, " << cfg.rounds << " rounds\n"
            << "  messages " << m.total_messages() << ", bytes " << m.total_bytes() << ", comm rounds "
            << m.total_comm_rounds() << ", aborts " << m.total_aborts() << ", detections " << m.total_detections()
            << '\n';
  double millis = m.setup.millis;
  for (const auto& s : m.rounds) millis += s.millis;
  std::cerr << "  wall clock " << std::fixed << std::setprecision(1) << millis << " ms\n";
  for (const auto& e : m.events) std::cerr << "  " << e << '\n';

  if (paired) {
    smpc::SchemeConfig plain = prepared.scheme;
    plain.id = smpc::SchemeId::Plain;
    auto base = smpc::run(prepared.topology, plain, *paired, cfg.rounds, {}, cfg.seed);
    double diff = 0.0;
    for (std::size_t i = 0; i < paired->states().size(); ++i) {
      diff = std::max(diff, std::fabs(paired->states()[i].estimate - prepared.workload->states()[i].estimate));
    }
    double base_ms = base.metrics.setup.millis;
    for (const auto& s : base.metrics.rounds) base_ms += s.millis;
    std::cerr << "  paired plain run: max |difference| " << std::scientific << std::setprecision(3) << diff
              << ", slowdown " << std::fixed << std::setprecision(1) << (base_ms > 0 ? millis / base_ms : 0.0)
              << "x\n";
  }
  return result.aborted ? kAbort : kOk;
}

int gen_topology(const std::vector<std::string>& args, std::uint64_t seed, const std::string& out) {
  if (args.empty()) throw smpc::ConfigError("gen-topology needs a model");
  auto num = [&](std::size_t k) -> double {
    if (k >= args.size()) throw smpc::ConfigError("missing parameter " + std::to_string(k) + " for " + args[0]);
    try {
      return std::stod(args[k]);
    } catch (const std::exception&) {
      throw smpc::ConfigError("bad parameter '" + args[k] + "'");
    }
  };
  smpc::Topology t;
  const std::string& model = args[0];
  if (model == "erdos-renyi") {
    t = smpc::erdos_renyi(static_cast<std::size_t>(num(1)), num(2), seed);
  } else if (model == "preferential-attachment") {
    t = smpc::preferential_attachment(static_cast<std::size_t>(num(1)), static_cast<std::size_t>(num(2)), seed);
  } else if (model == "bipartite") {
    t = smpc::bipartite(static_cast<std::size_t>(num(1)), static_cast<std::size_t>(num(2)), num(3), seed);
  } else if (model == "complete") {
    t = smpc::complete_graph(static_cast<std::size_t>(num(1)));
  } else {
    throw smpc::ConfigError("unknown model '" + model + "'");
  }
  emit(out, smpc::emit_edge_list(t));
  std::cerr << t.node_count() << " nodes, " << t.edge_count() << " edges\n";
  return kOk;
}

int verify(const std::string& suite, std::uint64_t seed) {
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = smpc::suite_names();
  } else {
    suites.push_back(suite);
  }
  bool ok = true;
  for (const auto& name : suites) {
    auto r = smpc::run_suite(name, seed);
    std::cout << (r.passed() ? "PASS " : "FAIL ") << name << " (" << r.checks << " checks)\n";
    for (const auto& f : r.failures) std::cout << "  " << f << '\n';
    ok = ok && r.passed();
  }
  return ok ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving weighted-sum protocols over peer-to-peer graphs"};
  app.require_subcommand(1);

  smpc::BenchOptions bench;
  std::string bench_out;
  auto* b = app.add_subcommand("bench-ops", "Mean latency of local primitives (CSV)");
  b->add_option("--key-bits", bench.key_bits, "Paillier modulus size")->capture_default_str();
  b->add_option("--reps", bench.reps, "Repetitions per cheap operation")->capture_default_str();
  b->add_option("--keygen-reps", bench.keygen_reps, "Key generations")->capture_default_str();
  b->add_option("--crypto-reps", bench.crypto_reps, "Paillier repetitions (0: same as --reps)")->capture_default_str();
  b->add_option("--threshold", bench.threshold, "Sharing threshold d")->capture_default_str();
  b->add_option("--points", bench.points, "Shares per polynomial")->capture_default_str();
  b->add_option("--seed", bench.seed)->capture_default_str();
  b->add_option("-o,--out", bench_out, "CSV destination (stdout by default)");

  std::string config_path;
  std::vector<std::string> overrides;
  auto* r = app.add_subcommand("run", "Run a scheme under a workload");
  r->add_option("-c,--config", config_path, "key = value config file");
  r->add_option("-s,--set", overrides, "Override a config key (key=value); repeatable");

  std::vector<std::string> gen_args;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* g = app.add_subcommand("gen-topology", "Write a random topology as an edge list");
  g->add_option("model", gen_args, "erdos-renyi N P | preferential-attachment N K | bipartite M N DENSITY | complete N")
      ->required();
  g->add_option("--seed", gen_seed)->capture_default_str();
  g->add_option("-o,--out", gen_out, "Edge-list destination (stdout by default)");

  std::string suite = "all";
  std::uint64_t verify_seed = 1;
  auto* v = app.add_subcommand("verify", "Run module property suites");
  v->add_option("suite", suite, "Suite name or 'all'")->capture_default_str();
  v->add_option("--seed", verify_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*b) return bench_ops(bench, bench_out);
    if (*r) return run_command(config_path, overrides);
    if (*g) return gen_topology(gen_args, gen_seed, gen_out);
    if (*v) return verify(suite, verify_seed);
  } catch (const smpc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const smpc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kConfig;
  } catch (const smpc::ArgumentError& e) {
    std::cerr << "argument error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
