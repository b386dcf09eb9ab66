#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stewards/adversary.hpp"
#include "stewards/circuits.hpp"
#include "stewards/fourier.hpp"
#include "stewards/prg.hpp"
#include "stewards/sampler.hpp"
#include "stewards/steward.hpp"

using namespace stewards;
using nlohmann::json;

namespace {

struct Common {
  std::string seed_hex;
  std::string out;
  unsigned jobs = 1;
  bool audit = false;
};

// CLI11 reads rationals as strings; this turns a bad value into a usage error.
struct RatOption {
  std::string text;
  Rat value;
};

void add_rat(CLI::App* app, const std::string& name, RatOption& opt, const std::string& help, bool required) {
  auto* o = app->add_option(name, opt.text, help);
  if (required) o->required();
  o->check(CLI::Validator(
      [](std::string& s) -> std::string {
        try {
          Rat::parse(s);
        } catch (const std::exception& e) {
          return e.what();
        }
        return {};
      },
      "RATIONAL"));
}

void resolve(RatOption& opt) {
  if (!opt.text.empty()) opt.value = Rat::parse(opt.text);
}

std::unique_ptr<BitSource> make_source(const Common& c) {
  if (c.seed_hex.empty()) return std::make_unique<EntropySource>();
  return std::make_unique<TapeSource>(BitString::from_hex(c.seed_hex));
}

// Monte-Carlo trial i draws from SeededSource(master, i). The master seed is
// the first 64 tape bits when --seed-hex is given, else OS entropy.
std::uint64_t master_seed(const Common& c) {
  if (c.seed_hex.empty()) {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) | rd();
  }
  BitString tape = BitString::from_hex(c.seed_hex);
  return tape.read_uint(0, std::min<std::size_t>(64, tape.size()));
}

template <class Fn>
auto run_trials(std::size_t trials, unsigned jobs, Fn fn) {
  using T = decltype(fn(std::size_t{0}));
  std::vector<T> out(trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < trials;) out[i] = fn(i);
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < std::max(1u, jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

void emit(const Common& c, const json& doc) {
  if (c.out.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream file(c.out);
  if (!file) throw std::runtime_error("cannot write " + c.out);
  file << doc.dump(2) << "\n";
}

void attach_budget(const Common& c, json& doc, const BitSource& source) {
  if (c.audit) {
    doc["budget"] = source.budget().to_json();
    std::cerr << "bits drawn: " << source.budget().bits_drawn << "\n";
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Rat error_bound_of(const StewardConfig& config, StewardKind kind) {
  TapeSource none{BitString()};
  return StewardSession(config, kind, none).error_bound();
}

// gl ------------------------------------------------------------------------

struct GlOptions {
  std::string truth_table;
  RatOption theta, delta;
  std::string steward = "main";
  std::string mode = "walk";
};

int run_gl(const Common& common, GlOptions& o) {
  resolve(o.theta);
  resolve(o.delta);
  auto f = BooleanFunction::parse_truth_table(read_file(o.truth_table));
  auto params = plan_gl(f.n(), o.theta.value, o.delta.value, parse_steward_kind(o.steward),
                        o.mode == "independent" ? SamplerMode::IndependentSeeds : SamplerMode::WalkSeeds);
  auto source = make_source(common);
  auto result = goldreich_levin(f, params, *source);
  json doc = result.to_json();
  doc["params"] = params.to_json();
  doc["declared_bits"] = gl_randomness_audit(params).to_json();
  attach_budget(common, doc, *source);
  emit(common, doc);
  std::cerr << "gl: " << (result.failed ? "fail" : std::to_string(result.subsets.size()) + " subsets") << "\n";
  return result.failed ? 3 : 0;
}

// accept --------------------------------------------------------------------

struct AcceptOptions {
  std::size_t n = 0, k = 0;
  RatOption epsilon, delta;
  std::string steward = "main";
  std::string circuits;
  bool exact = false;
};

int run_accept(const Common& common, AcceptOptions& o) {
  resolve(o.epsilon);
  resolve(o.delta);
  auto source = make_source(common);
  AcceptanceSession session(o.n, o.k, o.epsilon.value, o.delta.value, *source, parse_steward_kind(o.steward));
  std::ifstream file;
  if (!o.circuits.empty()) {
    file.open(o.circuits);
    if (!file) throw std::runtime_error("cannot read " + o.circuits);
  }
  std::istream& in = o.circuits.empty() ? std::cin : file;
  json rounds = json::array();
  for (std::string line; session.rounds_done() < o.k && std::getline(in, line);) {
    auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    Circuit c = parse_circuit(line, o.n);
    std::optional<Rat> mu;
    if (o.exact) mu = exact_acceptance(c);
    Rat y = session.estimate(c, mu);
    json row = {{"round", session.rounds_done() - 1}, {"circuit", c.to_string()}, {"estimate", y.str()},
                {"estimate_decimal", y.to_double()}};
    if (mu) row["exact"] = mu->str();
    rounds.push_back(row);
    // one line per estimate so a driving script can choose the next circuit
    std::cout << row.dump() << std::endl;
  }
  json doc = {{"rounds", rounds}, {"session", session.to_json()}};
  attach_budget(common, doc, *source);
  if (common.out.empty()) std::cout << json{{"summary", doc}}.dump() << "\n";
  else emit(common, doc);
  return 0;
}

// prg expand ----------------------------------------------------------------

struct PrgOptions {
  std::size_t n = 0, k = 0;
  std::string sigma;
  RatOption gamma;
  std::string backend = "walk";
};

int run_prg_expand(const Common& common, PrgOptions& o) {
  resolve(o.gamma);
  if (common.seed_hex.empty()) throw CLI::RequiredError("--seed-hex");
  auto schedule = build_schedule(o.n, o.k, BigInt(o.sigma, 10), o.gamma.value,
                                 o.backend == "fresh" ? ExtractorBackend::Fresh : ExtractorBackend::ExpanderWalk);
  TapeSource source(BitString::from_hex(common.seed_hex));
  BitString seed;
  {
    PhaseScope phase(source, "prg/seed");
    seed = source.draw_bits(schedule.seed_len);
  }
  BitString out = expand(schedule, seed);
  json blocks = json::array();
  for (std::size_t i = 0; i < o.k; ++i) blocks.push_back(out.slice(i * o.n, o.n).to_string());
  json doc = {{"output_hex", out.to_hex()},
              {"output_bits", out.to_string()},
              {"blocks", blocks},
              {"seed_bits_used", schedule.seed_len},
              {"schedule", schedule.to_json()}};
  attach_budget(common, doc, source);
  emit(common, doc);
  return 0;
}

// sampler bench -------------------------------------------------------------

struct BenchOptions {
  std::size_t n = 0;
  RatOption epsilon, delta;
  std::string circuit = "x0";
  std::string mode = "walk";
  std::size_t trials = 1000;
};

int run_sampler_bench(const Common& common, BenchOptions& o) {
  resolve(o.epsilon);
  resolve(o.delta);
  Circuit c = parse_circuit(o.circuit, o.n);
  const Rat mu = exact_acceptance(c);
  auto plan = plan_sampler(o.n, o.epsilon.value, o.delta.value,
                           o.mode == "independent" ? SamplerMode::IndependentSeeds : SamplerMode::WalkSeeds);
  const std::uint64_t master = master_seed(common);
  struct Trial {
    bool failed = false;
    std::uint64_t queries = 0, bits = 0;
  };
  auto results = run_trials(o.trials, common.jobs, [&](std::size_t i) {
    SeededSource src(master, i);
    Trial t;
    Rat est = sample_mean(plan, [&](std::uint64_t x) { return c.eval(x); }, src, &t.queries);
    t.failed = (est - mu).abs() > o.epsilon.value;
    t.bits = src.budget().bits_drawn;
    return t;
  });
  std::size_t failures = 0;
  for (const auto& t : results) failures += t.failed;
  json doc = {{"plan", plan.to_json()},
              {"circuit", c.to_string()},
              {"exact", mu.str()},
              {"master_seed", master},
              {"trials", o.trials},
              {"failures", failures},
              {"failure_rate", o.trials ? static_cast<double>(failures) / o.trials : 0.0},
              {"queries_per_trial", results.empty() ? 0 : results[0].queries},
              {"bits_per_trial", results.empty() ? 0 : results[0].bits}};
  emit(common, doc);
  return 0;
}

// audit ---------------------------------------------------------------------

struct AuditOptions {
  std::size_t n = 0, k = 1, d = 1, d0 = 0;
  RatOption epsilon, delta, gamma, theta;
};

int run_audit(const Common& common, AuditOptions& o) {
  resolve(o.epsilon);
  resolve(o.delta);
  resolve(o.gamma);
  resolve(o.theta);
  const std::vector<StewardKind> kinds{StewardKind::Main,     StewardKind::S0,         StewardKind::UnionBound,
                                       StewardKind::SaksZhou, StewardKind::NaiveFresh, StewardKind::NaiveReuse};
  json doc;
  if (!o.theta.text.empty()) {
    json rows = json::array();
    for (auto kind : {StewardKind::Main, StewardKind::UnionBound, StewardKind::SaksZhou, StewardKind::NaiveFresh}) {
      auto params = plan_gl(o.n, o.theta.value, o.delta.value, kind);
      rows.push_back({{"steward", to_string(kind)}, {"params", params.to_json()},
                      {"budget", gl_randomness_audit(params).to_json()}});
    }
    doc = {{"gl", rows}};
  } else {
    StewardConfig config;
    config.n = o.n;
    config.k = o.k;
    config.d = o.d;
    config.d0 = o.d0;
    config.epsilon = o.epsilon.value;
    config.delta = o.delta.value;
    if (!o.gamma.text.empty()) config.gamma = o.gamma.value;
    config.validate();
    json rows = json::array();
    for (auto kind : kinds) {
      TapeSource none{BitString()};
      StewardSession s(config, kind, none);
      json row = {{"steward", to_string(kind)},
                  {"declared_bits", s.declared_bits()},
                  {"naive_bits", config.n * config.k},
                  {"error_bound", s.error_bound().str()}};
      auto t = s.transcript();
      if (t.schedule) row["schedule"] = t.schedule->to_json();
      if (t.sz_u) row["saks_zhou_u"] = t.sz_u;
      rows.push_back(row);
    }
    doc = {{"config", config.to_json()}, {"stewards", rows}};
  }
  emit(common, doc);
  return 0;
}

// demo adversary ------------------------------------------------------------

struct DemoOptions {
  std::string steward = "naive-reuse";
  std::string owner = "extracting";
  std::size_t n = 10, k = 2, d = 1;
  RatOption epsilon, delta;
  std::size_t trials = 200;
};

int run_demo_adversary(const Common& common, DemoOptions& o) {
  if (o.epsilon.text.empty()) o.epsilon.text = "1/64";
  if (o.delta.text.empty()) o.delta.text = "0";
  resolve(o.epsilon);
  resolve(o.delta);
  StewardConfig config;
  config.n = o.n;
  config.k = o.k;
  config.d = o.d;
  config.epsilon = o.epsilon.value;
  config.delta = o.delta.value;
  config.validate();
  const StewardKind kind = parse_steward_kind(o.steward);
  const Rat bound = error_bound_of(config, kind);
  Owner owner;
  if (o.owner == "extracting") owner = extracting_owner(config);
  else if (o.owner == "boundary") owner = boundary_owner(config);
  else throw CLI::ValidationError("--owner", "expected extracting or boundary");
  const std::uint64_t master = master_seed(common);

  struct Trial {
    std::vector<bool> failed;
    bool decoded = false;
  };
  auto results = run_trials(o.trials, common.jobs, [&](std::size_t i) {
    SeededSource src(master, i);
    auto t = run_steward(kind, config, owner, src);
    Trial out;
    for (const auto& r : t.rounds) out.failed.push_back(linf_distance(r.y, *r.mu) > bound);
    if (o.owner == "extracting" && !t.rounds.empty()) out.decoded = extracting_decode(t.rounds[0].y, config).has_value();
    return out;
  });
  std::vector<std::size_t> per_round(o.k, 0);
  std::size_t any = 0, decoded = 0;
  for (const auto& t : results) {
    bool f = false;
    for (std::size_t r = 0; r < t.failed.size(); ++r) {
      per_round[r] += t.failed[r];
      f = f || t.failed[r];
    }
    any += f;
    decoded += t.decoded;
  }
  json rates = json::array();
  for (auto c : per_round) rates.push_back(o.trials ? static_cast<double>(c) / o.trials : 0.0);
  json doc = {{"steward", to_string(kind)},
              {"owner", o.owner},
              {"config", config.to_json()},
              {"error_bound", bound.str()},
              {"master_seed", master},
              {"trials", o.trials},
              {"failure_rate", o.trials ? static_cast<double>(any) / o.trials : 0.0},
              {"per_round_failure_rate", rates}};
  if (o.owner == "extracting") doc["decoded_rate"] = o.trials ? static_cast<double>(decoded) / o.trials : 0.0;
  emit(common, doc);
  std::cerr << to_string(kind) << " vs " << o.owner << ": failure rate " << doc["failure_rate"].get<double>() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomness stewards for adaptive estimation"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--seed-hex", common.seed_hex, "Random tape as hex, four bits per digit, least significant first");
  app.add_option("--out", common.out, "Write the JSON report here instead of stdout");
  app.add_option("--jobs", common.jobs, "Worker threads for Monte-Carlo trials")->check(CLI::Range(1u, 256u));
  app.add_flag("--audit", common.audit, "Include the randomness budget report");

  std::function<int()> action;
  const std::vector<std::string> steward_names{"main", "s0", "union", "saks-zhou", "naive-fresh", "naive-reuse"};

  GlOptions gl;
  auto* gl_cmd = app.add_subcommand("gl", "Goldreich-Levin heavy Fourier coefficients");
  gl_cmd->add_option("--truth-table", gl.truth_table, "Truth-table file")->required()->check(CLI::ExistingFile);
  add_rat(gl_cmd, "--theta", gl.theta, "Threshold", true);
  add_rat(gl_cmd, "--delta", gl.delta, "Failure probability", true);
  gl_cmd->add_option("--steward", gl.steward)->check(CLI::IsMember(steward_names));
  gl_cmd->add_option("--sampler-mode", gl.mode)->check(CLI::IsMember({"walk", "independent"}));
  gl_cmd->callback([&] { action = [&] { return run_gl(common, gl); }; });

  AcceptOptions acc;
  auto* acc_cmd = app.add_subcommand("accept", "Adaptive acceptance probabilities of circuits read line by line");
  acc_cmd->add_option("--n", acc.n, "Input bits")->required()->check(CLI::Range(1, 63));
  acc_cmd->add_option("--k", acc.k, "Rounds")->required()->check(CLI::PositiveNumber);
  add_rat(acc_cmd, "--epsilon", acc.epsilon, "Accuracy", true);
  add_rat(acc_cmd, "--delta", acc.delta, "Failure probability", true);
  acc_cmd->add_option("--steward", acc.steward)->check(CLI::IsMember(steward_names));
  acc_cmd->add_option("--circuits", acc.circuits, "Circuit file (default stdin)");
  acc_cmd->add_flag("--exact", acc.exact, "Also report exact acceptance (n <= 24)");
  acc_cmd->callback([&] { action = [&] { return run_accept(common, acc); }; });

  PrgOptions prg;
  auto* prg_cmd = app.add_subcommand("prg", "Pseudorandom generator for block decision trees");
  prg_cmd->require_subcommand(1);
  auto* expand_cmd = prg_cmd->add_subcommand("expand", "Expand a seed into n*k bits");
  expand_cmd->add_option("--n", prg.n)->required()->check(CLI::PositiveNumber);
  expand_cmd->add_option("--k", prg.k)->required()->check(CLI::PositiveNumber);
  expand_cmd->add_option("--sigma", prg.sigma)->required()->check(CLI::PositiveNumber);
  add_rat(expand_cmd, "--gamma", prg.gamma, "Generator error", true);
  expand_cmd->add_option("--backend", prg.backend)->check(CLI::IsMember({"walk", "fresh"}));
  expand_cmd->callback([&] { action = [&] { return run_prg_expand(common, prg); }; });

  BenchOptions bench;
  auto* sampler_cmd = app.add_subcommand("sampler", "Boolean sampler");
  sampler_cmd->require_subcommand(1);
  auto* bench_cmd = sampler_cmd->add_subcommand("bench", "Monte-Carlo failure rate against the exact mean");
  bench_cmd->add_option("--n", bench.n)->required()->check(CLI::Range(1, 24));
  add_rat(bench_cmd, "--epsilon", bench.epsilon, "Accuracy", true);
  add_rat(bench_cmd, "--delta", bench.delta, "Failure probability", true);
  bench_cmd->add_option("--circuit", bench.circuit, "Circuit expression");
  bench_cmd->add_option("--mode", bench.mode)->check(CLI::IsMember({"walk", "independent"}));
  bench_cmd->add_option("--trials", bench.trials);
  bench_cmd->callback([&] { action = [&] { return run_sampler_bench(common, bench); }; });

  AuditOptions audit;
  auto* audit_cmd = app.add_subcommand("audit", "Declared randomness per steward, or per GL run with --theta");
  audit_cmd->add_option("--n", audit.n)->required()->check(CLI::PositiveNumber);
  audit_cmd->add_option("--k", audit.k)->check(CLI::PositiveNumber);
  audit_cmd->add_option("--d", audit.d)->check(CLI::PositiveNumber);
  audit_cmd->add_option("--d0", audit.d0);
  add_rat(audit_cmd, "--epsilon", audit.epsilon, "Accuracy", false);
  add_rat(audit_cmd, "--delta", audit.delta, "Failure probability", true);
  add_rat(audit_cmd, "--gamma", audit.gamma, "Generator error", false);
  add_rat(audit_cmd, "--theta", audit.theta, "GL threshold", false);
  audit_cmd->callback([&] {
    if (audit.theta.text.empty() && audit.epsilon.text.empty())
      throw CLI::RequiredError("--epsilon (or --theta)");
    action = [&] { return run_audit(common, audit); };
  });

  DemoOptions demo;
  auto* demo_cmd = app.add_subcommand("demo", "Demonstrations");
  demo_cmd->require_subcommand(1);
  auto* adv_cmd = demo_cmd->add_subcommand("adversary", "Adaptive owner against a steward");
  adv_cmd->add_option("--steward", demo.steward)->check(CLI::IsMember(steward_names));
  adv_cmd->add_option("--owner", demo.owner)->check(CLI::IsMember({"extracting", "boundary"}));
  adv_cmd->add_option("--n", demo.n)->check(CLI::Range(1, 62));
  adv_cmd->add_option("--k", demo.k)->check(CLI::PositiveNumber);
  adv_cmd->add_option("--d", demo.d)->check(CLI::PositiveNumber);
  add_rat(adv_cmd, "--epsilon", demo.epsilon, "Accuracy (default 1/64)", false);
  add_rat(adv_cmd, "--delta", demo.delta, "Failure probability (default 0)", false);
  adv_cmd->add_option("--trials", demo.trials);
  adv_cmd->callback([&] { action = [&] { return run_demo_adversary(common, demo); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return action();
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
