#include "stewards/fourier.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace stewards {

BooleanFunction BooleanFunction::from_table(std::size_t n, std::vector<std::int8_t> values) {
  if (n > 30) throw std::invalid_argument("BooleanFunction: truth tables limited to n <= 30");
  if (values.size() != (std::size_t{1} << n))
    throw std::invalid_argument("BooleanFunction: table must have 2^n entries");
  for (auto v : values)
    if (v != 1 && v != -1) throw std::invalid_argument("BooleanFunction: values must be +1 or -1");
  BooleanFunction f;
  f.n_ = n;
  f.table_ = std::move(values);
  return f;
}

BooleanFunction BooleanFunction::from_bits(std::size_t n, const BitString& bits) {
  if (n > 30) throw std::invalid_argument("BooleanFunction: truth tables limited to n <= 30");
  if (bits.size() != (std::size_t{1} << n)) throw std::invalid_argument("BooleanFunction: need 2^n bits");
  std::vector<std::int8_t> values(bits.size());
  for (std::size_t x = 0; x < values.size(); ++x) values[x] = bits[x] ? -1 : 1;
  return from_table(n, std::move(values));
}

BooleanFunction BooleanFunction::from_callback(std::size_t n, std::function<int(std::uint64_t)> f) {
  if (n > 63) throw std::invalid_argument("BooleanFunction: n must be <= 63");
  BooleanFunction out;
  out.n_ = n;
  out.callback_ = std::move(f);
  return out;
}

BooleanFunction BooleanFunction::parse_truth_table(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  while (std::getline(in, header)) {
    auto start = header.find_first_not_of(" \t\r");
    if (start != std::string::npos) {
      header = header.substr(start);
      break;
    }
  }
  while (!header.empty() && std::isspace(static_cast<unsigned char>(header.back()))) header.pop_back();
  if (header.rfind("n=", 0) != 0) throw std::invalid_argument("truth table: first line must be 'n=<int>'");
  std::size_t n = 0;
  try {
    std::size_t used = 0;
    n = std::stoul(header.substr(2), &used);
    if (used != header.size() - 2) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("truth table: bad header '" + header + "'");
  }
  if (n > 30) throw std::invalid_argument("truth table: n must be <= 30");
  std::string hex;
  for (char c; in.get(c);)
    if (!std::isspace(static_cast<unsigned char>(c))) hex += c;
  const std::size_t bits = std::size_t{1} << n;
  const std::size_t digits = (bits + 3) / 4;
  if (hex.size() != digits)
    throw std::invalid_argument("truth table: expected " + std::to_string(digits) + " hex digits, got " +
                                std::to_string(hex.size()));
  BitString all = BitString::from_hex(hex);
  for (std::size_t i = bits; i < all.size(); ++i)
    if (all[i]) throw std::invalid_argument("truth table: padding bits must be zero");
  return from_bits(n, all.resized(bits));
}

std::string BooleanFunction::to_truth_table() const {
  auto values = materialize();
  BitString bits(values.size());
  for (std::size_t x = 0; x < values.size(); ++x) bits.set(x, values[x] < 0);
  return "n=" + std::to_string(n_) + "\n" + bits.to_hex() + "\n";
}

std::vector<std::int8_t> BooleanFunction::materialize() const {
  if (!table_.empty()) return table_;
  if (n_ > 30) throw std::invalid_argument("BooleanFunction: too large to materialize");
  std::vector<std::int8_t> values(std::size_t{1} << n_);
  for (std::uint64_t x = 0; x < values.size(); ++x) {
    int v = callback_(x);
    if (v != 1 && v != -1) throw std::invalid_argument("BooleanFunction: callback returned a value other than +-1");
    values[x] = static_cast<std::int8_t>(v);
  }
  return values;
}

void wht_in_place(std::vector<std::int64_t>& values) {
  if (!std::has_single_bit(values.size())) throw std::invalid_argument("wht: length must be a power of two");
  for (std::size_t h = 1; h < values.size(); h <<= 1)
    for (std::size_t i = 0; i < values.size(); i += 2 * h)
      for (std::size_t j = i; j < i + h; ++j) {
        std::int64_t a = values[j], b = values[j + h];
        values[j] = a + b;
        values[j + h] = a - b;
      }
}

FourierSpectrum wht(const BooleanFunction& f) {
  auto table = f.materialize();
  FourierSpectrum s;
  s.n = f.n();
  s.sums.assign(table.begin(), table.end());
  wht_in_place(s.sums);
  return s;
}

Rat FourierSpectrum::coefficient(std::uint64_t subset) const {
  return Rat(BigInt(static_cast<long>(sums.at(subset))), BigInt(1) << static_cast<mp_bitcnt_t>(n));
}

std::vector<std::uint64_t> FourierSpectrum::heavy(const Rat& theta) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t u = 0; u < sums.size(); ++u)
    if (coefficient(u).abs() >= theta) out.push_back(u);
  return out;
}

namespace {

std::uint64_t prefix_mask(const std::string& x) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == '1') mask |= std::uint64_t{1} << i;
    else if (x[i] != '0') throw std::invalid_argument("prefix must be a string over {0,1}");
  }
  return mask;
}

}  // namespace

Rat FourierSpectrum::prefix_weight(const std::string& x) const {
  if (x.size() > n) throw std::invalid_argument("prefix_weight: prefix longer than n");
  const std::uint64_t mask = prefix_mask(x);
  const std::uint64_t low = x.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << x.size()) - 1;
  BigInt total = 0;
  for (std::uint64_t u = 0; u < sums.size(); ++u)
    if ((u & low) == mask) total += BigInt(static_cast<long>(sums[u])) * BigInt(static_cast<long>(sums[u]));
  return Rat(total, BigInt(1) << static_cast<mp_bitcnt_t>(2 * n));
}

SamplerPlan plan_estimate_w(std::size_t n, std::size_t prefix_len, const Rat& epsilon, const Rat& delta,
                            SamplerMode mode) {
  return plan_sampler(n + prefix_len, epsilon / Rat(2), delta, mode);
}

Rat estimate_w(const BooleanFunction& f, const std::string& x, const SamplerPlan& plan, const BitString& seed,
               std::uint64_t* f_queries) {
  const std::size_t n = f.n();
  const std::size_t l = x.size();
  if (l > n) throw std::invalid_argument("estimate_w: prefix longer than n");
  if (plan.n != n + l) throw std::invalid_argument("estimate_w: plan is for a different input length");
  const std::uint64_t mask = prefix_mask(x);
  const std::uint64_t low = (std::uint64_t{1} << l) - 1;
  PointOracle c = [&](std::uint64_t p) {
    const std::uint64_t y = p & low;
    const std::uint64_t y2 = (p >> l) & low;
    const std::uint64_t z = p >> (2 * l);
    int v = f(y | (z << l)) * f(y2 | (z << l));
    if (std::popcount(mask & y) & 1) v = -v;
    if (std::popcount(mask & y2) & 1) v = -v;
    return v > 0;
  };
  std::uint64_t c_queries = 0;
  Rat mean = sample_mean(plan, c, seed, &c_queries);
  if (f_queries) *f_queries += 2 * c_queries;
  return Rat(2) * mean - Rat(1);
}

Rat estimate_w(const BooleanFunction& f, const std::string& x, const Rat& epsilon, const Rat& delta,
               BitSource& source, std::uint64_t* f_queries) {
  SamplerPlan plan = plan_estimate_w(f.n(), x.size(), epsilon, delta);
  PhaseScope phase(source, "sampler");
  return estimate_w(f, x, plan, source.draw_bits(plan.bits()), f_queries);
}

std::size_t GlParams::prefix_len(std::size_t round) const { return std::min(round * u, n); }

SamplerPlan GlParams::round_plan(std::size_t round) const {
  return plan_estimate_w(n, prefix_len(round), epsilon, estimate_delta, mode);
}

std::size_t GlParams::block_bits() const {
  std::size_t m = 0;
  for (std::size_t i = 1; i <= k; ++i) m = std::max(m, round_plan(i).bits());
  return m;
}

StewardConfig GlParams::steward_config() const {
  StewardConfig c;
  c.n = block_bits();
  c.k = k;
  c.d = d;
  c.d0 = d;
  c.epsilon = epsilon;
  c.delta = estimate_delta * Rat(static_cast<long>(d));
  c.gamma = gamma;
  return c;
}

nlohmann::json GlParams::to_json() const {
  return {{"n", n},
          {"theta", theta.str()},
          {"delta", delta.str()},
          {"u", u},
          {"k", k},
          {"d", d},
          {"epsilon", epsilon.str()},
          {"estimate_delta", estimate_delta.str()},
          {"gamma", gamma.str()},
          {"steward", to_string(steward)},
          {"block_bits", block_bits()}};
}

GlParams plan_gl(std::size_t n, const Rat& theta, const Rat& delta, StewardKind steward, SamplerMode mode) {
  if (n < 1 || n > 30) throw std::invalid_argument("goldreich_levin: n must be in [1, 30]");
  if (theta <= Rat(0) || theta > Rat(1)) throw std::invalid_argument("goldreich_levin: theta must be in (0, 1]");
  if (theta < Rat::pow2(1 - static_cast<long>(n)))
    throw std::invalid_argument("goldreich_levin: theta must be at least 2^(1-n)");
  if (delta <= Rat(0) || delta >= Rat(1)) throw std::invalid_argument("goldreich_levin: delta must be in (0, 1)");
  GlParams p;
  p.n = n;
  p.theta = theta;
  p.delta = delta;
  p.steward = steward;
  p.mode = mode;
  const Rat inv = Rat(1) / theta;
  std::size_t u = 0;
  while (Rat::pow2(static_cast<long>(u + 1)) <= inv) ++u;
  p.u = std::max<std::size_t>(1, u);
  p.k = (n + p.u - 1) / p.u;
  p.d = (Rat::pow2(static_cast<long>(p.u)) * Rat(4) / (theta * theta)).floor().get_ui();
  p.epsilon = theta * theta / Rat(static_cast<long>(4 * (3 * p.d + 5)));
  p.estimate_delta = delta / Rat(static_cast<long>(2 * p.d * n));
  p.gamma = delta / Rat(2);
  return p;
}

nlohmann::json GlResult::to_json() const {
  nlohmann::json out = {{"status", failed ? "fail" : "ok"},
                        {"subsets", subsets},
                        {"list_sizes", list_sizes},
                        {"f_queries", f_queries}};
  if (failed) out["failed_round"] = failed_round;
  return out;
}

GlResult goldreich_levin(const BooleanFunction& f, const GlParams& params, BitSource& source) {
  if (f.n() != params.n) throw std::invalid_argument("goldreich_levin: function arity does not match params");
  GlResult result;
  StewardSession session(params.steward_config(), params.steward, source);
  std::optional<FourierSpectrum> spectrum;
  if (f.has_table()) spectrum = wht(f);
  const Rat keep = params.theta * params.theta / Rat(2);
  const Rat cap = Rat(static_cast<long>(params.d)) / Rat::pow2(static_cast<long>(params.u));

  std::vector<std::string> list{""};
  for (std::size_t round = 1; round <= params.k; ++round) {
    if (Rat(static_cast<long>(list.size())) > cap) {
      result.failed = true;
      result.failed_round = round;
      break;
    }
    const std::size_t grow = params.prefix_len(round) - params.prefix_len(round - 1);
    std::vector<std::string> cands;
    for (const auto& x : list)
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << grow); ++s) {
        std::string ext = x;
        for (std::size_t b = 0; b < grow; ++b) ext += ((s >> (grow - 1 - b)) & 1u) ? '1' : '0';
        cands.push_back(ext);
      }
    std::sort(cands.begin(), cands.end());
    const SamplerPlan plan = params.round_plan(round);

    ConcentratedFn fi;
    fi.epsilon = params.epsilon;
    fi.delta = session.config().delta;
    fi.oracle = [&](const BitString& x) {
      Vec w(params.d, Rat(0));
      const BitString seed = x.slice(0, plan.bits());
      for (std::size_t j = 0; j < cands.size(); ++j) w[j] = estimate_w(f, cands[j], plan, seed, &result.f_queries);
      return w;
    };
    if (spectrum) {
      Vec mu(params.d, Rat(0));
      for (std::size_t j = 0; j < cands.size(); ++j) mu[j] = spectrum->prefix_weight(cands[j]);
      fi.mu = mu;
    }
    Vec y = session.answer(fi);
    list.clear();
    for (std::size_t j = 0; j < cands.size(); ++j)
      if (y[j] >= keep) list.push_back(cands[j]);
    result.list_sizes.push_back(list.size());
  }
  if (!result.failed) {
    for (const auto& x : list) result.subsets.push_back(prefix_mask(x));
    std::sort(result.subsets.begin(), result.subsets.end());
  }
  result.transcript = session.transcript();
  return result;
}

BudgetReport gl_randomness_audit(const GlParams& params) {
  const StewardConfig config = params.steward_config();
  const std::size_t m = config.n;
  BudgetReport report;
  switch (params.steward) {
    case StewardKind::Main: {
      PrgSchedule sched = build_schedule(m, config.k, config.symbols_per_round(), config.gamma);
      report.charge("steward/block", m);
      report.charge("steward/extractor-seeds", sched.seed_len - m);
      break;
    }
    case StewardKind::S0:
    case StewardKind::NaiveFresh: report.charge("steward/x", m * config.k); break;
    case StewardKind::UnionBound:
    case StewardKind::NaiveReuse: report.charge("steward/x", m); break;
    case StewardKind::SaksZhou:
      report.charge("steward/x", m);
      report.charge("steward/shift", config.k * static_cast<std::size_t>(std::countr_zero(saks_zhou_u(config))));
      break;
  }
  return report;
}

}  // namespace stewards
