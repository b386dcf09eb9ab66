#include "stewards/prg.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace stewards {

std::size_t ceil_log2(std::size_t k) {
  if (k == 0) throw std::invalid_argument("ceil_log2: k must be >= 1");
  std::size_t levels = 0;
  while ((std::size_t{1} << levels) < k) ++levels;
  return levels;
}

nlohmann::json PrgSchedule::to_json() const {
  nlohmann::json ladder_json = nlohmann::json::array();
  for (std::size_t i = 0; i < ladder.size(); ++i)
    ladder_json.push_back({{"level", i}, {"s", ladder[i].s}, {"d", ladder[i].d}, {"extractor", ladder[i].ext.to_json()}});
  return {{"n", n},
          {"k", k},
          {"sigma", sigma.get_str()},
          {"gamma", gamma.str()},
          {"beta", beta.str()},
          {"levels", levels},
          {"backend", backend == ExtractorBackend::Fresh ? "fresh" : "expander-walk"},
          {"ladder", ladder_json},
          {"seed_len", seed_len},
          {"output_len", output_len()}};
}

PrgSchedule build_schedule(std::size_t n, std::size_t k, const BigInt& sigma, const Rat& gamma,
                           ExtractorBackend backend) {
  if (n < 1 || k < 1) throw std::invalid_argument("build_schedule: n and k must be >= 1");
  if (sigma < 2) throw std::invalid_argument("build_schedule: sigma must be >= 2");
  if (gamma <= Rat(0) || gamma >= Rat(1)) throw std::invalid_argument("build_schedule: gamma must be in (0, 1)");
  PrgSchedule sched;
  sched.n = n;
  sched.k = k;
  sched.sigma = sigma;
  sched.gamma = gamma;
  sched.backend = backend;
  sched.levels = ceil_log2(k);
  sched.beta = gamma / Rat::pow2(static_cast<long>(sched.levels));
  const double log_sigma = log2_of(sigma);
  std::size_t s = n;
  for (std::size_t i = 0; i < sched.levels; ++i) {
    PrgLevel level;
    level.s = s;
    if (backend == ExtractorBackend::Fresh) {
      level.ext = fresh_extractor(s);
    } else {
      level.ext = plan_extractor(s, std::ldexp(log_sigma, static_cast<int>(i)), sched.beta);
    }
    level.d = level.ext.seed_len;
    sched.ladder.push_back(level);
    s += level.d;
  }
  sched.seed_len = s;
  return sched;
}

namespace {

BitString generate(const PrgSchedule& sched, std::size_t level, const BitString& seed) {
  if (level == 0) return seed;
  const PrgLevel& lv = sched.ladder[level - 1];
  BitString x = seed.slice(0, lv.s);
  BitString y = seed.slice(lv.s, lv.d);
  BitString out = generate(sched, level - 1, x);
  out.append(generate(sched, level - 1, extract(lv.ext, x, y)));
  return out;
}

}  // namespace

BitString expand(const PrgSchedule& schedule, const BitString& seed) {
  if (seed.size() != schedule.seed_len)
    throw std::invalid_argument("expand: seed has " + std::to_string(seed.size()) + " bits, schedule needs " +
                                std::to_string(schedule.seed_len));
  return generate(schedule, schedule.levels, seed).resized(schedule.output_len());
}

NodeDistribution exact_one_level_distribution(const PrgSchedule& schedule, const BlockDecisionTree& tree) {
  if (schedule.k != 2 || schedule.levels != 1 || schedule.backend != ExtractorBackend::ExpanderWalk)
    throw std::invalid_argument("exact_one_level_distribution: needs k = 2 with the expander backend");
  if (tree.k() != 2 || tree.n() != schedule.n)
    throw std::invalid_argument("exact_one_level_distribution: tree shape does not match the schedule");
  const std::size_t n = schedule.n;
  const std::size_t blocks = std::size_t{1} << n;
  const auto& ext = schedule.ladder[0].ext;
  WalkPropagator prop(n);

  std::map<Symbol, std::vector<std::uint64_t>> by_root;
  for (std::uint64_t x = 0; x < blocks; ++x) {
    Symbol a = tree.step({}, BitString::from_uint(x, n));
    auto& w = by_root[a];
    if (w.empty()) w.assign(blocks, 0);
    w[x] = 1;
  }
  std::map<NodePath, BigInt> counts;
  for (const auto& [a, weights] : by_root) {
    auto out = prop.propagate(weights, ext.walk_len);
    for (std::uint64_t z = 0; z < blocks; ++z) {
      if (out[z] == 0) continue;
      Symbol b = tree.step({a}, BitString::from_uint(z, n));
      counts[{a, b}] += out[z];
    }
  }
  BigInt total = 1;
  total <<= static_cast<mp_bitcnt_t>(n + ext.seed_len);
  NodeDistribution dist;
  for (const auto& [path, c] : counts) dist[path] = Rat(c, total);
  return dist;
}

}  // namespace stewards
