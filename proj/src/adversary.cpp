#include "stewards/adversary.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace stewards {

namespace {

ConcentratedFn point_mass(const Vec& mu, const Rat& epsilon) {
  ConcentratedFn f;
  f.oracle = [mu](const BitString&) { return mu; };
  f.epsilon = epsilon;
  f.delta = 0;
  f.mu = mu;
  return f;
}

std::uint64_t tail_size(std::size_t n, const Rat& delta) {
  return (delta * Rat::pow2(static_cast<long>(n))).floor().get_ui();
}

}  // namespace

Owner constant_owner(std::vector<Vec> mus, const Rat& epsilon) {
  if (mus.empty()) throw std::invalid_argument("constant_owner: need at least one mu");
  return [mus = std::move(mus), epsilon](std::size_t round, const std::vector<Vec>&) {
    return point_mass(mus[std::min(round, mus.size() - 1)], epsilon);
  };
}

std::optional<std::uint64_t> extracting_decode(const Vec& answer, const StewardConfig& config) {
  if (answer.empty()) return std::nullopt;
  for (std::size_t j = 1; j < answer.size(); ++j)
    if (answer[j] != Rat(0)) return std::nullopt;
  const Rat scaled = answer[0] * Rat::pow2(static_cast<long>(config.n)) / config.epsilon;
  if (!scaled.is_integer() || scaled < Rat(0)) return std::nullopt;
  const BigInt x = scaled.numerator();
  if (x >= (BigInt(1) << static_cast<mp_bitcnt_t>(config.n))) return std::nullopt;
  return x.get_ui();
}

Owner extracting_owner(const StewardConfig& config) {
  if (config.n > 62) throw std::invalid_argument("extracting_owner: n must be <= 62");
  return [config](std::size_t round, const std::vector<Vec>& history) {
    const std::size_t d = config.d;
    ConcentratedFn f;
    f.epsilon = config.epsilon;
    f.mu = Vec(d, Rat(0));
    if (round == 0) {
      const Rat scale = config.epsilon / Rat::pow2(static_cast<long>(config.n));
      f.delta = 0;
      f.oracle = [scale, d](const BitString& x) {
        Vec w(d, Rat(0));
        w[0] = scale * Rat(BigInt(x.to_uint()));
        return w;
      };
      return f;
    }
    std::optional<std::uint64_t> target;
    if (round == 1) target = extracting_decode(history[0], config);
    if (!target) {
      f.delta = 0;
      f.oracle = [d](const BitString&) { return Vec(d, Rat(0)); };
      return f;
    }
    const Rat spike = Rat(2) * config.error_bound();
    f.delta = Rat::pow2(-static_cast<long>(config.n));
    f.oracle = [spike, d, x_star = *target](const BitString& x) {
      Vec w(d, Rat(0));
      if (x.to_uint() == x_star) w[0] = spike;
      return w;
    };
    return f;
  };
}

Owner boundary_owner(const StewardConfig& config) {
  if (config.n > 62) throw std::invalid_argument("boundary_owner: n must be <= 62");
  return [config](std::size_t round, const std::vector<Vec>& history) {
    const std::size_t d = config.d;
    const Rat eps = config.epsilon;
    const Grid grid(config.cell_length());
    const Rat L = config.cell_length();
    Vec mu(d);
    for (std::size_t j = 0; j < d; ++j) {
      Rat anchor = history.empty() ? Rat(static_cast<long>(j)) * L : history.back()[j];
      BigInt cell = grid.interval_index(anchor) + static_cast<long>(1 + (round + j) % 2);
      // mu + 2 eps and mu + 4 eps straddle the boundary
      mu[j] = Rat(cell) * L - Rat(3) * eps;
    }
    const std::uint64_t size = std::uint64_t{1} << config.n;
    const std::uint64_t tail = tail_size(config.n, config.delta);
    const Rat far = Rat(4) * config.error_bound();
    const Rat denom = Rat(static_cast<long>(size > 1 ? size - 1 : 1));
    ConcentratedFn f;
    f.epsilon = eps;
    f.delta = config.delta;
    f.mu = mu;
    f.oracle = [mu, eps, far, denom, size, tail, round, d](const BitString& xb) {
      const std::uint64_t x = xb.to_uint();
      Vec w(d);
      for (std::size_t j = 0; j < d; ++j) {
        if (x >= size - tail) {
          w[j] = mu[j] + far;
          continue;
        }
        // an odd multiplier permutes {0,1}^n, spreading x over the window
        const std::uint64_t h = (x * (2 * (round + j) + 1) * 0x9E3779B1ull) & (size - 1);
        w[j] = mu[j] + eps * (Rat(2) * Rat(static_cast<unsigned long>(h)) / denom - Rat(1));
      }
      return w;
    };
    return f;
  };
}

ConcentratedFn random_concentrated_fn(std::size_t n, std::size_t d, const Rat& epsilon, const Rat& delta,
                                      std::mt19937_64& rng) {
  if (n > 20) throw std::invalid_argument("random_concentrated_fn: n must be <= 20");
  const std::uint64_t size = std::uint64_t{1} << n;
  std::uniform_int_distribution<long> center(-400, 400), noise(-32, 32), far(33, 400), coin(0, 1);
  Vec mu(d);
  for (auto& m : mu) m = epsilon * Rat(center(rng), 16);
  auto table = std::make_shared<std::vector<Vec>>(size, Vec(d));
  for (auto& row : *table)
    for (std::size_t j = 0; j < d; ++j) row[j] = mu[j] + epsilon * Rat(noise(rng), 32);
  std::vector<std::uint64_t> order(size);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const std::uint64_t tail = tail_size(n, delta);
  for (std::uint64_t i = 0; i < tail; ++i) {
    auto& row = (*table)[order[i]];
    const std::size_t j = static_cast<std::size_t>(rng() % d);
    row[j] = mu[j] + epsilon * Rat(far(rng) * (coin(rng) ? 1 : -1), 32);
  }
  ConcentratedFn f;
  f.oracle = [table](const BitString& x) { return (*table)[x.to_uint()]; };
  f.epsilon = epsilon;
  f.delta = delta;
  f.mu = mu;
  return f;
}

Owner nonadaptive_owner(std::vector<ConcentratedFn> fns) {
  if (fns.empty()) throw std::invalid_argument("nonadaptive_owner: need at least one function");
  return [fns = std::move(fns)](std::size_t round, const std::vector<Vec>&) {
    return fns[std::min(round, fns.size() - 1)];
  };
}

Rat exact_tail_probability(const ConcentratedFn& f, std::size_t n) {
  if (!f.mu) throw std::invalid_argument("exact_tail_probability: function has no declared mu");
  if (n > 24) throw std::invalid_argument("exact_tail_probability: n must be <= 24");
  std::uint64_t bad = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
    if (linf_distance(f.oracle(BitString::from_uint(x, n)), *f.mu) > f.epsilon) ++bad;
  return Rat(BigInt(bad), BigInt(1) << static_cast<mp_bitcnt_t>(n));
}

}  // namespace stewards
