#include "stewards/extract.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "stewards/expander.hpp"

namespace stewards {

nlohmann::json ExtractorParams::to_json() const {
  return {{"kind", kind == ExtractorKind::Fresh ? "fresh" : "expander-walk"},
          {"s", s},
          {"deficit", deficit},
          {"beta", beta.str()},
          {"effective_deficit", effective_deficit},
          {"walk_len", walk_len},
          {"seed_len", seed_len}};
}

double walk_decay_per_step() { return -log2_of(GabberGalilGraph::lambda_hat()); }

ExtractorParams plan_extractor(std::size_t s, double deficit, const Rat& beta) {
  if (s < 1) throw std::invalid_argument("plan_extractor: s must be >= 1");
  if (deficit < 0) throw std::invalid_argument("plan_extractor: deficit must be >= 0");
  if (beta <= Rat(0) || beta > Rat(1)) throw std::invalid_argument("plan_extractor: beta must be in (0, 1]");

  ExtractorParams p;
  p.kind = ExtractorKind::ExpanderWalk;
  p.s = s;
  p.deficit = deficit;
  p.beta = beta;
  const double log_two_over_beta = log2_of(Rat(2) / beta);
  const double padding = (s % 2 == 1) ? 1.0 : 0.0;
  p.effective_deficit = deficit + log_two_over_beta + padding;

  const long double need = static_cast<long double>(p.effective_deficit) / 2 + log_two_over_beta + 1;
  const long double decay = walk_decay_per_step();
  auto len = static_cast<std::size_t>(std::ceil(need / decay));
  while (len > 0 && static_cast<long double>(len - 1) * decay >= need) --len;
  while (static_cast<long double>(len) * decay < need) ++len;
  p.walk_len = len;
  p.seed_len = 3 * len;
  return p;
}

ExtractorParams fresh_extractor(std::size_t s) {
  ExtractorParams p;
  p.kind = ExtractorKind::Fresh;
  p.s = s;
  p.beta = 0;
  p.seed_len = s;
  return p;
}

ExtractorParams walk_extractor(std::size_t s, std::size_t walk_len) {
  ExtractorParams p;
  p.kind = ExtractorKind::ExpanderWalk;
  p.s = s;
  p.walk_len = walk_len;
  p.seed_len = 3 * walk_len;
  return p;
}

BitString extract(const ExtractorParams& params, const BitString& x, const BitString& y) {
  if (x.size() != params.s)
    throw std::invalid_argument("extract: source has " + std::to_string(x.size()) + " bits, expected " +
                                std::to_string(params.s));
  if (y.size() != params.seed_len)
    throw std::invalid_argument("extract: seed has " + std::to_string(y.size()) + " bits, expected " +
                                std::to_string(params.seed_len));
  if (params.kind == ExtractorKind::Fresh) return y;
  WideVertex v = WideVertex::embed(x);
  v.walk(y);
  return v.decode(params.s);
}

namespace {

template <std::size_t W>
struct FixedUInt {
  std::array<std::uint64_t, W> w{};

  void add(const FixedUInt& o) {
    unsigned __int128 carry = 0;
    for (std::size_t i = 0; i < W; ++i) {
      carry += static_cast<unsigned __int128>(w[i]) + o.w[i];
      w[i] = static_cast<std::uint64_t>(carry);
      carry >>= 64;
    }
  }

  BigInt to_big() const {
    BigInt out = 0;
    for (std::size_t i = W; i-- > 0;) {
      out <<= 64;
      out += BigInt(w[i]);
    }
    return out;
  }
};

template <std::size_t W>
std::vector<BigInt> propagate_fixed(const std::vector<std::uint32_t>& table, std::size_t vertex_count,
                                    std::size_t out_count, std::span<const std::uint64_t> weights,
                                    std::size_t walk_len) {
  std::vector<FixedUInt<W>> cur(vertex_count), next(vertex_count);
  for (std::size_t i = 0; i < weights.size(); ++i) cur[i].w[0] = weights[i];
  for (std::size_t step = 0; step < walk_len; ++step) {
    for (std::size_t v = 0; v < vertex_count; ++v) {
      FixedUInt<W> acc;
      // The label set is closed under inverses, so gathering along forward
      // labels equals scattering along them.
      const std::uint32_t* nb = &table[v * GabberGalilGraph::kDegree];
      for (unsigned l = 0; l < GabberGalilGraph::kDegree; ++l) acc.add(cur[nb[l]]);
      next[v] = acc;
    }
    cur.swap(next);
  }
  std::vector<FixedUInt<W>> folded(out_count);
  for (std::size_t v = 0; v < vertex_count; ++v) folded[v % out_count].add(cur[v]);
  std::vector<BigInt> out(out_count);
  for (std::size_t i = 0; i < out_count; ++i) out[i] = folded[i].to_big();
  return out;
}

}  // namespace

WalkPropagator::WalkPropagator(std::size_t s) : s_(s), vertex_bits_(2 * ((s + 1) / 2)) {
  if (s == 0 || s > 24) throw std::invalid_argument("WalkPropagator: s must be in [1, 24]");
  table_ = GabberGalilGraph(std::uint64_t{1} << (vertex_bits_ / 2)).neighbor_table();
}

std::vector<BigInt> WalkPropagator::propagate(std::span<const std::uint64_t> weights, std::size_t walk_len) const {
  const std::size_t out_count = std::size_t{1} << s_;
  if (weights.size() != out_count) throw std::invalid_argument("WalkPropagator: weights must have 2^s entries");
  const std::size_t vertex_count = std::size_t{1} << vertex_bits_;
  long double total = 0;
  for (auto w : weights) total += static_cast<long double>(w);
  const double bits_needed = (total > 0 ? std::log2(static_cast<double>(total)) : 0) + 3.0 * walk_len + 2;
  if (bits_needed <= 64) return propagate_fixed<1>(table_, vertex_count, out_count, weights, walk_len);
  if (bits_needed <= 128) return propagate_fixed<2>(table_, vertex_count, out_count, weights, walk_len);
  if (bits_needed <= 192) return propagate_fixed<3>(table_, vertex_count, out_count, weights, walk_len);
  if (bits_needed <= 256) return propagate_fixed<4>(table_, vertex_count, out_count, weights, walk_len);
  if (bits_needed <= 384) return propagate_fixed<6>(table_, vertex_count, out_count, weights, walk_len);
  if (bits_needed <= 512) return propagate_fixed<8>(table_, vertex_count, out_count, weights, walk_len);
  throw std::length_error("WalkPropagator: walk too long for exact propagation");
}

Rat tv_to_uniform(std::span<const BigInt> counts) {
  if (counts.empty()) throw std::invalid_argument("tv_to_uniform: empty distribution");
  BigInt total = 0;
  for (const auto& c : counts) total += c;
  if (total == 0) throw std::invalid_argument("tv_to_uniform: zero total mass");
  const BigInt n = static_cast<unsigned long>(counts.size());
  // TV = sum over outcomes of max(0, 1/N - c/T) = sum max(0, T - N c) / (N T).
  BigInt deficit = 0;
  for (const auto& c : counts) {
    BigInt gap = total - n * c;
    if (gap > 0) deficit += gap;
  }
  return Rat(deficit, BigInt(n * total));
}

}  // namespace stewards
