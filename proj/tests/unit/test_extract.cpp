#include <doctest.h>

#include <cmath>
#include <map>
#include <algorithm>
#include <random>
#include <set>

#include "stewards/expander.hpp"
#include "stewards/extract.hpp"

using namespace stewards;

namespace {

// Independent oracle for the walk length: smallest l with
// lambda^l * 2^(t'/2) <= beta/4, evaluated in long double directly.
std::size_t oracle_walk_len(std::size_t s, double t, double beta) {
  long double tp = t + std::log2(2.0L / beta) + (s % 2);
  long double lambda = 0.884L;
  std::size_t l = 0;
  while (std::pow(lambda, static_cast<long double>(l)) * std::pow(2.0L, tp / 2) > beta / 4.0L) ++l;
  return l;
}

// Brute force: every seed of a short walk, from every support point.
std::vector<BigInt> brute_counts(std::size_t s, const std::vector<std::uint64_t>& support, std::size_t len) {
  auto params = walk_extractor(s, len);
  std::vector<BigInt> counts(std::size_t{1} << s, 0);
  for (auto x : support)
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << (3 * len)); ++y)
      counts[extract(params, BitString::from_uint(x, s), BitString::from_uint(y, 3 * len)).to_uint()] += 1;
  return counts;
}

}  // namespace

TEST_CASE("plan_extractor matches the closed-form bound") {
  auto p = plan_extractor(8, 0, Rat(1));
  CHECK(p.walk_len == oracle_walk_len(8, 0, 1.0));
  CHECK(p.walk_len == 15);
  CHECK(p.seed_len == 45);
  auto q = plan_extractor(12, 4, Rat(1, 8));
  CHECK(q.walk_len == oracle_walk_len(12, 4, 0.125));
  CHECK(q.effective_deficit == doctest::Approx(8.0));
  CHECK(plan_extractor(9, 2, Rat(1, 4)).walk_len == oracle_walk_len(9, 2, 0.25));
  for (std::size_t s : {4, 7, 12}) {
    for (double t : {0.0, 1.0, 3.5}) {
      Rat beta(1, 4);
      auto a = plan_extractor(s, t, beta);
      auto b = plan_extractor(s, t, beta / Rat(2));
      CHECK(b.walk_len >= a.walk_len);
      CHECK(a.seed_len == 3 * a.walk_len);
      long double decay = walk_decay_per_step();
      long double need = a.effective_deficit / 2 + 3 + 1;
      CHECK(a.walk_len * decay >= need);
      CHECK((a.walk_len - 1) * decay < need);
    }
  }
  CHECK_THROWS(plan_extractor(0, 1, Rat(1)));
  CHECK_THROWS(plan_extractor(4, 1, Rat(0)));
  CHECK_THROWS(plan_extractor(4, -1, Rat(1, 2)));
}

TEST_CASE("extract examples") {
  auto zero = walk_extractor(8, 0);
  auto x = BitString::from_string("10110010");
  CHECK(extract(zero, x, BitString()) == x);
  auto fresh = fresh_extractor(8);
  CHECK(extract(fresh, BitString::from_string("00000000"), BitString::from_string("10101010")) ==
        BitString::from_string("10101010"));
  auto p = plan_extractor(8, 1, Rat(1, 2));
  CHECK_THROWS(extract(p, BitString(7), BitString(p.seed_len)));
  CHECK_THROWS(extract(p, BitString(8), BitString(p.seed_len + 1)));
}

TEST_CASE("fixed seed is injective for even s") {
  std::mt19937_64 rng(5);
  for (std::size_t s : {2, 6, 10, 16}) {
    auto p = walk_extractor(s, 9);
    for (int trial = 0; trial < 3; ++trial) {
      BitString y(p.seed_len);
      for (std::size_t i = 0; i < y.size(); ++i) y.set(i, rng() & 1);
      std::set<std::uint64_t> image;
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << s); ++x)
        image.insert(extract(p, BitString::from_uint(x, s), y).to_uint());
      CHECK(image.size() == (std::size_t{1} << s));
    }
  }
}

TEST_CASE("propagator equals brute-force seed enumeration") {
  std::mt19937_64 rng(17);
  for (std::size_t s : {4, 5, 8}) {
    WalkPropagator prop(s);
    for (std::size_t len : {0, 1, 3}) {
      std::vector<std::uint64_t> support;
      std::vector<std::uint64_t> weights(std::size_t{1} << s, 0);
      for (std::uint64_t x = 0; x < weights.size(); ++x)
        if (rng() % 3 == 0) {
          support.push_back(x);
          weights[x] = 1;
        }
      CHECK(prop.propagate(weights, len) == brute_counts(s, support, len));
    }
  }
}

TEST_CASE("uniform input stays uniform") {
  WalkPropagator prop(7);
  std::vector<std::uint64_t> w(128, 1);
  auto counts = prop.propagate(w, 20);
  CHECK(tv_to_uniform(counts) == Rat(0));
}

TEST_CASE("tv_to_uniform") {
  std::vector<BigInt> point{4, 0, 0, 0};
  CHECK(tv_to_uniform(point) == Rat(3, 4));
  std::vector<BigInt> half{1, 1, 0, 0};
  CHECK(tv_to_uniform(half) == Rat(1, 2));
  std::vector<BigInt> empty_mass{0, 0};
  CHECK_THROWS(tv_to_uniform(empty_mass));
}

TEST_CASE("32-element source at s=8, t=3, beta=1/4") {
  auto p = plan_extractor(8, 3, Rat(1, 4));
  std::mt19937_64 rng(23);
  std::vector<std::uint64_t> idx(256);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<std::uint64_t> w(256, 0);
  for (int i = 0; i < 32; ++i) w[idx[i]] = 1;
  auto counts = WalkPropagator(8).propagate(w, p.walk_len);
  CHECK(tv_to_uniform(counts) <= Rat(1, 4));
}

TEST_CASE("average-case form with side information") {
  // V = low c bits of X, X uniform on a random set of size 2^(s-t)
  // restricted so that V keeps its entropy; check TV((V,Ext),(V,U)).
  std::mt19937_64 rng(29);
  for (std::size_t s : {8, 10}) {
    for (std::size_t t : {1, 2}) {
      auto p = plan_extractor(s, static_cast<double>(t), Rat(1, 4));
      WalkPropagator prop(s);
      for (std::size_t c = 1; c <= t; ++c) {
        std::vector<std::uint64_t> all(std::size_t{1} << s);
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<std::uint64_t> support(all.begin(), all.begin() + (std::ptrdiff_t{1} << (s - t)));
        std::map<std::uint64_t, std::vector<std::uint64_t>> by_v;
        for (auto x : support) by_v[x & ((1u << c) - 1)].push_back(x);
        Rat tv = 0;
        for (const auto& [v, xs] : by_v) {
          std::vector<std::uint64_t> w(std::size_t{1} << s, 0);
          for (auto x : xs) w[x] = 1;
          Rat pv(static_cast<long>(xs.size()), static_cast<long>(support.size()));
          tv += pv * tv_to_uniform(prop.propagate(w, p.walk_len));
        }
        CHECK(tv <= Rat(1, 4));
      }
    }
  }
}
