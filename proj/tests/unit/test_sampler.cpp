#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "stewards/sampler.hpp"

using namespace stewards;

TEST_CASE("smallest irreducible polynomials") {
  CHECK(find_irreducible(2) == 0b111);
  CHECK(find_irreducible(3) == 0b1011);
  CHECK(find_irreducible(4) == 0b10011);
  CHECK(find_irreducible(8) == 0x11B);
  CHECK_FALSE(is_irreducible(0b10101, 4));  // (x^2 + x + 1)^2
  CHECK_FALSE(is_irreducible(0b11, 2));
}

TEST_CASE("field axioms by enumeration") {
  for (unsigned deg : {1u, 3u, 5u, 8u}) {
    GF2Field f(deg);
    const std::uint64_t q = std::uint64_t{1} << deg;
    for (std::uint64_t a = 1; a < q; ++a) {
      std::size_t inverses = 0;
      for (std::uint64_t b = 1; b < q; ++b) {
        CHECK(f.mul(a, b) == f.mul(b, a));
        if (f.mul(a, b) == 1) ++inverses;
      }
      CHECK(inverses == 1);
    }
  }
  GF2Field big(61);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    std::uint64_t a = rng() >> 3, b = rng() >> 3, c = rng() >> 3;
    CHECK(big.mul(big.mul(a, b), c) == big.mul(a, big.mul(b, c)));
    CHECK(big.mul(a, b ^ c) == (big.mul(a, b) ^ big.mul(a, c)));
  }
}

TEST_CASE("batch points are pairwise independent") {
  for (std::size_t n : {2, 3, 4}) {
    SamplerPlan plan;
    plan.n = n;
    plan.t0 = std::uint64_t{1} << n;
    plan.r = 1;
    plan.mode = SamplerMode::IndependentSeeds;
    const std::uint64_t q = std::uint64_t{1} << n;
    // record the point sequence of every seed
    std::vector<std::vector<std::uint64_t>> seqs;
    for (std::uint64_t s = 0; s < q * q; ++s) {
      std::vector<std::uint64_t> pts;
      sample_mean(plan, [&](std::uint64_t x) { pts.push_back(x); return false; }, BitString::from_uint(s, 2 * n));
      seqs.push_back(pts);
    }
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j) {
        if (i == j) continue;
        std::map<std::pair<std::uint64_t, std::uint64_t>, int> joint;
        for (const auto& pts : seqs) joint[{pts[i], pts[j]}]++;
        CHECK(joint.size() == q * q);
        for (const auto& [pair, count] : joint) CHECK(count == 1);
      }
  }
}

TEST_CASE("sample_mean constants and accounting") {
  auto plan = plan_sampler(16, Rat(1, 10), Rat(1, 100));
  CHECK(plan.t0 == 1000);
  CHECK(plan.r == 54);
  CHECK_FALSE(plan.full_domain);
  CHECK(plan.bits() == 32 + 3 * 53);
  SeededSource src(1);
  std::uint64_t queries = 0;
  CHECK(sample_mean(plan, [](std::uint64_t) { return true; }, src, &queries) == Rat(1));
  CHECK(queries == 54000);
  CHECK(sample_mean(plan, [](std::uint64_t) { return false; }, src) == Rat(0));
  CHECK(src.budget().bits_drawn == 2 * plan.bits());
  auto ind = plan_sampler(16, Rat(1, 10), Rat(1, 100), SamplerMode::IndependentSeeds);
  CHECK(ind.bits() == 32 * 54);
}

TEST_CASE("full-domain plans") {
  auto plan = plan_sampler(8, Rat(1, 10), Rat(1, 100));
  CHECK(plan.full_domain);
  CHECK(plan.t0 == 256);
  CHECK(plan.r == 1);
  CHECK(plan.bits() == 16);
  // every seed with b != 0 gives the exact mean
  auto c = [](std::uint64_t x) { return (x % 3) == 0; };
  for (std::uint64_t s = 0; s < (1u << 16); s += 97) {
    Rat est = sample_mean(plan, c, BitString::from_uint(s, 16));
    if ((s >> 8) != 0) CHECK(est == Rat(86, 256));
  }
  auto tight = plan_sampler(4, Rat(1, 10), Rat(1, 1000));
  CHECK(tight.r % 2 == 1);
  CHECK(tight.r > 1);
}

TEST_CASE("first-bit failure rate") {
  const Rat eps(1, 10), delta(1, 100);
  for (std::size_t n : {8, 14}) {
    auto plan = plan_sampler(n, eps, delta);
    std::size_t fails = 0;
    const int trials = n == 8 ? 10000 : 300;
    for (int t = 0; t < trials; ++t) {
      SeededSource src(77, t);
      Rat est = sample_mean(plan, [](std::uint64_t x) { return x & 1; }, src);
      if ((est - Rat(1, 2)).abs() > eps) ++fails;
    }
    CHECK(static_cast<double>(fails) / trials <= delta.to_double());
  }
}

TEST_CASE("lower median") {
  CHECK(lower_median({Rat(3), Rat(1), Rat(2), Rat(4)}) == Rat(2));
  CHECK(lower_median({Rat(5)}) == Rat(5));
  CHECK_THROWS(lower_median({}));
}

TEST_CASE("averaging sampler") {
  auto one = averaging_plan_with_length(10, 1);
  CHECK(one.seed_bits() == 10);
  TapeSource tape(BitString::from_string("1011001110"));
  auto pts = averaging_sample(one, tape);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0] == BitString::from_string("1011001110"));

  auto plan = plan_averaging_sampler(10, Rat(1, 10), Rat(1, 20));
  CHECK(plan.seed_bits() == 10 + 3 * (plan.t - 1));
  SeededSource a(5), b(5);
  CHECK(averaging_sample(plan, a) == averaging_sample(plan, b));

  // density-1/2 set given by a fixed pseudo-random labelling
  std::vector<bool> in_set(1024);
  std::vector<std::size_t> idx(1024);
  for (std::size_t i = 0; i < 1024; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), std::mt19937_64(3));
  for (std::size_t i = 0; i < 512; ++i) in_set[idx[i]] = true;
  std::size_t fails = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    SeededSource src(8, t);
    auto points = averaging_sample(plan, src);
    std::size_t hits = 0;
    for (const auto& p : points) hits += in_set[p.to_uint()];
    double avg = static_cast<double>(hits) / points.size();
    if (std::abs(avg - 0.5) > 0.1) ++fails;
  }
  CHECK(static_cast<double>(fails) / trials <= 0.05);
}

TEST_CASE("median and APP amplification") {
  auto plan = averaging_plan_with_length(8, 4);
  SeededSource src(2);
  CHECK(median_amplify([](const BitString&) { return Rat(3, 7); }, plan, src) == Rat(3, 7));

  const Rat delta(1, 50);
  auto phi_const = app_amplify([](const BitString&) { return Rat(1, 3); }, 12, delta);
  SeededSource s2(3);
  CHECK(phi_const(s2) == Rat(1, 3));
  CHECK(s2.budget().bits_drawn == phi_const.seed_bits());

  // wrong (far away) on a third of the coins
  auto phi = app_amplify([](const BitString& c) { return c.to_uint() % 3 == 0 ? Rat(100) : Rat(1, 2); }, 12, delta);
  std::size_t fails = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    SeededSource s(4, t);
    if (phi(s) != Rat(1, 2)) ++fails;
  }
  CHECK(static_cast<double>(fails) / trials <= delta.to_double());

  // f at mu except on a 0.1 fraction
  auto f = [](const BitString& x) { return x.to_uint() % 10 == 0 ? Rat(-5) : Rat(2); };
  auto p = plan_averaging_sampler(12, Rat(1, 10), delta);
  fails = 0;
  for (int t = 0; t < trials; ++t) {
    SeededSource s(5, t);
    if (median_amplify(f, p, s) != Rat(2)) ++fails;
  }
  CHECK(static_cast<double>(fails) / trials <= delta.to_double());
}
