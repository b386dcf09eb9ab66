#include <doctest.h>

#include "stewards/fourier.hpp"

using namespace stewards;

namespace {

BooleanFunction parity(std::size_t n, std::uint64_t s) {
  return BooleanFunction::from_callback(n, [s](std::uint64_t x) { return std::popcount(x & s) % 2 ? -1 : 1; });
}

BooleanFunction maj3() {
  return BooleanFunction::from_callback(3, [](std::uint64_t x) { return std::popcount(x) >= 2 ? -1 : 1; });
}

}  // namespace

TEST_CASE("spectra of small functions") {
  auto s = wht(parity(4, 0b1010));
  for (std::uint64_t u = 0; u < 16; ++u) CHECK(s.coefficient(u) == (u == 0b1010 ? Rat(1) : Rat(0)));

  auto one = wht(BooleanFunction::from_callback(3, [](std::uint64_t) { return 1; }));
  CHECK(one.coefficient(0) == Rat(1));
  CHECK(one.heavy(Rat(1, 2)) == std::vector<std::uint64_t>{0});

  auto m = wht(maj3());
  for (std::uint64_t u = 0; u < 8; ++u) {
    Rat expect = 0;
    if (std::popcount(u) == 1) expect = Rat(1, 2);
    if (u == 7) expect = Rat(-1, 2);
    CHECK(m.coefficient(u) == expect);
  }
  CHECK(m.heavy(Rat(2, 5)) == std::vector<std::uint64_t>{1, 2, 4, 7});
}

TEST_CASE("transform is an involution up to scale and Parseval holds") {
  std::vector<std::int8_t> vals(64);
  std::uint64_t state = 12345;
  for (auto& v : vals) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    v = (state >> 63) ? -1 : 1;
  }
  auto f = BooleanFunction::from_table(6, vals);
  auto s = wht(f);
  std::vector<std::int64_t> twice = s.sums;
  wht_in_place(twice);
  for (std::size_t x = 0; x < 64; ++x) CHECK(twice[x] == 64 * vals[x]);
  Rat total = 0;
  for (std::uint64_t u = 0; u < 64; ++u) total += s.coefficient(u) * s.coefficient(u);
  CHECK(total == Rat(1));
  CHECK(s.prefix_weight("") == Rat(1));
  CHECK(s.prefix_weight("0") + s.prefix_weight("1") == Rat(1));
  CHECK_THROWS(BooleanFunction::from_table(2, {1, 1, 1}));
  CHECK_THROWS(BooleanFunction::from_table(1, {1, 0}));
}

TEST_CASE("estimate_w examples") {
  auto chi1 = parity(2, 0b01);
  auto s = wht(chi1);
  CHECK(s.prefix_weight("10") == Rat(1));
  CHECK(s.prefix_weight("01") == Rat(0));
  const Rat eps(1, 10), delta(1, 100);
  for (const std::string x : {"", "1", "0", "10", "01", "11"}) {
    SeededSource src(9);
    std::uint64_t fq = 0;
    Rat w = estimate_w(chi1, x, eps, delta, src, &fq);
    CHECK((w - s.prefix_weight(x)).abs() <= eps);
    auto plan = plan_estimate_w(2, x.size(), eps, delta);
    CHECK(fq == 2 * plan.queries());
    CHECK(src.budget().bits_drawn == plan.bits());
  }
}

TEST_CASE("estimate_w is unbiased over all seeds in independent mode") {
  auto f = maj3();
  auto s = wht(f);
  SamplerPlan plan;
  plan.n = 4;  // n + |x| with |x| = 1
  plan.t0 = 4;
  plan.r = 1;
  plan.mode = SamplerMode::IndependentSeeds;
  for (const std::string x : {"0", "1"}) {
    Rat sum = 0;
    for (std::uint64_t seed = 0; seed < 256; ++seed) sum += estimate_w(f, x, plan, BitString::from_uint(seed, 8));
    CHECK(sum / Rat(256) == s.prefix_weight(x));
  }
}

TEST_CASE("GL parameters") {
  auto p = plan_gl(8, Rat(1, 2), Rat(1, 10));
  CHECK(p.u == 1);
  CHECK(p.k == 8);
  CHECK(p.d == 32);
  CHECK(p.epsilon == Rat(1, 4) / Rat(4 * 101));
  CHECK(p.estimate_delta == Rat(1, 10) / Rat(2 * 32 * 8));
  CHECK(p.gamma == Rat(1, 20));
  auto q = plan_gl(9, Rat(1, 4), Rat(1, 10));
  CHECK(q.u == 2);
  CHECK(q.k == 5);
  CHECK(q.d == 256);
  CHECK(q.prefix_len(5) == 9);
  CHECK(q.prefix_len(1) == 2);
  auto clamped = plan_gl(4, Rat(3, 4), Rat(1, 10));
  CHECK(clamped.u == 1);
  CHECK_THROWS(plan_gl(4, Rat(1, 16), Rat(1, 10)));
}

TEST_CASE("GL examples") {
  const Rat delta(1, 10);
  {
    auto f = parity(4, 0b0110);
    SeededSource src(1);
    auto r = goldreich_levin(f, plan_gl(4, Rat(1, 2), delta), src);
    CHECK_FALSE(r.failed);
    CHECK(r.subsets == std::vector<std::uint64_t>{0b0110});
  }
  {
    SeededSource src(2);
    auto r = goldreich_levin(maj3(), plan_gl(3, Rat(2, 5), delta), src);
    CHECK_FALSE(r.failed);
    CHECK(r.subsets == std::vector<std::uint64_t>{1, 2, 4, 7});
    CHECK(r.list_sizes.size() == 3);
  }
  {
    SeededSource src(3);
    auto one = BooleanFunction::from_callback(3, [](std::uint64_t) { return 1; });
    auto r = goldreich_levin(one, plan_gl(3, Rat(1, 2), delta), src);
    CHECK(r.subsets == std::vector<std::uint64_t>{0});
  }
}

TEST_CASE("GL draws what the audit predicts") {
  auto f = parity(5, 0b10001);
  for (auto kind : {StewardKind::Main, StewardKind::NaiveFresh}) {
    auto p = plan_gl(5, Rat(1, 2), Rat(1, 10), kind);
    SeededSource src(4);
    auto r = goldreich_levin(f, p, src);
    CHECK(r.subsets == std::vector<std::uint64_t>{0b10001});
    CHECK(src.budget().bits_drawn == gl_randomness_audit(p).bits_drawn);
  }
}

TEST_CASE("truth-table format") {
  auto f = BooleanFunction::parse_truth_table("n=3\n 8e\n");
  // first digit holds inputs 0..3, least significant bit first
  for (std::uint64_t x = 0; x < 8; ++x) CHECK(f(x) == maj3()(x));
  CHECK(f.to_truth_table() == "n=3\n8e\n");
  auto round = BooleanFunction::parse_truth_table(f.to_truth_table());
  CHECK(round.table() == f.table());
  auto g = BooleanFunction::parse_truth_table("n=1\n2\n");
  CHECK(g(0) == 1);
  CHECK(g(1) == -1);
  CHECK_THROWS(BooleanFunction::parse_truth_table("n=3\ne\n"));
  CHECK_THROWS(BooleanFunction::parse_truth_table("n=3\n8e 0\n"));
  CHECK_THROWS(BooleanFunction::parse_truth_table("3\n8e\n"));
  CHECK_THROWS(BooleanFunction::parse_truth_table("n=1\n4\n"));
  CHECK_THROWS(BooleanFunction::parse_truth_table("n=3\nzz\n"));
}
