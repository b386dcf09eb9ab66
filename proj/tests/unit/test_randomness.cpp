#include <doctest.h>

#include "stewards/randomness.hpp"

using namespace stewards;

TEST_CASE("tape draws are counted") {
  TapeSource t(BitString::from_string("101"));
  CHECK(t.draw_bits(2).to_string() == "10");
  CHECK(t.budget().bits_drawn == 2);
  CHECK(t.draw_bits(0).empty());
  CHECK(t.budget().bits_drawn == 2);
}

TEST_CASE("exhausted tape names phase and shortfall") {
  TapeSource t(BitString::from_string("1"));
  t.set_phase("seed");
  try {
    t.draw_bits(2);
    FAIL("expected exhaustion");
  } catch (const BitsExhaustedError& e) {
    CHECK(e.phase() == "seed");
    CHECK(e.shortfall() == 1);
  }
}

TEST_CASE("uniform power of two draws") {
  TapeSource t(BitString::from_string("011"));
  CHECK(t.draw_uniform_power_of_two(1) == 1);
  CHECK(t.budget().bits_drawn == 0);
  // little-endian "011" is 6, plus one
  CHECK(t.draw_uniform_power_of_two(8) == 7);
  CHECK(t.budget().bits_drawn == 3);
  CHECK_THROWS_AS(t.draw_uniform_power_of_two(6), std::invalid_argument);
}

TEST_CASE("phase accounting sums to total") {
  SeededSource s(42);
  {
    PhaseScope p(s, "a");
    s.draw_bits(10);
  }
  s.draw_bits(5);
  {
    PhaseScope p(s, "b");
    s.draw_bits(70);
  }
  std::uint64_t sum = 0;
  for (const auto& [k, v] : s.budget().per_phase) sum += v;
  CHECK(sum == s.budget().bits_drawn);
  CHECK(s.budget().per_phase.at("a") == 10);
  CHECK(s.budget().per_phase.at("default") == 5);
  CHECK(s.budget().to_json()["bits_drawn"] == 85);
}

TEST_CASE("seeded sources replay") {
  SeededSource a(9, 3), b(9, 3), c(9, 4);
  auto x = a.draw_bits(200);
  CHECK(x == b.draw_bits(200));
  CHECK(x != c.draw_bits(200));
}
