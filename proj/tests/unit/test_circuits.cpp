#include <doctest.h>

#include "stewards/circuits.hpp"

using namespace stewards;

TEST_CASE("parse examples") {
  auto c = parse_circuit("x0 & ~x1", 2);
  REQUIRE(c.size() == 4);
  const auto& root = c.nodes()[c.root()];
  CHECK(root.op == Circuit::Op::And);
  CHECK(c.nodes()[root.left].op == Circuit::Op::Var);
  CHECK(c.nodes()[root.right].op == Circuit::Op::Not);
  CHECK(c.eval(0b01));
  CHECK_FALSE(c.eval(0b11));

  auto z = parse_circuit("x0 ^ x0", 1);
  CHECK(z.size() == 3);
  CHECK(exact_acceptance(z) == Rat(0));

  auto prec = parse_circuit("x0 | x1 ^ x2 & ~x3", 4);
  CHECK(prec.to_string() == "x0 | x1 ^ x2 & ~x3");
  CHECK(prec.nodes()[prec.root()].op == Circuit::Op::Or);
  CHECK(parse_circuit("(x0 | x1) & 1", 2).to_string() == "(x0 | x1) & 1");
  CHECK(parse_circuit("x0 ^ (x1 ^ x2)", 3).to_string() == "x0 ^ (x1 ^ x2)");
  CHECK(parse_circuit("(x0 ^ x1) ^ x2", 3).to_string() == "x0 ^ x1 ^ x2");
  CHECK(parse_circuit("~~x0", 1).to_string() == "~~x0");
  CHECK(parse_circuit("~(x0&x1)", 2).to_string() == "~(x0 & x1)");
}

TEST_CASE("parse errors carry positions") {
  auto pos = [](std::string_view text, std::size_t n) -> std::size_t {
    try {
      parse_circuit(text, n);
    } catch (const CircuitParseError& e) {
      return e.position();
    }
    return 999;
  };
  CHECK(pos("x3", 2) == 0);
  CHECK(pos("x0 & x12", 4) == 5);
  CHECK(pos("x0 &", 1) == 4);
  CHECK(pos("(x0", 1) == 3);
  CHECK(pos("x0 x1", 2) == 3);
  CHECK(pos("x", 2) == 1);
  CHECK(pos("2", 2) == 0);
  CHECK(pos("", 2) == 0);
}

TEST_CASE("print then parse is a fixpoint") {
  for (const char* text : {"x0 & ~x1 | x2", "~(x0 | x1) ^ (x2 & (x3 | 0))", "((x0))", "x0 & (x1 & x2)",
                           "~(~x0 ^ 1) | x1 & x2 ^ x3"}) {
    auto c = parse_circuit(text, 4);
    auto printed = c.to_string();
    auto again = parse_circuit(printed, 4);
    CHECK(again.to_string() == printed);
    for (std::uint64_t x = 0; x < 16; ++x) CHECK(c.eval(x) == again.eval(x));
  }
}

TEST_CASE("exact acceptance") {
  CHECK(exact_acceptance(parse_circuit("x0", 10)) == Rat(1, 2));
  CHECK(exact_acceptance(parse_circuit("x0 & x1 & x2", 3)) == Rat(1, 8));
  CHECK(exact_acceptance(parse_circuit("x0 | x1", 2)) == Rat(3, 4));
  CHECK(exact_acceptance(parse_circuit("1", 0)) == Rat(1));
}

TEST_CASE("acceptance session examples") {
  const Rat eps(1, 10), delta(1, 20);
  SeededSource src(6);
  AcceptanceSession s(10, 3, eps, delta, src);
  CHECK(s.estimate(parse_circuit("1", 10)) == Rat(1));
  Rat half = s.estimate(parse_circuit("x0", 10));
  CHECK((half - Rat(1, 2)).abs() <= eps);
  auto c3 = parse_circuit(half >= Rat(1, 2) ? "x0 & x1" : "x0 | x1", 10);
  Rat third = s.estimate(c3);
  CHECK((third - exact_acceptance(c3)).abs() <= eps);
  CHECK(s.oracle_queries() == 3 * s.plan().queries());
  CHECK(s.rounds_done() == 3);
  CHECK_THROWS_AS(s.estimate(parse_circuit("1", 10)), std::out_of_range);
  CHECK(src.budget().bits_drawn == s.steward().declared_bits());
}

TEST_CASE("promise-BPP runner") {
  SeededSource src(7);
  auto idle = run_promise_bpp_oracle_algorithm([](const DecisionAsk&) { return nlohmann::json("done"); }, 12, 4,
                                               Rat(1, 10), src);
  CHECK(idle.output == "done");
  CHECK(idle.queries == 0);
  CHECK(idle.bits == 0);

  // queries with acceptance 7/8 or 1/8 depending on a hidden bit
  std::vector<bool> hidden{true, false, true, true};
  auto outer = [&](const DecisionAsk& ask) {
    nlohmann::json out = nlohmann::json::array();
    for (bool h : hidden)
      out.push_back(ask([h](const BitString& coins) { return (coins.read_uint(0, 3) != 0) == h; }));
    return out;
  };
  auto run = run_promise_bpp_oracle_algorithm(outer, 12, 4, Rat(1, 10), src);
  CHECK(run.queries == 4);
  for (std::size_t i = 0; i < hidden.size(); ++i) CHECK(run.output[i] == hidden[i]);
  CHECK(run.bits == run.declared_bits);
}

TEST_CASE("APP runner") {
  SeededSource src(8);
  auto outer = [](const ValueAsk& ask) {
    nlohmann::json out = nlohmann::json::array();
    out.push_back(ask([](const BitString&) { return Rat(3, 10); }).str());
    out.push_back(ask([](const BitString& c) { return c.to_uint() % 3 == 0 ? Rat(5) : Rat(7, 10); }).str());
    return out;
  };
  const Rat eps(1, 10);
  auto run = run_app_oracle_algorithm(outer, 12, 2, eps, Rat(1, 10), src);
  CHECK(run.queries == 2);
  CHECK((Rat::parse(run.output[0].get<std::string>()) - Rat(3, 10)).abs() <= eps);
  CHECK((Rat::parse(run.output[1].get<std::string>()) - Rat(7, 10)).abs() <= eps);
  CHECK(run.bits == run.declared_bits);
}
