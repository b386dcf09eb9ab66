#include "stewards/circuits.hpp"

#include <cctype>

namespace stewards {

class CircuitBuilder {
 public:
  CircuitBuilder(std::string_view text, std::size_t n) : text_(text) { c_.n_ = n; }

  Circuit build() {
    c_.root_ = parse_or();
    skip();
    if (pos_ != text_.size()) throw CircuitParseError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return std::move(c_);
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char ch) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::int32_t push(Circuit::Node node) {
    c_.nodes_.push_back(node);
    return static_cast<std::int32_t>(c_.nodes_.size() - 1);
  }
  std::int32_t parse_or() {
    std::int32_t left = parse_xor();
    while (accept('|')) left = push({Circuit::Op::Or, 0, left, parse_xor()});
    return left;
  }
  std::int32_t parse_xor() {
    std::int32_t left = parse_and();
    while (accept('^')) left = push({Circuit::Op::Xor, 0, left, parse_and()});
    return left;
  }
  std::int32_t parse_and() {
    std::int32_t left = parse_unary();
    while (accept('&')) left = push({Circuit::Op::And, 0, left, parse_unary()});
    return left;
  }
  std::int32_t parse_unary() {
    skip();
    if (pos_ >= text_.size()) throw CircuitParseError(pos_, "unexpected end of expression");
    const std::size_t start = pos_;
    const char ch = text_[pos_];
    if (ch == '~') {
      ++pos_;
      return push({Circuit::Op::Not, 0, parse_unary(), -1});
    }
    if (ch == '(') {
      ++pos_;
      std::int32_t inner = parse_or();
      if (!accept(')')) throw CircuitParseError(pos_, "expected ')'");
      return inner;
    }
    if (ch == '0' || ch == '1') {
      ++pos_;
      return push({Circuit::Op::Const, static_cast<std::uint32_t>(ch - '0'), -1, -1});
    }
    if (ch == 'x') {
      ++pos_;
      std::size_t digits = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (digits == pos_) throw CircuitParseError(pos_, "expected a variable index after 'x'");
      if (pos_ - digits > 9) throw CircuitParseError(start, "variable index too large");
      const auto index = std::stoul(std::string(text_.substr(digits, pos_ - digits)));
      if (index >= c_.n_)
        throw CircuitParseError(start, "variable x" + std::to_string(index) + " out of range for n = " +
                                           std::to_string(c_.n_));
      return push({Circuit::Op::Var, static_cast<std::uint32_t>(index), -1, -1});
    }
    throw CircuitParseError(start, std::string("unexpected '") + ch + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Circuit c_;
};

Circuit parse_circuit(std::string_view text, std::size_t n) {
  if (n > 64) throw std::invalid_argument("parse_circuit: n must be <= 64");
  return CircuitBuilder(text, n).build();
}

bool Circuit::eval(std::uint64_t x) const {
  // Children always precede parents, so one forward pass suffices.
  thread_local std::vector<std::uint8_t> val;
  val.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& nd = nodes_[i];
    switch (nd.op) {
      case Op::Var: val[i] = (x >> nd.value) & 1u; break;
      case Op::Const: val[i] = static_cast<std::uint8_t>(nd.value); break;
      case Op::Not: val[i] = !val[nd.left]; break;
      case Op::And: val[i] = val[nd.left] & val[nd.right]; break;
      case Op::Xor: val[i] = val[nd.left] ^ val[nd.right]; break;
      case Op::Or: val[i] = val[nd.left] | val[nd.right]; break;
    }
  }
  return val[root_];
}

bool Circuit::eval(const BitString& x) const {
  if (x.size() != n_) throw std::invalid_argument("Circuit::eval: input must have n bits");
  return eval(x.to_uint());
}

namespace {

int precedence(Circuit::Op op) {
  switch (op) {
    case Circuit::Op::Or: return 1;
    case Circuit::Op::Xor: return 2;
    case Circuit::Op::And: return 3;
    default: return 4;
  }
}

std::string render(const Circuit& c, std::int32_t id) {
  const auto& nd = c.nodes()[id];
  switch (nd.op) {
    case Circuit::Op::Var: return "x" + std::to_string(nd.value);
    case Circuit::Op::Const: return std::to_string(nd.value);
    case Circuit::Op::Not: {
      std::string inner = render(c, nd.left);
      return precedence(c.nodes()[nd.left].op) < 4 ? "~(" + inner + ")" : "~" + inner;
    }
    default: {
      const int p = precedence(nd.op);
      std::string l = render(c, nd.left), r = render(c, nd.right);
      if (precedence(c.nodes()[nd.left].op) < p) l = "(" + l + ")";
      if (precedence(c.nodes()[nd.right].op) <= p) r = "(" + r + ")";
      const char* sym = nd.op == Circuit::Op::And ? " & " : (nd.op == Circuit::Op::Xor ? " ^ " : " | ");
      return l + sym + r;
    }
  }
}

}  // namespace

std::string Circuit::to_string() const { return render(*this, root_); }

Rat exact_acceptance(const Circuit& c) {
  if (c.n() > 24) throw std::invalid_argument("exact_acceptance: n must be <= 24");
  std::uint64_t ones = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << c.n()); ++x) ones += c.eval(x);
  return Rat(BigInt(ones), BigInt(1) << static_cast<mp_bitcnt_t>(c.n()));
}

namespace {

StewardConfig acceptance_config(const SamplerPlan& plan, std::size_t k, const Rat& epsilon, const Rat& delta) {
  StewardConfig c;
  c.n = plan.bits();
  c.k = k;
  c.d = 1;
  c.epsilon = epsilon / Rat(8);
  c.delta = delta / Rat(static_cast<long>(2 * k));
  c.gamma = delta / Rat(2);
  return c;
}

}  // namespace

AcceptanceSession::AcceptanceSession(std::size_t n, std::size_t k, const Rat& epsilon, const Rat& delta,
                                     BitSource& source, StewardKind steward)
    : n_(n),
      plan_(plan_sampler(n, epsilon / Rat(8), delta / Rat(static_cast<long>(2 * k)))),
      session_(acceptance_config(plan_, k, epsilon, delta), steward, source) {}

Rat AcceptanceSession::estimate(const Circuit& c, std::optional<Rat> mu) {
  if (c.n() != n_) throw std::invalid_argument("acceptance session: circuit arity does not match n");
  const std::uint64_t before = queries_;
  Rat y = estimate([&](std::uint64_t x) { return c.eval(x); }, std::move(mu));
  node_evals_ += (queries_ - before) * c.size();
  return y;
}

Rat AcceptanceSession::estimate(const PointOracle& c, std::optional<Rat> mu) {
  ConcentratedFn f;
  f.epsilon = session_.config().epsilon;
  f.delta = session_.config().delta;
  f.oracle = [&](const BitString& x) { return Vec{sample_mean(plan_, c, x, &queries_)}; };
  if (mu) f.mu = Vec{*mu};
  Vec y = session_.answer(f);
  return min(Rat(1), max(Rat(0), y[0]));
}

nlohmann::json AcceptanceSession::to_json() const {
  return {{"sampler", plan_.to_json()},
          {"oracle_queries", queries_},
          {"circuit_node_evaluations", node_evals_},
          {"transcript", session_.transcript().to_json()}};
}

OracleRun run_promise_bpp_oracle_algorithm(const PromiseMachine& outer, std::size_t n, std::size_t k,
                                           const Rat& delta, BitSource& source) {
  AcceptanceSession session(n, k, Rat(1, 10), delta, source);
  OracleRun run;
  DecisionAsk ask = [&](const DecisionProcedure& decide) {
    ++run.queries;
    Rat y = session.estimate([&](std::uint64_t coins) { return decide(BitString::from_uint(coins, n)); });
    return y >= Rat(1, 2);
  };
  run.output = outer(ask);
  run.transcript = session.steward().transcript();
  run.bits = session.steward().bits_drawn();
  run.declared_bits = session.steward().declared_bits();
  return run;
}

OracleRun run_app_oracle_algorithm(const AppMachine& outer, std::size_t n, std::size_t k, const Rat& epsilon,
                                   const Rat& delta, BitSource& source) {
  const Rat round_delta = delta / Rat(static_cast<long>(2 * k));
  const AveragingSamplerPlan plan = plan_averaging_sampler(n, Rat(1, 10), round_delta);
  StewardConfig config;
  config.n = plan.seed_bits();
  config.k = k;
  config.d = 1;
  config.epsilon = epsilon / Rat(8);
  config.delta = round_delta;
  config.gamma = delta / Rat(2);
  StewardSession session(config, StewardKind::Main, source);
  OracleRun run;
  ValueAsk ask = [&](const PhiEstimator& phi) {
    ++run.queries;
    AmplifiedEstimator amp{plan, phi};
    ConcentratedFn f;
    f.epsilon = config.epsilon;
    f.delta = config.delta;
    f.oracle = [&](const BitString& x) { return Vec{amp.evaluate(x)}; };
    return session.answer(f)[0];
  };
  run.output = outer(ask);
  run.transcript = session.transcript();
  run.bits = session.bits_drawn();
  run.declared_bits = session.declared_bits();
  return run;
}

}  // namespace stewards
