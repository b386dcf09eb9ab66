#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stewards/numeric.hpp"
#include "stewards/randomness.hpp"
#include "stewards/sampler.hpp"
#include "stewards/steward.hpp"

namespace stewards {

class CircuitParseError : public std::invalid_argument {
 public:
  CircuitParseError(std::size_t position, const std::string& message)
      : std::invalid_argument("at position " + std::to_string(position) + ": " + message), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Expression tree over x0..x{n-1} with ~, &, ^, | and constants 0/1.
/// Precedence NOT > AND > XOR > OR, binary operators left-associative.
class Circuit {
 public:
  enum class Op : std::uint8_t { Var, Const, Not, And, Xor, Or };
  struct Node {
    Op op;
    std::uint32_t value = 0;  ///< variable index or constant
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::size_t n() const { return n_; }
  /// Node count.
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::int32_t root() const { return root_; }

  /// Input bit i is bit i of x.
  bool eval(std::uint64_t x) const;
  bool eval(const BitString& x) const;
  std::string to_string() const;

 private:
  friend Circuit parse_circuit(std::string_view text, std::size_t n);
  friend class CircuitBuilder;

  std::size_t n_ = 0;
  std::vector<Node> nodes_;  ///< children precede parents
  std::int32_t root_ = -1;
};

Circuit parse_circuit(std::string_view text, std::size_t n);

/// Pr_x[C(x) = 1] by enumerating all 2^n inputs (n <= 24).
Rat exact_acceptance(const Circuit& c);

/// Adaptive acceptance-probability estimation: every round's sampler output
/// is one coordinate of a main-steward round. Per-round sampler accuracy is
/// eps / 8 with failure delta / (2k); the generator error is delta / 2.
class AcceptanceSession {
 public:
  AcceptanceSession(std::size_t n, std::size_t k, const Rat& epsilon, const Rat& delta, BitSource& source,
                    StewardKind steward = StewardKind::Main);

  /// Estimate clamped to [0, 1]. `mu` is recorded for the harness only.
  Rat estimate(const Circuit& c, std::optional<Rat> mu = std::nullopt);
  Rat estimate(const PointOracle& c, std::optional<Rat> mu = std::nullopt);

  const SamplerPlan& plan() const { return plan_; }
  const StewardSession& steward() const { return session_; }
  std::uint64_t oracle_queries() const { return queries_; }
  std::uint64_t circuit_node_evaluations() const { return node_evals_; }
  std::size_t rounds_done() const { return session_.rounds_done(); }
  nlohmann::json to_json() const;

 private:
  std::size_t n_;
  SamplerPlan plan_;
  StewardSession session_;
  std::uint64_t queries_ = 0;
  std::uint64_t node_evals_ = 0;
};

/// A randomized decision procedure for one query, reading n coin bits.
using DecisionProcedure = std::function<bool(const BitString& coins)>;
using DecisionAsk = std::function<bool(const DecisionProcedure&)>;
using PromiseMachine = std::function<nlohmann::json(const DecisionAsk&)>;

/// An estimator for one query, reading n coin bits, accurate to eps/8 with
/// probability at least 2/3.
using PhiEstimator = std::function<Rat(const BitString& coins)>;
using ValueAsk = std::function<Rat(const PhiEstimator&)>;
using AppMachine = std::function<nlohmann::json(const ValueAsk&)>;

struct OracleRun {
  nlohmann::json output;
  std::size_t queries = 0;
  std::uint64_t bits = 0;
  std::size_t declared_bits = 0;
  Transcript transcript;
};

/// Answers each query by thresholding an acceptance estimate (eps = 1/10)
/// at 1/2. At most k queries.
OracleRun run_promise_bpp_oracle_algorithm(const PromiseMachine& outer, std::size_t n, std::size_t k,
                                           const Rat& delta, BitSource& source);

/// Answers each query with a steward round over the median-amplified
/// estimator (failure delta / (2k)), steward accuracy eps / 8.
OracleRun run_app_oracle_algorithm(const AppMachine& outer, std::size_t n, std::size_t k, const Rat& epsilon,
                                   const Rat& delta, BitSource& source);

}  // namespace stewards
