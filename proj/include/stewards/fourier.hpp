#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stewards/numeric.hpp"
#include "stewards/randomness.hpp"
#include "stewards/sampler.hpp"
#include "stewards/steward.hpp"

namespace stewards {

/// F: {0,1}^n -> {-1, +1}. Input x is a bit mask, variable i being bit i.
class BooleanFunction {
 public:
  static BooleanFunction from_table(std::size_t n, std::vector<std::int8_t> values);
  /// Bit x of `bits` set means F(x) = -1.
  static BooleanFunction from_bits(std::size_t n, const BitString& bits);
  static BooleanFunction from_callback(std::size_t n, std::function<int(std::uint64_t)> f);
  /// Truth-table file: a line "n=<int>" then hex digits (whitespace ignored),
  /// four truth-table bits per digit, least significant first.
  static BooleanFunction parse_truth_table(const std::string& text);
  std::string to_truth_table() const;

  std::size_t n() const { return n_; }
  bool has_table() const { return !table_.empty(); }
  const std::vector<std::int8_t>& table() const { return table_; }
  /// Full truth table, evaluating the callback if needed.
  std::vector<std::int8_t> materialize() const;

  int operator()(std::uint64_t x) const { return table_.empty() ? callback_(x) : table_[x]; }

 private:
  std::size_t n_ = 0;
  std::vector<std::int8_t> table_;
  std::function<int(std::uint64_t)> callback_;
};

/// Unnormalized spectrum S(U) = sum_x F(x) (-1)^{|U & x|}; the coefficient
/// is S(U) / 2^n.
struct FourierSpectrum {
  std::size_t n = 0;
  std::vector<std::int64_t> sums;

  Rat coefficient(std::uint64_t subset) const;
  /// Subsets with |coefficient| >= theta, ascending.
  std::vector<std::uint64_t> heavy(const Rat& theta) const;
  /// W_x: total squared weight of subsets whose first |x| membership bits
  /// equal x (x[i] = '1' means variable i is in the subset).
  Rat prefix_weight(const std::string& x) const;
};

/// In-place fast Walsh-Hadamard transform over the integers.
void wht_in_place(std::vector<std::int64_t>& values);
FourierSpectrum wht(const BooleanFunction& f);

/// Boolean sampler plan used for one W_x estimate: accuracy eps/2 on the
/// n + |x| bit function C, failure delta.
SamplerPlan plan_estimate_w(std::size_t n, std::size_t prefix_len, const Rat& epsilon, const Rat& delta,
                            SamplerMode mode = SamplerMode::WalkSeeds);

/// 2 * mean(C) - 1 with C(y, y', z) = 1/2 + 1/2 F(y,z) F(y',z) chi_x(y) chi_x(y').
/// The point layout is y = bits [0, l), y' = [l, 2l), z = [2l, n + l).
Rat estimate_w(const BooleanFunction& f, const std::string& x, const SamplerPlan& plan, const BitString& seed,
               std::uint64_t* f_queries = nullptr);
Rat estimate_w(const BooleanFunction& f, const std::string& x, const Rat& epsilon, const Rat& delta,
               BitSource& source, std::uint64_t* f_queries = nullptr);

struct GlParams {
  std::size_t n = 0;
  Rat theta;
  Rat delta;
  std::size_t u = 1;  ///< prefix chunk per round
  std::size_t k = 1;  ///< rounds
  std::size_t d = 1;  ///< steward dimension
  Rat epsilon;        ///< steward accuracy theta^2 / (4 (3d + 5))
  Rat estimate_delta; ///< delta / (2 d n)
  Rat gamma;          ///< delta / 2
  StewardKind steward = StewardKind::Main;
  SamplerMode mode = SamplerMode::WalkSeeds;

  std::size_t prefix_len(std::size_t round) const;  ///< after round (1-based)
  SamplerPlan round_plan(std::size_t round) const;
  /// Longest per-round sampler seed: the steward's block length.
  std::size_t block_bits() const;
  StewardConfig steward_config() const;
  nlohmann::json to_json() const;
};

GlParams plan_gl(std::size_t n, const Rat& theta, const Rat& delta, StewardKind steward = StewardKind::Main,
                 SamplerMode mode = SamplerMode::WalkSeeds);

struct GlResult {
  bool failed = false;
  std::size_t failed_round = 0;
  std::vector<std::uint64_t> subsets;  ///< ascending bit masks
  std::vector<std::size_t> list_sizes; ///< |L_i| per round
  std::uint64_t f_queries = 0;
  Transcript transcript;

  nlohmann::json to_json() const;
};

GlResult goldreich_levin(const BooleanFunction& f, const GlParams& params, BitSource& source);

/// Randomness a full run of the configured steward would draw, by phase.
BudgetReport gl_randomness_audit(const GlParams& params);

}  // namespace stewards
