#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "stewards/bits.hpp"
#include "stewards/numeric.hpp"

namespace stewards {

enum class ExtractorKind {
  ExpanderWalk,  ///< Gabber-Galil walk: x picks the start vertex, y the labels.
  Fresh,         ///< Ext(x, y) = y with d = s; a zero-error baseline.
};

/// Parameters of an extractor Ext: {0,1}^s x {0,1}^d -> {0,1}^s.
///
/// For the walk extractor the ordinary-to-average-case conversion inflates the
/// deficit: an average-case (s - t, beta) extractor is built as an ordinary
/// (s - t', beta/2) extractor with t' = t + log2(2/beta) (+1 when s is odd,
/// since the zero pad halves the embedded support density). The walk length is
/// the least l with
///   l * log2(1/lambda_hat) >= t'/2 + log2(2/beta) + 1,
/// which gives lambda_hat^l * 2^(t'/2) <= beta/4 and hence, by the mixing
/// estimate TV <= (1/2) lambda^l 2^(t'/2), error beta/8 <= beta/2.
struct ExtractorParams {
  ExtractorKind kind = ExtractorKind::ExpanderWalk;
  std::size_t s = 0;
  double deficit = 0;            ///< t: requested average-case entropy deficit.
  Rat beta = 1;
  double effective_deficit = 0;  ///< t' after conversion and padding.
  std::size_t walk_len = 0;
  std::size_t seed_len = 0;

  nlohmann::json to_json() const;
};

ExtractorParams plan_extractor(std::size_t s, double deficit, const Rat& beta);
ExtractorParams fresh_extractor(std::size_t s);
/// Walk extractor with an explicit walk length and no error guarantee
/// attached; used for exhaustive small-instance studies.
ExtractorParams walk_extractor(std::size_t s, std::size_t walk_len);

BitString extract(const ExtractorParams& params, const BitString& x, const BitString& y);

/// log2(1/lambda_hat) for the Gabber-Galil bound.
double walk_decay_per_step();

/// Exact output distribution of the walk extractor with uniform labels.
///
/// Given nonnegative integer weights on {0,1}^s (s <= 24), propagates them
/// through `walk_len` steps of the averaging operator. The returned counts are
/// indexed by the decoded s-bit output and sum to sum(weights) * 8^walk_len,
/// i.e. they are the exact multiplicities over all 2^(3*walk_len) seeds.
class WalkPropagator {
 public:
  explicit WalkPropagator(std::size_t s);

  std::size_t s() const { return s_; }

  std::vector<BigInt> propagate(std::span<const std::uint64_t> weights, std::size_t walk_len) const;

 private:
  std::size_t s_;
  std::size_t vertex_bits_;
  std::vector<std::uint32_t> table_;
};

/// Exact TV between counts/total and the uniform distribution on counts.size()
/// outcomes.
Rat tv_to_uniform(std::span<const BigInt> counts);

}  // namespace stewards
