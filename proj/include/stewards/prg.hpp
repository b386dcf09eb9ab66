#pragma once

#include <vector>

#include <json.hpp>

#include "stewards/bdt.hpp"
#include "stewards/bits.hpp"
#include "stewards/extract.hpp"
#include "stewards/numeric.hpp"

namespace stewards {

enum class ExtractorBackend { ExpanderWalk, Fresh };

struct PrgLevel {
  std::size_t s = 0;  ///< seed bits consumed by G_i
  std::size_t d = 0;  ///< extractor seed bits added at this level
  ExtractorParams ext;
};

/// Seed ladder of the recursive generator: G_0(x) = x and
/// G_{i+1}(x, y) = G_i(x) || G_i(Ext_i(x, y)), where Ext_i is an
/// average-case extractor for deficit 2^i log2|sigma| and error beta.
struct PrgSchedule {
  std::size_t n = 0;
  std::size_t k = 0;
  BigInt sigma = 2;
  Rat gamma;
  Rat beta;
  std::size_t levels = 0;
  ExtractorBackend backend = ExtractorBackend::ExpanderWalk;
  std::vector<PrgLevel> ladder;  ///< one entry per level
  std::size_t seed_len = 0;

  std::size_t output_len() const { return n * k; }
  nlohmann::json to_json() const;
};

/// ceil(log2 k) for k >= 1.
std::size_t ceil_log2(std::size_t k);

PrgSchedule build_schedule(std::size_t n, std::size_t k, const BigInt& sigma, const Rat& gamma,
                           ExtractorBackend backend = ExtractorBackend::ExpanderWalk);

/// First n*k bits of G_levels(seed).
BitString expand(const PrgSchedule& schedule, const BitString& seed);

/// Exact leaf distribution of a depth-2 table tree under the one-level
/// generator G_1(x, y) = x || Ext_0(x, y), over every (x, y). Exhausts the
/// extractor seed by propagating weights through the walk operator, so the
/// extractor seed may be far longer than any enumerable length. Requires
/// k = 2, the expander backend and n <= 24.
NodeDistribution exact_one_level_distribution(const PrgSchedule& schedule, const BlockDecisionTree& tree);

}  // namespace stewards
