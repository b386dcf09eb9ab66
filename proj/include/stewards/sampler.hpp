#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <json.hpp>

#include "stewards/bits.hpp"
#include "stewards/numeric.hpp"
#include "stewards/randomness.hpp"

namespace stewards {

/// GF(2^N) for 1 <= N <= 63, elements as bit masks of polynomial coefficients.
class GF2Field {
 public:
  explicit GF2Field(unsigned degree);

  unsigned degree() const { return degree_; }
  /// Reduction polynomial including the x^N term.
  std::uint64_t modulus() const { return modulus_; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
  /// x * a.
  std::uint64_t mul_x(std::uint64_t a) const;

 private:
  unsigned degree_;
  std::uint64_t modulus_;
};

/// Whether `poly` (degree given, top bit included) is irreducible over GF(2).
bool is_irreducible(std::uint64_t poly, unsigned degree);
/// Smallest irreducible polynomial of the given degree, as an integer.
std::uint64_t find_irreducible(unsigned degree);

enum class SamplerMode { IndependentSeeds, WalkSeeds };

/// Median of r batch means; batch b evaluates C at a + g(j) b for
/// j < t0, with (a, b) in GF(2^n)^2 and g the Gray code.
struct SamplerPlan {
  std::size_t n = 0;
  Rat epsilon;
  Rat delta;
  std::uint64_t t0 = 0;
  std::size_t r = 0;
  SamplerMode mode = SamplerMode::WalkSeeds;
  /// t0 = 2^n: every batch with b != 0 visits the whole domain and is exact.
  bool full_domain = false;
  double c = 8;

  std::size_t bits() const;
  std::uint64_t queries() const { return t0 * r; }
  nlohmann::json to_json() const;
};

constexpr double kSamplerMedianConstant = 8;

/// t0 = ceil(10/eps^2) and r = max(1, ceil(c log2(1/delta))). When t0 would
/// reach 2^n the plan switches to the full domain: t0 = 2^n, independent
/// seeds, and r the smallest odd count whose majority of b = 0 batches has
/// probability at most delta.
SamplerPlan plan_sampler(std::size_t n, const Rat& epsilon, const Rat& delta,
                         SamplerMode mode = SamplerMode::WalkSeeds, double c = kSamplerMedianConstant);

using PointOracle = std::function<bool(std::uint64_t)>;

/// Runs the plan on exactly plan.bits() seed bits. Returns the lower median
/// of the batch means; `queries` (if given) is incremented per evaluation.
Rat sample_mean(const SamplerPlan& plan, const PointOracle& oracle, const BitString& seed,
                std::uint64_t* queries = nullptr);
Rat sample_mean(const SamplerPlan& plan, const PointOracle& oracle, BitSource& source,
                std::uint64_t* queries = nullptr);
Rat sample_mean(const SamplerPlan& plan, const std::function<bool(const BitString&)>& oracle, BitSource& source,
                std::uint64_t* queries = nullptr);

/// Expander-walk averaging sampler over {0,1}^n: t visited vertices from
/// n + 3(t - 1) bits.
struct AveragingSamplerPlan {
  std::size_t n = 0;
  std::size_t t = 1;
  Rat epsilon;
  Rat delta;

  std::size_t seed_bits() const { return n + 3 * (t - 1); }
  nlohmann::json to_json() const;
};

/// t from the expander Chernoff bound 2 exp(-(1 - lambda) eps^2 t / 4) <= delta,
/// with an extra sqrt(2) factor when n is odd (start vertex on half the graph).
AveragingSamplerPlan plan_averaging_sampler(std::size_t n, const Rat& epsilon, const Rat& delta);
AveragingSamplerPlan averaging_plan_with_length(std::size_t n, std::size_t t);

std::vector<BitString> averaging_sample(const AveragingSamplerPlan& plan, const BitString& seed);
std::vector<BitString> averaging_sample(const AveragingSamplerPlan& plan, BitSource& source);

/// Lower median of the values (sorted copy, index (size - 1) / 2).
Rat lower_median(std::vector<Rat> values);

Rat median_amplify(const std::function<Rat(const BitString&)>& f, const AveragingSamplerPlan& plan,
                   const BitString& seed);
Rat median_amplify(const std::function<Rat(const BitString&)>& f, const AveragingSamplerPlan& plan,
                   BitSource& source);

/// Amplifies an estimator that is correct with probability 2/3 on n-bit
/// coins to failure probability delta: median over a (1/10, delta)
/// averaging sample.
struct AmplifiedEstimator {
  AveragingSamplerPlan plan;
  std::function<Rat(const BitString&)> phi;

  std::size_t seed_bits() const { return plan.seed_bits(); }
  Rat evaluate(const BitString& seed) const { return median_amplify(phi, plan, seed); }
  Rat operator()(BitSource& source) const { return median_amplify(phi, plan, source); }
};

AmplifiedEstimator app_amplify(std::function<Rat(const BitString&)> phi, std::size_t n, const Rat& delta);

}  // namespace stewards
