#include "stewards/sampler.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "stewards/expander.hpp"

namespace stewards {

namespace {

std::size_t poly_degree(std::uint64_t p) { return p == 0 ? 0 : static_cast<std::size_t>(std::bit_width(p)) - 1; }

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
  const std::size_t dm = poly_degree(m);
  while (a != 0 && poly_degree(a) >= dm) a ^= m << (poly_degree(a) - dm);
  return a;
}

std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    a = poly_mod(a, b);
    std::swap(a, b);
  }
  return a;
}

std::array<std::atomic<std::uint64_t>, 64> irreducible_cache{};

}  // namespace

GF2Field::GF2Field(unsigned degree) : degree_(degree) {
  if (degree < 1 || degree > 63) throw std::invalid_argument("GF2Field: degree must be in [1, 63]");
  modulus_ = irreducible_cache[degree].load(std::memory_order_relaxed);
  if (modulus_ == 0) {
    modulus_ = find_irreducible(degree);
    irreducible_cache[degree].store(modulus_, std::memory_order_relaxed);
  }
}

std::uint64_t GF2Field::mul_x(std::uint64_t a) const {
  const bool top = (a >> (degree_ - 1)) & 1u;
  a <<= 1;
  return top ? a ^ modulus_ : a;
}

std::uint64_t GF2Field::mul(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t out = 0;
  while (b != 0) {
    if (b & 1u) out ^= a;
    a = mul_x(a);
    b >>= 1;
  }
  return out;
}

bool is_irreducible(std::uint64_t poly, unsigned degree) {
  if (degree < 1 || degree > 63 || poly_degree(poly) != degree) return false;
  // Rabin: f | x^(2^N) - x, and gcd(x^(2^(N/q)) - x, f) = 1 for primes q | N.
  auto mulmod = [&](std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    while (b != 0) {
      if (b & 1u) out ^= a;
      a <<= 1;
      if ((a >> degree) & 1u) a ^= poly;
      b >>= 1;
    }
    return out;
  };
  const std::uint64_t x = degree == 1 ? poly_mod(2, poly) : 2;
  std::vector<std::uint64_t> frob(degree + 1);  // x^(2^i) mod f
  frob[0] = x;
  for (unsigned i = 1; i <= degree; ++i) frob[i] = mulmod(frob[i - 1], frob[i - 1]);
  if (frob[degree] != x) return false;
  for (unsigned q = 2; q <= degree; ++q) {
    if (degree % q != 0) continue;
    bool prime = true;
    for (unsigned p = 2; p * p <= q; ++p)
      if (q % p == 0) prime = false;
    if (!prime) continue;
    if (poly_gcd(poly, frob[degree / q] ^ x) != 1) return false;
  }
  return true;
}

std::uint64_t find_irreducible(unsigned degree) {
  if (degree < 1 || degree > 63) throw std::invalid_argument("find_irreducible: degree must be in [1, 63]");
  const std::uint64_t top = std::uint64_t{1} << degree;
  for (std::uint64_t low = 0; low < top; ++low)
    if (is_irreducible(top | low, degree)) return top | low;
  throw std::logic_error("find_irreducible: none found");
}

std::size_t SamplerPlan::bits() const {
  if (mode == SamplerMode::WalkSeeds) return 2 * n + 3 * (r - 1);
  return 2 * n * r;
}

nlohmann::json SamplerPlan::to_json() const {
  return {{"n", n},
          {"epsilon", epsilon.str()},
          {"delta", delta.str()},
          {"t0", t0},
          {"r", r},
          {"mode", mode == SamplerMode::WalkSeeds ? "expander-walk-seeds" : "independent-seeds"},
          {"full_domain", full_domain},
          {"c", c},
          {"bits", bits()},
          {"queries", queries()}};
}

namespace {

// Pr[Bin(r, p) >= (r + 1) / 2] for odd r.
long double majority_tail(std::size_t r, long double p) {
  long double total = 0;
  for (std::size_t i = (r + 1) / 2; i <= r; ++i) {
    long double log_term = std::lgamma(static_cast<long double>(r) + 1) - std::lgamma(static_cast<long double>(i) + 1) -
                           std::lgamma(static_cast<long double>(r - i) + 1) + i * std::log(p) +
                           (r - i) * std::log1p(-p);
    total += std::exp(log_term);
  }
  return total;
}

}  // namespace

SamplerPlan plan_sampler(std::size_t n, const Rat& epsilon, const Rat& delta, SamplerMode mode, double c) {
  if (n < 1 || n > 63) throw std::invalid_argument("plan_sampler: n must be in [1, 63]");
  if (epsilon <= Rat(0)) throw std::invalid_argument("plan_sampler: epsilon must be positive");
  if (delta <= Rat(0) || delta >= Rat(1)) throw std::invalid_argument("plan_sampler: delta must be in (0, 1)");
  SamplerPlan plan;
  plan.n = n;
  plan.epsilon = epsilon;
  plan.delta = delta;
  plan.mode = mode;
  plan.c = c;
  const BigInt t0 = (Rat(10) / (epsilon * epsilon)).ceil();
  const BigInt domain = BigInt(1) << static_cast<mp_bitcnt_t>(n);
  if (t0 >= domain) {
    plan.full_domain = true;
    plan.t0 = std::uint64_t{1} << n;
    plan.mode = SamplerMode::IndependentSeeds;
    const long double p = std::ldexp(1.0L, -static_cast<int>(n));
    const long double target = delta.to_double();
    std::size_t r = 1;
    while (majority_tail(r, p) > target) {
      r += 2;
      if (r > 100001) throw std::invalid_argument("plan_sampler: domain too small for the requested delta");
    }
    plan.r = r;
    return plan;
  }
  plan.t0 = t0.get_ui();
  const double rr = std::ceil(c * -log2_of(delta) - 1e-12);
  plan.r = std::max<std::size_t>(1, static_cast<std::size_t>(rr));
  return plan;
}

Rat lower_median(std::vector<Rat> values) {
  if (values.empty()) throw std::invalid_argument("lower_median: no values");
  auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

Rat sample_mean(const SamplerPlan& plan, const PointOracle& oracle, const BitString& seed, std::uint64_t* queries) {
  if (seed.size() != plan.bits())
    throw std::invalid_argument("sample_mean: seed has " + std::to_string(seed.size()) + " bits, plan needs " +
                                std::to_string(plan.bits()));
  const std::size_t n = plan.n;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> seeds;
  if (plan.mode == SamplerMode::IndependentSeeds) {
    for (std::size_t i = 0; i < plan.r; ++i)
      seeds.emplace_back(seed.read_uint(2 * n * i, n), seed.read_uint(2 * n * i + n, n));
  } else {
    WideVertex v = WideVertex::embed(seed.slice(0, 2 * n));
    const BitString labels = seed.slice(2 * n, 3 * (plan.r - 1));
    for (std::size_t i = 0; i < plan.r; ++i) {
      if (i > 0) v.step(label_at(labels, i - 1));
      BitString pos = v.decode(2 * n);
      seeds.emplace_back(pos.read_uint(0, n), pos.read_uint(n, n));
    }
  }
  const GF2Field field(static_cast<unsigned>(n));
  std::vector<Rat> means;
  means.reserve(plan.r);
  std::vector<std::uint64_t> basis(n);
  for (const auto& [a, b] : seeds) {
    // point j is a + gray(j) * b; consecutive Gray codes differ in one bit.
    basis[0] = b;
    for (std::size_t p = 1; p < n; ++p) basis[p] = field.mul_x(basis[p - 1]);
    std::uint64_t acc = 0;
    std::uint64_t count = oracle(a) ? 1 : 0;
    for (std::uint64_t j = 1; j < plan.t0; ++j) {
      acc ^= basis[std::countr_zero(j)];
      count += oracle(a ^ acc) ? 1 : 0;
    }
    means.emplace_back(Rat(BigInt(count), BigInt(plan.t0)));
  }
  if (queries) *queries += plan.queries();
  return lower_median(std::move(means));
}

Rat sample_mean(const SamplerPlan& plan, const PointOracle& oracle, BitSource& source, std::uint64_t* queries) {
  PhaseScope phase(source, "sampler");
  return sample_mean(plan, oracle, source.draw_bits(plan.bits()), queries);
}

Rat sample_mean(const SamplerPlan& plan, const std::function<bool(const BitString&)>& oracle, BitSource& source,
                std::uint64_t* queries) {
  const std::size_t n = plan.n;
  return sample_mean(plan, [&](std::uint64_t x) { return oracle(BitString::from_uint(x, n)); }, source, queries);
}

nlohmann::json AveragingSamplerPlan::to_json() const {
  return {{"n", n}, {"t", t}, {"epsilon", epsilon.str()}, {"delta", delta.str()}, {"seed_bits", seed_bits()}};
}

AveragingSamplerPlan plan_averaging_sampler(std::size_t n, const Rat& epsilon, const Rat& delta) {
  if (n < 1) throw std::invalid_argument("plan_averaging_sampler: n must be >= 1");
  if (epsilon <= Rat(0)) throw std::invalid_argument("plan_averaging_sampler: epsilon must be positive");
  if (delta <= Rat(0) || delta >= Rat(1)) throw std::invalid_argument("plan_averaging_sampler: delta must be in (0, 1)");
  const long double gap = 1.0L - static_cast<long double>(GabberGalilGraph::lambda_hat().to_double());
  const long double eps = epsilon.to_double();
  long double prefactor = 2.0L * (n % 2 == 1 ? std::sqrt(2.0L) : 1.0L);
  long double t = 4.0L * std::log(prefactor / static_cast<long double>(delta.to_double())) / (gap * eps * eps);
  AveragingSamplerPlan plan;
  plan.n = n;
  plan.t = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t)));
  plan.epsilon = epsilon;
  plan.delta = delta;
  return plan;
}

AveragingSamplerPlan averaging_plan_with_length(std::size_t n, std::size_t t) {
  if (n < 1 || t < 1) throw std::invalid_argument("averaging_plan_with_length: n and t must be >= 1");
  AveragingSamplerPlan plan;
  plan.n = n;
  plan.t = t;
  return plan;
}

std::vector<BitString> averaging_sample(const AveragingSamplerPlan& plan, const BitString& seed) {
  if (seed.size() != plan.seed_bits())
    throw std::invalid_argument("averaging_sample: seed has " + std::to_string(seed.size()) + " bits, plan needs " +
                                std::to_string(plan.seed_bits()));
  WideVertex v = WideVertex::embed(seed.slice(0, plan.n));
  const BitString labels = seed.slice(plan.n, 3 * (plan.t - 1));
  std::vector<BitString> points;
  points.reserve(plan.t);
  points.push_back(v.decode(plan.n));
  for (std::size_t i = 1; i < plan.t; ++i) {
    v.step(label_at(labels, i - 1));
    points.push_back(v.decode(plan.n));
  }
  return points;
}

std::vector<BitString> averaging_sample(const AveragingSamplerPlan& plan, BitSource& source) {
  PhaseScope phase(source, "averaging-sampler");
  return averaging_sample(plan, source.draw_bits(plan.seed_bits()));
}

Rat median_amplify(const std::function<Rat(const BitString&)>& f, const AveragingSamplerPlan& plan,
                   const BitString& seed) {
  std::vector<Rat> values;
  for (const auto& p : averaging_sample(plan, seed)) values.push_back(f(p));
  return lower_median(std::move(values));
}

Rat median_amplify(const std::function<Rat(const BitString&)>& f, const AveragingSamplerPlan& plan,
                   BitSource& source) {
  PhaseScope phase(source, "averaging-sampler");
  return median_amplify(f, plan, source.draw_bits(plan.seed_bits()));
}

AmplifiedEstimator app_amplify(std::function<Rat(const BitString&)> phi, std::size_t n, const Rat& delta) {
  return AmplifiedEstimator{plan_averaging_sampler(n, Rat(1, 10), delta), std::move(phi)};
}

}  // namespace stewards
