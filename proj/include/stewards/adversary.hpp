#pragma once

#include <random>
#include <vector>

#include "stewards/numeric.hpp"
#include "stewards/steward.hpp"

namespace stewards {

/// Round i emits the point mass at mus[i] (rounds past the list repeat the last).
Owner constant_owner(std::vector<Vec> mus, const Rat& epsilon);

/// Round 0: x -> eps * x / 2^n in coordinate 0, an injective (eps, 0)-
/// concentrated function around 0. Round 1: if the round-0 answer equals
/// f(x*) for some x*, the function that is 2 * eps' at x* and 0 elsewhere,
/// with eps' = (3 d0 + 5) eps; otherwise 0. Later rounds: 0. All rounds
/// declare mu = 0.
Owner extracting_owner(const StewardConfig& config);

/// Decodes x* from a round-0 answer of the extracting owner, if any.
std::optional<std::uint64_t> extracting_decode(const Vec& answer, const StewardConfig& config);

/// Concentration points placed 3 eps below a cell boundary of the
/// 2(d0 + 1) eps grid, the boundary moving with the previous answer; values
/// spread over [mu - eps, mu + eps] and a floor(delta 2^n)-point tail sent far.
Owner boundary_owner(const StewardConfig& config);

/// Random table-backed function with mu on the eps/16 lattice, values within
/// eps of mu except on exactly floor(delta 2^n) tail points. n <= 20.
ConcentratedFn random_concentrated_fn(std::size_t n, std::size_t d, const Rat& epsilon, const Rat& delta,
                                      std::mt19937_64& rng);

/// Ignores the history; round i emits fns[i].
Owner nonadaptive_owner(std::vector<ConcentratedFn> fns);

/// Pr_X[ ||f(X) - mu||_inf > eps ] over all 2^n inputs.
Rat exact_tail_probability(const ConcentratedFn& f, std::size_t n);

}  // namespace stewards
