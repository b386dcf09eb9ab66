#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stewards/bits.hpp"
#include "stewards/numeric.hpp"
#include "stewards/prg.hpp"
#include "stewards/randomness.hpp"

namespace stewards {

using Vec = std::vector<Rat>;

struct StewardConfig {
  std::size_t n = 0;  ///< bits per query point
  std::size_t k = 1;  ///< rounds
  std::size_t d = 1;  ///< output dimension
  Rat epsilon = Rat(1, 8);
  Rat delta = 0;
  Rat gamma = Rat(1, 4);  ///< generator error (main, Saks-Zhou)
  std::size_t d0 = 0;     ///< group size; 0 means d

  std::size_t group_size() const { return d0 == 0 ? d : d0; }
  /// d rounded up to a multiple of the group size.
  std::size_t padded_dim() const;
  std::size_t groups() const { return padded_dim() / group_size(); }
  /// Cell length 2(d0 + 1) epsilon.
  Rat cell_length() const;
  /// (3 d0 + 5) epsilon.
  Rat error_bound() const;
  /// Symbols per round of the shift-and-round steward:
  /// (d0 + 1)^(d / d0) + 1, the extra one standing for "no certificate".
  BigInt symbols_per_round() const;

  /// Throws std::invalid_argument on n = 0, k = 0, d = 0, d0 > d,
  /// epsilon <= 0, delta outside [0, 1/2) or gamma outside (0, 1).
  void validate() const;
  nlohmann::json to_json() const;
};

/// f: {0,1}^n -> Q^d with a declared (epsilon, delta) concentration contract.
struct ConcentratedFn {
  std::function<Vec(const BitString&)> oracle;
  Rat epsilon;
  Rat delta;
  std::optional<Vec> mu;  ///< harness-known concentration point
};

/// The owner sees the round index (0-based) and every earlier response.
using Owner = std::function<ConcentratedFn(std::size_t round, const std::vector<Vec>& history)>;

enum class StewardKind { Main, S0, UnionBound, SaksZhou, NaiveFresh, NaiveReuse };

std::string to_string(StewardKind kind);
StewardKind parse_steward_kind(const std::string& name);
/// Whether the kind answers by shifting and rounding on the 2(d0+1)eps grid.
bool uses_shift_rounding(StewardKind kind);

/// Smallest delta in [1, max_shift] such that every [w_j + (2 delta - 1) eps,
/// w_j + (2 delta + 1) eps] fits in one grid cell. Throws std::logic_error if
/// none exists.
std::uint64_t choose_shift(const Vec& w, const Rat& epsilon, const Grid& grid, std::uint64_t max_shift);
/// choose_shift with max_shift = d + 1 and the grid of length 2(d+1)eps.
std::uint64_t choose_shift(const Vec& w, const Rat& epsilon);

struct ShiftRound {
  std::vector<std::uint64_t> shifts;  ///< one per group
  Vec y;
};

/// Groups of d0 consecutive coordinates (zero-padded to a multiple of d0),
/// each shifted by its own smallest valid delta and rounded on the grid of
/// length 2(d0 + 1) eps. Output has the length of w.
ShiftRound shift_and_round(const Vec& w, const Rat& epsilon, std::size_t d0);

struct RoundRecord {
  std::size_t round = 0;
  BitString x;                        ///< the query point (empty if never queried)
  Vec w;                              ///< f(x)
  std::vector<std::uint64_t> shifts;  ///< per-group delta, or the Saks-Zhou delta
  Vec y;
  std::size_t queries = 0;
  std::optional<Vec> mu;
};

struct Transcript {
  StewardKind kind = StewardKind::Main;
  StewardConfig config;
  std::vector<RoundRecord> rounds;
  BudgetReport budget;
  std::size_t declared_bits = 0;
  std::optional<PrgSchedule> schedule;
  std::uint64_t sz_u = 0;  ///< Saks-Zhou grid multiplier, 0 otherwise

  nlohmann::json to_json() const;
};

/// Interactive owner/steward protocol. Each answer() is one round.
class StewardSession {
 public:
  StewardSession(StewardConfig config, StewardKind kind, BitSource& source,
                 ExtractorBackend backend = ExtractorBackend::ExpanderWalk);

  Vec answer(const ConcentratedFn& f);

  std::size_t rounds_done() const { return transcript_.rounds.size(); }
  const StewardConfig& config() const { return config_; }
  StewardKind kind() const { return kind_; }
  /// Randomness complexity of a full k-round session.
  std::size_t declared_bits() const { return transcript_.declared_bits; }
  /// Worst-case error promised when every query lands within eps of mu.
  Rat error_bound() const;
  /// Bits drawn from the source by this session so far.
  std::uint64_t bits_drawn() const { return source_.budget().bits_drawn - budget_at_start_.bits_drawn; }
  Transcript transcript() const;

 private:
  BitString next_block();

  StewardConfig config_;
  StewardKind kind_;
  BitSource& source_;
  BudgetReport budget_at_start_;
  Transcript transcript_;
  BitString stream_;  ///< main: expanded generator output; reuse kinds: X
  bool drawn_ = false;
};

/// Runs k rounds against an owner.
Transcript run_steward(StewardKind kind, const StewardConfig& config, const Owner& owner, BitSource& source,
                       ExtractorBackend backend = ExtractorBackend::ExpanderWalk);

inline Transcript run_main_steward(const StewardConfig& c, const Owner& o, BitSource& s) {
  return run_steward(StewardKind::Main, c, o, s);
}
inline Transcript run_union_bound_steward(const StewardConfig& c, const Owner& o, BitSource& s) {
  return run_steward(StewardKind::UnionBound, c, o, s);
}
inline Transcript run_saks_zhou_steward(const StewardConfig& c, const Owner& o, BitSource& s) {
  return run_steward(StewardKind::SaksZhou, c, o, s);
}
inline Transcript run_naive(const StewardConfig& c, const Owner& o, BitSource& s, bool fresh) {
  return run_steward(fresh ? StewardKind::NaiveFresh : StewardKind::NaiveReuse, c, o, s);
}

/// Smallest power of two >= 2kd/gamma.
std::uint64_t saks_zhou_u(const StewardConfig& config);

/// Per round: smallest per-group shift tuple under which rounding mu
/// reproduces y, or nullopt when no shift is compatible.
std::vector<std::optional<std::vector<std::uint64_t>>> certification_check(const Transcript& transcript,
                                                                          const std::vector<Vec>& mus);
/// Same test for a single (mu, y) pair.
std::optional<std::vector<std::uint64_t>> certify(const Vec& mu, const Vec& y, const Rat& epsilon, std::size_t d0);

/// max_j |a_j - b_j|.
Rat linf_distance(const Vec& a, const Vec& b);

/// Largest per-round l-infinity error against the recorded mus; rounds
/// without a mu are skipped.
Rat max_round_error(const Transcript& transcript);

}  // namespace stewards
