#include "stewards/steward.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace stewards {

std::size_t StewardConfig::padded_dim() const {
  const std::size_t g = group_size();
  return (d + g - 1) / g * g;
}

Rat StewardConfig::cell_length() const { return Rat(2) * Rat(static_cast<long>(group_size() + 1)) * epsilon; }

Rat StewardConfig::error_bound() const { return Rat(static_cast<long>(3 * group_size() + 5)) * epsilon; }

BigInt StewardConfig::symbols_per_round() const {
  BigInt base = static_cast<unsigned long>(group_size() + 1);
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), groups());
  return out + 1;
}

void StewardConfig::validate() const {
  if (n == 0) throw std::invalid_argument("steward config: n must be >= 1");
  if (k == 0) throw std::invalid_argument("steward config: k must be >= 1");
  if (d == 0) throw std::invalid_argument("steward config: d must be >= 1");
  if (d0 > d) throw std::invalid_argument("steward config: d0 must satisfy 1 <= d0 <= d");
  if (epsilon <= Rat(0)) throw std::invalid_argument("steward config: epsilon must be positive");
  if (delta < Rat(0) || delta >= Rat(1, 2)) throw std::invalid_argument("steward config: delta must lie in [0, 1/2)");
  if (gamma <= Rat(0) || gamma >= Rat(1)) throw std::invalid_argument("steward config: gamma must lie in (0, 1)");
}

nlohmann::json StewardConfig::to_json() const {
  return {{"n", n},         {"k", k},         {"d", d},           {"d0", group_size()},
          {"epsilon", epsilon.str()}, {"delta", delta.str()}, {"gamma", gamma.str()}};
}

std::string to_string(StewardKind kind) {
  switch (kind) {
    case StewardKind::Main: return "main";
    case StewardKind::S0: return "s0";
    case StewardKind::UnionBound: return "union";
    case StewardKind::SaksZhou: return "saks-zhou";
    case StewardKind::NaiveFresh: return "naive-fresh";
    case StewardKind::NaiveReuse: return "naive-reuse";
  }
  return "?";
}

StewardKind parse_steward_kind(const std::string& name) {
  for (auto k : {StewardKind::Main, StewardKind::S0, StewardKind::UnionBound, StewardKind::SaksZhou,
                 StewardKind::NaiveFresh, StewardKind::NaiveReuse})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown steward '" + name + "'");
}

bool uses_shift_rounding(StewardKind kind) {
  return kind == StewardKind::Main || kind == StewardKind::S0 || kind == StewardKind::UnionBound;
}

std::uint64_t choose_shift(const Vec& w, const Rat& epsilon, const Grid& grid, std::uint64_t max_shift) {
  for (std::uint64_t delta = 1; delta <= max_shift; ++delta) {
    const Rat lo_off = Rat(static_cast<long>(2 * delta - 1)) * epsilon;
    const Rat hi_off = Rat(static_cast<long>(2 * delta + 1)) * epsilon;
    bool ok = std::all_of(w.begin(), w.end(), [&](const Rat& wj) {
      return grid.contained_in_one_interval(wj + lo_off, wj + hi_off);
    });
    if (ok) return delta;
  }
  throw std::logic_error("choose_shift: no valid shift in [1, " + std::to_string(max_shift) + "]");
}

std::uint64_t choose_shift(const Vec& w, const Rat& epsilon) {
  const auto d = static_cast<long>(w.size());
  return choose_shift(w, epsilon, Grid(Rat(2) * Rat(d + 1) * epsilon), static_cast<std::uint64_t>(d + 1));
}

ShiftRound shift_and_round(const Vec& w, const Rat& epsilon, std::size_t d0) {
  if (d0 == 0) throw std::invalid_argument("shift_and_round: d0 must be >= 1");
  const Grid grid(Rat(2) * Rat(static_cast<long>(d0 + 1)) * epsilon);
  Vec padded = w;
  padded.resize((w.size() + d0 - 1) / d0 * d0, Rat(0));
  ShiftRound out;
  out.y.reserve(padded.size());
  for (std::size_t g = 0; g * d0 < padded.size(); ++g) {
    Vec group(padded.begin() + static_cast<std::ptrdiff_t>(g * d0),
              padded.begin() + static_cast<std::ptrdiff_t>((g + 1) * d0));
    std::uint64_t delta = choose_shift(group, epsilon, grid, d0 + 1);
    out.shifts.push_back(delta);
    const Rat shift = Rat(static_cast<long>(2 * delta)) * epsilon;
    for (const auto& wj : group) out.y.push_back(grid.round_to_midpoint(wj + shift));
  }
  out.y.resize(w.size());
  return out;
}

Rat linf_distance(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("linf_distance: dimension mismatch");
  Rat m = 0;
  for (std::size_t j = 0; j < a.size(); ++j) m = max(m, (a[j] - b[j]).abs());
  return m;
}

namespace {

nlohmann::json vec_json(const Vec& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : v) out.push_back(r.str());
  return out;
}

}  // namespace

nlohmann::json Transcript::to_json() const {
  nlohmann::json rounds_json = nlohmann::json::array();
  for (const auto& r : rounds) {
    nlohmann::json rj = {{"round", r.round}, {"x", r.x.to_hex()}, {"w", vec_json(r.w)},
                         {"shifts", r.shifts}, {"y", vec_json(r.y)}, {"queries", r.queries}};
    if (r.mu) rj["mu"] = vec_json(*r.mu);
    rounds_json.push_back(rj);
  }
  nlohmann::json out = {{"steward", to_string(kind)},
                        {"config", config.to_json()},
                        {"rounds", rounds_json},
                        {"declared_bits", declared_bits},
                        {"budget", budget.to_json()}};
  if (schedule) out["schedule"] = schedule->to_json();
  if (sz_u) out["saks_zhou_u"] = sz_u;
  return out;
}

std::uint64_t saks_zhou_u(const StewardConfig& config) {
  Rat target = Rat(static_cast<long>(2 * config.k * config.d)) / config.gamma;
  BigInt u = next_power_of_two(target);
  if (!u.fits_ulong_p() || u > BigInt("9223372036854775808"))
    throw std::overflow_error("saks_zhou_u: u does not fit in 64 bits");
  return u.get_ui();
}

StewardSession::StewardSession(StewardConfig config, StewardKind kind, BitSource& source, ExtractorBackend backend)
    : config_(std::move(config)), kind_(kind), source_(source), budget_at_start_(source.budget()) {
  config_.validate();
  transcript_.kind = kind;
  transcript_.config = config_;
  const std::size_t n = config_.n, k = config_.k;
  switch (kind) {
    case StewardKind::Main:
      transcript_.schedule = build_schedule(n, k, config_.symbols_per_round(), config_.gamma, backend);
      transcript_.declared_bits = transcript_.schedule->seed_len;
      break;
    case StewardKind::S0:
    case StewardKind::NaiveFresh: transcript_.declared_bits = n * k; break;
    case StewardKind::UnionBound:
    case StewardKind::NaiveReuse: transcript_.declared_bits = n; break;
    case StewardKind::SaksZhou:
      transcript_.sz_u = saks_zhou_u(config_);
      transcript_.declared_bits = n + k * static_cast<std::size_t>(std::countr_zero(transcript_.sz_u));
      break;
  }
}

BitString StewardSession::next_block() {
  const std::size_t n = config_.n;
  const std::size_t i = transcript_.rounds.size();
  switch (kind_) {
    case StewardKind::Main: {
      if (!drawn_) {
        PhaseScope phase(source_, "steward/seed");
        stream_ = expand(*transcript_.schedule, source_.draw_bits(transcript_.schedule->seed_len));
        drawn_ = true;
      }
      return stream_.slice(i * n, n);
    }
    case StewardKind::S0:
    case StewardKind::NaiveFresh: {
      PhaseScope phase(source_, "steward/x");
      return source_.draw_bits(n);
    }
    default: {
      if (!drawn_) {
        PhaseScope phase(source_, "steward/x");
        stream_ = source_.draw_bits(n);
        drawn_ = true;
      }
      return stream_;
    }
  }
}

Vec StewardSession::answer(const ConcentratedFn& f) {
  if (transcript_.rounds.size() >= config_.k)
    throw std::out_of_range("steward session: all " + std::to_string(config_.k) + " rounds used");
  RoundRecord rec;
  rec.round = transcript_.rounds.size();
  rec.mu = f.mu;
  rec.x = next_block();

  std::size_t queries = 0;
  auto counted = [&](const BitString& x) {
    ++queries;
    return f.oracle(x);
  };
  rec.w = counted(rec.x);
  if (rec.w.size() != config_.d)
    throw std::invalid_argument("steward session: f returned " + std::to_string(rec.w.size()) +
                                " coordinates, expected " + std::to_string(config_.d));

  switch (kind_) {
    case StewardKind::Main:
    case StewardKind::S0:
    case StewardKind::UnionBound: {
      ShiftRound sr = shift_and_round(rec.w, config_.epsilon, config_.group_size());
      rec.shifts = std::move(sr.shifts);
      rec.y = std::move(sr.y);
      break;
    }
    case StewardKind::SaksZhou: {
      std::uint64_t delta;
      {
        PhaseScope phase(source_, "steward/shift");
        delta = source_.draw_uniform_power_of_two(transcript_.sz_u);
      }
      const Grid grid(Rat(transcript_.sz_u) * config_.epsilon);
      const Rat shift = Rat(delta) * config_.epsilon;
      for (const auto& wj : rec.w) rec.y.push_back(grid.round_to_midpoint(wj + shift));
      rec.shifts = {delta};
      break;
    }
    case StewardKind::NaiveFresh:
    case StewardKind::NaiveReuse: rec.y = rec.w; break;
  }
  rec.queries = queries;
  if (queries != 1) throw std::logic_error("steward session: one-query discipline violated");
  Vec y = rec.y;
  transcript_.rounds.push_back(std::move(rec));
  return y;
}

Rat StewardSession::error_bound() const {
  if (kind_ == StewardKind::SaksZhou)
    return Rat(3, 2) * Rat(transcript_.sz_u) * config_.epsilon + Rat(3) * config_.epsilon;
  return config_.error_bound();
}

Transcript StewardSession::transcript() const {
  Transcript t = transcript_;
  t.budget = BudgetReport{};
  for (const auto& [phase, count] : source_.budget().per_phase) {
    auto it = budget_at_start_.per_phase.find(phase);
    std::uint64_t before = it == budget_at_start_.per_phase.end() ? 0 : it->second;
    if (count > before) t.budget.charge(phase, count - before);
  }
  return t;
}

Transcript run_steward(StewardKind kind, const StewardConfig& config, const Owner& owner, BitSource& source,
                       ExtractorBackend backend) {
  StewardSession session(config, kind, source, backend);
  std::vector<Vec> history;
  for (std::size_t i = 0; i < config.k; ++i) history.push_back(session.answer(owner(i, history)));
  return session.transcript();
}

std::optional<std::vector<std::uint64_t>> certify(const Vec& mu, const Vec& y, const Rat& epsilon, std::size_t d0) {
  if (mu.size() != y.size()) throw std::invalid_argument("certify: dimension mismatch");
  const Grid grid(Rat(2) * Rat(static_cast<long>(d0 + 1)) * epsilon);
  std::vector<std::uint64_t> shifts;
  for (std::size_t start = 0; start < mu.size(); start += d0) {
    const std::size_t end = std::min(mu.size(), start + d0);
    std::optional<std::uint64_t> found;
    for (std::uint64_t delta = 1; delta <= d0 + 1 && !found; ++delta) {
      const Rat shift = Rat(static_cast<long>(2 * delta)) * epsilon;
      bool ok = true;
      for (std::size_t j = start; j < end && ok; ++j) ok = grid.round_to_midpoint(mu[j] + shift) == y[j];
      if (ok) found = delta;
    }
    if (!found) return std::nullopt;
    shifts.push_back(*found);
  }
  return shifts;
}

std::vector<std::optional<std::vector<std::uint64_t>>> certification_check(const Transcript& transcript,
                                                                          const std::vector<Vec>& mus) {
  if (!uses_shift_rounding(transcript.kind))
    throw std::invalid_argument("certification_check: steward does not shift and round");
  if (mus.size() != transcript.rounds.size()) throw std::invalid_argument("certification_check: one mu per round");
  std::vector<std::optional<std::vector<std::uint64_t>>> out;
  for (std::size_t i = 0; i < mus.size(); ++i)
    out.push_back(certify(mus[i], transcript.rounds[i].y, transcript.config.epsilon, transcript.config.group_size()));
  return out;
}

Rat max_round_error(const Transcript& transcript) {
  Rat worst = 0;
  for (const auto& r : transcript.rounds)
    if (r.mu) worst = max(worst, linf_distance(r.y, *r.mu));
  return worst;
}

}  // namespace stewards
