#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "stewards/bits.hpp"

namespace stewards {

/// Every random bit drawn, attributed to the phase that was active.
struct BudgetReport {
  std::uint64_t bits_drawn = 0;
  std::map<std::string, std::uint64_t> per_phase;

  void charge(const std::string& phase, std::uint64_t count);
  nlohmann::json to_json() const;
};

class BitsExhaustedError : public std::runtime_error {
 public:
  BitsExhaustedError(std::string phase, std::size_t requested, std::size_t available);

  const std::string& phase() const { return phase_; }
  std::size_t shortfall() const { return shortfall_; }

 private:
  std::string phase_;
  std::size_t shortfall_;
};

/// A source of random bits with exact consumption accounting. Single owner,
/// sequential use.
class BitSource {
 public:
  virtual ~BitSource() = default;

  BitString draw_bits(std::size_t count);
  /// Uniform over {1, ..., u} for u a power of two, using exactly log2(u) bits
  /// decoded little-endian, plus one.
  std::uint64_t draw_uniform_power_of_two(std::uint64_t u);

  const BudgetReport& budget() const { return budget_; }
  const std::string& phase() const { return phase_; }
  void set_phase(std::string phase) { phase_ = std::move(phase); }

 protected:
  virtual BitString produce(std::size_t count) = 0;

 private:
  BudgetReport budget_;
  std::string phase_ = "default";
};

/// Restores the previous phase label on scope exit.
class PhaseScope {
 public:
  PhaseScope(BitSource& source, std::string phase) : source_(source), saved_(source.phase()) {
    source_.set_phase(std::move(phase));
  }
  ~PhaseScope() { source_.set_phase(saved_); }
  PhaseScope(const PhaseScope&) = delete;
  PhaseScope& operator=(const PhaseScope&) = delete;

 private:
  BitSource& source_;
  std::string saved_;
};

/// Finite tape; reading past the end throws BitsExhaustedError.
class TapeSource final : public BitSource {
 public:
  explicit TapeSource(BitString tape) : tape_(std::move(tape)) {}

  std::size_t cursor() const { return cursor_; }
  std::size_t remaining() const { return tape_.size() - cursor_; }

 protected:
  BitString produce(std::size_t count) override;

 private:
  BitString tape_;
  std::size_t cursor_ = 0;
};

/// Unbounded deterministic stream. Trial i of a Monte-Carlo run with master
/// seed s uses SeededSource(s, i): a 64-bit Mersenne Twister seeded from the
/// seed_seq {lo32(s), hi32(s), lo32(i), hi32(i)}.
class SeededSource final : public BitSource {
 public:
  explicit SeededSource(std::uint64_t seed, std::uint64_t index = 0);

 protected:
  BitString produce(std::size_t count) override;

 private:
  std::mt19937_64 engine_;
};

/// Operating-system entropy (std::random_device).
class EntropySource final : public BitSource {
 protected:
  BitString produce(std::size_t count) override;

 private:
  std::random_device device_;
};

}  // namespace stewards
