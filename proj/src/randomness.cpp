#include "stewards/randomness.hpp"

#include <bit>

namespace stewards {

void BudgetReport::charge(const std::string& phase, std::uint64_t count) {
  bits_drawn += count;
  per_phase[phase] += count;
}

nlohmann::json BudgetReport::to_json() const {
  nlohmann::json phases = nlohmann::json::object();
  for (const auto& [name, count] : per_phase) phases[name] = count;
  return {{"bits_drawn", bits_drawn}, {"per_phase", phases}};
}

BitsExhaustedError::BitsExhaustedError(std::string phase, std::size_t requested, std::size_t available)
    : std::runtime_error("random tape exhausted in phase '" + phase + "': requested " +
                         std::to_string(requested) + " bits, " + std::to_string(available) +
                         " available (short by " + std::to_string(requested - available) + ")"),
      phase_(std::move(phase)),
      shortfall_(requested - available) {}

BitString BitSource::draw_bits(std::size_t count) {
  if (count == 0) return {};
  BitString out = produce(count);
  budget_.charge(phase_, count);
  return out;
}

std::uint64_t BitSource::draw_uniform_power_of_two(std::uint64_t u) {
  if (u == 0 || !std::has_single_bit(u))
    throw std::invalid_argument("draw_uniform_power_of_two: " + std::to_string(u) + " is not a power of two");
  auto width = static_cast<std::size_t>(std::countr_zero(u));
  return draw_bits(width).to_uint() + 1;
}

BitString TapeSource::produce(std::size_t count) {
  if (count > remaining()) throw BitsExhaustedError(phase(), count, remaining());
  BitString out = tape_.slice(cursor_, count);
  cursor_ += count;
  return out;
}

SeededSource::SeededSource(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  engine_.seed(seq);
}

BitString SeededSource::produce(std::size_t count) {
  BitString out(count);
  auto words = out.mutable_words();
  for (auto& w : words) w = engine_();
  return out.slice(0, count);
}

BitString EntropySource::produce(std::size_t count) {
  BitString out(count);
  auto words = out.mutable_words();
  for (auto& w : words) w = (static_cast<std::uint64_t>(device_()) << 32) | device_();
  return out.slice(0, count);
}

}  // namespace stewards
