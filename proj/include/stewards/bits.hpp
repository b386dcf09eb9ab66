#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stewards {

/// Packed finite bit sequence. Bit i lives in word i/64 at position i%64, so
/// decoding a prefix as an integer is little-endian: bit 0 is the least
/// significant bit.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  /// "0110" -> bits 0,1,1,0 in that order.
  static BitString from_string(std::string_view text);
  /// Each hex digit carries four bits, least significant first.
  static BitString from_hex(std::string_view hex);
  /// Low `width` bits of value, little-endian.
  static BitString from_uint(std::uint64_t value, std::size_t width);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool bit) {
    std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (bit) words_[i >> 6] |= mask; else words_[i >> 6] &= ~mask;
  }
  bool operator[](std::size_t i) const { return get(i); }

  void push_back(bool bit);
  void append(const BitString& other);
  BitString slice(std::size_t pos, std::size_t len) const;
  /// Copy truncated or zero-extended to `len` bits.
  BitString resized(std::size_t len) const;

  /// Little-endian integer value of bits [pos, pos+width), width <= 64.
  std::uint64_t read_uint(std::size_t pos, std::size_t width) const;
  std::uint64_t to_uint() const { return read_uint(0, size_); }

  std::string to_string() const;
  std::string to_hex() const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> mutable_words() { return words_; }

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }
  friend auto operator<=>(const BitString& a, const BitString& b) {
    return a.to_string() <=> b.to_string();
  }

 private:
  void clear_tail();

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

BitString concat(const BitString& a, const BitString& b);

}  // namespace stewards
