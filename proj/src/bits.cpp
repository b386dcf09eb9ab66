#include "stewards/bits.hpp"

#include <stdexcept>

namespace stewards {

BitString BitString::from_string(std::string_view text) {
  BitString out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1')
      throw std::invalid_argument("BitString: expected '0' or '1', got '" + std::string(1, text[i]) + "'");
    out.set(i, text[i] == '1');
  }
  return out;
}

BitString BitString::from_hex(std::string_view hex) {
  BitString out(hex.size() * 4);
  for (std::size_t j = 0; j < hex.size(); ++j) {
    char c = hex[j];
    unsigned v;
    if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') v = static_cast<unsigned>(c - 'A' + 10);
    else throw std::invalid_argument("BitString: bad hex digit '" + std::string(1, c) + "'");
    for (unsigned b = 0; b < 4; ++b) out.set(4 * j + b, (v >> b) & 1u);
  }
  return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t width) {
  if (width > 64) throw std::invalid_argument("BitString::from_uint: width > 64");
  BitString out(width);
  if (width > 0) out.words_[0] = width == 64 ? value : (value & ((std::uint64_t{1} << width) - 1));
  return out;
}

void BitString::push_back(bool bit) {
  if ((size_ & 63) == 0) words_.push_back(0);
  ++size_;
  set(size_ - 1, bit);
}

void BitString::append(const BitString& other) {
  std::size_t offset = size_;
  size_ += other.size_;
  words_.resize((size_ + 63) / 64, 0);
  if ((offset & 63) == 0) {
    for (std::size_t w = 0; w < other.words_.size(); ++w) words_[(offset >> 6) + w] = other.words_[w];
    return;
  }
  unsigned shift = offset & 63;
  for (std::size_t w = 0; w < other.words_.size(); ++w) {
    std::size_t dst = (offset >> 6) + w;
    words_[dst] |= other.words_[w] << shift;
    if (dst + 1 < words_.size()) words_[dst + 1] |= other.words_[w] >> (64 - shift);
  }
  clear_tail();
}

BitString BitString::slice(std::size_t pos, std::size_t len) const {
  if (pos + len > size_) throw std::out_of_range("BitString::slice: range past end");
  BitString out(len);
  unsigned shift = pos & 63;
  std::size_t base = pos >> 6;
  for (std::size_t w = 0; w < out.words_.size(); ++w) {
    std::uint64_t lo = words_[base + w] >> shift;
    std::uint64_t hi = 0;
    if (shift != 0 && base + w + 1 < words_.size()) hi = words_[base + w + 1] << (64 - shift);
    out.words_[w] = lo | hi;
  }
  out.clear_tail();
  return out;
}

BitString BitString::resized(std::size_t len) const {
  if (len <= size_) return slice(0, len);
  BitString out = *this;
  out.size_ = len;
  out.words_.resize((len + 63) / 64, 0);
  return out;
}

std::uint64_t BitString::read_uint(std::size_t pos, std::size_t width) const {
  if (width > 64) throw std::invalid_argument("BitString::read_uint: width > 64");
  if (pos + width > size_) throw std::out_of_range("BitString::read_uint: range past end");
  if (width == 0) return 0;
  unsigned shift = pos & 63;
  std::size_t base = pos >> 6;
  std::uint64_t v = words_[base] >> shift;
  if (shift != 0 && base + 1 < words_.size()) v |= words_[base + 1] << (64 - shift);
  return width == 64 ? v : (v & ((std::uint64_t{1} << width) - 1));
}

std::string BitString::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

std::string BitString::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve((size_ + 3) / 4);
  for (std::size_t j = 0; j * 4 < size_; ++j) {
    unsigned v = 0;
    for (unsigned b = 0; b < 4 && 4 * j + b < size_; ++b) v |= static_cast<unsigned>(get(4 * j + b)) << b;
    s.push_back(kDigits[v]);
  }
  return s;
}

void BitString::clear_tail() {
  if ((size_ & 63) != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
}

BitString concat(const BitString& a, const BitString& b) {
  BitString out = a;
  out.append(b);
  return out;
}

}  // namespace stewards
