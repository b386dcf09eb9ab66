#include "stewards/numeric.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace stewards {

Rat::Rat(long num, long den) : v_(num, den) {
  if (den == 0) throw std::invalid_argument("Rat: zero denominator");
  v_.canonicalize();
}

Rat::Rat(const BigInt& num, const BigInt& den) : v_(num, den) {
  if (den == 0) throw std::invalid_argument("Rat: zero denominator");
  v_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.v_ == 0) throw std::domain_error("Rat: division by zero");
  v_ /= o.v_;
  return *this;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

BigInt parse_int(std::string_view s) {
  std::string body(s);
  bool neg = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    neg = body[0] == '-';
    body.erase(0, 1);
  }
  if (!all_digits(body)) throw std::invalid_argument("Rat::parse: bad integer '" + std::string(s) + "'");
  BigInt v(body, 10);
  return neg ? BigInt(-v) : v;
}

}  // namespace

Rat Rat::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("Rat::parse: empty string");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_int(s.substr(0, slash));
    BigInt den = parse_int(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("Rat::parse: zero denominator");
    return Rat(num, den);
  }

  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exponent = parse_int(s.substr(e + 1)).get_si();
    s = s.substr(0, e);
  }
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty()))
      throw std::invalid_argument("Rat::parse: bad decimal '" + std::string(text) + "'");
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) throw std::invalid_argument("Rat::parse: bad number '" + std::string(text) + "'");
    digits = std::string(s);
  }
  BigInt mant(digits, 10);
  if (neg) mant = -mant;
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  return exponent >= 0 ? Rat(BigInt(mant * scale), BigInt(1)) : Rat(mant, scale);
}

Rat Rat::from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("Rat::from_double: non-finite value");
  return Rat(mpq_class(value));
}

Rat Rat::pow2(long e) {
  BigInt p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(std::labs(e)));
  return e >= 0 ? Rat(p) : Rat(BigInt(1), p);
}

BigInt Rat::floor() const {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

BigInt Rat::ceil() const {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

Rat Rat::abs() const { return Rat(mpq_class(::abs(v_))); }

std::string Rat::str() const { return is_integer() ? v_.get_num().get_str() : v_.get_str(); }

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }
Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

Grid::Grid(Rat interval_length) : length_(std::move(interval_length)) {
  if (length_ <= Rat(0)) throw std::invalid_argument("Grid: interval length must be positive");
}

BigInt Grid::interval_index(const Rat& w) const { return (w / length_).floor(); }

Rat Grid::round_to_midpoint(const Rat& w) const {
  return Rat(interval_index(w)) * length_ + length_ / Rat(2);
}

bool Grid::contained_in_one_interval(const Rat& lo, const Rat& hi) const {
  if (hi < lo) throw std::logic_error("Grid::contained_in_one_interval: lo > hi");
  return interval_index(lo) == interval_index(hi);
}

BigInt next_power_of_two(const Rat& value) {
  if (value <= Rat(0)) throw std::invalid_argument("next_power_of_two: value must be positive");
  BigInt p = 1;
  while (Rat(p) < value) p *= 2;
  return p;
}

std::size_t floor_log2(const BigInt& v) {
  if (v < 1) throw std::invalid_argument("floor_log2: value must be >= 1");
  return mpz_sizeinbase(v.get_mpz_t(), 2) - 1;
}

double log2_of(const BigInt& value) {
  if (value <= 0) throw std::invalid_argument("log2_of: value must be positive");
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, value.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

double log2_of(const Rat& value) {
  if (value <= Rat(0)) throw std::invalid_argument("log2_of: value must be positive");
  return log2_of(value.numerator()) - log2_of(value.denominator());
}

}  // namespace stewards
