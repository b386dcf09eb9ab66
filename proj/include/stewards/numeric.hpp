#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace stewards {

using BigInt = mpz_class;

/// Exact rational number, always in lowest terms with a positive denominator.
class Rat {
 public:
  Rat() = default;
  Rat(long value) : v_(value) {}  // NOLINT(google-explicit-constructor)
  Rat(int value) : v_(value) {}   // NOLINT(google-explicit-constructor)
  Rat(unsigned long value) : v_(value) {}  // NOLINT(google-explicit-constructor)
  Rat(long num, long den);
  explicit Rat(const BigInt& num, const BigInt& den = 1);
  explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  /// Parses "p/q", an integer, or a decimal such as "-0.125" or "1e-3". Exact.
  static Rat parse(std::string_view text);
  /// Exact value of a binary double.
  static Rat from_double(double value);
  /// 2^e for any integer e.
  static Rat pow2(long e);

  BigInt numerator() const { return v_.get_num(); }
  BigInt denominator() const { return v_.get_den(); }

  BigInt floor() const;
  BigInt ceil() const;
  Rat abs() const;
  double to_double() const { return v_.get_d(); }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  /// Serializes as "p/q" (integers as "p/1").
  std::string str() const;

  const mpq_class& raw() const { return v_; }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.v_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

Rat min(const Rat& a, const Rat& b);
Rat max(const Rat& a, const Rat& b);

/// Partition of the real line into half-open cells [mL, (m+1)L).
class Grid {
 public:
  explicit Grid(Rat interval_length);

  const Rat& interval_length() const { return length_; }

  /// The m with w in [mL, (m+1)L).
  BigInt interval_index(const Rat& w) const;
  /// Midpoint of the cell containing w.
  Rat round_to_midpoint(const Rat& w) const;
  /// Whether the closed range [lo, hi] fits inside one half-open cell.
  /// A right endpoint sitting exactly on a cell boundary does not fit.
  bool contained_in_one_interval(const Rat& lo, const Rat& hi) const;

 private:
  Rat length_;
};

/// Smallest power of two >= value (value > 0).
BigInt next_power_of_two(const Rat& value);
/// floor(log2(v)) for v >= 1.
std::size_t floor_log2(const BigInt& v);
/// log2 of a positive rational as a double (handles huge magnitudes).
double log2_of(const Rat& value);
double log2_of(const BigInt& value);

}  // namespace stewards
