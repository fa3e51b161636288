#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace fracdiff {

/// Arbitrary-precision rational number backed by GMP.
///
/// Every arithmetic result is checked against a process-wide bit cap on the
/// numerator and denominator; exceeding it throws BackendOverflow instead of
/// silently growing without bound.
class Rational {
 public:
  Rational() = default;
  Rational(int value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long long value);  // NOLINT(google-explicit-constructor)
  Rational(long long numerator, long long denominator);
  explicit Rational(mpq_class value);

  /// Accepts "7", "-3/4", "0.125", "-2.5e-3" and "1.5E2". Decimal input is
  /// converted exactly.
  static Rational parse(std::string_view text);

  static void set_bit_cap(std::size_t bits);
  static std::size_t bit_cap();

  const mpq_class& get() const { return q_; }

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const;
  Rational floor() const;
  Rational ceil() const;
  /// Throws DomainError unless the value is an integer representable in int64.
  std::int64_t to_int() const;
  double to_double() const { return q_.get_d(); }
  Rational abs() const;

  /// "p" for integers, otherwise "p/q" in lowest terms.
  std::string str() const;
  /// Exact decimal expansion when the denominator has only factors 2 and 5,
  /// otherwise "p/q".
  std::string decimal_or_fraction() const;

  std::size_t numerator_bits() const;
  std::size_t denominator_bits() const;

 private:
  void check_cap() const;

  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace fracdiff

template <>
struct std::hash<fracdiff::Rational> {
  std::size_t operator()(const fracdiff::Rational& r) const noexcept {
    return std::hash<std::string>{}(r.str());
  }
};
