#include "fracdiff/rational.hpp"

#include <atomic>
#include <cctype>
#include <limits>

#include "fracdiff/errors.hpp"

namespace fracdiff {

namespace {

std::atomic<std::size_t> g_bit_cap{4096};

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad_number(std::string_view text) {
  throw DomainError("not a rational number: '" + std::string(text) + "'");
}

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

Rational::Rational(long long value) {
  if (value >= std::numeric_limits<long>::min() && value <= std::numeric_limits<long>::max()) {
    q_ = static_cast<long>(value);
  } else {
    q_ = mpq_class(std::to_string(value));
  }
}

Rational::Rational(long long numerator, long long denominator) {
  if (denominator == 0) throw DomainError("zero denominator");
  q_ = mpq_class(mpz_class(std::to_string(numerator), 10), mpz_class(std::to_string(denominator), 10));
  q_.canonicalize();
  check_cap();
}

Rational::Rational(mpq_class value) : q_(std::move(value)) {
  q_.canonicalize();
  check_cap();
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad_number(text);

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  mpq_class value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_number(text);
    const mpz_class d(std::string(den), 10);
    if (d == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    value = mpq_class(mpz_class(std::string(num), 10), d);
  } else {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      auto exp_part = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
        exp_negative = exp_part.front() == '-';
        exp_part.remove_prefix(1);
      }
      if (!all_digits(exp_part) || exp_part.size() > 6) bad_number(text);
      exponent = std::stol(std::string(exp_part));
      if (exp_negative) exponent = -exponent;
      s = s.substr(0, e);
    }
    std::string digits;
    long frac_digits = 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      const auto int_part = s.substr(0, dot);
      const auto frac_part = s.substr(dot + 1);
      if ((!int_part.empty() && !all_digits(int_part)) ||
          (!frac_part.empty() && !all_digits(frac_part)) || (int_part.empty() && frac_part.empty())) {
        bad_number(text);
      }
      digits = std::string(int_part) + std::string(frac_part);
      frac_digits = static_cast<long>(frac_part.size());
    } else {
      if (!all_digits(s)) bad_number(text);
      digits = std::string(s);
    }
    const long scale = exponent - frac_digits;
    const mpz_class mantissa(digits, 10);
    if (scale >= 0) {
      value = mpq_class(mantissa * pow10(static_cast<unsigned long>(scale)));
    } else {
      value = mpq_class(mantissa, pow10(static_cast<unsigned long>(-scale)));
    }
  }
  value.canonicalize();
  if (negative) value = -value;
  return Rational(std::move(value));
}

void Rational::set_bit_cap(std::size_t bits) { g_bit_cap.store(bits); }

std::size_t Rational::bit_cap() { return g_bit_cap.load(); }

void Rational::check_cap() const {
  const std::size_t cap = g_bit_cap.load(std::memory_order_relaxed);
  if (numerator_bits() > cap || denominator_bits() > cap) {
    throw BackendOverflow("rational exceeds the " + std::to_string(cap) + "-bit cap");
  }
}

std::size_t Rational::numerator_bits() const { return mpz_sizeinbase(q_.get_num_mpz_t(), 2); }

std::size_t Rational::denominator_bits() const { return mpz_sizeinbase(q_.get_den_mpz_t(), 2); }

Rational& Rational::operator+=(const Rational& rhs) {
  q_ += rhs.q_;
  check_cap();
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  q_ -= rhs.q_;
  check_cap();
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  q_ *= rhs.q_;
  check_cap();
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw DomainError("division by zero");
  q_ /= rhs.q_;
  check_cap();
  return *this;
}

Rational Rational::operator-() const {
  Rational r;
  r.q_ = -q_;
  return r;
}

bool Rational::is_integer() const { return q_.get_den() == 1; }

Rational Rational::floor() const {
  mpz_class z;
  mpz_fdiv_q(z.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return Rational(mpq_class(z));
}

Rational Rational::ceil() const {
  mpz_class z;
  mpz_cdiv_q(z.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return Rational(mpq_class(z));
}

std::int64_t Rational::to_int() const {
  if (!is_integer()) throw DomainError("expected an integer, got " + str());
  const mpz_class& z = q_.get_num();
  if (!z.fits_slong_p()) throw DomainError("integer out of range: " + str());
  return z.get_si();
}

Rational Rational::abs() const {
  Rational r;
  r.q_ = ::abs(q_);
  return r;
}

std::string Rational::str() const { return q_.get_str(); }

std::string Rational::decimal_or_fraction() const {
  mpz_class den = q_.get_den();
  unsigned long twos = 0;
  unsigned long fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return str();
  if (q_.get_den() == 1) return q_.get_num().get_str();

  const unsigned long places = std::max(twos, fives);
  mpz_class scaled = q_.get_num() * pow10(places) / q_.get_den();
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.get_str();
  if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
  digits.insert(digits.size() - places, ".");
  return (negative ? "-" : "") + digits;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace fracdiff
