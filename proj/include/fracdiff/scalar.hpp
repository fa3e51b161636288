#pragma once

#include <cmath>
#include <concepts>
#include <string>

#include "fracdiff/rational.hpp"

namespace fracdiff {

/// Value field of every grid function and kernel: IEEE double or exact rational.
template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

enum class Backend { floating, rational };

template <Scalar T>
inline constexpr bool is_exact_v = std::same_as<T, Rational>;

template <Scalar T>
inline constexpr Backend backend_of_v = is_exact_v<T> ? Backend::rational : Backend::floating;

template <Scalar T>
T from_rational(const Rational& r) {
  if constexpr (is_exact_v<T>) {
    return r;
  } else {
    return r.to_double();
  }
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.to_double(); }

inline double abs_value(double x) { return std::fabs(x); }
inline Rational abs_value(const Rational& x) { return x.abs(); }

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rational& x) { return x.is_zero(); }

/// Exact string for rationals ("p/q"), round-trippable %.17g for doubles.
std::string format_scalar(double x);
std::string format_scalar(const Rational& x);

std::string to_string(Backend b);
Backend parse_backend(const std::string& name);

}  // namespace fracdiff
