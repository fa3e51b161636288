#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracdiff/kernels.hpp"
#include "fracdiff/rational.hpp"
#include "fracdiff/scalar.hpp"

namespace fracdiff {

enum class Direction { forward, backward };

std::string to_string(Direction d);
Direction opposite(Direction d);

/// Finite function on a unit-step grid with a possibly non-integer origin.
///
/// Index k holds the value at origin + k (forward) or origin - k (backward).
/// Backward grids therefore list the right-anchored sets {b, b-1, ...} in
/// decreasing-point order, which is the order right operators consume them in:
///
///   direction  index 0   index k     typical use
///   forward    a         a + k       N_a, left operators
///   backward   b         b - k       _bN, right operators
template <Scalar T>
class GridFunction {
 public:
  GridFunction(Rational origin, Direction direction, std::vector<T> values);

  const Rational& origin() const { return origin_; }
  Direction direction() const { return direction_; }
  std::size_t size() const { return values_.size(); }
  std::span<const T> values() const { return values_; }
  const T& operator[](std::size_t k) const { return values_[k]; }

  Rational point(std::size_t k) const;
  Rational last_point() const { return point(size() - 1); }
  Rational lowest_point() const;
  Rational highest_point() const;

  /// Storage index of t, if t lies on this grid.
  std::optional<std::size_t> index_of(const Rational& t) const;
  bool contains(const Rational& t) const { return index_of(t).has_value(); }
  /// Value at t; DomainError if t is not on the grid.
  const T& at(const Rational& t) const;

  /// Same function stored in the other order.
  GridFunction reoriented(Direction d) const;
  /// Same values, every point moved by delta.
  GridFunction shifted(const Rational& delta) const;
  /// Drops the first `count` storage entries.
  GridFunction drop_front(std::size_t count) const;
  /// Keeps storage entries from the one at point t onward.
  GridFunction from_point(const Rational& t) const;

  template <Scalar U>
  GridFunction<U> convert() const {
    std::vector<U> out;
    out.reserve(values_.size());
    for (const auto& v : values_) {
      if constexpr (std::same_as<U, T>) {
        out.push_back(v);
      } else if constexpr (is_exact_v<T>) {
        out.push_back(v.to_double());
      } else {
        out.push_back(Rational(mpq_class(v)));
      }
    }
    return GridFunction<U>(origin_, direction_, std::move(out));
  }

  std::string describe() const;

 private:
  Rational origin_;
  Direction direction_;
  std::vector<T> values_;
};

/// Signed slack of a family of inequalities: holds exactly when margin >= 0.
template <Scalar T>
struct Verdict {
  bool holds = true;
  std::optional<Rational> worst_point;
  T margin{};
};

template <Scalar T>
GridFunction<T> make_grid_function(Rational origin, Direction direction, std::vector<T> values);

/// Δ^n f or ∇^n f (Δf(t)=f(t+1)-f(t), ∇f(t)=f(t)-f(t-1)) on the shortened grid
/// where every needed value exists. `signed_variant` multiplies by (-1)^n,
/// giving ⊖Δ^n and ∇⊖^n. n = 0 returns f unchanged.
template <Scalar T>
GridFunction<T> integer_difference(const GridFunction<T>& f, Kind kind, int n, bool signed_variant);

/// Δ^n f(t) or ∇^n f(t) at a single point via the binomial expansion.
template <Scalar T>
T integer_difference_at(const GridFunction<T>& f, Kind kind, int n, const Rational& t);

/// (Qf)(s) = f(a+b-s). The result lives on the reflected points and runs in the
/// opposite direction; applying it twice returns f.
template <Scalar T>
GridFunction<T> q_reflect(const GridFunction<T>& f, const Rational& a, const Rational& b);

}  // namespace fracdiff
