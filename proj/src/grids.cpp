#include "fracdiff/grids.hpp"

#include <sstream>

#include "fracdiff/errors.hpp"

namespace fracdiff {

std::string to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }

Direction opposite(Direction d) { return d == Direction::forward ? Direction::backward : Direction::forward; }

template <Scalar T>
GridFunction<T>::GridFunction(Rational origin, Direction direction, std::vector<T> values)
    : origin_(std::move(origin)), direction_(direction), values_(std::move(values)) {
  if (values_.empty()) throw EmptyValues("grid function needs at least one value");
}

template <Scalar T>
Rational GridFunction<T>::point(std::size_t k) const {
  const Rational step(static_cast<long long>(k));
  return direction_ == Direction::forward ? origin_ + step : origin_ - step;
}

template <Scalar T>
Rational GridFunction<T>::lowest_point() const {
  return direction_ == Direction::forward ? origin_ : last_point();
}

template <Scalar T>
Rational GridFunction<T>::highest_point() const {
  return direction_ == Direction::forward ? last_point() : origin_;
}

template <Scalar T>
std::optional<std::size_t> GridFunction<T>::index_of(const Rational& t) const {
  const Rational offset = direction_ == Direction::forward ? t - origin_ : origin_ - t;
  if (!offset.is_integer() || offset.sign() < 0) return std::nullopt;
  const auto k = offset.to_int();
  if (static_cast<std::size_t>(k) >= values_.size()) return std::nullopt;
  return static_cast<std::size_t>(k);
}

template <Scalar T>
const T& GridFunction<T>::at(const Rational& t) const {
  const auto k = index_of(t);
  if (!k) throw DomainError("point " + t.str() + " is not on " + describe());
  return values_[*k];
}

template <Scalar T>
GridFunction<T> GridFunction<T>::reoriented(Direction d) const {
  if (d == direction_) return *this;
  std::vector<T> reversed(values_.rbegin(), values_.rend());
  return GridFunction(last_point(), d, std::move(reversed));
}

template <Scalar T>
GridFunction<T> GridFunction<T>::shifted(const Rational& delta) const {
  return GridFunction(origin_ + delta, direction_, values_);
}

template <Scalar T>
GridFunction<T> GridFunction<T>::drop_front(std::size_t count) const {
  if (count >= values_.size()) throw GridTooShort("dropping " + std::to_string(count) + " points from " + describe());
  std::vector<T> rest(values_.begin() + static_cast<std::ptrdiff_t>(count), values_.end());
  return GridFunction(point(count), direction_, std::move(rest));
}

template <Scalar T>
GridFunction<T> GridFunction<T>::from_point(const Rational& t) const {
  const auto k = index_of(t);
  if (!k) throw DomainError("point " + t.str() + " is not on " + describe());
  return *k == 0 ? *this : drop_front(*k);
}

template <Scalar T>
std::string GridFunction<T>::describe() const {
  std::ostringstream os;
  os << to_string(direction_) << " grid from " << origin_ << " (" << values_.size() << " points)";
  return os.str();
}

template <Scalar T>
GridFunction<T> make_grid_function(Rational origin, Direction direction, std::vector<T> values) {
  return GridFunction<T>(std::move(origin), direction, std::move(values));
}

template <Scalar T>
GridFunction<T> integer_difference(const GridFunction<T>& f, Kind kind, int n, bool signed_variant) {
  if (n < 0) throw DomainError("difference order must be nonnegative");
  if (n == 0) return f;
  if (f.size() < static_cast<std::size_t>(n) + 1) {
    throw GridTooShort("order-" + std::to_string(n) + " difference needs " + std::to_string(n + 1) +
                       " points, " + f.describe());
  }
  const bool forward = f.direction() == Direction::forward;
  std::vector<T> v(f.values().begin(), f.values().end());
  Rational origin = f.origin();
  for (int step = 0; step < n; ++step) {
    std::vector<T> d;
    d.reserve(v.size() - 1);
    // Each first difference is "value at the higher point minus value at the
    // lower point"; only the point it is attributed to depends on Δ vs ∇.
    for (std::size_t k = 0; k + 1 < v.size(); ++k) d.push_back(forward ? v[k + 1] - v[k] : v[k] - v[k + 1]);
    v = std::move(d);
    if (forward && kind == Kind::nabla) origin += 1;
    if (!forward && kind == Kind::delta) origin -= 1;
  }
  if (signed_variant && n % 2 == 1) {
    for (auto& x : v) x = -x;
  }
  return GridFunction<T>(origin, f.direction(), std::move(v));
}

template <Scalar T>
T integer_difference_at(const GridFunction<T>& f, Kind kind, int n, const Rational& t) {
  if (n < 0) throw DomainError("difference order must be nonnegative");
  // Δ^n f(t) = Σ_i (-1)^(n-i) C(n,i) f(t+i);  ∇^n f(t) = Σ_i (-1)^i C(n,i) f(t-i)
  T total = from_rational<T>(Rational(0));
  Rational binom(1);
  for (int i = 0; i <= n; ++i) {
    const Rational s = kind == Kind::delta ? t + Rational(i) : t - Rational(i);
    const bool negative = kind == Kind::delta ? ((n - i) % 2 == 1) : (i % 2 == 1);
    const T term = from_rational<T>(binom) * f.at(s);
    total = negative ? total - term : total + term;
    binom = binom * Rational(n - i) / Rational(i + 1);
  }
  return total;
}

template <Scalar T>
GridFunction<T> q_reflect(const GridFunction<T>& f, const Rational& a, const Rational& b) {
  if (!(a - b).is_integer()) throw DomainError("Q-operator needs a ≡ b (mod 1), got a=" + a.str() + ", b=" + b.str());
  const std::vector<T> values(f.values().begin(), f.values().end());
  return GridFunction<T>(a + b - f.origin(), opposite(f.direction()), values);
}

template class GridFunction<double>;
template class GridFunction<Rational>;
template GridFunction<double> make_grid_function(Rational, Direction, std::vector<double>);
template GridFunction<Rational> make_grid_function(Rational, Direction, std::vector<Rational>);
template GridFunction<double> integer_difference(const GridFunction<double>&, Kind, int, bool);
template GridFunction<Rational> integer_difference(const GridFunction<Rational>&, Kind, int, bool);
template double integer_difference_at(const GridFunction<double>&, Kind, int, const Rational&);
template Rational integer_difference_at(const GridFunction<Rational>&, Kind, int, const Rational&);
template GridFunction<double> q_reflect(const GridFunction<double>&, const Rational&, const Rational&);
template GridFunction<Rational> q_reflect(const GridFunction<Rational>&, const Rational&, const Rational&);

}  // namespace fracdiff
