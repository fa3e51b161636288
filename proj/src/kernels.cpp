#include "fracdiff/kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fracdiff/errors.hpp"

namespace fracdiff {

std::string to_string(Kind k) { return k == Kind::delta ? "delta" : "nabla"; }
std::string to_string(Side s) { return s == Side::left ? "left" : "right"; }

bool is_gamma_pole(double x) { return x <= 0.0 && std::floor(x) == x; }

bool is_gamma_pole(const Rational& x) { return x.sign() <= 0 && x.is_integer(); }

SignedLogGamma log_gamma_signed(double x) {
  if (is_gamma_pole(x)) throw DomainError("gamma pole at " + std::to_string(x));
  int sign = 1;
  // lgamma_r keeps the sign out of the global signgam.
  const double value = ::lgamma_r(x, &sign);
  return {value, sign};
}

namespace {

bool is_integral(double x) { return std::floor(x) == x && std::isfinite(x); }

double product_form(double t, long count) {
  double p = 1.0;
  for (long j = 0; j < count; ++j) p *= t - static_cast<double>(j);
  return p;
}

// Γ(p)/Γ(q) for non-pole p, q with p - q not an integer.
double gamma_quotient(double p, double q) {
  const auto lp = log_gamma_signed(p);
  const auto lq = log_gamma_signed(q);
  return static_cast<double>(lp.sign * lq.sign) * std::exp(lp.log_abs - lq.log_abs);
}

}  // namespace

double falling(double t, double alpha) {
  const double p = t + 1.0;
  const double q = t + 1.0 - alpha;
  const bool p_pole = is_gamma_pole(p);
  const bool q_pole = is_gamma_pole(q);
  const bool alpha_natural = is_integral(alpha) && alpha >= 0.0;
  if (p_pole && q_pole) {
    if (!alpha_natural) {
      throw PoleAmbiguous("falling factorial with both gamma arguments at poles (t=" + std::to_string(t) +
                          ", alpha=" + std::to_string(alpha) + ")");
    }
    return product_form(t, static_cast<long>(alpha));
  }
  if (q_pole) return 0.0;
  if (p_pole) throw DomainError("falling factorial numerator at a pole (t=" + std::to_string(t) + ")");
  if (alpha_natural) return product_form(t, static_cast<long>(alpha));
  if (is_integral(alpha)) {
    // Γ(t+1)/Γ(t+1+m) = 1/((t+1)(t+2)...(t+m))
    double denom = 1.0;
    for (long j = 1; j <= static_cast<long>(-alpha); ++j) denom *= t + static_cast<double>(j);
    return 1.0 / denom;
  }
  return gamma_quotient(p, q);
}

double rising(double t, double alpha) {
  if (t == 0.0) return alpha == 0.0 ? 1.0 : 0.0;  // empty product at α = 0
  if (is_gamma_pole(t)) throw DomainError("rising factorial undefined at t=" + std::to_string(t));
  const double p = t + alpha;
  if (is_gamma_pole(p)) throw DomainError("rising factorial numerator at a pole (t=" + std::to_string(t) + ")");
  if (is_integral(alpha)) {
    if (alpha >= 0.0) {
      double prod = 1.0;
      for (long k = 0; k < static_cast<long>(alpha); ++k) prod *= t + static_cast<double>(k);
      return prod;
    }
    // Γ(t-m)/Γ(t) = 1/((t-1)(t-2)...(t-m))
    double denom = 1.0;
    for (long j = 1; j <= static_cast<long>(-alpha); ++j) denom *= t - static_cast<double>(j);
    return 1.0 / denom;
  }
  return gamma_quotient(p, t);
}

// --- GammaMonomial ---------------------------------------------------------

GammaMonomial::GammaMonomial(Rational coefficient) : coefficient_(std::move(coefficient)) {}

GammaMonomial GammaMonomial::gamma(const Rational& x) {
  if (is_gamma_pole(x)) throw DomainError("gamma pole at " + x.str());
  GammaMonomial m(Rational(1));
  if (x.is_integer()) {
    // Γ(x) = (x-1)!
    const auto n = x.to_int();
    for (std::int64_t j = 2; j < n; ++j) m.coefficient_ *= Rational(static_cast<long long>(j));
    return m;
  }
  const Rational base_floor = x.floor();
  const Rational reduced = x - base_floor;
  const auto shift = base_floor.to_int();
  if (shift >= 0) {
    for (std::int64_t j = 0; j < shift; ++j) m.coefficient_ *= reduced + Rational(static_cast<long long>(j));
  } else {
    for (std::int64_t j = shift; j < 0; ++j) m.coefficient_ /= reduced + Rational(static_cast<long long>(j));
  }
  m.factors_[reduced] = 1;
  return m;
}

const Rational& GammaMonomial::rational_value() const {
  if (!is_rational()) throw DomainError("value " + str() + " is not rational");
  return coefficient_;
}

double GammaMonomial::to_double() const {
  if (is_zero()) return 0.0;
  double log_part = 0.0;
  for (const auto& [x, e] : factors_) log_part += e * std::lgamma(x.to_double());
  return coefficient_.to_double() * std::exp(log_part);
}

std::string GammaMonomial::str() const {
  std::ostringstream os;
  os << coefficient_;
  for (const auto& [x, e] : factors_) os << "*Gamma(" << x << ")^" << e;
  return os.str();
}

void GammaMonomial::normalize() {
  if (coefficient_.is_zero()) {
    factors_.clear();
    return;
  }
  for (auto it = factors_.begin(); it != factors_.end();) {
    it = it->second == 0 ? factors_.erase(it) : std::next(it);
  }
}

GammaMonomial& GammaMonomial::operator*=(const GammaMonomial& rhs) {
  coefficient_ *= rhs.coefficient_;
  for (const auto& [x, e] : rhs.factors_) factors_[x] += e;
  normalize();
  return *this;
}

GammaMonomial& GammaMonomial::operator/=(const GammaMonomial& rhs) {
  if (rhs.is_zero()) throw DomainError("division by zero gamma monomial");
  coefficient_ /= rhs.coefficient_;
  for (const auto& [x, e] : rhs.factors_) factors_[x] -= e;
  normalize();
  return *this;
}

GammaMonomial& GammaMonomial::operator+=(const GammaMonomial& rhs) {
  if (rhs.is_zero()) return *this;
  if (is_zero()) return *this = rhs;
  if (factors_ != rhs.factors_) {
    throw DomainError("cannot add gamma monomials with different factors: " + str() + " + " + rhs.str());
  }
  coefficient_ += rhs.coefficient_;
  normalize();
  return *this;
}

GammaMonomial& GammaMonomial::operator-=(const GammaMonomial& rhs) { return *this += -rhs; }

GammaMonomial GammaMonomial::operator-() const {
  GammaMonomial m = *this;
  m.coefficient_ = -m.coefficient_;
  return m;
}

GammaMonomial falling_exact(const Rational& t, const Rational& alpha) {
  const Rational p = t + 1;
  const Rational q = p - alpha;
  const bool p_pole = is_gamma_pole(p);
  const bool q_pole = is_gamma_pole(q);
  const bool alpha_natural = alpha.is_integer() && alpha.sign() >= 0;
  if (p_pole && q_pole) {
    if (!alpha_natural) {
      throw PoleAmbiguous("falling factorial with both gamma arguments at poles (t=" + t.str() +
                          ", alpha=" + alpha.str() + ")");
    }
    Rational prod(1);
    for (std::int64_t j = 0; j < alpha.to_int(); ++j) prod *= t - Rational(static_cast<long long>(j));
    return prod;
  }
  if (q_pole) return GammaMonomial(Rational(0));
  if (p_pole) throw DomainError("falling factorial numerator at a pole (t=" + t.str() + ")");
  return GammaMonomial::gamma(p) / GammaMonomial::gamma(q);
}

GammaMonomial rising_exact(const Rational& t, const Rational& alpha) {
  if (t.is_zero()) return GammaMonomial(Rational(alpha.is_zero() ? 1 : 0));
  if (is_gamma_pole(t)) throw DomainError("rising factorial undefined at t=" + t.str());
  const Rational p = t + alpha;
  if (is_gamma_pole(p)) throw DomainError("rising factorial numerator at a pole (t=" + t.str() + ")");
  return GammaMonomial::gamma(p) / GammaMonomial::gamma(t);
}

// --- kernel weights ---------------------------------------------------------

template <Scalar T>
T gamma_ratio(const T& x, int k) {
  if (k < 0) throw DomainError("gamma_ratio needs a nonnegative step count");
  T prod = from_rational<T>(Rational(1));
  for (int j = 0; j < k; ++j) prod *= x + from_rational<T>(Rational(j));
  return prod;
}

template <Scalar T>
T lag_weight(const Rational& beta, int lag) {
  if (lag < 0) return from_rational<T>(Rational(0));
  T w = gamma_ratio<T>(from_rational<T>(beta), lag);
  T factorial = from_rational<T>(Rational(1));
  for (int j = 2; j <= lag; ++j) factorial *= from_rational<T>(Rational(j));
  return w / factorial;
}

template <Scalar T>
KernelCoefficient<T> sum_kernel(Kind kind, Side side, const Rational& alpha, int lag) {
  if (alpha.sign() <= 0) throw DomainError("fractional sum order must be positive, got " + alpha.str());
  if (lag < 0) throw DomainError("kernel lag must be nonnegative");
  return {lag_weight<T>(alpha, lag), kind, side, alpha, lag};
}

template <Scalar T>
T falling_over_gamma(const Rational& x, const Rational& mu) {
  const Rational j = x - mu;
  if (!j.is_integer()) throw DomainError("falling_over_gamma needs x - mu integral");
  return lag_weight<T>(mu + 1, static_cast<int>(j.to_int()));
}

template <Scalar T>
T rising_over_gamma(const Rational& x, const Rational& mu) {
  if (!x.is_integer() || x.sign() < 0) throw DomainError("rising_over_gamma needs x in N_0");
  if (x.is_zero()) return from_rational<T>(Rational(mu.is_zero() ? 1 : 0));
  return lag_weight<T>(mu + 1, static_cast<int>(x.to_int()) - 1);
}

template <Scalar T>
std::vector<T> KernelRows<T>::row(const Rational& beta, std::size_t count) const {
  std::vector<T> w;
  w.reserve(count);
  T current = from_rational<T>(Rational(1));
  const T b = from_rational<T>(beta);
  for (std::size_t k = 0; k < count; ++k) {
    if (k > 0) {
      const T step = from_rational<T>(Rational(static_cast<long long>(k - 1)));
      current = current * (b + step) / from_rational<T>(Rational(static_cast<long long>(k)));
    }
    w.push_back(current);
  }
  if (perturbation_ && perturbation_->lag >= 0 && static_cast<std::size_t>(perturbation_->lag) < count) {
    const T factor = from_rational<T>(Rational(1) + Rational(mpq_class(perturbation_->relative)));
    // Shift by a constant as well so rows whose weight is zero still change.
    w[perturbation_->lag] = w[perturbation_->lag] * factor +
                            from_rational<T>(Rational(mpq_class(perturbation_->relative)));
  }
  return w;
}

template double gamma_ratio<double>(const double&, int);
template Rational gamma_ratio<Rational>(const Rational&, int);
template double lag_weight<double>(const Rational&, int);
template Rational lag_weight<Rational>(const Rational&, int);
template KernelCoefficient<double> sum_kernel<double>(Kind, Side, const Rational&, int);
template KernelCoefficient<Rational> sum_kernel<Rational>(Kind, Side, const Rational&, int);
template double falling_over_gamma<double>(const Rational&, const Rational&);
template Rational falling_over_gamma<Rational>(const Rational&, const Rational&);
template double rising_over_gamma<double>(const Rational&, const Rational&);
template Rational rising_over_gamma<Rational>(const Rational&, const Rational&);
template class KernelRows<double>;
template class KernelRows<Rational>;

}  // namespace fracdiff
