#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracdiff/rational.hpp"
#include "fracdiff/scalar.hpp"

namespace fracdiff {

enum class Kind { delta, nabla };
enum class Side { left, right };

std::string to_string(Kind k);
std::string to_string(Side s);

/// True when x is a pole of the gamma function (x in {0, -1, -2, ...}).
bool is_gamma_pole(double x);
bool is_gamma_pole(const Rational& x);

struct SignedLogGamma {
  double log_abs;
  int sign;
};

/// log|Γ(x)| together with the sign of Γ(x). x must not be a pole.
SignedLogGamma log_gamma_signed(double x);

/// Falling factorial t^(α) = Γ(t+1)/Γ(t+1-α), zero when only the denominator
/// is at a pole. Both arguments at poles: product form for α in N, otherwise
/// PoleAmbiguous. Numerator-only pole: DomainError.
double falling(double t, double alpha);

/// Rising factorial t^{overline α} = Γ(t+α)/Γ(t) with 0^{overline α} = 0 for
/// α != 0 and 0^{overline 0} = 1.
double rising(double t, double alpha);

/// Exact value of the form  c · Π Γ(x_i)^{e_i}  with c rational and every x_i
/// reduced into the open interval (0, 1).
///
/// Gamma values at arguments differing by integers collapse onto the same
/// reduced argument, so factorial expressions whose gamma arguments share a
/// residue class multiply, divide and add without ever evaluating Γ.
class GammaMonomial {
 public:
  GammaMonomial() = default;
  GammaMonomial(Rational coefficient);  // NOLINT(google-explicit-constructor)

  /// Γ(x) for rational x that is not a pole.
  static GammaMonomial gamma(const Rational& x);

  const Rational& coefficient() const { return coefficient_; }
  const std::map<Rational, int>& factors() const { return factors_; }

  bool is_zero() const { return coefficient_.is_zero(); }
  bool is_rational() const { return factors_.empty(); }
  /// Throws DomainError when transcendental gamma factors remain.
  const Rational& rational_value() const;
  double to_double() const;
  std::string str() const;

  GammaMonomial& operator*=(const GammaMonomial& rhs);
  GammaMonomial& operator/=(const GammaMonomial& rhs);
  /// Addition requires identical gamma factors (or a zero operand).
  GammaMonomial& operator+=(const GammaMonomial& rhs);
  GammaMonomial& operator-=(const GammaMonomial& rhs);
  GammaMonomial operator-() const;

  friend GammaMonomial operator*(GammaMonomial a, const GammaMonomial& b) { return a *= b; }
  friend GammaMonomial operator/(GammaMonomial a, const GammaMonomial& b) { return a /= b; }
  friend GammaMonomial operator+(GammaMonomial a, const GammaMonomial& b) { return a += b; }
  friend GammaMonomial operator-(GammaMonomial a, const GammaMonomial& b) { return a -= b; }
  friend bool operator==(const GammaMonomial& a, const GammaMonomial& b) {
    return a.coefficient_ == b.coefficient_ && a.factors_ == b.factors_;
  }

 private:
  void normalize();

  Rational coefficient_{0};
  std::map<Rational, int> factors_;
};

GammaMonomial falling_exact(const Rational& t, const Rational& alpha);
GammaMonomial rising_exact(const Rational& t, const Rational& alpha);

/// Γ(x+k)/Γ(x) = x(x+1)...(x+k-1); k >= 0. A factor at a pole simply
/// contributes zero.
template <Scalar T>
T gamma_ratio(const T& x, int k);

/// Γ(β+k) / (Γ(β) Γ(k+1)): the weight at lag k of every fractional sum of
/// order β (and, with β = -α, of the single-sum difference forms). Evaluated
/// as gamma_ratio(β, k)/k!, so it stays rational for rational β and is the
/// polynomial continuation in β at the poles of Γ(β).
template <Scalar T>
T lag_weight(const Rational& beta, int lag);

template <Scalar T>
struct KernelCoefficient {
  T value;
  Kind kind;
  Side side;
  Rational order;
  int lag;
};

/// Coefficient multiplying f(s) in the delta/nabla left/right fractional sum
/// of order α, where lag counts the steps between t and s:
///   delta-left  (t-σ(s))^(α-1)/Γ(α),         lag = t-α-s
///   delta-right (ρ(s)-t)^(α-1)/Γ(α),         lag = s-t-α
///   nabla-left  (t-ρ(s))^{overline α-1}/Γ(α), lag = t-s
///   nabla-right (σ(s)-t)^{overline α-1}/Γ(α), lag = s-t
/// All four reduce to lag_weight(α, lag).
template <Scalar T>
KernelCoefficient<T> sum_kernel(Kind kind, Side side, const Rational& alpha, int lag);

/// x^(μ)/Γ(μ+1) for x - μ = j an integer; zero when j < 0 (denominator pole).
template <Scalar T>
T falling_over_gamma(const Rational& x, const Rational& mu);

/// x^{overline μ}/Γ(μ+1) for integer x >= 0. At x = 0 the value is 1 for μ = 0
/// and 0 otherwise.
template <Scalar T>
T rising_over_gamma(const Rational& x, const Rational& mu);

/// Produces rows of lag weights for the operators. A perturbation scales one
/// lag of every row; it exists only so the identity harness can prove that it
/// notices a corrupted kernel.
template <Scalar T>
class KernelRows {
 public:
  struct Perturbation {
    int lag;
    double relative;
  };

  KernelRows() = default;
  explicit KernelRows(Perturbation p) : perturbation_(p) {}

  /// Weights lag_weight(β, 0..count-1).
  std::vector<T> row(const Rational& beta, std::size_t count) const;

  bool perturbed() const { return perturbation_.has_value(); }

 private:
  std::optional<Perturbation> perturbation_;
};

}  // namespace fracdiff
