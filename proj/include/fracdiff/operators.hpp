#pragma once

#include <optional>
#include <string>

#include "fracdiff/grids.hpp"
#include "fracdiff/kernels.hpp"
#include "fracdiff/rational.hpp"

namespace fracdiff {

enum class Family { sum, riemann, caputo };
enum class Formulation { composed, direct };

std::string to_string(Family f);
std::string to_string(Formulation f);

/// Integer part used throughout: n = [α] + 1 where [α] is the greatest integer
/// strictly below α, i.e. n = ceil(α) for α > 0.
int order_ceiling(const Rational& alpha);

struct OperatorSpec {
  Kind kind = Kind::delta;
  Side side = Side::left;
  Family family = Family::sum;
  Rational order{1};
  Formulation formulation = Formulation::composed;
  /// Left anchor a (or right anchor b). Defaults to the grid origin.
  std::optional<Rational> anchor;
  /// Direct delta differences only: also emit the points between the first
  /// single-sum point and the composed domain.
  bool extended = false;

  int n() const { return order_ceiling(order); }
  std::string describe() const;
};

/// Label of the output index set, e.g. "N_{1/2}" or "_{3}N".
std::string domain_label(const Rational& start, Direction d);

/// Delta/nabla left/right fractional sum of order α > 0.
///
///   delta-left   N_a  -> N_{a+α}
///   delta-right  _bN  -> _{b-α}N
///   nabla-left   N_a  -> N_a   (value 0 at t = a, empty sum)
///   nabla-right  _bN  -> _bN   (value 0 at t = b, empty sum)
///
/// Left sides need a forward grid and right sides a backward one. The nabla
/// anchor may sit one step outside the data since f(anchor) is never read.
template <Scalar T>
GridFunction<T> fractional_sum(const OperatorSpec& spec, const GridFunction<T>& f,
                               const KernelRows<T>& rows = {});

/// Fractional sum at an arbitrary point of the output residue class; points
/// before the first output point are empty sums and give zero.
template <Scalar T>
T fractional_sum_at(const OperatorSpec& spec, const GridFunction<T>& f, const Rational& t,
                    const KernelRows<T>& rows = {});

/// Riemann fractional difference.
///
/// composed: integer difference of the order n-α sum (Δ^n, ∇⊖^n, ∇^n, ⊖Δ^n for
/// delta-left, delta-right, nabla-left, nabla-right), on N_{a+n-α}, _{b-n+α}N,
/// N_{a+n}, _{b-n}N.
/// direct: the single sum with weights lag_weight(-α, ·), on N_{a+n-α},
/// _{b-n+α}N, N_{a+1}, _{b-1}N. Throws DirectFormIntegerOrder for α in N.
template <Scalar T>
GridFunction<T> riemann_difference(const OperatorSpec& spec, const GridFunction<T>& f,
                                   const KernelRows<T>& rows = {});

/// Caputo fractional difference: the order n-α sum applied to the integer
/// difference. The nabla variants use the shifted anchors a+n-1 and b-n+1.
/// Domains: N_{a+n-α}, _{b-n+α}N, N_{a+n}, _{b-n}N.
template <Scalar T>
GridFunction<T> caputo_difference(const OperatorSpec& spec, const GridFunction<T>& f,
                                  const KernelRows<T>& rows = {});

/// Riemann difference minus the finite anchor correction
///   Σ_{k<n} (t-a)^(k-α)/Γ(k-α+1) Δ^k f(a)
/// (and its right / nabla counterparts). Equals the Caputo difference.
template <Scalar T>
GridFunction<T> caputo_from_riemann(const OperatorSpec& spec, const GridFunction<T>& f,
                                    const KernelRows<T>& rows = {});

/// ∇^{-α} applied to the nabla Caputo difference, minus f plus its Taylor
/// polynomial at the shifted anchor. Identically zero in exact arithmetic.
/// Side left needs a forward grid, side right a backward one.
template <Scalar T>
GridFunction<T> caputo_inversion_residual(const GridFunction<T>& f, const Rational& alpha, Side side,
                                          const KernelRows<T>& rows = {});

/// Residuals of the integer-order sum initial value problems. For u the order-n
/// sum of f:
///   delta-left   Δ^n u = f on N_a,        u(a+j-1) = 0,   j = 1..n
///   delta-right  ∇⊖^n u = f on _bN,       u(b-j+1) = 0,   j = 1..n
///   nabla-left   ∇^n u = f on N_{a+1},    ∇^i u(a) = 0,   i < n
///   nabla-right  ⊖Δ^n u = f on _{b-1}N,   ⊖Δ^i u(b) = 0,  i < n
template <Scalar T>
struct IvpResidual {
  GridFunction<T> equation;
  std::vector<T> initial_values;
};

template <Scalar T>
IvpResidual<T> ivp_residual(const GridFunction<T>& f, Kind kind, Side side, int n);

}  // namespace fracdiff
