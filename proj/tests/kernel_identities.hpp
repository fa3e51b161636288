#pragma once
// Factorial-function identities checked at sampled admissible points, once
// exactly (GammaMonomial) and once in floating point.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fracdiff/errors.hpp"
#include "fracdiff/kernels.hpp"
#include "oracle.hpp"

namespace kernel_identities {

using fracdiff::GammaMonomial;
using fracdiff::Rational;

/// Terms of an identity lhs == rhs, with the factorial evaluator abstracted
/// so the same statement runs on both backends.
template <class V>
struct Ops {
  std::function<V(const Rational&, const Rational&)> falling;
  std::function<V(const Rational&, const Rational&)> rising;
  std::function<V(const Rational&)> scalar;
};

/// Both sides of an identity plus every factorial term it evaluated.
template <class V>
struct Sides {
  V lhs;
  V rhs;
  std::vector<V> terms;
};

/// Identity `which` at points t, s and order a.
template <class V>
Sides<V> evaluate(int which, const Ops<V>& o, const Rational& t, const Rational& s, const Rational& a) {
  const Rational one(1);
  switch (which) {
    case 0: {  // Δ t^(α) = α t^(α-1)
      const V u = o.falling(t + one, a), v = o.falling(t, a), w = o.falling(t, a - one);
      return {u - v, o.scalar(a) * w, {u, v, w}};
    }
    case 1: {  // (t-μ) t^(μ) = t^(μ+1)
      const V u = o.falling(t, a), w = o.falling(t, a + one);
      return {o.scalar(t - a) * u, w, {u, w}};
    }
    case 2: {  // t^(α+β) = (t-β)^(α) t^(β), β = s
      const V u = o.falling(t, a + s), v = o.falling(t - s, a), w = o.falling(t, s);
      return {u, v * w, {u, v, w}};
    }
    case 3: {  // ∇_s (s-t)^(α-1) = (α-1)(ρ(s)-t)^(α-2)
      const V u = o.falling(s - t, a - one), v = o.falling(s - one - t, a - one), w = o.falling(s - one - t, a - 2);
      return {u - v, o.scalar(a - one) * w, {u, v, w}};
    }
    case 4: {  // ∇_t (ρ(s)-t)^(α-1) = -(α-1)(ρ(s)-t)^(α-2)
      const V u = o.falling(s - one - t, a - one), v = o.falling(s - t, a - one),
              w = o.falling(s - one - t, a - 2);
      return {u - v, o.scalar(one - a) * w, {u, v, w}};
    }
    case 5: {  // ∇ t^{overline α} = α t^{overline α-1}
      const V u = o.rising(t, a), v = o.rising(t - one, a), w = o.rising(t, a - one);
      return {u - v, o.scalar(a) * w, {u, v, w}};
    }
    case 6: {  // t^{overline α} = (t+α-1)^(α)
      const V u = o.rising(t, a), w = o.falling(t + a - one, a);
      return {u, w, {u, w}};
    }
    default: {  // Δ_t (s-ρ(t))^{overline α} = -α (s-ρ(t))^{overline α-1}
      const V u = o.rising(s - t, a), v = o.rising(s - t + one, a), w = o.rising(s - t + one, a - one);
      return {u - v, o.scalar(-a) * w, {u, v, w}};
    }
  }
}

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n = {
      "falling difference",     "falling shift product", "falling exponent split", "kernel s-difference",
      "kernel t-difference",    "rising difference",     "rising as falling",      "rising kernel t-difference",
  };
  return n;
}

struct Result {
  int admissible = 0;
  int exact_failures = 0;
  double max_relative = 0;
  std::string first_failure;
};

inline Ops<GammaMonomial> exact_ops() {
  return {[](const Rational& t, const Rational& a) { return fracdiff::falling_exact(t, a); },
          [](const Rational& t, const Rational& a) { return fracdiff::rising_exact(t, a); },
          [](const Rational& c) { return GammaMonomial(c); }};
}

inline Ops<double> float_ops() {
  return {[](const Rational& t, const Rational& a) { return fracdiff::falling(t.to_double(), a.to_double()); },
          [](const Rational& t, const Rational& a) { return fracdiff::rising(t.to_double(), a.to_double()); },
          [](const Rational& c) { return c.to_double(); }};
}

/// Samples points until `target` admissible ones (both sides defined on both
/// backends) have been checked. Points are rationals with denominator <= 12
/// and |value| <= 12; a quarter of them are integers so pole conventions get
/// exercised.
inline Result run(int which, int target, std::uint64_t seed) {
  oracle::Gen gen(seed);
  auto point = [&gen] {
    if (gen.integer(0, 3) == 0) return Rational(gen.integer(-6, 12));
    return Rational(gen.integer(-144, 144), gen.integer(1, 12));
  };
  const auto ex = exact_ops();
  const auto fl = float_ops();
  Result r;
  int attempts = 0;
  while (r.admissible < target && attempts < 200 * target) {
    ++attempts;
    const Rational t = point();
    const Rational s = point();
    const Rational a = gen.integer(0, 4) == 0 ? Rational(gen.integer(-2, 4)) : Rational(gen.integer(-36, 36), gen.integer(1, 12));
    Sides<GammaMonomial> e;
    Sides<double> f;
    try {
      e = evaluate(which, ex, t, s, a);
      f = evaluate(which, fl, t, s, a);
    } catch (const fracdiff::Error&) {
      continue;  // not admissible: a pole rule leaves one side undefined
    }
    bool finite = true;
    double scale = 1.0;
    for (const double v : f.terms) {
      finite = finite && std::isfinite(v);
      scale = std::max(scale, std::fabs(v));
    }
    if (!finite) continue;
    ++r.admissible;
    bool exact_ok = true;
    try {
      exact_ok = (e.lhs - e.rhs).is_zero();
    } catch (const fracdiff::Error&) {
      exact_ok = false;  // gamma factors that do not cancel
    }
    const double rel = std::fabs(f.lhs - f.rhs) / scale;
    r.max_relative = std::max(r.max_relative, rel);
    if ((!exact_ok || rel > 1e-10) && r.first_failure.empty()) {
      r.first_failure = "t=" + t.str() + " s=" + s.str() + " alpha=" + a.str();
    }
    if (!exact_ok) ++r.exact_failures;
  }
  return r;
}

}  // namespace kernel_identities
