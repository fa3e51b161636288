#include "fracdiff/operators.hpp"

#include <sstream>

#include "fracdiff/errors.hpp"

namespace fracdiff {

std::string to_string(Family f) {
  switch (f) {
    case Family::sum:
      return "sum";
    case Family::riemann:
      return "riemann";
    case Family::caputo:
      return "caputo";
  }
  return "?";
}

std::string to_string(Formulation f) { return f == Formulation::composed ? "composed" : "direct"; }

int order_ceiling(const Rational& alpha) {
  if (alpha.sign() <= 0) throw DomainError("order must be positive, got " + alpha.str());
  return static_cast<int>(alpha.ceil().to_int());
}

std::string OperatorSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind) << '-' << to_string(side) << ' ' << to_string(family) << " of order " << order;
  if (family == Family::riemann) os << " (" << to_string(formulation) << ')';
  if (anchor) os << " anchored at " << *anchor;
  return os.str();
}

std::string domain_label(const Rational& start, Direction d) {
  return d == Direction::forward ? "N_{" + start.str() + "}" : "_{" + start.str() + "}N";
}

namespace {

// Where the anchor sits in the storage of f. Left operators walk a forward
// grid upward from a, right operators walk a backward grid downward from b;
// in storage coordinates both are the same computation.
struct Placement {
  Rational anchor;
  std::int64_t offset;  // storage index of the anchor (may be -1 for nabla)
  bool left;

  Rational step(const Rational& x) const { return left ? anchor + x : anchor - x; }
};

template <Scalar T>
Placement place(const OperatorSpec& spec, const GridFunction<T>& f, bool anchor_may_precede) {
  const bool left = spec.side == Side::left;
  const Direction expected = left ? Direction::forward : Direction::backward;
  if (f.direction() != expected) {
    throw DomainError(spec.describe() + " needs a " + to_string(expected) + " grid, got " + f.describe());
  }
  const Rational anchor = spec.anchor.value_or(f.origin());
  const Rational off = left ? anchor - f.origin() : f.origin() - anchor;
  if (!off.is_integer()) {
    throw DomainError("anchor " + anchor.str() + " is not on the residue class of " + f.describe());
  }
  const auto k = off.to_int();
  const std::int64_t lowest = anchor_may_precede ? -1 : 0;
  if (k < lowest) throw DomainError("anchor " + anchor.str() + " lies outside " + f.describe());
  if (k >= static_cast<std::int64_t>(f.size())) {
    throw GridTooShort("no data after anchor " + anchor.str() + " on " + f.describe());
  }
  return {anchor, k, left};
}

Direction direction_for(Side side) { return side == Side::left ? Direction::forward : Direction::backward; }

// Δ for delta-left and nabla-right, ∇ for delta-right and nabla-left.
Kind difference_kind(Kind kind, Side side) {
  return (kind == Kind::delta) == (side == Side::left) ? Kind::delta : Kind::nabla;
}

OperatorSpec sum_spec(Kind kind, Side side, const Rational& order, const Rational& anchor) {
  OperatorSpec s;
  s.kind = kind;
  s.side = side;
  s.family = Family::sum;
  s.order = order;
  s.anchor = anchor;
  return s;
}

void require_positive(const Rational& alpha) {
  if (alpha.sign() <= 0) throw DomainError("order must be positive, got " + alpha.str());
}

template <Scalar T>
T zero() {
  return from_rational<T>(Rational(0));
}

}  // namespace

template <Scalar T>
GridFunction<T> fractional_sum(const OperatorSpec& spec, const GridFunction<T>& f, const KernelRows<T>& rows) {
  require_positive(spec.order);
  const bool nabla = spec.kind == Kind::nabla;
  const Placement p = place(spec, f, nabla);
  const auto count = static_cast<std::int64_t>(f.size()) - p.offset;
  if (count <= 0) throw GridTooShort(spec.describe() + " has an empty output on " + f.describe());

  const auto w = rows.row(spec.order, static_cast<std::size_t>(count));
  const auto data = f.values();
  auto value = [&](std::int64_t j) -> const T& { return data[static_cast<std::size_t>(p.offset + j)]; };

  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t m = 0; m < count; ++m) {
    T acc = zero<T>();
    for (std::int64_t j = nabla ? 1 : 0; j <= m; ++j) acc += w[static_cast<std::size_t>(m - j)] * value(j);
    out.push_back(std::move(acc));
  }
  const Rational origin = nabla ? p.anchor : p.step(spec.order);
  return GridFunction<T>(origin, direction_for(spec.side), std::move(out));
}

template <Scalar T>
T fractional_sum_at(const OperatorSpec& spec, const GridFunction<T>& f, const Rational& t,
                    const KernelRows<T>& rows) {
  require_positive(spec.order);
  const bool nabla = spec.kind == Kind::nabla;
  const Placement p = place(spec, f, nabla);
  const Rational first = nabla ? p.anchor : p.step(spec.order);
  const Rational m_r = p.left ? t - first : first - t;
  if (!m_r.is_integer()) throw DomainError("point " + t.str() + " is off the output grid of " + spec.describe());
  const auto m = m_r.to_int();
  if (m < 0) return zero<T>();
  if (m >= static_cast<std::int64_t>(f.size()) - p.offset) {
    throw DomainError("point " + t.str() + " needs data beyond " + f.describe());
  }
  const auto w = rows.row(spec.order, static_cast<std::size_t>(m + 1));
  T acc = zero<T>();
  for (std::int64_t j = nabla ? 1 : 0; j <= m; ++j) {
    acc += w[static_cast<std::size_t>(m - j)] * f.values()[static_cast<std::size_t>(p.offset + j)];
  }
  return acc;
}

namespace {

template <Scalar T>
GridFunction<T> riemann_composed(const OperatorSpec& spec, const GridFunction<T>& f, const KernelRows<T>& rows) {
  const int n = spec.n();
  const Rational complement = Rational(n) - spec.order;
  const Placement p = place(spec, f, !complement.is_zero() && spec.kind == Kind::nabla);
  const GridFunction<T> g = complement.is_zero()
                                ? f.from_point(p.anchor)
                                : fractional_sum(sum_spec(spec.kind, spec.side, complement, p.anchor), f, rows);
  return integer_difference(g, difference_kind(spec.kind, spec.side), n, !p.left);
}

template <Scalar T>
GridFunction<T> riemann_direct(const OperatorSpec& spec, const GridFunction<T>& f, const KernelRows<T>& rows) {
  if (spec.order.is_integer()) {
    throw DirectFormIntegerOrder("the single-sum Riemann form needs a non-integer order, got " + spec.order.str());
  }
  const bool nabla = spec.kind == Kind::nabla;
  const Placement p = place(spec, f, nabla);
  const int n = spec.n();
  const auto available = static_cast<std::int64_t>(f.size()) - p.offset;  // steps 0..available-1
  const std::int64_t first = nabla ? 1 : (spec.extended ? 1 : n);
  const auto count = available - first;
  if (count <= 0) throw GridTooShort(spec.describe() + " has an empty output on " + f.describe());

  const auto w = rows.row(-spec.order, static_cast<std::size_t>(available));
  const auto data = f.values();
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t j = first; j < available; ++j) {
    T acc = zero<T>();
    for (std::int64_t i = nabla ? 1 : 0; i <= j; ++i) {
      acc += w[static_cast<std::size_t>(j - i)] * data[static_cast<std::size_t>(p.offset + i)];
    }
    out.push_back(std::move(acc));
  }
  // delta: t = a - α + j (left) / b + α - j (right); nabla: t = a + j / b - j.
  const Rational origin = nabla ? p.step(Rational(first)) : p.step(Rational(first) - spec.order);
  return GridFunction<T>(origin, direction_for(spec.side), std::move(out));
}

}  // namespace

template <Scalar T>
GridFunction<T> riemann_difference(const OperatorSpec& spec, const GridFunction<T>& f, const KernelRows<T>& rows) {
  require_positive(spec.order);
  return spec.formulation == Formulation::direct ? riemann_direct(spec, f, rows) : riemann_composed(spec, f, rows);
}

template <Scalar T>
GridFunction<T> caputo_difference(const OperatorSpec& spec, const GridFunction<T>& f, const KernelRows<T>& rows) {
  require_positive(spec.order);
  const Placement p = place(spec, f, false);
  const int n = spec.n();
  const Rational complement = Rational(n) - spec.order;
  const GridFunction<T> d =
      integer_difference(f.from_point(p.anchor), difference_kind(spec.kind, spec.side), n, !p.left);
  if (complement.is_zero()) return d;
  if (spec.kind == Kind::delta) return fractional_sum(sum_spec(spec.kind, spec.side, complement, d.origin()), d, rows);
  // Nabla: sum from the shifted anchor a+n-1 (b-n+1), one step before d starts.
  const Rational shifted = p.left ? p.anchor + (n - 1) : p.anchor - (n - 1);
  return fractional_sum(sum_spec(spec.kind, spec.side, complement, shifted), d, rows).drop_front(1);
}

template <Scalar T>
GridFunction<T> caputo_from_riemann(const OperatorSpec& spec, const GridFunction<T>& f, const KernelRows<T>& rows) {
  require_positive(spec.order);
  const Placement p = place(spec, f, false);
  const int n = spec.n();
  const Rational& alpha = spec.order;

  OperatorSpec riemann = spec;
  riemann.family = Family::riemann;
  riemann.extended = false;
  Rational base = p.anchor;
  if (spec.kind == Kind::nabla) {
    if (alpha.is_integer()) {
      // 1/Γ(k-α+1) vanishes for every k < n: no correction.
      riemann.formulation = Formulation::composed;
      return riemann_difference(riemann, f, rows);
    }
    // The nabla Caputo domain N_{a+n} starts right after the shifted anchor,
    // which only the single-sum form reaches.
    base = p.left ? p.anchor + (n - 1) : p.anchor - (n - 1);
    riemann.anchor = base;
    riemann.formulation = Formulation::direct;
  } else {
    riemann.formulation = Formulation::composed;
  }
  const GridFunction<T> r = riemann_difference(riemann, f, rows);

  // k-th anchor differences: Δ^k f(a), ∇⊖^k f(b), ∇^k f(a(α)), ⊖Δ^k f(b(α)).
  const Kind kd = difference_kind(spec.kind, spec.side);
  std::vector<T> anchor_diffs;
  for (int k = 0; k < n; ++k) {
    T d = integer_difference_at(f, kd, k, base);
    if (!p.left && k % 2 == 1) d = -d;
    anchor_diffs.push_back(std::move(d));
  }

  std::vector<T> out;
  out.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Rational t = r.point(i);
    const Rational dist = p.left ? t - base : base - t;
    T value = r[i];
    for (int k = 0; k < n; ++k) {
      const Rational mu = Rational(k) - alpha;
      const T weight = spec.kind == Kind::delta ? falling_over_gamma<T>(dist, mu) : rising_over_gamma<T>(dist, mu);
      value -= weight * anchor_diffs[static_cast<std::size_t>(k)];
    }
    out.push_back(std::move(value));
  }
  return GridFunction<T>(r.origin(), r.direction(), std::move(out));
}

template <Scalar T>
GridFunction<T> caputo_inversion_residual(const GridFunction<T>& f, const Rational& alpha, Side side,
                                          const KernelRows<T>& rows) {
  require_positive(alpha);
  OperatorSpec caputo;
  caputo.kind = Kind::nabla;
  caputo.side = side;
  caputo.family = Family::caputo;
  caputo.order = alpha;
  const Placement p = place(caputo, f, false);
  const int n = caputo.n();
  const Rational base = p.left ? p.anchor + (n - 1) : p.anchor - (n - 1);

  const GridFunction<T> c = caputo_difference(caputo, f, rows);
  const GridFunction<T> s = fractional_sum(sum_spec(Kind::nabla, side, alpha, base), c, rows).drop_front(1);

  const Kind kd = p.left ? Kind::nabla : Kind::delta;
  std::vector<T> anchor_diffs;
  for (int k = 0; k < n; ++k) {
    T d = integer_difference_at(f, kd, k, base);
    if (!p.left && k % 2 == 1) d = -d;
    anchor_diffs.push_back(std::move(d));
  }

  std::vector<T> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Rational t = s.point(i);
    const Rational dist = p.left ? t - base : base - t;
    T taylor = zero<T>();
    for (int k = 0; k < n; ++k) {
      // dist^{overline k}/k!
      taylor += lag_weight<T>(dist, k) * anchor_diffs[static_cast<std::size_t>(k)];
    }
    out.push_back(s[i] - (f.at(t) - taylor));
  }
  return GridFunction<T>(s.origin(), s.direction(), std::move(out));
}

template <Scalar T>
IvpResidual<T> ivp_residual(const GridFunction<T>& f, Kind kind, Side side, int n) {
  if (n < 1) throw DomainError("initial value problems need n >= 1");
  const OperatorSpec spec = sum_spec(kind, side, Rational(n), f.origin());
  const bool left = side == Side::left;
  const GridFunction<T> u = fractional_sum(spec, f, KernelRows<T>{});
  const Kind kd = difference_kind(kind, side);

  // Prefix of empty-sum points before u's first point: n for delta, n-1 for nabla.
  const int pad = kind == Kind::delta ? n : n - 1;
  std::vector<T> values;
  for (int j = pad; j >= 1; --j) {
    const Rational t = left ? u.origin() - j : u.origin() + j;
    values.push_back(fractional_sum_at(spec, f, t, KernelRows<T>{}));
  }
  values.insert(values.end(), u.values().begin(), u.values().end());
  const Rational start = left ? u.origin() - pad : u.origin() + pad;
  const GridFunction<T> extended(start, u.direction(), std::move(values));

  const GridFunction<T> lhs = integer_difference(extended, kd, n, !left);
  std::vector<T> eq;
  for (std::size_t i = 0; i < lhs.size(); ++i) eq.push_back(lhs[i] - f.at(lhs.point(i)));

  std::vector<T> initial;
  const Rational& anchor = f.origin();
  if (kind == Kind::delta) {
    for (int j = 1; j <= n; ++j) initial.push_back(extended.at(left ? anchor + (j - 1) : anchor - (j - 1)));
  } else {
    for (int i = 0; i < n; ++i) {
      T d = integer_difference_at(extended, kd, i, anchor);
      if (!left && i % 2 == 1) d = -d;
      initial.push_back(std::move(d));
    }
  }
  return {GridFunction<T>(lhs.origin(), lhs.direction(), std::move(eq)), std::move(initial)};
}

#define FRACDIFF_INSTANTIATE(T)                                                                                  \
  template GridFunction<T> fractional_sum(const OperatorSpec&, const GridFunction<T>&, const KernelRows<T>&);    \
  template T fractional_sum_at(const OperatorSpec&, const GridFunction<T>&, const Rational&,                    \
                               const KernelRows<T>&);                                                            \
  template GridFunction<T> riemann_difference(const OperatorSpec&, const GridFunction<T>&, const KernelRows<T>&); \
  template GridFunction<T> caputo_difference(const OperatorSpec&, const GridFunction<T>&, const KernelRows<T>&);  \
  template GridFunction<T> caputo_from_riemann(const OperatorSpec&, const GridFunction<T>&,                     \
                                               const KernelRows<T>&);                                            \
  template GridFunction<T> caputo_inversion_residual(const GridFunction<T>&, const Rational&, Side,              \
                                                     const KernelRows<T>&);                                      \
  template IvpResidual<T> ivp_residual(const GridFunction<T>&, Kind, Side, int);

FRACDIFF_INSTANTIATE(double)
FRACDIFF_INSTANTIATE(Rational)

#undef FRACDIFF_INSTANTIATE

}  // namespace fracdiff
