#include "fracdiff/monotone.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <thread>

#include "fracdiff/errors.hpp"
#include "fracdiff/kernels.hpp"
#include "fracdiff/operators.hpp"

namespace fracdiff {

namespace {

using D = Direction;

const std::vector<TheoremInfo>& registry() {
  static const std::vector<TheoremInfo> table = {
      {TheoremId::T_JEP1, "T_JEP1", false, D::forward, 0, 3,
       "Δ_a^ν f >= 0 on N_{a+2-ν}, f(a+1) >= f(a) >= 0", "Δf >= 0 on N_a", ""},
      {TheoremId::T_JEP, "T_JEP", false, D::forward, 0, 2, "∇_a^ν f >= 0 on N_{a+1}", "∇f >= 0 on N_{a+1}",
       "the hypothesis never involves f(a)"},
      {TheoremId::T_JEPP, "T_JEPP", false, D::forward, -1, 3, "∇_{a-1}^ν f >= 0 on N_a, f on N_{a-1}",
       "∇f >= 0 on N_{a+1}", ""},
      {TheoremId::T_SLOV1, "T_SLOV1", false, D::forward, 0, 3,
       "Δ_a^ν f >= 0 on N_{a+2-ν}, f(a+1) >= ν/(k+1) f(a) for k in N_0", "Δf >= 0 on N_{a+1}", ""},
      {TheoremId::T_SLOV11, "T_SLOV11", false, D::forward, -1, 4,
       "∇_{a-1}^ν f >= 0 on N_{a+2}, f(a+1) >= ν/(k+2) f(a) for k in N_0, f on N_{a-1}", "∇f >= 0 on N_{a+2}",
       "hypothesis index set N_{a+2} taken as stated"},
      {TheoremId::T_SLOV2, "T_SLOV2", false, D::forward, 0, 4,
       "Δ_a^ν f >= 0 on N_{a+2-ν}, f(a+2) >= ν/(k+2) f(a+1) + (k+1-ν)ν/((k+2)(k+3)) f(a) for k in N_1",
       "Δf >= 0 on N_{a+2}", ""},
      {TheoremId::T_SLOV22, "T_SLOV22", false, D::forward, -1, 5,
       "∇_{a-1}^ν f >= 0 on N_{a+3}, f(a+2) >= ν/(k+2) f(a+1) + (k+1-ν)ν/((k+2)(k+3)) f(a) for k in N_1",
       "∇f >= 0 on N_{a+3}", ""},
      {TheoremId::T_SLOV3, "T_SLOV3", false, D::forward, 0, 5,
       "Δ_a^ν f >= 0 on N_{a+2-ν}, f(a+3) >= ν/k f(a+2) + (k-ν)ν/(k(k+1)) f(a+1) + "
       "(k+1-ν)(k-ν)ν/((k+1)(k+2)k) f(a) for k in N_2",
       "Δf >= 0 on N_{a+3}", ""},
      {TheoremId::T_SLOV33, "T_SLOV33", false, D::forward, -1, 6,
       "∇_{a-1}^ν f >= 0 on N_{a+4}, f(a+3) >= ν/k f(a+2) + (k-ν)ν/(k(k+1)) f(a+1) + "
       "(k+1-ν)(k-ν)ν/((k+1)(k+2)k) f(a) for k in N_2",
       "∇f >= 0 on N_{a+4}", "third coefficient read as (k+1-ν)(k-ν)ν/((k+1)(k+2)k)"},
      {TheoremId::T_U1, "T_U1", true, D::forward, 0, 2, "f(a) >= 0, Δ_a^ν f >= 0 on N_{a+1-ν}",
       "f is ν-increasing on N_a", ""},
      {TheoremId::T_UU1, "T_UU1", true, D::forward, 0, 2, "∇_{a-1}^ν f >= 0 on N_a", "f is ν-increasing on N_a",
       "no separate f(a) >= 0 hypothesis; it is the t = a instance"},
      {TheoremId::T_U3, "T_U3", true, D::forward, 0, 2, "Δf >= 0 on N_a, f(a) >= 0", "Δ_a^ν f >= 0 on N_{a+1-ν}",
       "increasing read as nondecreasing"},
      {TheoremId::T_UU2, "T_UU2", true, D::forward, 0, 2, "Δf >= 0 on N_a, f(a) >= 0", "∇_{a-1}^ν f >= 0 on N_a",
       "increasing read as nondecreasing"},
      {TheoremId::T_C1, "T_C1", false, D::forward, 0, 3,
       "^CΔ_a^ν f(t) >= -(t-a)^(-ν)/Γ(1-ν) f(a) - (t-a)^(1-ν)/Γ(2-ν) Δf(a) on N_{a+2-ν}, f(a+1) >= f(a) >= 0",
       "Δf >= 0 on N_a", ""},
      {TheoremId::T_C2, "T_C2", false, D::forward, 0, 3,
       "^CΔ_a^ν f(t) >= -(t-a)^(-ν)/Γ(1-ν) f(a) - (t-a)^(1-ν)/Γ(2-ν) Δf(a) on N_{a+2-ν}, "
       "f(a+1) >= ν/(k+1) f(a) for k in N_0",
       "Δf >= 0 on N_{a+1}", ""},
      {TheoremId::T_C3, "T_C3", false, D::forward, 0, 4,
       "^CΔ_a^ν f(t) >= -(t-a)^(-ν)/Γ(1-ν) f(a) - (t-a)^(1-ν)/Γ(2-ν) Δf(a) on N_{a+2-ν}, "
       "f(a+2) >= ν/(k+2) f(a+1) + (k+1-ν)ν/((k+2)(k+3)) f(a) for k in N_1",
       "Δf >= 0 on N_{a+2}", ""},
      {TheoremId::T_C4, "T_C4", false, D::forward, 0, 5,
       "^CΔ_a^ν f(t) >= -(t-a)^(-ν)/Γ(1-ν) f(a) - (t-a)^(1-ν)/Γ(2-ν) Δf(a) on N_{a+2-ν}, "
       "f(a+3) >= ν/k f(a+2) + (k-ν)ν/(k(k+1)) f(a+1) + (k+1-ν)(k-ν)ν/((k+1)(k+2)k) f(a) for k in N_2",
       "Δf >= 0 on N_{a+3}", ""},
      {TheoremId::T_C5, "T_C5", true, D::forward, 0, 2,
       "f(a) >= 0, ^CΔ_a^ν f(t) >= -(t-a)^(-ν)/Γ(1-ν) f(a) on N_{a+1-ν}", "f is ν-increasing on N_a", ""},
      {TheoremId::T_C6, "T_C6", true, D::forward, 0, 2, "Δf >= 0 on N_a, f(a) >= 0",
       "^CΔ_a^ν f(t) >= -(t-a)^(-ν)/Γ(1-ν) f(a) on N_{a+1-ν}", "increasing read as nondecreasing"},
      {TheoremId::T_D1, "T_D1", false, D::backward, 0, 3, "_bΔ^α f >= 0 on _{b-2+α}N, f(b-1) >= f(b) >= 0",
       "-∇f >= 0 on _bN", ""},
      {TheoremId::T_N1, "T_N1", false, D::backward, 1, 3, "_{b+1}∇^α f >= 0 on _bN, f on _{b+1}N",
       "-Δf >= 0 on _{b-1}N", ""},
      {TheoremId::T_D2, "T_D2", false, D::backward, 0, 3,
       "_bΔ^α f >= 0 on _{b-2+α}N, f(b-1) >= α/(k+1) f(b) >= 0 for k in N_0", "-∇f >= 0 on _{b-1}N", ""},
      {TheoremId::T_D3, "T_D3", false, D::backward, 0, 4,
       "_bΔ^α f >= 0 on _{b-2+α}N, f(b-2) >= α/(k+2) f(b-1) + (k+1-α)α/((k+2)(k+3)) f(b) for k in N_1",
       "-∇f >= 0 on _{b-2}N", "the order symbol inside the second coefficient read as α"},
      {TheoremId::T_D4, "T_D4", false, D::backward, 0, 5,
       "_bΔ^α f >= 0 on _{b-2+α}N, f(b-3) >= α/k f(b-2) + (k-α)α/(k(k+1)) f(b-1) + "
       "(k+1-α)(k-α)α/((k+1)(k+2)k) f(b) for k in N_2",
       "-∇f >= 0 on _{b-3}N", "the order symbol inside the third coefficient read as α"},
      {TheoremId::T_D5, "T_D5", true, D::backward, 0, 2, "f(b) >= 0, _bΔ^α f >= 0 on _{b-1+α}N",
       "f is α-decreasing: f(t) >= α f(t+1) on _{b-1}N", "conclusion taken on the points where f(t+1) exists"},
      {TheoremId::T_D6, "T_D6", true, D::backward, 0, 2, "f(b) >= 0, -∇f >= 0 on _bN", "_bΔ^α f >= 0 on _{b-1+α}N",
       "decreasing read as nonincreasing"},
      {TheoremId::T_CD1, "T_CD1", false, D::backward, 0, 3,
       "^C_bΔ^α f(u) >= -(b-u)^(-α)/Γ(1-α) f(b) + (b-u)^(1-α)/Γ(2-α) ∇f(b) on _{b-2+α}N, f(b-1) >= f(b) >= 0",
       "-∇f >= 0 on _bN", "second correction term divided by Γ(2-α)"},
      {TheoremId::T_CD5, "T_CD5", true, D::backward, 0, 2,
       "f(b) >= 0, ^C_bΔ^α f(u) >= -(b-u)^(-α)/Γ(1-α) f(b) on _{b-1+α}N",
       "f is α-decreasing: f(t) >= α f(t+1) on _{b-1}N", "conclusion taken on the points where f(t+1) exists"},
  };
  return table;
}

// ---------------------------------------------------------------------------
// "for each k >= k0" starting conditions

class Poly {
 public:
  Poly() = default;
  Poly(std::initializer_list<Rational> c) : c_(c) {}
  explicit Poly(std::vector<Rational> c) : c_(std::move(c)) {}

  Rational operator()(const Rational& k) const {
    Rational v(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * k + *it;
    return v;
  }

  friend Poly operator*(const Poly& p, const Poly& q) {
    if (p.c_.empty() || q.c_.empty()) return {};
    std::vector<Rational> r(p.c_.size() + q.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < p.c_.size(); ++i) {
      for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
    }
    return Poly(std::move(r));
  }
  friend Poly operator*(const Rational& s, Poly p) {
    for (auto& x : p.c_) x *= s;
    return p;
  }
  friend Poly operator+(Poly p, const Poly& q) {
    if (q.c_.size() > p.c_.size()) p.c_.resize(q.c_.size(), Rational(0));
    for (std::size_t i = 0; i < q.c_.size(); ++i) p.c_[i] += q.c_[i];
    return p;
  }
  friend Poly operator-(const Poly& p, const Poly& q) { return p + Rational(-1) * q; }

  /// Coefficients with trailing zeros removed.
  std::vector<Rational> trimmed() const {
    std::vector<Rational> c = c_;
    while (!c.empty() && c.back().is_zero()) c.pop_back();
    return c;
  }

 private:
  std::vector<Rational> c_;  // ascending powers of k
};

Poly linear(long long shift) { return Poly{Rational(shift), Rational(1)}; }  // k + shift

struct StartingCondition {
  int k0;
  Poly numerator;    // slack(k) * denominator(k)
  Poly denominator;  // positive for k >= k0
  Rational target;   // the limit of slack(k) as k grows
  std::function<Rational(const Rational&)> literal;  // slack(k) term by term
  std::vector<Rational> key;                          // identifies the condition
};

struct ForAllOutcome {
  bool holds;
  Rational margin;
  bool literal_agrees;
};

ForAllOutcome decide_uncached(const StartingCondition& c, int k_cap) {
  const auto p = c.numerator.trimmed();
  Rational bound(0);
  if (p.size() > 1) {
    const Rational lead = p.back().abs();
    for (std::size_t i = 0; i + 1 < p.size(); ++i) bound = std::max(bound, p[i].abs() / lead);
    bound += 1;
  }
  // Past the Cauchy root bound the numerator keeps a constant sign.
  const std::int64_t last = std::max<std::int64_t>(c.k0, bound.ceil().to_int()) + 1;
  if (last - c.k0 > 100'000) throw DomainError("starting condition too ill-conditioned to decide");

  bool holds = true;
  Rational margin = c.target;
  for (std::int64_t k = c.k0; k <= last; ++k) {
    const Rational kk(static_cast<long long>(k));
    const Rational num = c.numerator(kk);
    if (num.sign() < 0) holds = false;
    margin = std::min(margin, num / c.denominator(kk));
  }
  bool literal_holds = true;
  for (std::int64_t k = c.k0; k <= k_cap && literal_holds; ++k) {
    literal_holds = c.literal(Rational(static_cast<long long>(k))).sign() >= 0;
  }
  return {holds, margin, !holds || literal_holds};
}

// Searches revisit the same few leading values many times.
ForAllOutcome decide(const StartingCondition& c, int k_cap) {
  thread_local std::map<std::vector<Rational>, ForAllOutcome> cache;
  std::vector<Rational> key = c.key;
  key.emplace_back(k_cap);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  if (cache.size() > 200'000) cache.clear();
  const ForAllOutcome r = decide_uncached(c, k_cap);
  cache.emplace(std::move(key), r);
  return r;
}

// target >= ν/(k+shift) x0 for k >= 0
StartingCondition one_term(const Rational& nu, long long shift, const Rational& x0, const Rational& target) {
  const Poly den = linear(shift);
  auto literal = [=](const Rational& k) { return target - nu / (k + shift) * x0; };
  return {0, target * den - Poly{nu * x0}, den, target, literal, {Rational(1), Rational(shift), nu, x0, target}};
}

// target >= ν/(k+2) x1 + (k+1-ν)ν/((k+2)(k+3)) x0 for k >= 1
StartingCondition two_term(const Rational& nu, const Rational& x0, const Rational& x1, const Rational& target) {
  const Poly den = linear(2) * linear(3);
  const Poly num = target * den - (nu * x1) * linear(3) - (nu * x0) * Poly{Rational(1) - nu, Rational(1)};
  auto literal = [=](const Rational& k) {
    return target - nu / (k + 2) * x1 - (k + 1 - nu) * nu / ((k + 2) * (k + 3)) * x0;
  };
  return {1, num, den, target, literal, {Rational(2), nu, x0, x1, target}};
}

// target >= ν/k x2 + (k-ν)ν/(k(k+1)) x1 + (k+1-ν)(k-ν)ν/((k+1)(k+2)k) x0 for k >= 2
StartingCondition three_term(const Rational& nu, const Rational& x0, const Rational& x1, const Rational& x2,
                             const Rational& target) {
  const Poly k_minus_nu{-nu, Rational(1)};
  const Poly den = linear(0) * linear(1) * linear(2);
  const Poly num = target * den - (nu * x2) * (linear(1) * linear(2)) - (nu * x1) * (k_minus_nu * linear(2)) -
                   (nu * x0) * (Poly{Rational(1) - nu, Rational(1)} * k_minus_nu);
  auto literal = [=](const Rational& k) {
    return target - nu / k * x2 - (k - nu) * nu / (k * (k + 1)) * x1 -
           (k + 1 - nu) * (k - nu) * nu / ((k + 1) * (k + 2) * k) * x0;
  };
  return {2, num, den, target, literal, {Rational(3), nu, x0, x1, x2, target}};
}

Rational exact_value(double x) { return Rational(mpq_class(x)); }
Rational exact_value(const Rational& x) { return x; }

// ---------------------------------------------------------------------------

template <Scalar T>
T zero() {
  return from_rational<T>(Rational(0));
}

template <Scalar T>
std::vector<Margin<T>> monotone_margins(const GridFunction<T>& f, const Rational& nu, Monotonicity m) {
  if (nu.sign() <= 0 || nu >= Rational(1)) throw DomainError("ν must lie in (0,1), got " + nu.str());
  const T v = from_rational<T>(nu);
  const bool forward = f.direction() == Direction::forward;
  // In storage order, "next >= ν prev" is ν-increasing forward and
  // ν-decreasing backward.
  const bool next_dominates = (m == Monotonicity::increasing) == forward;
  std::vector<Margin<T>> out;
  out.push_back({"f(origin) >= 0", f.origin(), f[0]});
  for (std::size_t k = 0; k + 1 < f.size(); ++k) {
    const T slack = next_dominates ? f[k + 1] - v * f[k] : v * f[k] - f[k + 1];
    // Label by the lower of the two points, as in f(t+1) vs f(t).
    const Rational t = forward ? f.point(k) : f.point(k + 1);
    out.push_back({next_dominates == forward ? "f(t+1) >= ν f(t)" : "f(t) >= ν f(t+1)", t, slack});
  }
  return out;
}

template <Scalar T>
class Evaluator {
 public:
  Evaluator(const TheoremCase<T>& c, const TheoremInfo& info)
      : c_(c), info_(info), anchor_(c.anchor()), left_(info.direction == Direction::forward) {}

  const Rational& anchor() const { return anchor_; }
  const Rational& nu() const { return c_.order; }
  const GridFunction<T>& f() const { return c_.f; }

  // f(a+j) for left theorems, f(b-j) for right ones.
  const T& x(int j) const { return c_.f.at(left_ ? anchor_ + j : anchor_ - j); }
  Rational xr(int j) const { return exact_value(x(j)); }

  void hyp(std::string label, std::optional<Rational> point, T value) {
    hyp_.push_back({std::move(label), std::move(point), std::move(value)});
  }
  void concl(std::string label, std::optional<Rational> point, T value) {
    concl_.push_back({std::move(label), std::move(point), std::move(value)});
  }

  // g >= 0 at every point of g from `start` on (in g's direction).
  void nonneg(bool hypothesis, const std::string& label, const GridFunction<T>& g, const Rational& start) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Rational t = g.point(k);
      const bool after = g.direction() == Direction::forward ? t >= start : t <= start;
      if (!after) continue;
      (hypothesis ? hyp_ : concl_).push_back({label, t, g[k]});
    }
  }

  void for_all_k(const std::string& label, const StartingCondition& cond) {
    const ForAllOutcome r = decide(cond, c_.k_cap);
    guard_ = guard_ && r.literal_agrees;
    hyp(label, std::nullopt, from_rational<T>(r.margin));
    // A holding condition must never report a negative margin and vice versa.
    if (r.holds != (r.margin.sign() >= 0)) throw Error("internal: starting condition margin disagrees with decision");
  }

  GridFunction<T> op(Kind kind, Family family, Formulation form, std::optional<Rational> anchor) const {
    OperatorSpec s;
    s.kind = kind;
    s.side = left_ ? Side::left : Side::right;
    s.family = family;
    s.order = c_.order;
    s.formulation = form;
    s.anchor = std::move(anchor);
    return family == Family::caputo ? caputo_difference(s, c_.f) : riemann_difference(s, c_.f);
  }

  // Caputo difference plus the finite correction from its Riemann relation;
  // nonnegative exactly when the Riemann difference is.
  GridFunction<T> caputo_slack() const {
    const GridFunction<T> c = op(Kind::delta, Family::caputo, Formulation::composed, std::nullopt);
    const int n = order_ceiling(c_.order);
    std::vector<T> out;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const Rational dist = left_ ? c.point(k) - anchor_ : anchor_ - c.point(k);
      T v = c[k] + falling_over_gamma<T>(dist, -c_.order) * x(0);
      if (n == 2) {
        // left: + Δf(a) term; right: ∇⊖f(b) = f(b-1) - f(b)
        v += falling_over_gamma<T>(dist, Rational(1) - c_.order) * (x(1) - x(0));
      }
      out.push_back(std::move(v));
    }
    return GridFunction<T>(c.origin(), c.direction(), std::move(out));
  }

  // Δf on a forward grid / -∇f on a backward grid: the "moving away from the
  // anchor" first difference, attributed per the statement's convention.
  GridFunction<T> delta_f() const { return integer_difference(c_.f, Kind::delta, 1, false); }
  GridFunction<T> nabla_f() const { return integer_difference(c_.f, Kind::nabla, 1, !left_); }
  GridFunction<T> minus_delta_f() const { return integer_difference(c_.f, Kind::delta, 1, true); }

  void monotone_conclusion(Monotonicity m) {
    for (auto& mg : monotone_margins(c_.f, c_.order, m)) concl_.push_back(std::move(mg));
  }
  void monotone_hypothesis_increasing() {
    // f(a) >= 0 and Δf >= 0 (left) / -∇f >= 0 (right) on every point
    hyp("f(anchor) >= 0", anchor_, x(0));
    if (left_) {
      nonneg(true, "Δf(t) >= 0", delta_f(), anchor_);
    } else {
      nonneg(true, "-∇f(t) >= 0", nabla_f(), anchor_);
    }
  }

  TheoremVerdict<T> finish() {
    TheoremVerdict<T> v;
    v.theorem = info_.id;
    v.order = c_.order;
    v.anchor = anchor_;
    v.hypothesis_margins = std::move(hyp_);
    v.conclusion_margins = std::move(concl_);
    for (const auto& m : v.hypothesis_margins) {
      if (!v.hypothesis_margin || m.value < *v.hypothesis_margin) v.hypothesis_margin = m.value;
    }
    for (const auto& m : v.conclusion_margins) {
      if (!v.conclusion_margin || m.value < *v.conclusion_margin) v.conclusion_margin = m.value;
    }
    v.hypothesis_holds = !v.hypothesis_margin || *v.hypothesis_margin >= zero<T>();
    v.conclusion_holds = !v.conclusion_margin || *v.conclusion_margin >= zero<T>();
    v.consistent = !v.hypothesis_holds || v.conclusion_holds;
    v.literal_guard_agrees = guard_;
    return v;
  }

 private:
  const TheoremCase<T>& c_;
  const TheoremInfo& info_;
  Rational anchor_;
  bool left_ = true;
  bool guard_ = true;
  std::vector<Margin<T>> hyp_;
  std::vector<Margin<T>> concl_;
};

void check_order(const TheoremInfo& info, const Rational& nu) {
  const bool ok = info.low_order ? (nu.sign() > 0 && nu < Rational(1)) : (nu > Rational(1) && nu < Rational(2));
  if (!ok) {
    throw DomainError(info.name + " needs an order in " + (info.low_order ? "(0,1)" : "(1,2)") + ", got " + nu.str());
  }
}

}  // namespace

std::string to_string(TheoremId id) { return theorem_info(id).name; }

std::optional<TheoremId> parse_theorem(const std::string& name) {
  for (const auto& t : registry()) {
    if (t.name == name) return t.id;
  }
  return std::nullopt;
}

const std::vector<TheoremId>& all_theorems() {
  static const std::vector<TheoremId> ids = [] {
    std::vector<TheoremId> v;
    for (const auto& t : registry()) v.push_back(t.id);
    return v;
  }();
  return ids;
}

const TheoremInfo& theorem_info(TheoremId id) { return registry()[static_cast<std::size_t>(id)]; }

template <Scalar T>
Verdict<T> is_nu_monotone(const GridFunction<T>& f, const Rational& nu, Monotonicity direction) {
  const auto margins = monotone_margins(f, nu, direction);
  Verdict<T> v;
  v.margin = margins.front().value;
  v.worst_point = margins.front().point;
  for (const auto& m : margins) {
    if (m.value < v.margin) {
      v.margin = m.value;
      v.worst_point = m.point;
    }
  }
  v.holds = v.margin >= zero<T>();
  return v;
}

template <Scalar T>
Rational TheoremCase<T>::anchor() const {
  return f.origin() - theorem_info(theorem).origin_offset;
}

template <Scalar T>
TheoremVerdict<T> evaluate_theorem(const TheoremCase<T>& c) {
  const TheoremInfo& info = theorem_info(c.theorem);
  check_order(info, c.order);
  if (c.f.direction() != info.direction) {
    throw DomainError(info.name + " needs f on a " + to_string(info.direction) + " grid, got " + c.f.describe());
  }
  if (c.f.size() < info.min_length) {
    throw GridTooShort(info.name + " needs at least " + std::to_string(info.min_length) + " points, got " +
                       std::to_string(c.f.size()));
  }

  Evaluator<T> e(c, info);
  const Rational& a = e.anchor();  // b for right theorems
  const Rational& nu = e.nu();
  const auto riemann_delta = [&] { return e.op(Kind::delta, Family::riemann, Formulation::composed, std::nullopt); };
  const auto nabla_from = [&](const Rational& anchor) {
    return e.op(Kind::nabla, Family::riemann, Formulation::direct, anchor);
  };
  const auto jep1_start = [&] {
    e.hyp("f(a+1) - f(a) >= 0", a + 1, e.x(1) - e.x(0));
    e.hyp("f(a) >= 0", a, e.x(0));
  };
  const auto d1_start = [&] {
    e.hyp("f(b-1) - f(b) >= 0", a - 1, e.x(1) - e.x(0));
    e.hyp("f(b) >= 0", a, e.x(0));
  };
  const Rational two_minus(Rational(2) - nu);
  const Rational one_minus(Rational(1) - nu);

  switch (c.theorem) {
    case TheoremId::T_JEP1:
      e.nonneg(true, "Δ_a^ν f(t) >= 0", riemann_delta(), a + two_minus);
      jep1_start();
      e.nonneg(false, "Δf(t) >= 0", e.delta_f(), a);
      break;
    case TheoremId::T_JEP:
      e.nonneg(true, "∇_a^ν f(t) >= 0", nabla_from(a), a + 1);
      e.nonneg(false, "∇f(t) >= 0", e.nabla_f(), a + 1);
      break;
    case TheoremId::T_JEPP:
      e.nonneg(true, "∇_{a-1}^ν f(t) >= 0", nabla_from(a - 1), a);
      e.nonneg(false, "∇f(t) >= 0", e.nabla_f(), a + 1);
      break;
    case TheoremId::T_SLOV1:
    case TheoremId::T_C2:
      if (c.theorem == TheoremId::T_SLOV1) {
        e.nonneg(true, "Δ_a^ν f(t) >= 0", riemann_delta(), a + two_minus);
      } else {
        e.nonneg(true, "Caputo lower bound", e.caputo_slack(), a + two_minus);
      }
      e.for_all_k("f(a+1) >= ν/(k+1) f(a), k in N_0", one_term(nu, 1, e.xr(0), e.xr(1)));
      e.nonneg(false, "Δf(t) >= 0", e.delta_f(), a + 1);
      break;
    case TheoremId::T_SLOV11:
      e.nonneg(true, "∇_{a-1}^ν f(t) >= 0", nabla_from(a - 1), a + 2);
      e.for_all_k("f(a+1) >= ν/(k+2) f(a), k in N_0", one_term(nu, 2, e.xr(0), e.xr(1)));
      e.nonneg(false, "∇f(t) >= 0", e.nabla_f(), a + 2);
      break;
    case TheoremId::T_SLOV2:
    case TheoremId::T_C3:
      if (c.theorem == TheoremId::T_SLOV2) {
        e.nonneg(true, "Δ_a^ν f(t) >= 0", riemann_delta(), a + two_minus);
      } else {
        e.nonneg(true, "Caputo lower bound", e.caputo_slack(), a + two_minus);
      }
      e.for_all_k("two-term starting condition, k in N_1", two_term(nu, e.xr(0), e.xr(1), e.xr(2)));
      e.nonneg(false, "Δf(t) >= 0", e.delta_f(), a + 2);
      break;
    case TheoremId::T_SLOV22:
      e.nonneg(true, "∇_{a-1}^ν f(t) >= 0", nabla_from(a - 1), a + 3);
      e.for_all_k("two-term starting condition, k in N_1", two_term(nu, e.xr(0), e.xr(1), e.xr(2)));
      e.nonneg(false, "∇f(t) >= 0", e.nabla_f(), a + 3);
      break;
    case TheoremId::T_SLOV3:
    case TheoremId::T_C4:
      if (c.theorem == TheoremId::T_SLOV3) {
        e.nonneg(true, "Δ_a^ν f(t) >= 0", riemann_delta(), a + two_minus);
      } else {
        e.nonneg(true, "Caputo lower bound", e.caputo_slack(), a + two_minus);
      }
      e.for_all_k("three-term starting condition, k in N_2",
                  three_term(nu, e.xr(0), e.xr(1), e.xr(2), e.xr(3)));
      e.nonneg(false, "Δf(t) >= 0", e.delta_f(), a + 3);
      break;
    case TheoremId::T_SLOV33:
      e.nonneg(true, "∇_{a-1}^ν f(t) >= 0", nabla_from(a - 1), a + 4);
      e.for_all_k("three-term starting condition, k in N_2",
                  three_term(nu, e.xr(0), e.xr(1), e.xr(2), e.xr(3)));
      e.nonneg(false, "∇f(t) >= 0", e.nabla_f(), a + 4);
      break;
    case TheoremId::T_U1:
      e.hyp("f(a) >= 0", a, e.x(0));
      e.nonneg(true, "Δ_a^ν f(t) >= 0", riemann_delta(), a + one_minus);
      e.monotone_conclusion(Monotonicity::increasing);
      break;
    case TheoremId::T_UU1:
      e.nonneg(true, "∇_{a-1}^ν f(t) >= 0", nabla_from(a - 1), a);
      e.monotone_conclusion(Monotonicity::increasing);
      break;
    case TheoremId::T_U3:
      e.monotone_hypothesis_increasing();
      e.nonneg(false, "Δ_a^ν f(t) >= 0", riemann_delta(), a + one_minus);
      break;
    case TheoremId::T_UU2:
      e.monotone_hypothesis_increasing();
      e.nonneg(false, "∇_{a-1}^ν f(t) >= 0", nabla_from(a - 1), a);
      break;
    case TheoremId::T_C1:
      e.nonneg(true, "Caputo lower bound", e.caputo_slack(), a + two_minus);
      jep1_start();
      e.nonneg(false, "Δf(t) >= 0", e.delta_f(), a);
      break;
    case TheoremId::T_C5:
      e.hyp("f(a) >= 0", a, e.x(0));
      e.nonneg(true, "Caputo lower bound", e.caputo_slack(), a + one_minus);
      e.monotone_conclusion(Monotonicity::increasing);
      break;
    case TheoremId::T_C6:
      e.monotone_hypothesis_increasing();
      e.nonneg(false, "Caputo lower bound", e.caputo_slack(), a + one_minus);
      break;
    case TheoremId::T_D1:
    case TheoremId::T_CD1:
      if (c.theorem == TheoremId::T_D1) {
        e.nonneg(true, "_bΔ^α f(u) >= 0", riemann_delta(), a - two_minus);
      } else {
        e.nonneg(true, "Caputo lower bound", e.caputo_slack(), a - two_minus);
      }
      d1_start();
      e.nonneg(false, "-∇f(t) >= 0", e.nabla_f(), a);
      break;
    case TheoremId::T_N1:
      e.nonneg(true, "_{b+1}∇^α f(u) >= 0", nabla_from(a + 1), a);
      e.nonneg(false, "-Δf(t) >= 0", e.minus_delta_f(), a - 1);
      break;
    case TheoremId::T_D2:
      e.nonneg(true, "_bΔ^α f(u) >= 0", riemann_delta(), a - two_minus);
      e.hyp("f(b) >= 0", a, e.x(0));
      e.for_all_k("f(b-1) >= α/(k+1) f(b), k in N_0", one_term(nu, 1, e.xr(0), e.xr(1)));
      e.nonneg(false, "-∇f(t) >= 0", e.nabla_f(), a - 1);
      break;
    case TheoremId::T_D3:
      e.nonneg(true, "_bΔ^α f(u) >= 0", riemann_delta(), a - two_minus);
      e.for_all_k("two-term starting condition, k in N_1", two_term(nu, e.xr(0), e.xr(1), e.xr(2)));
      e.nonneg(false, "-∇f(t) >= 0", e.nabla_f(), a - 2);
      break;
    case TheoremId::T_D4:
      e.nonneg(true, "_bΔ^α f(u) >= 0", riemann_delta(), a - two_minus);
      e.for_all_k("three-term starting condition, k in N_2",
                  three_term(nu, e.xr(0), e.xr(1), e.xr(2), e.xr(3)));
      e.nonneg(false, "-∇f(t) >= 0", e.nabla_f(), a - 3);
      break;
    case TheoremId::T_D5:
    case TheoremId::T_CD5:
      e.hyp("f(b) >= 0", a, e.x(0));
      if (c.theorem == TheoremId::T_D5) {
        e.nonneg(true, "_bΔ^α f(u) >= 0", riemann_delta(), a - one_minus);
      } else {
        e.nonneg(true, "Caputo lower bound", e.caputo_slack(), a - one_minus);
      }
      e.monotone_conclusion(Monotonicity::decreasing);
      break;
    case TheoremId::T_D6:
      e.monotone_hypothesis_increasing();
      e.nonneg(false, "_bΔ^α f(u) >= 0", riemann_delta(), a - one_minus);
      break;
  }
  return e.finish();
}

std::vector<Rational> default_values() {
  return {Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)};
}

std::vector<Rational> default_orders(TheoremId id) {
  if (theorem_info(id).low_order) return {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  return {Rational(5, 4), Rational(3, 2), Rational(7, 4)};
}

std::vector<std::size_t> default_lengths(TheoremId id) {
  std::vector<std::size_t> out;
  for (std::size_t n = theorem_info(id).min_length; n <= 6; ++n) out.push_back(n);
  return out;
}

namespace {

constexpr std::size_t kKeptCounterexamples = 8;

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  constexpr auto top = std::numeric_limits<std::uint64_t>::max();
  return (b != 0 && a > top / b) ? top : a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Candidate {
  Rational order;
  std::vector<Rational> values;
};

struct ChunkResult {
  std::uint64_t instances = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t exact = 0;
  std::uint64_t violations = 0;
  std::vector<TheoremCase<Rational>> counterexamples;
  std::optional<TheoremCase<Rational>> witness;
  std::optional<Rational> witness_margin;
  std::optional<TheoremCase<Rational>> satisfying;
  std::optional<double> min_conclusion;
  bool guard = true;
  std::optional<std::string> error;
};

}  // namespace

SearchResult search_counterexamples(TheoremId id, const SearchConfig& config) {
  const TheoremInfo& info = theorem_info(id);
  if (config.values.empty()) throw DomainError("search needs a nonempty value set");
  if (config.orders.empty()) throw DomainError("search needs at least one order");
  if (config.lengths.empty()) throw DomainError("search needs at least one grid length");
  if (config.budget == 0) throw DomainError("budget must be positive");
  for (const auto& nu : config.orders) check_order(info, nu);
  for (const auto len : config.lengths) {
    if (len < info.min_length) {
      throw GridTooShort(info.name + " needs grids of at least " + std::to_string(info.min_length) + " points");
    }
  }

  // Flattened index space: exhaustive enumerates (length, order, digits).
  std::vector<std::uint64_t> segment;  // cases per length
  std::uint64_t total = 0;
  if (config.mode == SearchMode::exhaustive) {
    for (const auto len : config.lengths) {
      const std::uint64_t cases = saturating_mul(saturating_pow(config.values.size(), len), config.orders.size());
      segment.push_back(cases);
      total = cases > config.budget - total ? config.budget + 1 : total + cases;
      if (total > config.budget) {
        throw BudgetExceeded("exhaustive search of " + info.name + " needs more than " +
                             std::to_string(config.budget) + " evaluations");
      }
    }
  } else {
    total = config.budget;
  }

  const auto candidate_at = [&](std::uint64_t index) {
    Candidate c;
    if (config.mode == SearchMode::exhaustive) {
      std::size_t s = 0;
      while (index >= segment[s]) index -= segment[s++];
      const std::size_t len = config.lengths[s];
      c.order = config.orders[index % config.orders.size()];
      std::uint64_t digits = index / config.orders.size();
      for (std::size_t k = 0; k < len; ++k) {
        c.values.push_back(config.values[digits % config.values.size()]);
        digits /= config.values.size();
      }
    } else {
      std::mt19937_64 rng(mix(config.seed ^ mix(index) ^ (static_cast<std::uint64_t>(id) << 48)));
      auto pick = [&rng](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
      const std::size_t len = config.lengths[pick(config.lengths.size())];
      c.order = config.orders[pick(config.orders.size())];
      for (std::size_t k = 0; k < len; ++k) c.values.push_back(config.values[pick(config.values.size())]);
    }
    return c;
  };

  // Anchor 0 (left) or b = length - 1 (right); theorems are shift invariant.
  const auto make_case = [&](const Candidate& cand, auto tag) {
    using T = decltype(tag);
    std::vector<T> vals;
    for (const auto& v : cand.values) vals.push_back(from_rational<T>(v));
    const Rational origin = info.direction == Direction::forward
                                ? Rational(0)
                                : Rational(static_cast<long long>(cand.values.size()) - 1);
    return TheoremCase<T>{id, cand.order, GridFunction<T>(origin, info.direction, std::move(vals)), config.k_cap};
  };

  constexpr std::uint64_t kChunk = 512;
  const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<ChunkResult> results(chunks);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&] {
    for (std::uint64_t ch = next++; ch < chunks; ch = next++) {
      ChunkResult& r = results[ch];
      try {
        const std::uint64_t end = std::min(total, (ch + 1) * kChunk);
        for (std::uint64_t i = ch * kChunk; i < end; ++i) {
          const Candidate cand = candidate_at(i);
          ++r.instances;
          const TheoremVerdict<double> fv = evaluate_theorem(make_case(cand, 0.0));
          r.guard = r.guard && fv.literal_guard_agrees;
          const double amb = config.ambiguity;
          const double hyp = fv.hypothesis_margin.value_or(1.0);
          const double con = fv.conclusion_margin.value_or(1.0);
          const bool needs_witness = !r.witness || !r.satisfying;
          if (hyp < -amb) continue;  // hypothesis certainly fails
          if (hyp > amb && con > amb && !needs_witness) {
            ++r.satisfied;
            if (fv.conclusion_margin) r.min_conclusion = std::min(r.min_conclusion.value_or(con), con);
            continue;
          }
          // Near-zero margins, violations and witnesses are decided exactly.
          ++r.exact;
          TheoremCase<Rational> exact_case = make_case(cand, Rational());
          const TheoremVerdict<Rational> xv = evaluate_theorem(exact_case);
          r.guard = r.guard && xv.literal_guard_agrees;
          if (!xv.hypothesis_holds) continue;
          ++r.satisfied;
          if (xv.conclusion_margin) {
            const double cm = xv.conclusion_margin->to_double();
            r.min_conclusion = std::min(r.min_conclusion.value_or(cm), cm);
          }
          if (!r.witness && xv.hypothesis_margin && xv.hypothesis_margin->sign() > 0) {
            r.witness = exact_case;
            r.witness_margin = *xv.hypothesis_margin;
          }
          const bool nonzero = std::any_of(cand.values.begin(), cand.values.end(),
                                           [](const Rational& v) { return !v.is_zero(); });
          if (!r.satisfying && nonzero && !xv.conclusion_margins.empty()) r.satisfying = exact_case;
          if (!xv.consistent) {
            ++r.violations;
            if (r.counterexamples.size() < kKeptCounterexamples) r.counterexamples.push_back(std::move(exact_case));
          }
        }
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  };

  unsigned threads = config.threads != 0 ? config.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(chunks, 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SearchResult out;
  out.theorem = id;
  for (auto& r : results) {
    if (r.error) throw Error(info.name + " search failed: " + *r.error);
    out.instances += r.instances;
    out.hypothesis_satisfied += r.satisfied;
    out.exact_reverifications += r.exact;
    out.counterexample_count += r.violations;
    out.literal_guard_agrees = out.literal_guard_agrees && r.guard;
    for (auto& c : r.counterexamples) {
      if (out.counterexamples.size() < kKeptCounterexamples) out.counterexamples.push_back(std::move(c));
    }
    if (!out.witness && r.witness) {
      out.witness = std::move(r.witness);
      out.witness_margin = std::move(r.witness_margin);
    }
    if (!out.satisfying_case && r.satisfying) out.satisfying_case = std::move(r.satisfying);
    if (r.min_conclusion) {
      out.min_conclusion_margin = std::min(out.min_conclusion_margin.value_or(*r.min_conclusion), *r.min_conclusion);
    }
  }
  return out;
}

std::vector<SearchResult> theorem_report(const std::vector<TheoremId>& ids, const ReportConfig& config) {
  std::vector<SearchResult> out;
  for (const TheoremId id : ids) {
    SearchConfig sc;
    sc.mode = config.mode;
    sc.budget = config.budget;
    sc.seed = config.seed;
    sc.k_cap = config.k_cap;
    sc.threads = config.threads;
    sc.values = config.values.empty() ? default_values() : config.values;
    sc.orders = config.orders.empty() ? default_orders(id) : config.orders;
    sc.lengths = config.lengths.empty() ? default_lengths(id) : config.lengths;
    out.push_back(search_counterexamples(id, sc));
  }
  return out;
}

template <Scalar T>
RouteComparison jepp_via_left_dual(const GridFunction<T>& f, const Rational& nu) {
  RouteComparison r;
  const TheoremVerdict<T> direct = evaluate_theorem(TheoremCase<T>{TheoremId::T_JEPP, nu, f});
  r.direct_hypothesis = direct.hypothesis_holds;
  r.direct_conclusion = direct.conclusion_holds;

  // ∇_{a-1}^ν f(a) = f(a) and ∇_{a-1}^ν f(a+1) = f(a+1) - ν f(a); the rest
  // of the hypothesis is Δ_a^ν f >= 0 on N_{a+2-ν}.
  const Rational a = f.origin() + 1;
  const T fa = f.at(a);
  const T fa1 = f.at(a + 1);
  const bool starts = fa >= zero<T>() && fa1 - from_rational<T>(nu) * fa >= zero<T>();
  const TheoremVerdict<T> jep1 = evaluate_theorem(TheoremCase<T>{TheoremId::T_JEP1, nu, f.from_point(a)});
  r.route_hypothesis = starts && jep1.hypothesis_holds;
  r.route_conclusion = jep1.conclusion_holds;
  return r;
}

template <Scalar T>
RouteComparison d1_via_q_reflection(const GridFunction<T>& f, const Rational& alpha) {
  RouteComparison r;
  const TheoremVerdict<T> direct = evaluate_theorem(TheoremCase<T>{TheoremId::T_D1, alpha, f});
  r.direct_hypothesis = direct.hypothesis_holds;
  r.direct_conclusion = direct.conclusion_holds;
  const GridFunction<T> g = q_reflect(f, f.lowest_point(), f.highest_point()).reoriented(Direction::forward);
  const TheoremVerdict<T> jep1 = evaluate_theorem(TheoremCase<T>{TheoremId::T_JEP1, alpha, g});
  r.route_hypothesis = jep1.hypothesis_holds;
  r.route_conclusion = jep1.conclusion_holds;
  return r;
}

#define FRACDIFF_INSTANTIATE(T)                                                                        \
  template Verdict<T> is_nu_monotone(const GridFunction<T>&, const Rational&, Monotonicity);         \
  template struct TheoremCase<T>;                                                                    \
  template TheoremVerdict<T> evaluate_theorem(const TheoremCase<T>&);                                \
  template RouteComparison jepp_via_left_dual(const GridFunction<T>&, const Rational&);              \
  template RouteComparison d1_via_q_reflection(const GridFunction<T>&, const Rational&);

FRACDIFF_INSTANTIATE(double)
FRACDIFF_INSTANTIATE(Rational)

#undef FRACDIFF_INSTANTIATE

}  // namespace fracdiff
