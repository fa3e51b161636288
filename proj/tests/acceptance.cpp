// Acceptance run: one PASS/FAIL line per criterion.
//
// The exit status is 0 when every criterion passes, or when the only failure
// is the known campaign outcome in kCounterexampleTheorems and
// kNoStrictWitness: a theorem that is false as stated, and theorems whose
// hypotheses admit no strictly positive margin on the searched value set.
// Any other failure, or a campaign failing differently, exits 1.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fracdiff/dualities.hpp"
#include "fracdiff/errors.hpp"
#include "fracdiff/monotone.hpp"
#include "fracdiff/operators.hpp"
#include "kernel_identities.hpp"
#include "oracle.hpp"

using namespace fracdiff;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Direction dir_for(Side s) { return s == Side::left ? Direction::forward : Direction::backward; }

OperatorSpec spec_of(Kind k, Side s, Family fam, const Rational& order) {
  OperatorSpec spec;
  spec.kind = k;
  spec.side = s;
  spec.family = fam;
  spec.order = order;
  return spec;
}

template <Scalar T>
GridFunction<T> apply(const OperatorSpec& spec, const GridFunction<T>& f) {
  switch (spec.family) {
    case Family::sum: return fractional_sum(spec, f);
    case Family::riemann: return riemann_difference(spec, f);
    case Family::caputo: break;
  }
  return caputo_difference(spec, f);
}

double relative(double got, double want) { return std::fabs(got - want) / std::max(1.0, std::fabs(want)); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const Kind kKinds[] = {Kind::delta, Kind::nabla};
const Side kSides[] = {Side::left, Side::right};

Outcome kernel_suite() {
  const auto t0 = Clock::now();
  Outcome o;
  double worst = 0;
  int points = 0;
  for (std::size_t i = 0; i < kernel_identities::names().size(); ++i) {
    const auto r = kernel_identities::run(static_cast<int>(i), 500, 1000 + i);
    points += r.admissible;
    worst = std::max(worst, r.max_relative);
    if (r.admissible < 500 || r.exact_failures > 0 || r.max_relative > 1e-10) {
      o.pass = false;
      o.detail += " [" + kernel_identities::names()[i] + ": " + std::to_string(r.admissible) + " points, " +
                  std::to_string(r.exact_failures) + " exact failures, first " + r.first_failure + "]";
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 5.0) o.pass = false;
  o.detail = "8 identities, " + std::to_string(points) + " points, max float residual " + fmt(worst) + ", " +
             fmt(secs) + " s" + o.detail;
  return o;
}

Outcome identity_suite() {
  const auto t0 = Clock::now();
  Outcome o;
  SuiteConfig config;
  config.instances = 200;
  config.min_length = 4;
  config.max_length = 12;
  config.seed = 2024;
  int total = 0;
  for (const Backend b : {Backend::rational, Backend::floating}) {
    config.backend = b;
    for (const auto& r : run_identity_suite(all_identities(), config)) {
      total += r.passed;
      if (!r.pass() || r.domain_mismatches > 0) {
        o.pass = false;
        o.detail += " [" + to_string(r.identity) + " " + to_string(b) + ": " + std::to_string(r.passed) + "/" +
                    std::to_string(r.instances) + " " + r.first_failure.value_or("") + "]";
      }
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 60.0) o.pass = false;
  o.detail = "17 identities x 200 instances x 2 backends, " + std::to_string(total) + " passed, " + fmt(secs) +
             " s" + o.detail;
  return o;
}

Outcome direct_vs_composed() {
  Outcome o;
  oracle::Gen gen(303);
  int compared = 0;
  double worst = 0;
  for (const Kind k : kKinds) {
    for (const Side s : kSides) {
      for (int i = 0; i < 100; ++i) {
        const Rational alpha = gen.order();
        const GridFunction<Rational> f(gen.origin(), dir_for(s),
                                       gen.values(static_cast<std::size_t>(gen.integer(4, 12))));
        auto spec = spec_of(k, s, Family::riemann, alpha);
        const auto composed = riemann_difference(spec, f);
        const auto composed_d = riemann_difference(spec, f.convert<double>());
        spec.formulation = Formulation::direct;
        const auto direct = riemann_difference(spec, f);
        const auto direct_d = riemann_difference(spec, f.convert<double>());
        for (std::size_t j = 0; j < composed.size(); ++j) {
          const Rational t = composed.point(j);
          ++compared;
          if (!direct.contains(t) || direct.at(t) != composed[j]) {
            o.pass = false;
            o.detail = " first mismatch " + spec.describe() + " at t=" + t.str();
            continue;
          }
          const double r = relative(direct_d.at(t), composed_d[j]);
          worst = std::max(worst, r);
          if (r > 1e-10) o.pass = false;
        }
      }
    }
  }
  o.detail = "400 instances, " + std::to_string(compared) + " points, exact agreement, max float residual " +
             fmt(worst) + o.detail;
  return o;
}

Outcome relations_and_inversion() {
  Outcome o;
  oracle::Gen gen(404);
  int checked = 0;
  for (const IdentityId id : {IdentityId::RELATE_DELTA_LEFT, IdentityId::RELATE_DELTA_RIGHT,
                              IdentityId::RELATE_NABLA_LEFT, IdentityId::RELATE_NABLA_RIGHT,
                              IdentityId::CAPUTO_INVERSION}) {
    const bool right = id == IdentityId::RELATE_DELTA_RIGHT || id == IdentityId::RELATE_NABLA_RIGHT;
    for (int i = 0; i < 100; ++i) {
      const Direction d = id == IdentityId::CAPUTO_INVERSION ? (i % 2 ? Direction::backward : Direction::forward)
                                                             : (right ? Direction::backward : Direction::forward);
      const GridFunction<Rational> f(gen.origin(), d, gen.values(static_cast<std::size_t>(gen.integer(4, 12))));
      const auto r = check_relation(f, gen.order(), id);
      ++checked;
      bool zero = !r.residuals.empty();
      for (const auto& [t, v] : r.residuals) zero = zero && v.is_zero();
      if (!zero || !r.domain_matches) {
        o.pass = false;
        o.detail += " [" + to_string(id) + " on " + f.describe() + "]";
      }
    }
  }
  // ∇_a^{-α} ^C∇_a^α f = f(t) - f(a) for 0 < α < 1, recomputed from the raw sums.
  for (int i = 0; i < 100; ++i) {
    const Rational alpha = gen.order(12, false);
    const Rational a = gen.origin();
    const GridFunction<Rational> f(a, Direction::forward, gen.values(static_cast<std::size_t>(gen.integer(4, 12))));
    auto c = oracle::to_map(caputo_difference(spec_of(Kind::nabla, Side::left, Family::caputo, alpha), f));
    c[a] = Rational(0);
    const auto back = oracle::nabla_left_sum(c, a, alpha);
    ++checked;
    for (const auto& [t, v] : back) {
      if (t > a && v != f.at(t) - f.at(a)) {
        o.pass = false;
        o.detail += " [f(t)-f(a) at t=" + t.str() + "]";
        break;
      }
    }
  }
  o.detail = std::to_string(checked) + " instances, residuals exactly 0" + o.detail;
  return o;
}

Outcome ivp() {
  Outcome o;
  oracle::Gen gen(505);
  int checked = 0;
  for (int n = 1; n <= 3; ++n) {
    for (const Kind k : kKinds) {
      for (const Side s : kSides) {
        for (int i = 0; i < 25; ++i) {
          const GridFunction<Rational> f(gen.origin(), dir_for(s),
                                         gen.values(static_cast<std::size_t>(gen.integer(2, 12))));
          const auto r = ivp_residual(f, k, s, n);
          ++checked;
          bool ok = r.equation.size() > 0 && r.initial_values.size() == static_cast<std::size_t>(n);
          for (std::size_t j = 0; j < r.equation.size(); ++j) ok = ok && r.equation[j].is_zero();
          for (const auto& v : r.initial_values) ok = ok && v.is_zero();
          if (!ok) {
            o.pass = false;
            o.detail += " [n=" + std::to_string(n) + " " + to_string(k) + "-" + to_string(s) + "]";
          }
        }
      }
    }
  }
  o.detail = std::to_string(checked) + " problems, n = 1..3, 4 variants, exact" + o.detail;
  return o;
}

Outcome q_suite() {
  Outcome o;
  SuiteConfig config;
  config.instances = 100;
  config.seed = 606;
  std::vector<IdentityId> ids;
  for (const IdentityId id : all_identities()) {
    if (group_of(id) == IdentityGroup::q_reflection) ids.push_back(id);
  }
  for (const auto& r : run_identity_suite(ids, config)) {
    if (!r.pass()) {
      o.pass = false;
      o.detail += " [" + to_string(r.identity) + " " + r.first_failure.value_or("") + "]";
    }
  }
  oracle::Gen gen(607);
  for (int i = 0; i < 100; ++i) {
    const Rational a = gen.origin();
    const GridFunction<Rational> f(a, Direction::forward, gen.values(static_cast<std::size_t>(gen.integer(4, 12))));
    const Rational b = f.last_point();
    const auto qf = q_reflect(f, a, b);
    const auto qq = q_reflect(qf, a, b);
    bool ok = qq.origin() == f.origin() && qq.direction() == f.direction() &&
              oracle::to_map(qq) == oracle::to_map(f);
    ok = ok && oracle::to_map(q_reflect(integer_difference(f, Kind::nabla, 1, true), a, b)) ==
                   oracle::to_map(integer_difference(qf, Kind::delta, 1, false));
    ok = ok && oracle::to_map(q_reflect(integer_difference(f, Kind::delta, 1, true), a, b)) ==
                   oracle::to_map(integer_difference(qf, Kind::nabla, 1, false));
    if (!ok) {
      o.pass = false;
      o.detail += " [Q commutation on " + f.describe() + "]";
    }
  }
  o.detail = std::to_string(ids.size()) + " identities x 100 instances, involution and commutation x 100" + o.detail;
  return o;
}

// Failures criterion 7 is expected to show.
const std::set<std::string> kCounterexampleTheorems = {"T_JEP"};
const std::set<std::string> kNoStrictWitness = {"T_JEP1", "T_C1", "T_D1", "T_D2", "T_CD1"};

Outcome campaigns(bool& as_expected) {
  const auto t0 = Clock::now();
  Outcome o;
  ReportConfig config;  // default values, orders and lengths min..6
  std::set<std::string> with_counterexamples, without_witness;
  std::uint64_t cases = 0;
  bool guard = true;
  std::ostringstream detail;
  for (const auto& r : theorem_report(all_theorems(), config)) {
    cases += r.instances;
    guard = guard && r.literal_guard_agrees;
    if (r.counterexample_count > 0) {
      with_counterexamples.insert(to_string(r.theorem));
      detail << " [" << to_string(r.theorem) << ": " << r.counterexample_count << " counterexamples";
      if (!r.counterexamples.empty()) {
        const auto& c = r.counterexamples.front();
        detail << ", e.g. order " << c.order << " f = " << c.f.describe();
      }
      detail << "]";
    }
    if (!r.witness) {
      without_witness.insert(to_string(r.theorem));
      detail << " [" << to_string(r.theorem) << ": no hypothesis with positive margin"
             << (r.satisfying_case ? ", zero-margin case only" : "") << "]";
    }
  }
  const double secs = seconds_since(t0);
  o.pass = with_counterexamples.empty() && without_witness.empty() && guard && secs < 600.0;
  as_expected = with_counterexamples == kCounterexampleTheorems && without_witness == kNoStrictWitness && guard &&
                secs < 600.0;
  o.detail = std::to_string(all_theorems().size()) + " theorems, " + std::to_string(cases) + " cases, " + fmt(secs) +
             " s" + (guard ? "" : " [literal guard disagreed]") + detail.str();
  return o;
}

Outcome routes() {
  Outcome o;
  oracle::Gen gen(808);
  int agree = 0;
  for (int i = 0; i < 200; ++i) {
    const Rational nu = gen.order(12, false) + Rational(1);
    std::vector<Rational> v;
    const auto len = static_cast<std::size_t>(gen.integer(5, 9));
    for (std::size_t j = 0; j < len; ++j) v.emplace_back(gen.integer(-4, 4), 2);
    const bool a = jepp_via_left_dual(GridFunction<Rational>(Rational(-1), Direction::forward, v), nu).agree();
    const bool b = d1_via_q_reflection(GridFunction<Rational>(Rational(0), Direction::backward, v), nu).agree();
    agree += (a ? 1 : 0) + (b ? 1 : 0);
    if (!a || !b) o.pass = false;
  }
  o.detail = std::to_string(agree) + "/400 route comparisons agree";
  return o;
}

Outcome backends() {
  Outcome o;
  oracle::Gen gen(909);
  double worst = 0;
  int points = 0;
  for (int i = 0; i < 1000; ++i) {
    const Kind k = kKinds[gen.integer(0, 1)];
    const Side s = kSides[gen.integer(0, 1)];
    auto spec = spec_of(k, s, static_cast<Family>(gen.integer(0, 2)), gen.order());
    if (spec.family == Family::riemann && gen.integer(0, 1) == 1) spec.formulation = Formulation::direct;
    const GridFunction<Rational> f(gen.origin(), dir_for(s), gen.values(static_cast<std::size_t>(gen.integer(4, 12))));
    const auto exact = apply(spec, f);
    const auto fl = apply(spec, f.convert<double>());
    if (exact.size() != fl.size() || exact.origin() != fl.origin()) {
      o.pass = false;
      continue;
    }
    for (std::size_t j = 0; j < exact.size(); ++j) {
      worst = std::max(worst, relative(fl[j], exact[j].to_double()));
      ++points;
    }
  }
  if (worst > 1e-9) o.pass = false;
  o.detail = "1000 applications, " + std::to_string(points) + " values, max relative difference " + fmt(worst);
  return o;
}

Outcome spot_values() {
  Outcome o;
  const GridFunction<Rational> one(Rational(0), Direction::forward, std::vector<Rational>(6, Rational(1)));
  const auto om = oracle::to_map(one);
  const Rational half(1, 2);
  auto expect = [&](const std::string& what, const Rational& lib, const Rational& orc, const Rational& want) {
    if (lib != want || orc != want) {
      o.pass = false;
      o.detail += " [" + what + ": library " + lib.str() + ", oracle " + orc.str() + "]";
    }
  };
  expect("delta sum at 3/2", fractional_sum(spec_of(Kind::delta, Side::left, Family::sum, half), one).at(Rational(3, 2)),
         oracle::delta_left_sum(om, Rational(0), half).at(Rational(3, 2)), Rational(3, 2));
  expect("nabla sum at 2", fractional_sum(spec_of(Kind::nabla, Side::left, Family::sum, half), one).at(Rational(2)),
         oracle::nabla_left_sum(om, Rational(0), half).at(Rational(2)), Rational(3, 2));
  const Rational riemann = riemann_difference(spec_of(Kind::delta, Side::left, Family::riemann, half), one).at(half);
  expect("Riemann at 1/2", riemann, oracle::delta_left_riemann(om, Rational(0), half).at(half), half);
  const auto caputo = caputo_difference(spec_of(Kind::delta, Side::left, Family::caputo, half), one);
  const auto caputo_oracle = oracle::delta_left_caputo(om, Rational(0), half);
  for (std::size_t j = 0; j < caputo.size(); ++j) {
    expect("Caputo at " + caputo.point(j).str(), caputo[j], caputo_oracle.at(caputo.point(j)), Rational(0));
  }
  // Riemann minus the correction t^(-α)/Γ(1-α) f(0) at t = 1/2 gives the Caputo value.
  const Rational correction = falling_over_gamma<Rational>(half, -half);
  expect("relation at 1/2", riemann - correction, caputo.at(half), Rational(0));
  o.detail = "4 spot values and the relation at t = 1/2, exact" + o.detail;
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    std::string name;
    std::function<Outcome()> run;
  };
  bool campaign_as_expected = false;
  const std::vector<Criterion> criteria = {
      {1, "kernel identity suite", kernel_suite},
      {2, "dual identity suite", identity_suite},
      {3, "direct vs composed Riemann forms", direct_vs_composed},
      {4, "Riemann-Caputo relations and inversion", relations_and_inversion},
      {5, "initial value problems", ivp},
      {6, "Q-operator suite", q_suite},
      {7, "monotonicity exhaustive campaigns", [&] { return campaigns(campaign_as_expected); }},
      {8, "proof-route coherence", routes},
      {9, "backend agreement", backends},
      {10, "spot values", spot_values},
  };

  std::set<int> failed;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s [%d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.number, c.name.c_str(), o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass) failed.insert(c.number);
  }

  const bool known = failed == std::set<int>{7} && campaign_as_expected;
  std::printf("%zu/%zu criteria pass", criteria.size() - failed.size(), criteria.size());
  if (known) std::printf("; criterion 7 fails exactly as documented");
  std::printf("\n");
  return failed.empty() || known ? 0 : 1;
}
