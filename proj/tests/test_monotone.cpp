#include <algorithm>
#include <functional>
#include <string>

#include "doctest.h"
#include "fracdiff/errors.hpp"
#include "fracdiff/monotone.hpp"
#include "fracdiff/operators.hpp"
#include "oracle.hpp"

using namespace fracdiff;

namespace {

GridFunction<Rational> fwd(Rational origin, std::vector<Rational> v) {
  return GridFunction<Rational>(origin, Direction::forward, std::move(v));
}

TheoremCase<Rational> make_case(TheoremId id, Rational order, GridFunction<Rational> f) {
  return TheoremCase<Rational>{id, order, std::move(f)};
}

SearchConfig small_config(std::vector<Rational> values, std::vector<Rational> orders, std::size_t length) {
  SearchConfig c;
  c.values = std::move(values);
  c.orders = std::move(orders);
  c.lengths = {length};
  return c;
}

std::vector<Rational> grid_values(std::uint64_t index, std::size_t length, const std::vector<Rational>& set) {
  std::vector<Rational> v;
  for (std::size_t i = 0; i < length; ++i) {
    v.push_back(set[index % set.size()]);
    index /= set.size();
  }
  return v;
}

}  // namespace

TEST_CASE("nu-monotone examples") {
  const auto zero = fwd(0, {0, 0, 0});
  CHECK(is_nu_monotone(zero, Rational(1, 3), Monotonicity::increasing).holds);
  CHECK(is_nu_monotone(zero, Rational(1, 3), Monotonicity::decreasing).holds);

  const auto ok = is_nu_monotone(fwd(0, {1, Rational(3, 5)}), Rational(1, 2), Monotonicity::increasing);
  CHECK(ok.holds);
  CHECK(ok.margin == Rational(1, 10));

  const auto bad = is_nu_monotone(fwd(0, {1, Rational(2, 5)}), Rational(1, 2), Monotonicity::increasing);
  CHECK_FALSE(bad.holds);
  CHECK(bad.margin == Rational(-1, 10));
  REQUIRE(bad.worst_point.has_value());

  const GridFunction<double> fd(Rational(0), Direction::forward, {1.0, 0.4});
  CHECK(is_nu_monotone(fd, Rational(1, 2), Monotonicity::increasing).margin == doctest::Approx(-0.1));

  CHECK_THROWS_AS(is_nu_monotone(zero, Rational(1), Monotonicity::increasing), DomainError);
  CHECK_THROWS_AS(is_nu_monotone(zero, Rational(0), Monotonicity::increasing), DomainError);
}

TEST_CASE("theorem verdict examples") {
  const Rational nu(3, 2);
  const auto zero = evaluate_theorem(make_case(TheoremId::T_JEP1, nu, fwd(0, std::vector<Rational>(6, Rational(0)))));
  CHECK(zero.hypothesis_holds);
  CHECK(zero.conclusion_holds);
  CHECK(zero.consistent);

  const auto one_grid = fwd(0, std::vector<Rational>(6, Rational(1)));
  const auto one = evaluate_theorem(make_case(TheoremId::T_JEP1, nu, one_grid));
  CHECK_FALSE(one.hypothesis_holds);
  CHECK(one.consistent);
  const auto diff = oracle::delta_left_riemann(oracle::to_map(one_grid), Rational(0), nu);
  CHECK(std::any_of(diff.begin(), diff.end(), [](const auto& e) { return e.second.sign() < 0; }));

  std::vector<Rational> ramp;
  for (int t = 0; t < 6; ++t) ramp.emplace_back(t);
  const auto u = evaluate_theorem(make_case(TheoremId::T_U1, Rational(1, 2), fwd(0, ramp)));
  CHECK(u.hypothesis_holds);
  CHECK(u.conclusion_holds);
  CHECK(u.consistent);
  for (const auto& [t, v] : oracle::delta_left_riemann(oracle::to_map(fwd(0, ramp)), Rational(0), Rational(1, 2))) {
    CHECK(v.sign() >= 0);
  }
}

TEST_CASE("theorem arguments are validated") {
  CHECK_THROWS_AS(evaluate_theorem(make_case(TheoremId::T_JEP1, Rational(3, 2), fwd(0, {1}))), GridTooShort);
  CHECK_THROWS_AS(evaluate_theorem(make_case(TheoremId::T_JEP1, Rational(1, 2), fwd(0, {1, 1, 1, 1, 1}))),
                  DomainError);
  CHECK(all_theorems().size() == 28);
  for (const TheoremId id : all_theorems()) {
    CHECK(parse_theorem(to_string(id)) == id);
    CHECK_FALSE(theorem_info(id).hypothesis.empty());
  }
}

TEST_CASE("small exhaustive searches find nothing") {
  const std::vector<Rational> three{-1, 0, 1};
  auto c = small_config(three, {Rational(5, 4), Rational(3, 2), Rational(7, 4)}, 5);
  const auto jep1 = search_counterexamples(TheoremId::T_JEP1, c);
  CHECK(jep1.instances == 729);
  CHECK(jep1.counterexample_count == 0);

  const auto u1 = search_counterexamples(TheoremId::T_U1, small_config(three, {Rational(1, 2)}, 4));
  CHECK(u1.instances == 81);
  CHECK(u1.counterexample_count == 0);
  CHECK(u1.witness.has_value());

  const auto d5 = search_counterexamples(TheoremId::T_D5, small_config({0, 1, 2}, {Rational(1, 2)}, 4));
  CHECK(d5.instances == 81);
  CHECK(d5.counterexample_count == 0);
}

TEST_CASE("exhaustive search agrees with direct enumeration") {
  const std::vector<Rational> set{-1, Rational(-1, 2), 0, Rational(1, 2), 1};
  for (const TheoremId id : {TheoremId::T_SLOV1, TheoremId::T_U3, TheoremId::T_D6, TheoremId::T_JEP}) {
    const auto& info = theorem_info(id);
    const std::size_t length = info.min_length + 1;
    const Rational order = info.low_order ? Rational(1, 2) : Rational(3, 2);
    const auto r = search_counterexamples(id, small_config(set, {order}, length));
    std::uint64_t total = 1, satisfied = 0, violations = 0;
    for (std::size_t i = 0; i < length; ++i) total *= set.size();
    for (std::uint64_t i = 0; i < total; ++i) {
      GridFunction<Rational> f(Rational(info.origin_offset), info.direction, grid_values(i, length, set));
      const auto v = evaluate_theorem(make_case(id, order, f));
      satisfied += v.hypothesis_holds ? 1 : 0;
      violations += v.consistent ? 0 : 1;
    }
    CAPTURE(to_string(id));
    CHECK(r.instances == total);
    CHECK(r.hypothesis_satisfied == satisfied);
    CHECK(r.counterexample_count == violations);
    CHECK(r.literal_guard_agrees);
  }
}

TEST_CASE("the nabla theorem without a starting condition has a counterexample") {
  const auto v = evaluate_theorem(make_case(TheoremId::T_JEP, Rational(5, 4), fwd(0, {Rational(1, 2), 0})));
  CHECK(v.hypothesis_holds);
  CHECK_FALSE(v.conclusion_holds);
  CHECK_FALSE(v.consistent);
  // Single-sum form at t = 1 reads only f(1); the backward difference there is negative.
  const Rational hyp = oracle::binom(Rational(-5, 4), 0) * Rational(0);
  CHECK(hyp.sign() >= 0);
  CHECK((Rational(0) - Rational(1, 2)).sign() < 0);
}

TEST_CASE("for-each-k starting conditions match brute force") {
  oracle::Gen gen(8);
  const std::vector<Rational> set{-1, Rational(-1, 2), 0, Rational(1, 2), 1, Rational(1, 3), Rational(-2, 3)};
  for (int i = 0; i < 150; ++i) {
    const Rational nu = gen.order(8, false) + Rational(1);
    const Rational x0 = set[gen.integer(0, 6)], x1 = set[gen.integer(0, 6)], x2 = set[gen.integer(0, 6)];
    const Rational x3 = set[gen.integer(0, 6)];
    struct Probe {
      TheoremId id;
      std::string label;
      std::function<Rational(const Rational&)> slack;
      long k0;
    };
    const std::vector<Probe> probes = {
        {TheoremId::T_SLOV1, "k in N_0", [&](const Rational& k) { return x1 - nu / (k + 1) * x0; }, 0},
        {TheoremId::T_SLOV2, "k in N_1",
         [&](const Rational& k) { return x2 - nu / (k + 2) * x1 - (k + 1 - nu) * nu / ((k + 2) * (k + 3)) * x0; },
         1},
        {TheoremId::T_SLOV3, "k in N_2",
         [&](const Rational& k) {
           return x3 - nu / k * x2 - (k - nu) * nu / (k * (k + 1)) * x1 -
                  (k + 1 - nu) * (k - nu) * nu / ((k + 1) * (k + 2) * k) * x0;
         },
         2},
    };
    for (const auto& p : probes) {
      bool brute = true;
      for (long k = p.k0; k < p.k0 + 3000 && brute; ++k) brute = p.slack(Rational(k)).sign() >= 0;
      const auto v = evaluate_theorem(make_case(p.id, nu, fwd(0, {x0, x1, x2, x3, 0, 0})));
      const auto it = std::find_if(v.hypothesis_margins.begin(), v.hypothesis_margins.end(),
                                   [&](const auto& m) { return m.label.find(p.label) != std::string::npos; });
      REQUIRE(it != v.hypothesis_margins.end());
      CAPTURE(to_string(p.id));
      CAPTURE(nu);
      CHECK((it->value.sign() >= 0) == brute);
      CHECK(v.literal_guard_agrees);
    }
  }
}

TEST_CASE("search budget") {
  auto c = small_config({-2, -1, 0, 1, 2}, {Rational(1, 2)}, 20);
  CHECK_THROWS_AS(search_counterexamples(TheoremId::T_U1, c), BudgetExceeded);
  c.mode = SearchMode::random;
  c.budget = 50;
  const auto r = search_counterexamples(TheoremId::T_U1, c);
  CHECK(r.instances == 50);
}

TEST_CASE("search results do not depend on the worker count") {
  for (const TheoremId id : {TheoremId::T_JEP, TheoremId::T_C5}) {
    SearchConfig c;
    c.values = default_values();
    c.orders = default_orders(id);
    c.lengths = {theorem_info(id).min_length + 2};
    c.threads = 1;
    const auto one = search_counterexamples(id, c);
    c.threads = 3;
    const auto three = search_counterexamples(id, c);
    CHECK(one.instances == three.instances);
    CHECK(one.hypothesis_satisfied == three.hypothesis_satisfied);
    CHECK(one.counterexample_count == three.counterexample_count);
    REQUIRE(one.counterexamples.size() == three.counterexamples.size());
    for (std::size_t i = 0; i < one.counterexamples.size(); ++i) {
      CHECK(oracle::to_map(one.counterexamples[i].f) == oracle::to_map(three.counterexamples[i].f));
    }
    CHECK(one.witness.has_value() == three.witness.has_value());
    CHECK(one.min_conclusion_margin == three.min_conclusion_margin);
  }
}

TEST_CASE("proof routes agree") {
  oracle::Gen gen(13);
  for (int i = 0; i < 60; ++i) {
    const Rational nu = gen.order(12, false) + Rational(1);
    const auto len = static_cast<std::size_t>(gen.integer(5, 8));
    std::vector<Rational> v;
    for (std::size_t j = 0; j < len; ++j) v.emplace_back(gen.integer(-2, 2), 2);
    CHECK(jepp_via_left_dual(fwd(-1, v), nu).agree());
    const GridFunction<Rational> back(Rational(0), Direction::backward, v);
    CHECK(d1_via_q_reflection(back, nu).agree());
  }
}

TEST_CASE("report over a subset") {
  ReportConfig rc;
  rc.lengths = {4};
  const auto rs = theorem_report({TheoremId::T_U1, TheoremId::T_UU1}, rc);
  REQUIRE(rs.size() == 2);
  for (const auto& r : rs) {
    CHECK(r.counterexample_count == 0);
    CHECK(r.instances == 5 * 5 * 5 * 5 * 3);
  }
}
