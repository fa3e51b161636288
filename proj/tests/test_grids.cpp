#include "doctest.h"
#include "fracdiff/errors.hpp"
#include "fracdiff/grids.hpp"
#include "oracle.hpp"

using namespace fracdiff;

namespace {

GridFunction<Rational> fwd(Rational origin, std::vector<Rational> v) {
  return GridFunction<Rational>(origin, Direction::forward, std::move(v));
}

void check_against(const GridFunction<Rational>& g, const oracle::Fn& expected) {
  CHECK(oracle::to_map(g) == expected);
}

}  // namespace

TEST_CASE("points and lookup") {
  const GridFunction<Rational> f(Rational(1, 2), Direction::backward, {Rational(1), Rational(2), Rational(3)});
  CHECK(f.point(2) == Rational(-3, 2));
  CHECK(f.lowest_point() == Rational(-3, 2));
  CHECK(f.highest_point() == Rational(1, 2));
  CHECK(f.at(Rational(-1, 2)) == Rational(2));
  CHECK_FALSE(f.contains(Rational(0)));
  CHECK_THROWS_AS(f.at(Rational(3, 2)), DomainError);
  const auto r = f.reoriented(Direction::forward);
  CHECK(r.origin() == Rational(-3, 2));
  CHECK(r[0] == Rational(3));
  CHECK(oracle::to_map(r) == oracle::to_map(f));
}

TEST_CASE("empty grids are rejected") {
  CHECK_THROWS_AS(GridFunction<double>(Rational(0), Direction::forward, {}), EmptyValues);
}

TEST_CASE("first differences") {
  const auto d = integer_difference(fwd(0, {1, 3, 6}), Kind::delta, 1, false);
  CHECK(d.origin() == Rational(0));
  CHECK(d.size() == 2);
  CHECK(d[0] == Rational(2));
  CHECK(d[1] == Rational(3));

  const auto n = integer_difference(fwd(1, {1, 2, 3, 4}), Kind::nabla, 1, false);
  CHECK(n.origin() == Rational(2));
  CHECK(n.size() == 3);
  for (std::size_t k = 0; k < n.size(); ++k) CHECK(n[k] == Rational(1));

  const auto s = integer_difference(fwd(0, {0, 1, 4}), Kind::delta, 2, true);
  CHECK(s.size() == 1);
  CHECK(s[0] == Rational(2));
  CHECK_THROWS_AS(integer_difference(fwd(0, {1, 2}), Kind::delta, 2, false), GridTooShort);
}

TEST_CASE("iterated differences match the oracle and the binomial expansion") {
  oracle::Gen gen(3);
  for (int i = 0; i < 100; ++i) {
    const auto values = gen.values(static_cast<std::size_t>(gen.integer(4, 10)));
    const Rational origin = gen.origin();
    const Direction dir = gen.integer(0, 1) ? Direction::forward : Direction::backward;
    const GridFunction<Rational> f(origin, dir, values);
    const int n = static_cast<int>(gen.integer(1, 3));
    const bool sgn = gen.integer(0, 1) == 1;
    const Rational flip(sgn && n % 2 == 1 ? -1 : 1);
    const auto om = oracle::to_map(f);
    auto flipped = [&](oracle::Fn m) {
      for (auto& entry : m) entry.second *= flip;
      return m;
    };

    const auto d = integer_difference(f, Kind::delta, n, sgn);
    check_against(d, flipped(oracle::forward_difference(om, n)));
    const auto b = integer_difference(f, Kind::nabla, n, sgn);
    check_against(b, flipped(oracle::backward_difference(om, n)));
    for (std::size_t k = 0; k < d.size(); ++k) {
      CHECK(integer_difference_at(f, Kind::delta, n, d.point(k)) * flip == d[k]);
    }
    for (std::size_t k = 0; k < b.size(); ++k) {
      CHECK(integer_difference_at(f, Kind::nabla, n, b.point(k)) * flip == b[k]);
    }
  }
}

TEST_CASE("Q reflection") {
  const auto f = fwd(1, {5, 6, 7, 8});
  const auto q = q_reflect(f, Rational(1), Rational(4));
  CHECK(q.direction() == Direction::backward);
  CHECK(q.at(Rational(4)) == Rational(5));
  CHECK(q.at(Rational(1)) == Rational(8));
  CHECK_THROWS_AS(q_reflect(f, Rational(1), Rational(7, 2)), DomainError);

  oracle::Gen gen(5);
  for (int i = 0; i < 100; ++i) {
    const Rational a = gen.origin();
    const auto values = gen.values(static_cast<std::size_t>(gen.integer(3, 10)));
    const auto g = fwd(a, values);
    const Rational b = g.last_point();
    const auto qg = q_reflect(g, a, b);
    for (std::size_t k = 0; k < qg.size(); ++k) CHECK(qg[k] == g.at(a + b - qg.point(k)));
    // involution
    const auto back = q_reflect(qg, a, b);
    CHECK(back.origin() == g.origin());
    CHECK(back.direction() == g.direction());
    CHECK(oracle::to_map(back) == oracle::to_map(g));
    // -QΔf = ∇Qf and -Q∇f = ΔQf
    const auto lhs1 = q_reflect(integer_difference(g, Kind::delta, 1, true), a, b);
    const auto rhs1 = integer_difference(qg, Kind::nabla, 1, false);
    CHECK(oracle::to_map(lhs1) == oracle::to_map(rhs1));
    const auto lhs2 = q_reflect(integer_difference(g, Kind::nabla, 1, true), a, b);
    const auto rhs2 = integer_difference(qg, Kind::delta, 1, false);
    CHECK(oracle::to_map(lhs2) == oracle::to_map(rhs2));
  }
}
