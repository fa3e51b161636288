#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracdiff/dualities.hpp"
#include "fracdiff/errors.hpp"
#include "fracdiff/io.hpp"
#include "fracdiff/kernels.hpp"
#include "fracdiff/monotone.hpp"
#include "fracdiff/operators.hpp"

namespace py = pybind11;
using namespace fracdiff;

namespace {

// int, str ("3/4", "0.25"), fractions.Fraction and float (exact binary value).
Rational to_rational(const py::handle& x) {
  if (py::isinstance<py::float_>(x)) return Rational(mpq_class(x.cast<double>()));
  if (py::isinstance<py::bool_>(x)) throw py::type_error("expected a number, got bool");
  return Rational::parse(py::str(x).cast<std::string>());
}

py::object to_python(const Rational& r) {
  static const py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(r.str());
}
py::object to_python(double x) { return py::float_(x); }

Direction direction_of(const std::string& s) {
  if (s == "forward") return Direction::forward;
  if (s == "backward") return Direction::backward;
  throw py::value_error("direction must be 'forward' or 'backward'");
}

template <Scalar T>
GridFunction<T> grid_from(const py::sequence& values, const py::handle& origin, const std::string& direction) {
  std::vector<T> vals;
  for (const auto& v : values) vals.push_back(from_rational<T>(to_rational(v)));
  return GridFunction<T>(to_rational(origin), direction_of(direction), std::move(vals));
}

template <Scalar T>
py::dict grid_to_dict(const GridFunction<T>& g) {
  py::list values;
  for (const auto& v : g.values()) values.append(to_python(v));
  py::dict d;
  d["origin"] = to_python(g.origin());
  d["direction"] = to_string(g.direction());
  d["domain"] = domain_label(g.origin(), g.direction());
  d["values"] = values;
  return d;
}

OperatorSpec make_spec(const std::string& kind, const std::string& side, Family family, const py::handle& order,
                       const py::object& anchor, const std::string& form, bool extended) {
  OperatorSpec s;
  if (kind != "delta" && kind != "nabla") throw py::value_error("kind must be 'delta' or 'nabla'");
  if (side != "left" && side != "right") throw py::value_error("side must be 'left' or 'right'");
  if (form != "composed" && form != "direct") throw py::value_error("form must be 'composed' or 'direct'");
  s.kind = kind == "delta" ? Kind::delta : Kind::nabla;
  s.side = side == "left" ? Side::left : Side::right;
  s.family = family;
  s.order = to_rational(order);
  if (!anchor.is_none()) s.anchor = to_rational(anchor);
  s.formulation = form == "direct" ? Formulation::direct : Formulation::composed;
  s.extended = extended;
  return s;
}

Backend backend_of(const std::string& name) { return parse_backend(name); }

py::dict run_operator(Family family, const py::sequence& values, const py::handle& order, const std::string& kind,
                      const std::string& side, const py::handle& origin, const std::string& direction,
                      const py::object& anchor, const std::string& form, bool extended,
                      const std::string& backend) {
  const OperatorSpec spec = make_spec(kind, side, family, order, anchor, form, extended);
  auto go = [&](auto tag) {
    using T = decltype(tag);
    const auto f = grid_from<T>(values, origin, direction);
    switch (family) {
      case Family::sum: return grid_to_dict(fractional_sum(spec, f));
      case Family::riemann: return grid_to_dict(riemann_difference(spec, f));
      case Family::caputo: break;
    }
    return grid_to_dict(caputo_difference(spec, f));
  };
  return backend_of(backend) == Backend::rational ? go(Rational()) : go(0.0);
}

py::dict case_dict(const TheoremCase<Rational>& c) {
  py::dict d = grid_to_dict(c.f);
  d["order"] = to_python(c.order);
  return d;
}

py::dict search_dict(const SearchResult& r) {
  py::dict d;
  d["id"] = to_string(r.theorem);
  d["instances"] = r.instances;
  d["hypothesis_satisfied"] = r.hypothesis_satisfied;
  d["exact_reverifications"] = r.exact_reverifications;
  d["counterexample_count"] = r.counterexample_count;
  py::list cex;
  for (const auto& c : r.counterexamples) cex.append(case_dict(c));
  d["counterexamples"] = cex;
  d["witness"] = r.witness ? py::object(case_dict(*r.witness)) : py::object(py::none());
  d["satisfying_case"] = r.satisfying_case ? py::object(case_dict(*r.satisfying_case)) : py::object(py::none());
  d["min_conclusion_margin"] = r.min_conclusion_margin;
  d["literal_guard_agrees"] = r.literal_guard_agrees;
  return d;
}

template <Scalar T>
py::dict verdict_dict(const TheoremVerdict<T>& v) {
  auto margins = [](const std::vector<Margin<T>>& ms) {
    py::list out;
    for (const auto& m : ms) {
      out.append(py::make_tuple(m.label, m.point ? to_python(*m.point) : py::object(py::none()), to_python(m.value)));
    }
    return out;
  };
  py::dict d;
  d["theorem"] = to_string(v.theorem);
  d["order"] = to_python(v.order);
  d["anchor"] = to_python(v.anchor);
  d["hypothesis_holds"] = v.hypothesis_holds;
  d["conclusion_holds"] = v.conclusion_holds;
  d["consistent"] = v.consistent;
  d["hypothesis_margins"] = margins(v.hypothesis_margins);
  d["conclusion_margins"] = margins(v.conclusion_margins);
  return d;
}

std::vector<Rational> rationals(const py::object& seq) {
  std::vector<Rational> out;
  if (seq.is_none()) return out;
  for (const auto& x : seq) out.push_back(to_rational(x));
  return out;
}

}  // namespace

PYBIND11_MODULE(_fracdiff, m) {
  m.doc() = "Discrete fractional sums and differences on shifted integer grids";

  auto& base = py::register_exception<Error>(m, "FracdiffError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<GridTooShort>(m, "GridTooShort", base.ptr());
  py::register_exception<DirectFormIntegerOrder>(m, "DirectFormIntegerOrder", base.ptr());
  py::register_exception<PoleAmbiguous>(m, "PoleAmbiguous", base.ptr());
  py::register_exception<BackendOverflow>(m, "BackendOverflow", base.ptr());
  py::register_exception<EmptyValues>(m, "EmptyValues", base.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  m.def(
      "fractional_sum",
      [](const py::sequence& values, const py::object& order, const std::string& kind, const std::string& side,
         const py::object& origin, const std::string& direction, const py::object& anchor,
         const std::string& backend) {
        return run_operator(Family::sum, values, order, kind, side, origin, direction, anchor, "composed", false,
                            backend);
      },
      py::arg("values"), py::arg("order"), py::arg("kind") = "delta", py::arg("side") = "left",
      py::arg("origin") = 0, py::arg("direction") = "forward", py::arg("anchor") = py::none(),
      py::arg("backend") = "rational");

  m.def(
      "riemann_difference",
      [](const py::sequence& values, const py::object& order, const std::string& kind, const std::string& side,
         const py::object& origin, const std::string& direction, const py::object& anchor, const std::string& form,
         bool extended, const std::string& backend) {
        return run_operator(Family::riemann, values, order, kind, side, origin, direction, anchor, form, extended,
                            backend);
      },
      py::arg("values"), py::arg("order"), py::arg("kind") = "delta", py::arg("side") = "left",
      py::arg("origin") = 0, py::arg("direction") = "forward", py::arg("anchor") = py::none(),
      py::arg("form") = "composed", py::arg("extended") = false, py::arg("backend") = "rational");

  m.def(
      "caputo_difference",
      [](const py::sequence& values, const py::object& order, const std::string& kind, const std::string& side,
         const py::object& origin, const std::string& direction, const py::object& anchor,
         const std::string& backend) {
        return run_operator(Family::caputo, values, order, kind, side, origin, direction, anchor, "composed", false,
                            backend);
      },
      py::arg("values"), py::arg("order"), py::arg("kind") = "delta", py::arg("side") = "left",
      py::arg("origin") = 0, py::arg("direction") = "forward", py::arg("anchor") = py::none(),
      py::arg("backend") = "rational");

  m.def(
      "lag_weight", [](const py::object& beta, int lag) { return to_python(lag_weight<Rational>(to_rational(beta), lag)); },
      py::arg("beta"), py::arg("lag"), "Γ(β+k)/(Γ(β) k!) as an exact fraction");
  m.def("falling", [](double t, double alpha) { return falling(t, alpha); }, py::arg("t"), py::arg("alpha"));
  m.def("rising", [](double t, double alpha) { return rising(t, alpha); }, py::arg("t"), py::arg("alpha"));

  m.def("identities", [] {
    std::vector<std::string> out;
    for (auto id : all_identities()) out.push_back(to_string(id));
    return out;
  });

  m.def(
      "check_identities",
      [](const std::vector<std::string>& names, int instances, std::uint64_t seed, const std::string& backend,
         bool inject_error, unsigned threads) {
        std::vector<IdentityId> ids;
        for (const auto& n : names) {
          const auto id = parse_identity(n);
          if (!id) throw py::value_error("unknown identity '" + n + "'");
          ids.push_back(*id);
        }
        if (ids.empty()) ids = all_identities();
        SuiteConfig config;
        config.backend = backend_of(backend);
        config.instances = instances;
        config.seed = seed;
        config.inject_error = inject_error;
        config.threads = threads;
        std::vector<SuiteResult> results;
        {
          py::gil_scoped_release release;
          results = run_identity_suite(ids, config);
        }
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["id"] = to_string(r.identity);
          d["pass"] = r.pass();
          d["instances"] = r.instances;
          d["passed"] = r.passed;
          d["domain_mismatches"] = r.domain_mismatches;
          d["max_residual"] = r.max_residual_text;
          d["first_failure"] = r.first_failure;
          out.append(d);
        }
        return out;
      },
      py::arg("ids") = std::vector<std::string>{}, py::arg("instances") = 200, py::arg("seed") = 0,
      py::arg("backend") = "rational", py::arg("inject_error") = false, py::arg("threads") = 0);

  m.def("theorems", [] {
    std::vector<std::string> out;
    for (auto id : all_theorems()) out.push_back(to_string(id));
    return out;
  });

  m.def(
      "evaluate_theorem",
      [](const std::string& name, const py::object& order, const py::sequence& values, const py::object& origin) {
        const auto id = parse_theorem(name);
        if (!id) throw py::value_error("unknown theorem '" + name + "'");
        const TheoremCase<Rational> c{*id, to_rational(order),
                                      grid_from<Rational>(values, origin, to_string(theorem_info(*id).direction))};
        return verdict_dict(evaluate_theorem(c));
      },
      py::arg("theorem"), py::arg("order"), py::arg("values"), py::arg("origin") = 0,
      "Exact evaluation; f is read in the theorem's grid direction starting at origin.");

  m.def(
      "search_counterexamples",
      [](const std::string& name, const py::object& values, const py::object& orders, const py::object& lengths,
         const std::string& mode, std::uint64_t budget, std::uint64_t seed, int k_cap, unsigned threads) {
        const auto id = parse_theorem(name);
        if (!id) throw py::value_error("unknown theorem '" + name + "'");
        if (mode != "exhaustive" && mode != "random") throw py::value_error("mode must be 'exhaustive' or 'random'");
        SearchConfig config;
        config.values = values.is_none() ? default_values() : rationals(values);
        config.orders = orders.is_none() ? default_orders(*id) : rationals(orders);
        config.lengths = lengths.is_none() ? default_lengths(*id) : lengths.cast<std::vector<std::size_t>>();
        config.mode = mode == "random" ? SearchMode::random : SearchMode::exhaustive;
        config.budget = budget;
        config.seed = seed;
        config.k_cap = k_cap;
        config.threads = threads;
        SearchResult r;
        {
          py::gil_scoped_release release;
          r = search_counterexamples(*id, config);
        }
        return search_dict(r);
      },
      py::arg("theorem"), py::arg("values") = py::none(), py::arg("orders") = py::none(),
      py::arg("lengths") = py::none(), py::arg("mode") = "exhaustive", py::arg("budget") = 1'000'000,
      py::arg("seed") = 0, py::arg("k_cap") = 64, py::arg("threads") = 0);
}
