#include "fracdiff/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "fracdiff/errors.hpp"
#include "json.hpp"

namespace fracdiff {

namespace {

using json = nlohmann::ordered_json;

Direction parse_direction(const std::string& s) {
  if (s == "forward") return Direction::forward;
  if (s == "backward") return Direction::backward;
  throw ParseError("direction must be \"forward\" or \"backward\", got \"" + s + "\"");
}

Rational number_from_json(const json& v, const std::string& what) {
  try {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float()) return Rational(mpq_class(v.get<double>()));
  } catch (const DomainError& e) {
    throw ParseError(what + ": " + e.what());
  }
  throw ParseError(what + " must be a number or a numeric string");
}

std::string text(const Rational& x) { return x.decimal_or_fraction(); }
std::string text(double x) { return format_scalar(x); }

json case_json(const TheoremCase<Rational>& c) {
  json vals = json::array();
  for (const auto& v : c.f.values()) vals.push_back(text(v));
  return json{{"order", text(c.order)},
              {"origin", text(c.f.origin())},
              {"direction", to_string(c.f.direction())},
              {"values", vals}};
}

json rationals(const std::vector<Rational>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(text(x));
  return out;
}

}  // namespace

template <Scalar T>
GridFunction<T> parse_grid_json(const std::string& text_in) {
  json j;
  try {
    j = json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("expected a JSON object with origin, direction and values");
  if (!j.contains("values") || !j["values"].is_array()) throw ParseError("missing \"values\" array");
  const Rational origin = j.contains("origin") ? number_from_json(j["origin"], "origin") : Rational(0);
  Direction dir = Direction::forward;
  if (j.contains("direction")) {
    if (!j["direction"].is_string()) throw ParseError("direction must be a string");
    dir = parse_direction(j["direction"].get<std::string>());
  }
  std::vector<T> values;
  std::size_t k = 0;
  for (const auto& v : j["values"]) {
    values.push_back(from_rational<T>(number_from_json(v, "values[" + std::to_string(k++) + "]")));
  }
  if (values.empty()) throw EmptyValues("input has no values");
  return GridFunction<T>(origin, dir, std::move(values));
}

template <Scalar T>
GridFunction<T> parse_grid_csv(const std::string& text_in) {
  std::istringstream in(text_in);
  std::string line;
  std::optional<Rational> origin;
  Rational expected;
  std::vector<T> values;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected \"t,value\"");
    Rational t;
    Rational v;
    try {
      t = Rational::parse(line.substr(0, comma));
      v = Rational::parse(line.substr(comma + 1));
    } catch (const DomainError&) {
      if (!origin && values.empty()) continue;  // header
      throw ParseError("line " + std::to_string(lineno) + ": cannot parse \"" + line + "\"");
    }
    if (!origin) {
      if (!t.is_integer()) throw ParseError("CSV input needs integer points; use JSON for shifted grids");
      origin = t;
      expected = t;
    }
    if (t != expected) {
      throw ParseError("line " + std::to_string(lineno) + ": expected t = " + expected.str() + ", got " + t.str());
    }
    values.push_back(from_rational<T>(v));
    expected += 1;
  }
  if (values.empty()) throw EmptyValues("input has no values");
  return GridFunction<T>(*origin, Direction::forward, std::move(values));
}

template <Scalar T>
GridFunction<T> parse_grid(const std::string& text_in) {
  const auto first = text_in.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text_in[first] == '{') return parse_grid_json<T>(text_in);
  return parse_grid_csv<T>(text_in);
}

template <Scalar T>
std::string grid_to_json(const GridFunction<T>& f) {
  json vals = json::array();
  for (const auto& v : f.values()) vals.push_back(text(v));
  const Rational start = f.size() ? f.origin() : Rational(0);
  const json j{{"origin", text(f.origin())},
               {"direction", to_string(f.direction())},
               {"domain", domain_label(start, f.direction())},
               {"values", vals}};
  return j.dump() + "\n";
}

std::string suite_report_line(const SuiteResult& r, const SuiteConfig& config) {
  json j{{"id", to_string(r.identity)},
         {"pass", r.pass()},
         {"instances", r.instances},
         {"passed", r.passed},
         {"domain_mismatches", r.domain_mismatches},
         {"errors", r.errors},
         {"max_residual", r.max_residual_text}};
  j["first_failure"] = r.first_failure ? json(*r.first_failure) : json(nullptr);
  j["config"] = json{{"backend", to_string(config.backend)},
                     {"seed", config.seed},
                     {"tolerance", config.tolerance},
                     {"lengths", json::array({config.min_length, config.max_length})},
                     {"inject_error", config.inject_error}};
  return j.dump() + "\n";
}

std::string theorem_report_line(const SearchResult& r, const SearchConfig& config) {
  json j{{"id", to_string(r.theorem)},
         {"pass", r.counterexample_count == 0},
         {"instances", r.instances},
         {"hypothesis_satisfied", r.hypothesis_satisfied},
         {"exact_reverifications", r.exact_reverifications},
         {"counterexamples", r.counterexample_count}};
  json examples = json::array();
  for (const auto& c : r.counterexamples) examples.push_back(case_json(c));
  j["counterexample_cases"] = examples;
  if (r.witness) {
    json w = case_json(*r.witness);
    w["hypothesis_margin"] = text(r.witness_margin.value_or(Rational(0)));
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  j["satisfying_case"] = r.satisfying_case ? case_json(*r.satisfying_case) : json(nullptr);
  j["min_conclusion_margin"] = r.min_conclusion_margin ? json(*r.min_conclusion_margin) : json(nullptr);
  j["literal_guard_agrees"] = r.literal_guard_agrees;
  j["config"] = json{{"mode", config.mode == SearchMode::exhaustive ? "exhaustive" : "random"},
                     {"values", rationals(config.values)},
                     {"orders", rationals(config.orders)},
                     {"lengths", config.lengths},
                     {"budget", config.budget},
                     {"seed", config.seed},
                     {"k_cap", config.k_cap}};
  return j.dump() + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

#define FRACDIFF_INSTANTIATE(T)                                   \
  template GridFunction<T> parse_grid_json(const std::string&);   \
  template GridFunction<T> parse_grid_csv(const std::string&);    \
  template GridFunction<T> parse_grid(const std::string&);        \
  template std::string grid_to_json(const GridFunction<T>&);

FRACDIFF_INSTANTIATE(double)
FRACDIFF_INSTANTIATE(Rational)

#undef FRACDIFF_INSTANTIATE

}  // namespace fracdiff
