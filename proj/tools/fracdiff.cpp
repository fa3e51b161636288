// fracdiff: apply discrete fractional operators, run identity suites and
// monotonicity campaigns.
//
// Exit codes: 0 pass, 1 violation, 2 usage or parse error, 3 domain error,
// 4 search budget exceeded.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracdiff/dualities.hpp"
#include "fracdiff/errors.hpp"
#include "fracdiff/io.hpp"
#include "fracdiff/monotone.hpp"
#include "fracdiff/operators.hpp"

namespace {

using namespace fracdiff;

enum Exit { kPass = 0, kViolation = 1, kUsage = 2, kDomain = 3, kBudget = 4 };

struct RunConfig {
  std::string backend = "rational";
  double tolerance = 1e-10;
  std::uint64_t seed = 0;
  int k_cap = 64;
  std::uint64_t budget = 1'000'000;
  unsigned threads = 0;
  std::string report;
};

struct ApplyArgs {
  std::string input;
  std::string output;
  std::string kind = "delta";
  std::string side = "left";
  std::string family = "sum";
  std::string order;
  std::string form = "composed";
  std::string anchor;
  bool extended = false;
};

struct CheckArgs {
  std::vector<std::string> ids;
  bool all = false;
  int instances = 200;
  bool inject_error = false;
  int min_length = 4;
  int max_length = 12;
};

struct TheoremArgs {
  std::vector<std::string> ids;
  bool all = false;
  bool exhaustive = false;
  bool random = false;
  int length = 6;
  std::string values;
  std::string orders;
};

Rational parse_number(const std::string& text, const std::string& what) {
  try {
    return Rational::parse(text);
  } catch (const DomainError& e) {
    throw ParseError(what + ": " + e.what());
  }
}

Backend effective_backend(const RunConfig& run) {
  const char* env = std::getenv("FRAC_BACKEND");
  try {
    return parse_backend(env != nullptr && *env != '\0' ? env : run.backend);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

void emit(const RunConfig& run, const std::string& text) {
  std::cout << text;
  if (!run.report.empty()) write_file(run.report, text);
}

template <Scalar T>
int apply(const ApplyArgs& a, const RunConfig& run) {
  const GridFunction<T> f = parse_grid<T>(read_file(a.input));
  OperatorSpec spec;
  spec.kind = a.kind == "delta" ? Kind::delta : Kind::nabla;
  spec.side = a.side == "left" ? Side::left : Side::right;
  spec.family = a.family == "sum" ? Family::sum : (a.family == "riemann" ? Family::riemann : Family::caputo);
  spec.order = parse_number(a.order, "--order");
  spec.formulation = a.form == "direct" ? Formulation::direct : Formulation::composed;
  if (!a.anchor.empty()) spec.anchor = parse_number(a.anchor, "--anchor");
  spec.extended = a.extended;

  GridFunction<T> out = [&] {
    switch (spec.family) {
      case Family::sum: return fractional_sum(spec, f);
      case Family::riemann: return riemann_difference(spec, f);
      case Family::caputo: break;
    }
    return caputo_difference(spec, f);
  }();
  const std::string text = grid_to_json(out);
  if (a.output.empty()) {
    std::cout << text;
  } else {
    write_file(a.output, text);
  }
  if (!run.report.empty()) write_file(run.report, text);
  return kPass;
}

std::vector<Rational> parse_value_list(const std::string& s) {
  // "a..b" is the integer range; anything else a comma-separated list.
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const Rational lo = parse_number(s.substr(0, dots), "range start");
    const Rational hi = parse_number(s.substr(dots + 2), "range end");
    if (!lo.is_integer() || !hi.is_integer() || hi < lo) throw ParseError("bad range '" + s + "'");
    std::vector<Rational> out;
    for (Rational v = lo; v <= hi; v += 1) out.push_back(v);
    return out;
  }
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_number(item, "value list"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int check(const CheckArgs& a, const RunConfig& run) {
  std::vector<IdentityId> ids;
  if (a.all || a.ids.empty()) {
    ids = all_identities();
  } else {
    for (const auto& name : a.ids) {
      const auto id = parse_identity(name);
      if (!id) throw ParseError("unknown identity '" + name + "'");
      ids.push_back(*id);
    }
  }
  SuiteConfig config;
  config.backend = effective_backend(run);
  config.instances = a.instances;
  config.seed = run.seed;
  config.tolerance = run.tolerance;
  config.min_length = a.min_length;
  config.max_length = a.max_length;
  config.inject_error = a.inject_error;
  config.threads = run.threads;

  std::string text;
  bool all_pass = true;
  for (const auto& r : run_identity_suite(ids, config)) {
    text += suite_report_line(r, config);
    all_pass = all_pass && r.pass();
    std::cerr << (r.pass() ? "PASS " : "FAIL ") << to_string(r.identity) << " " << r.passed << "/" << r.instances
              << " max residual " << r.max_residual_text << "\n";
  }
  emit(run, text);
  return all_pass ? kPass : kViolation;
}

int theorems(const TheoremArgs& a, const RunConfig& run) {
  std::vector<TheoremId> ids;
  if (a.all || a.ids.empty()) {
    ids = all_theorems();
  } else {
    for (const auto& name : a.ids) {
      const auto id = parse_theorem(name);
      if (!id) throw ParseError("unknown theorem '" + name + "'");
      ids.push_back(*id);
    }
  }
  std::string text;
  bool all_pass = true;
  for (const TheoremId id : ids) {
    SearchConfig config;
    config.mode = a.random ? SearchMode::random : SearchMode::exhaustive;
    config.values = a.values.empty() ? default_values() : parse_value_list(a.values);
    config.orders = a.orders.empty() ? default_orders(id) : parse_value_list(a.orders);
    const std::size_t lo = theorem_info(id).min_length;
    if (a.length < static_cast<int>(lo)) {
      throw GridTooShort(to_string(id) + " needs --length of at least " + std::to_string(lo));
    }
    for (std::size_t n = lo; n <= static_cast<std::size_t>(a.length); ++n) config.lengths.push_back(n);
    config.budget = run.budget;
    config.seed = run.seed;
    config.k_cap = run.k_cap;
    config.threads = run.threads;
    const SearchResult r = search_counterexamples(id, config);
    text += theorem_report_line(r, config);
    all_pass = all_pass && r.counterexample_count == 0;
    std::cerr << (r.counterexample_count == 0 ? "PASS " : "FAIL ") << to_string(id) << " " << r.instances
              << " cases, " << r.hypothesis_satisfied << " satisfy the hypothesis, " << r.counterexample_count
              << " counterexamples\n";
  }
  emit(run, text);
  return all_pass ? kPass : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete fractional calculus toolkit"};
  app.require_subcommand(1);
  RunConfig run;
  app.add_option("--backend", run.backend, "floating or rational (FRAC_BACKEND overrides)")
      ->check(CLI::IsMember({"floating", "rational"}));
  app.add_option("--tolerance", run.tolerance, "relative tolerance for the floating backend")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", run.seed, "random seed");
  app.add_option("--k-cap", run.k_cap, "literal cross-check bound for starting conditions")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget", run.budget, "maximum number of search cases")->check(CLI::PositiveNumber);
  app.add_option("--threads", run.threads, "worker threads (0 = all cores)");
  app.add_option("--report", run.report, "also write the report to this file");

  ApplyArgs apply_args;
  auto* apply_cmd = app.add_subcommand("apply", "apply an operator to a grid function");
  apply_cmd->add_option("input", apply_args.input, "JSON record or t,value CSV")->required();
  apply_cmd->add_option("-o,--output", apply_args.output, "output file (default stdout)");
  apply_cmd->add_option("--kind", apply_args.kind)->check(CLI::IsMember({"delta", "nabla"}));
  apply_cmd->add_option("--side", apply_args.side)->check(CLI::IsMember({"left", "right"}));
  apply_cmd->add_option("--family", apply_args.family)->check(CLI::IsMember({"sum", "riemann", "caputo"}));
  apply_cmd->add_option("--order", apply_args.order, "order, e.g. 1/2 or 0.5")->required();
  apply_cmd->add_option("--form", apply_args.form)->check(CLI::IsMember({"composed", "direct"}));
  apply_cmd->add_option("--anchor", apply_args.anchor, "anchor point (default: grid origin)");
  apply_cmd->add_flag("--extended", apply_args.extended, "direct delta forms: also emit the leading points");
  // Global flags are also accepted after the subcommand.
  apply_cmd->fallthrough();

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check", "run randomized identity suites");
  check_cmd->add_option("ids", check_args.ids, "identity ids (default: all)");
  check_cmd->add_flag("--all", check_args.all);
  check_cmd->add_option("--instances", check_args.instances)->check(CLI::PositiveNumber);
  check_cmd->add_option("--min-length", check_args.min_length)->check(CLI::PositiveNumber);
  check_cmd->add_option("--max-length", check_args.max_length)->check(CLI::PositiveNumber);
  check_cmd->add_flag("--inject-error", check_args.inject_error, "corrupt one kernel weight (self-test)");
  check_cmd->fallthrough();

  TheoremArgs th_args;
  auto* th_cmd = app.add_subcommand("theorems", "search monotonicity theorems for counterexamples");
  th_cmd->add_option("--id", th_args.ids, "theorem id (repeatable)");
  th_cmd->add_flag("--all", th_args.all);
  auto* ex = th_cmd->add_flag("--exhaustive", th_args.exhaustive, "enumerate every case (default)");
  th_cmd->add_flag("--random", th_args.random, "draw --budget random cases")->excludes(ex);
  th_cmd->add_option("--length", th_args.length, "longest grid searched")->check(CLI::PositiveNumber);
  th_cmd->add_option("--values", th_args.values, "value set: -1,-1/2,0 or -2..2");
  th_cmd->add_option("--orders", th_args.orders, "orders tried");
  th_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*apply_cmd) {
      return effective_backend(run) == Backend::rational ? apply<Rational>(apply_args, run)
                                                         : apply<double>(apply_args, run);
    }
    if (*check_cmd) return check(check_args, run);
    return theorems(th_args, run);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DirectFormIntegerOrder& e) {
    std::cerr << "DirectFormIntegerOrder: " << e.what() << "\n";
    return kUsage;
  } catch (const EmptyValues& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  }
}
