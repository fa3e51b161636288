#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracdiff/grids.hpp"
#include "fracdiff/rational.hpp"
#include "fracdiff/scalar.hpp"

namespace fracdiff {

enum class TheoremId {
  T_JEP1,
  T_JEP,
  T_JEPP,
  T_SLOV1,
  T_SLOV11,
  T_SLOV2,
  T_SLOV22,
  T_SLOV3,
  T_SLOV33,
  T_U1,
  T_UU1,
  T_U3,
  T_UU2,
  T_C1,
  T_C2,
  T_C3,
  T_C4,
  T_C5,
  T_C6,
  T_D1,
  T_N1,
  T_D2,
  T_D3,
  T_D4,
  T_D5,
  T_D6,
  T_CD1,
  T_CD5,
};

/// Static description of a registered theorem.
struct TheoremInfo {
  TheoremId id;
  std::string name;
  /// Order range: (0,1) when true, (1,2) otherwise.
  bool low_order;
  /// Grid direction f must be given in.
  Direction direction;
  /// Offset of f's origin from the theorem's anchor (-1 for f on N_{a-1},
  /// +1 for f on _{b+1}N, 0 otherwise).
  int origin_offset;
  std::size_t min_length;
  std::string hypothesis;
  std::string conclusion;
  /// Reading choices made where the statement is ambiguous or garbled.
  std::string note;
};

std::string to_string(TheoremId id);
std::optional<TheoremId> parse_theorem(const std::string& name);
const std::vector<TheoremId>& all_theorems();
const TheoremInfo& theorem_info(TheoremId id);

/// ν-monotonicity along the grid.
///
/// Forward grids: increasing means f(t+1) >= ν f(t), decreasing f(t+1) <= ν f(t).
/// Backward grids (right-anchored at b) mirror this: decreasing means
/// f(t) >= ν f(t+1) for t < b, increasing f(t) <= ν f(t+1).
/// Both require f at the grid origin to be nonnegative. Throws DomainError
/// unless 0 < ν < 1.
enum class Monotonicity { increasing, decreasing };

template <Scalar T>
Verdict<T> is_nu_monotone(const GridFunction<T>& f, const Rational& nu, Monotonicity direction);

template <Scalar T>
struct TheoremCase {
  TheoremId theorem;
  Rational order;
  GridFunction<T> f;
  /// Literal cross-check bound for "for each k" starting conditions.
  int k_cap = 64;

  /// a (left theorems) or b (right theorems) implied by f's origin.
  Rational anchor() const;
};

template <Scalar T>
struct Margin {
  std::string label;
  std::optional<Rational> point;
  T value;
};

template <Scalar T>
struct TheoremVerdict {
  TheoremId theorem;
  Rational order;
  Rational anchor;
  bool hypothesis_holds = true;
  bool conclusion_holds = true;
  bool consistent = true;
  std::vector<Margin<T>> hypothesis_margins;
  std::vector<Margin<T>> conclusion_margins;
  /// Smallest margin on each side; empty when the side has no inequality on
  /// the available data.
  std::optional<T> hypothesis_margin;
  std::optional<T> conclusion_margin;
  /// False if a "for each k" condition decided true analytically fails
  /// literally for some k <= k_cap (never expected).
  bool literal_guard_agrees = true;
};

/// Evaluates hypothesis and conclusion on every point the data supports.
/// Throws GridTooShort when f is shorter than the theorem's minimum and
/// DomainError for an order outside the theorem's range or a wrong direction.
template <Scalar T>
TheoremVerdict<T> evaluate_theorem(const TheoremCase<T>& c);

enum class SearchMode { exhaustive, random };

struct SearchConfig {
  std::vector<Rational> values;
  std::vector<Rational> orders;
  /// Grid lengths tried; exhaustive mode enumerates each.
  std::vector<std::size_t> lengths;
  SearchMode mode = SearchMode::exhaustive;
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 0;
  int k_cap = 64;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Floating margins within this band are re-decided exactly.
  double ambiguity = 1e-9;
};

/// Default value set {-1, -1/2, 0, 1/2, 1}.
std::vector<Rational> default_values();
/// {1/4, 1/2, 3/4} or {5/4, 3/2, 7/4} depending on the theorem's range.
std::vector<Rational> default_orders(TheoremId id);
/// min_length .. 6.
std::vector<std::size_t> default_lengths(TheoremId id);

struct SearchResult {
  TheoremId theorem;
  std::uint64_t instances = 0;
  std::uint64_t hypothesis_satisfied = 0;
  std::uint64_t exact_reverifications = 0;
  /// Cases violating the theorem, confirmed under exact arithmetic.
  std::vector<TheoremCase<Rational>> counterexamples;
  /// First enumerated case whose hypothesis holds with strictly positive margin.
  std::optional<TheoremCase<Rational>> witness;
  std::optional<Rational> witness_margin;
  /// First enumerated case with nonzero data whose hypothesis holds (possibly
  /// with zero margin) and whose conclusion is tested on at least one point.
  std::optional<TheoremCase<Rational>> satisfying_case;
  /// Smallest conclusion margin over cases satisfying the hypothesis.
  std::optional<double> min_conclusion_margin;
  /// Total violations; only the first few are kept in `counterexamples`.
  std::uint64_t counterexample_count = 0;
  bool literal_guard_agrees = true;
};

/// Exhaustive mode throws BudgetExceeded when the total number of cases
/// (Σ over lengths of |values|^length times |orders|) exceeds the budget;
/// random mode draws `budget` cases. Results do not depend on thread count.
SearchResult search_counterexamples(TheoremId id, const SearchConfig& config);

struct ReportConfig {
  SearchMode mode = SearchMode::exhaustive;
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 0;
  int k_cap = 64;
  unsigned threads = 0;
  /// Empty means the defaults above.
  std::vector<Rational> values;
  std::vector<Rational> orders;
  std::vector<std::size_t> lengths;
};

std::vector<SearchResult> theorem_report(const std::vector<TheoremId>& ids, const ReportConfig& config);

/// A theorem verdict obtained two ways.
struct RouteComparison {
  bool direct_hypothesis = false;
  bool direct_conclusion = false;
  bool route_hypothesis = false;
  bool route_conclusion = false;

  bool agree() const { return direct_hypothesis == route_hypothesis && direct_conclusion == route_conclusion; }
};

/// T_JEPP on f (given on N_{a-1}) against its derivation: the two starting
/// values ∇_{a-1}^ν f(a), ∇_{a-1}^ν f(a+1) plus T_JEP1 on f restricted to N_a.
template <Scalar T>
RouteComparison jepp_via_left_dual(const GridFunction<T>& f, const Rational& nu);

/// T_D1 on f (backward grid) against T_JEP1 on its Q-reflection.
template <Scalar T>
RouteComparison d1_via_q_reflection(const GridFunction<T>& f, const Rational& alpha);

}  // namespace fracdiff
