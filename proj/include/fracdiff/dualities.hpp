#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracdiff/grids.hpp"
#include "fracdiff/kernels.hpp"
#include "fracdiff/operators.hpp"
#include "fracdiff/rational.hpp"

namespace fracdiff {

enum class IdentityId {
  LEFT_DUAL_SUM,
  LEFT_DUAL_DIFF,
  RIGHT_DUAL_SUM,
  RIGHT_DUAL_DIFF,
  CAPUTO_DUAL_LEFT,
  CAPUTO_DUAL_RIGHT,
  Q_SUM_DELTA,
  Q_DIFF_DELTA,
  Q_CAPUTO_DELTA,
  Q_SUM_NABLA,
  Q_DIFF_NABLA,
  Q_CAPUTO_NABLA,
  RELATE_DELTA_LEFT,
  RELATE_DELTA_RIGHT,
  RELATE_NABLA_LEFT,
  RELATE_NABLA_RIGHT,
  CAPUTO_INVERSION,
};

enum class IdentityGroup { dual, q_reflection, relation };

std::string to_string(IdentityId id);
std::optional<IdentityId> parse_identity(const std::string& name);
const std::vector<IdentityId>& all_identities();
IdentityGroup group_of(IdentityId id);
/// Human-readable statement, e.g. "(Δ_a^{-α} y)(t+α) = ∇_{a-1}^{-α} y(t) on N_a".
std::string statement(IdentityId id);

struct CheckOptions {
  /// Floating backend only: residuals are divided by max(1, |lhs|, |rhs|).
  double tolerance = 1e-10;
};

template <Scalar T>
struct CheckReport {
  IdentityId identity;
  Rational order;
  std::string grid;
  Direction direction = Direction::forward;
  /// First point of the common domain and the start the identity states.
  Rational domain_start;
  Rational expected_start;
  std::vector<std::pair<Rational, T>> residuals;
  T max_abs_residual{};
  double tolerance = 0;
  bool domain_matches = false;
  bool pass = false;

  std::string domain() const { return domain_label(domain_start, direction); }
};

/// Delta/nabla transport identities. Left identities read f forward from a,
/// right ones backward from its highest point; f is reoriented as needed.
///   LEFT_DUAL_SUM      (Δ_a^{-α} y)(t+α) = ∇_{a-1}^{-α} y(t)        on N_a
///   LEFT_DUAL_DIFF     (Δ_a^α y)(t-α)    = ∇_{a-1}^α y(t)           on N_{a+n}
///   RIGHT_DUAL_SUM     (_bΔ^{-α} y)(t-α) = _{b+1}∇^{-α} y(t)        on _bN, y on _{b+1}N
///   RIGHT_DUAL_DIFF    (_bΔ^α y)(t+α)    = _{b+1}∇^α y(t)           on _{b-n}N, y on _{b+1}N
///   CAPUTO_DUAL_LEFT   (^CΔ_a^α f)(t-α)  = ^C∇_{a(α)}^α f(t)        on N_{a+n}
///   CAPUTO_DUAL_RIGHT  (^C_bΔ^α f)(t+α)  = ^C_{b(α)}∇^α f(t)        on _{b-n}N
template <Scalar T>
CheckReport<T> check_delta_nabla_dual(const GridFunction<T>& f, const Rational& alpha, IdentityId which,
                                      const CheckOptions& options = {}, const KernelRows<T>& lhs_rows = {});

/// Q-reflection identities on f given over {a, ..., b}: the left operator of
/// Qf against Q applied to the right operator of f.
template <Scalar T>
CheckReport<T> check_q_identity(const GridFunction<T>& f, const Rational& alpha, IdentityId which,
                                const CheckOptions& options = {}, const KernelRows<T>& lhs_rows = {});

/// Caputo against Riemann-minus-correction (RELATE_*), or the nabla Caputo
/// inversion residual (CAPUTO_INVERSION, side taken from f's direction).
template <Scalar T>
CheckReport<T> check_relation(const GridFunction<T>& f, const Rational& alpha, IdentityId which,
                              const CheckOptions& options = {}, const KernelRows<T>& lhs_rows = {});

template <Scalar T>
CheckReport<T> check_identity(const GridFunction<T>& f, const Rational& alpha, IdentityId which,
                              const CheckOptions& options = {}, const KernelRows<T>& lhs_rows = {});

/// One randomized input for an identity.
struct IdentityInstance {
  Rational order;
  Rational origin;
  Direction direction = Direction::forward;
  std::vector<Rational> values;
};

struct SuiteConfig {
  Backend backend = Backend::rational;
  int instances = 200;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  int min_length = 4;
  int max_length = 12;
  int max_denominator = 12;
  /// Corrupt the lag-1 weight on the left-hand side (harness self-test).
  bool inject_error = false;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
};

IdentityInstance random_instance(IdentityId id, std::uint64_t instance_seed, const SuiteConfig& config);
std::uint64_t instance_seed(std::uint64_t base, IdentityId id, int index);

struct SuiteResult {
  IdentityId identity;
  int instances = 0;
  int passed = 0;
  int domain_mismatches = 0;
  int errors = 0;
  double max_residual = 0;
  std::string max_residual_text = "0";
  std::optional<std::string> first_failure;

  bool pass() const { return passed == instances; }
};

/// Runs `config.instances` random instances per identity. Results depend only
/// on the configuration, not on the worker count.
std::vector<SuiteResult> run_identity_suite(const std::vector<IdentityId>& ids, const SuiteConfig& config);

}  // namespace fracdiff
