#include "fracdiff/dualities.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <random>
#include <thread>

#include "fracdiff/errors.hpp"

namespace fracdiff {

namespace {

struct IdentityInfo {
  IdentityId id;
  const char* name;
  IdentityGroup group;
  const char* statement;
};

constexpr std::array<IdentityInfo, 17> kIdentities{{
    {IdentityId::LEFT_DUAL_SUM, "LEFT_DUAL_SUM", IdentityGroup::dual,
     "(Δ_a^{-α} y)(t+α) = ∇_{a-1}^{-α} y(t) on N_a"},
    {IdentityId::LEFT_DUAL_DIFF, "LEFT_DUAL_DIFF", IdentityGroup::dual,
     "(Δ_a^α y)(t-α) = ∇_{a-1}^α y(t) on N_{a+n}"},
    {IdentityId::RIGHT_DUAL_SUM, "RIGHT_DUAL_SUM", IdentityGroup::dual,
     "(_bΔ^{-α} y)(t-α) = _{b+1}∇^{-α} y(t) on _bN"},
    {IdentityId::RIGHT_DUAL_DIFF, "RIGHT_DUAL_DIFF", IdentityGroup::dual,
     "(_bΔ^α y)(t+α) = _{b+1}∇^α y(t) on _{b-n}N"},
    {IdentityId::CAPUTO_DUAL_LEFT, "CAPUTO_DUAL_LEFT", IdentityGroup::dual,
     "(^CΔ_a^α f)(t-α) = ^C∇_{a(α)}^α f(t) on N_{a+n}"},
    {IdentityId::CAPUTO_DUAL_RIGHT, "CAPUTO_DUAL_RIGHT", IdentityGroup::dual,
     "(^C_bΔ^α f)(t+α) = ^C_{b(α)}∇^α f(t) on _{b-n}N"},
    {IdentityId::Q_SUM_DELTA, "Q_SUM_DELTA", IdentityGroup::q_reflection,
     "Δ_a^{-α} Qf = Q _bΔ^{-α} f on N_{a+α}"},
    {IdentityId::Q_DIFF_DELTA, "Q_DIFF_DELTA", IdentityGroup::q_reflection,
     "Δ_a^α Qf = Q _bΔ^α f on N_{a+n-α}"},
    {IdentityId::Q_CAPUTO_DELTA, "Q_CAPUTO_DELTA", IdentityGroup::q_reflection,
     "^CΔ_a^α Qf = Q ^C_bΔ^α f on N_{a+n-α}"},
    {IdentityId::Q_SUM_NABLA, "Q_SUM_NABLA", IdentityGroup::q_reflection,
     "∇_a^{-α} Qf = Q _b∇^{-α} f on N_a"},
    {IdentityId::Q_DIFF_NABLA, "Q_DIFF_NABLA", IdentityGroup::q_reflection,
     "∇_a^α Qf = Q _b∇^α f on N_{a+n}"},
    {IdentityId::Q_CAPUTO_NABLA, "Q_CAPUTO_NABLA", IdentityGroup::q_reflection,
     "^C∇_{a(α)}^α Qf = Q ^C_{b(α)}∇^α f on N_{a+n}"},
    {IdentityId::RELATE_DELTA_LEFT, "RELATE_DELTA_LEFT", IdentityGroup::relation,
     "^CΔ_a^α f(t) = Δ_a^α f(t) - Σ_{k<n} (t-a)^{(k-α)}/Γ(k-α+1) Δ^k f(a) on N_{a+n-α}"},
    {IdentityId::RELATE_DELTA_RIGHT, "RELATE_DELTA_RIGHT", IdentityGroup::relation,
     "^C_bΔ^α f(t) = _bΔ^α f(t) - Σ_{k<n} (b-t)^{(k-α)}/Γ(k-α+1) ∇⊖^k f(b) on _{b-n+α}N"},
    {IdentityId::RELATE_NABLA_LEFT, "RELATE_NABLA_LEFT", IdentityGroup::relation,
     "^C∇_{a(α)}^α f(t) = ∇_{a(α)}^α f(t) - Σ_{k<n} (t-a(α))^{overline k-α}/Γ(k-α+1) ∇^k f(a(α)) on N_{a+n}"},
    {IdentityId::RELATE_NABLA_RIGHT, "RELATE_NABLA_RIGHT", IdentityGroup::relation,
     "^C_{b(α)}∇^α f(t) = _{b(α)}∇^α f(t) - Σ_{k<n} (b(α)-t)^{overline k-α}/Γ(k-α+1) ⊖Δ^k f(b(α)) on _{b-n}N"},
    {IdentityId::CAPUTO_INVERSION, "CAPUTO_INVERSION", IdentityGroup::relation,
     "∇_{a(α)}^{-α} ^C∇_{a(α)}^α f(t) = f(t) - Σ_{k<n} (t-a(α))^{overline k}/k! ∇^k f(a(α)) on N_{a+n}"},
}};

const IdentityInfo& info(IdentityId id) { return kIdentities[static_cast<std::size_t>(id)]; }

bool is_left(IdentityId id) {
  switch (id) {
    case IdentityId::RIGHT_DUAL_SUM:
    case IdentityId::RIGHT_DUAL_DIFF:
    case IdentityId::CAPUTO_DUAL_RIGHT:
    case IdentityId::RELATE_DELTA_RIGHT:
    case IdentityId::RELATE_NABLA_RIGHT:
      return false;
    default:
      return true;
  }
}

OperatorSpec make_spec(Kind kind, Side side, Family family, const Rational& order,
                       std::optional<Rational> anchor = std::nullopt) {
  OperatorSpec s;
  s.kind = kind;
  s.side = side;
  s.family = family;
  s.order = order;
  s.anchor = std::move(anchor);
  return s;
}

template <Scalar T>
GridFunction<T> apply(const OperatorSpec& spec, const GridFunction<T>& f, const KernelRows<T>& rows) {
  switch (spec.family) {
    case Family::sum:
      return fractional_sum(spec, f, rows);
    case Family::riemann:
      return riemann_difference(spec, f, rows);
    case Family::caputo:
      return caputo_difference(spec, f, rows);
  }
  throw DomainError("unknown operator family");
}

// Compares two functions on the intersection of their grids.
template <Scalar T>
CheckReport<T> compare(IdentityId id, const Rational& alpha, const GridFunction<T>& input, const GridFunction<T>& lhs,
                       const GridFunction<T>& rhs, const Rational& expected_start, const CheckOptions& options) {
  if (lhs.direction() != rhs.direction()) throw DomainError("identity sides run in opposite directions");
  if (!(lhs.origin() - rhs.origin()).is_integer()) {
    throw DomainError("identity sides live on different residue classes: " + lhs.describe() + " vs " + rhs.describe());
  }
  const bool forward = lhs.direction() == Direction::forward;
  const Rational start = forward ? std::max(lhs.origin(), rhs.origin()) : std::min(lhs.origin(), rhs.origin());
  const Rational end = forward ? std::min(lhs.last_point(), rhs.last_point())
                               : std::max(lhs.last_point(), rhs.last_point());
  if (forward ? start > end : start < end) {
    throw GridTooShort("identity sides do not overlap: " + lhs.describe() + " vs " + rhs.describe());
  }

  CheckReport<T> report;
  report.identity = id;
  report.order = alpha;
  report.grid = input.describe();
  report.direction = lhs.direction();
  report.domain_start = start;
  report.expected_start = expected_start;
  report.tolerance = is_exact_v<T> ? 0.0 : options.tolerance;
  report.domain_matches = start == expected_start;

  const auto count = (forward ? end - start : start - end).to_int() + 1;
  for (std::int64_t k = 0; k < count; ++k) {
    const Rational t = forward ? start + Rational(static_cast<long long>(k)) : start - Rational(static_cast<long long>(k));
    const T& l = lhs.at(t);
    const T& r = rhs.at(t);
    T residual = l - r;
    if constexpr (!is_exact_v<T>) {
      residual /= std::max({1.0, std::fabs(l), std::fabs(r)});
    }
    const T magnitude = abs_value(residual);
    if (magnitude > report.max_abs_residual) report.max_abs_residual = magnitude;
    report.residuals.emplace_back(t, std::move(residual));
  }
  if constexpr (is_exact_v<T>) {
    report.pass = report.domain_matches && report.max_abs_residual.is_zero();
  } else {
    report.pass = report.domain_matches && report.max_abs_residual <= options.tolerance;
  }
  return report;
}

template <Scalar T>
GridFunction<T> oriented(const GridFunction<T>& f, bool left) {
  return f.reoriented(left ? Direction::forward : Direction::backward);
}

}  // namespace

std::string to_string(IdentityId id) { return info(id).name; }

std::optional<IdentityId> parse_identity(const std::string& name) {
  for (const auto& i : kIdentities) {
    if (name == i.name) return i.id;
  }
  return std::nullopt;
}

const std::vector<IdentityId>& all_identities() {
  static const std::vector<IdentityId> ids = [] {
    std::vector<IdentityId> v;
    for (const auto& i : kIdentities) v.push_back(i.id);
    return v;
  }();
  return ids;
}

IdentityGroup group_of(IdentityId id) { return info(id).group; }

std::string statement(IdentityId id) { return info(id).statement; }

template <Scalar T>
CheckReport<T> check_delta_nabla_dual(const GridFunction<T>& f_in, const Rational& alpha, IdentityId which,
                                      const CheckOptions& options, const KernelRows<T>& lhs_rows) {
  if (group_of(which) != IdentityGroup::dual) throw DomainError(to_string(which) + " is not a delta/nabla dual identity");
  const bool left = is_left(which);
  const GridFunction<T> f = oriented(f_in, left);
  const Side side = left ? Side::left : Side::right;
  const int n = order_ceiling(alpha);
  const KernelRows<T> plain;
  const Rational& o = f.origin();

  switch (which) {
    case IdentityId::LEFT_DUAL_SUM: {
      const auto lhs = fractional_sum(make_spec(Kind::delta, side, Family::sum, alpha), f, lhs_rows).shifted(-alpha);
      const auto rhs = fractional_sum(make_spec(Kind::nabla, side, Family::sum, alpha, o - 1), f, plain);
      return compare(which, alpha, f, lhs, rhs, o, options);
    }
    case IdentityId::LEFT_DUAL_DIFF: {
      const auto lhs = riemann_difference(make_spec(Kind::delta, side, Family::riemann, alpha), f, lhs_rows).shifted(alpha);
      const auto rhs = riemann_difference(make_spec(Kind::nabla, side, Family::riemann, alpha, o - 1), f, plain);
      return compare(which, alpha, f, lhs, rhs, o + n, options);
    }
    case IdentityId::RIGHT_DUAL_SUM: {
      // y lives on _{b+1}N, so b sits one step below the data's top point.
      const Rational b = o - 1;
      const auto lhs = fractional_sum(make_spec(Kind::delta, side, Family::sum, alpha, b), f, lhs_rows).shifted(alpha);
      const auto rhs = fractional_sum(make_spec(Kind::nabla, side, Family::sum, alpha, o), f, plain);
      return compare(which, alpha, f, lhs, rhs, b, options);
    }
    case IdentityId::RIGHT_DUAL_DIFF: {
      const Rational b = o - 1;
      const auto lhs =
          riemann_difference(make_spec(Kind::delta, side, Family::riemann, alpha, b), f, lhs_rows).shifted(-alpha);
      const auto rhs = riemann_difference(make_spec(Kind::nabla, side, Family::riemann, alpha, o), f, plain);
      return compare(which, alpha, f, lhs, rhs, b - n, options);
    }
    case IdentityId::CAPUTO_DUAL_LEFT: {
      const auto lhs = caputo_difference(make_spec(Kind::delta, side, Family::caputo, alpha), f, lhs_rows).shifted(alpha);
      const auto rhs = caputo_difference(make_spec(Kind::nabla, side, Family::caputo, alpha), f, plain);
      return compare(which, alpha, f, lhs, rhs, o + n, options);
    }
    case IdentityId::CAPUTO_DUAL_RIGHT: {
      const auto lhs = caputo_difference(make_spec(Kind::delta, side, Family::caputo, alpha), f, lhs_rows).shifted(-alpha);
      const auto rhs = caputo_difference(make_spec(Kind::nabla, side, Family::caputo, alpha), f, plain);
      return compare(which, alpha, f, lhs, rhs, o - n, options);
    }
    default:
      break;
  }
  throw DomainError("unhandled identity " + to_string(which));
}

template <Scalar T>
CheckReport<T> check_q_identity(const GridFunction<T>& f_in, const Rational& alpha, IdentityId which,
                                const CheckOptions& options, const KernelRows<T>& lhs_rows) {
  if (group_of(which) != IdentityGroup::q_reflection) throw DomainError(to_string(which) + " is not a Q identity");
  const GridFunction<T> f = oriented(f_in, true);
  const Rational a = f.origin();
  const Rational b = f.last_point();
  const int n = order_ceiling(alpha);

  Kind kind = Kind::delta;
  Family family = Family::sum;
  Rational start = a + alpha;
  switch (which) {
    case IdentityId::Q_SUM_DELTA:
      break;
    case IdentityId::Q_DIFF_DELTA:
      family = Family::riemann;
      start = a + n - alpha;
      break;
    case IdentityId::Q_CAPUTO_DELTA:
      family = Family::caputo;
      start = a + n - alpha;
      break;
    case IdentityId::Q_SUM_NABLA:
      kind = Kind::nabla;
      start = a;
      break;
    case IdentityId::Q_DIFF_NABLA:
      kind = Kind::nabla;
      family = Family::riemann;
      start = a + n;
      break;
    case IdentityId::Q_CAPUTO_NABLA:
      kind = Kind::nabla;
      family = Family::caputo;
      start = a + n;
      break;
    default:
      throw DomainError("unhandled identity " + to_string(which));
  }

  const GridFunction<T> qf = q_reflect(f, a, b).reoriented(Direction::forward);
  const GridFunction<T> lhs = apply(make_spec(kind, Side::left, family, alpha), qf, lhs_rows);
  const GridFunction<T> right = apply(make_spec(kind, Side::right, family, alpha), f.reoriented(Direction::backward),
                                      KernelRows<T>{});
  const GridFunction<T> rhs = q_reflect(right, a, b);
  return compare(which, alpha, f, lhs, rhs, start, options);
}

template <Scalar T>
CheckReport<T> check_relation(const GridFunction<T>& f_in, const Rational& alpha, IdentityId which,
                              const CheckOptions& options, const KernelRows<T>& lhs_rows) {
  if (group_of(which) != IdentityGroup::relation) throw DomainError(to_string(which) + " is not a relation identity");
  const int n = order_ceiling(alpha);
  if (which == IdentityId::CAPUTO_INVERSION) {
    const bool left = f_in.direction() == Direction::forward;
    const Side side = left ? Side::left : Side::right;
    const GridFunction<T> residual = caputo_inversion_residual(f_in, alpha, side, lhs_rows);
    const GridFunction<T> zero(residual.origin(), residual.direction(),
                               std::vector<T>(residual.size(), from_rational<T>(Rational(0))));
    const Rational start = left ? f_in.origin() + n : f_in.origin() - n;
    return compare(which, alpha, f_in, residual, zero, start, options);
  }

  const bool left = is_left(which);
  const GridFunction<T> f = oriented(f_in, left);
  const Side side = left ? Side::left : Side::right;
  const Kind kind =
      which == IdentityId::RELATE_DELTA_LEFT || which == IdentityId::RELATE_DELTA_RIGHT ? Kind::delta : Kind::nabla;
  const OperatorSpec spec = make_spec(kind, side, Family::caputo, alpha);
  const GridFunction<T> lhs = caputo_difference(spec, f, lhs_rows);
  const GridFunction<T> rhs = caputo_from_riemann(spec, f, KernelRows<T>{});
  const Rational offset = kind == Kind::delta ? Rational(n) - alpha : Rational(n);
  const Rational start = left ? f.origin() + offset : f.origin() - offset;
  return compare(which, alpha, f, lhs, rhs, start, options);
}

template <Scalar T>
CheckReport<T> check_identity(const GridFunction<T>& f, const Rational& alpha, IdentityId which,
                              const CheckOptions& options, const KernelRows<T>& lhs_rows) {
  switch (group_of(which)) {
    case IdentityGroup::dual:
      return check_delta_nabla_dual(f, alpha, which, options, lhs_rows);
    case IdentityGroup::q_reflection:
      return check_q_identity(f, alpha, which, options, lhs_rows);
    case IdentityGroup::relation:
      return check_relation(f, alpha, which, options, lhs_rows);
  }
  throw DomainError("unknown identity group");
}

std::uint64_t instance_seed(std::uint64_t base, IdentityId id, int index) {
  // splitmix64 finalizer over a packed key
  std::uint64_t z = base ^ (static_cast<std::uint64_t>(id) << 40) ^ static_cast<std::uint64_t>(index);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

IdentityInstance random_instance(IdentityId id, std::uint64_t seed, const SuiteConfig& config) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(rng);
  };

  IdentityInstance inst;
  // α in (0,1) ∪ (1,2) with denominator at most max_denominator.
  const long long den = uniform(2, std::max(2, config.max_denominator));
  long long num = uniform(1, 2 * den - 2);
  if (num >= den) ++num;
  inst.order = Rational(num, den);

  const long long origin_den = uniform(1, std::max(1, config.max_denominator));
  inst.origin = Rational(uniform(-3 * origin_den, 3 * origin_den), origin_den);

  if (id == IdentityId::CAPUTO_INVERSION) {
    inst.direction = (seed & 1U) != 0 ? Direction::backward : Direction::forward;
  } else if (is_left(id)) {
    inst.direction = Direction::forward;
  } else {
    inst.direction = Direction::backward;
  }

  const auto length = uniform(config.min_length, config.max_length);
  for (long long k = 0; k < length; ++k) inst.values.emplace_back(uniform(-20, 20), uniform(1, 8));
  return inst;
}

namespace {

struct Outcome {
  bool ok = false;
  bool domain_ok = true;
  bool error = false;
  double residual = 0;
  std::string residual_text = "0";
  std::string detail;
};

template <Scalar T>
void run_one(IdentityId id, const IdentityInstance& inst, const SuiteConfig& config, Outcome& out) {
  std::vector<T> values;
  values.reserve(inst.values.size());
  for (const auto& v : inst.values) values.push_back(from_rational<T>(v));
  const GridFunction<T> f(inst.origin, inst.direction, std::move(values));
  const KernelRows<T> rows = config.inject_error ? KernelRows<T>({1, 1e-3}) : KernelRows<T>{};
  CheckOptions options;
  options.tolerance = config.tolerance;
  const CheckReport<T> report = check_identity(f, inst.order, id, options, rows);
  out.residual_text = format_scalar(report.max_abs_residual);
  out.residual = to_double(report.max_abs_residual);
  out.ok = report.pass;
  out.domain_ok = report.domain_matches;
}

}  // namespace

std::vector<SuiteResult> run_identity_suite(const std::vector<IdentityId>& ids, const SuiteConfig& config) {
  if (config.instances <= 0) throw DomainError("instance count must be positive");
  const std::size_t per_id = static_cast<std::size_t>(config.instances);
  const std::size_t total = ids.size() * per_id;
  std::vector<Outcome> outcomes(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const IdentityId id = ids[job / per_id];
      const int index = static_cast<int>(job % per_id);
      const IdentityInstance inst = random_instance(id, instance_seed(config.seed, id, index), config);
      Outcome& out = outcomes[job];
      try {
        if (config.backend == Backend::rational) {
          run_one<Rational>(id, inst, config, out);
        } else {
          run_one<double>(id, inst, config, out);
        }
      } catch (const std::exception& e) {
        out.error = true;
        out.ok = false;
        out.detail = e.what();
      }
      if (!out.ok && out.detail.empty()) {
        out.detail = "instance " + std::to_string(index) + ": order " + inst.order.str() + ", origin " +
                     inst.origin.str() + ", " + std::to_string(inst.values.size()) + " points, max residual " +
                     out.residual_text + (out.domain_ok ? "" : ", domain mismatch");
      } else if (out.error) {
        out.detail = "instance " + std::to_string(index) + ": " + out.detail;
      }
    }
  };

  unsigned threads = config.threads != 0 ? config.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<SuiteResult> results;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    SuiteResult r;
    r.identity = ids[i];
    r.instances = config.instances;
    for (std::size_t k = 0; k < per_id; ++k) {
      const Outcome& o = outcomes[i * per_id + k];
      if (o.ok) ++r.passed;
      if (!o.domain_ok) ++r.domain_mismatches;
      if (o.error) ++r.errors;
      if (!o.error && o.residual >= r.max_residual) {
        if (o.residual > r.max_residual || r.max_residual_text == "0") r.max_residual_text = o.residual_text;
        r.max_residual = o.residual;
      }
      if (!o.ok && !r.first_failure) r.first_failure = o.detail;
    }
    results.push_back(std::move(r));
  }
  return results;
}

#define FRACDIFF_INSTANTIATE(T)                                                                                   \
  template CheckReport<T> check_delta_nabla_dual(const GridFunction<T>&, const Rational&, IdentityId,           \
                                                 const CheckOptions&, const KernelRows<T>&);                     \
  template CheckReport<T> check_q_identity(const GridFunction<T>&, const Rational&, IdentityId,                 \
                                           const CheckOptions&, const KernelRows<T>&);                           \
  template CheckReport<T> check_relation(const GridFunction<T>&, const Rational&, IdentityId, const CheckOptions&, \
                                         const KernelRows<T>&);                                                  \
  template CheckReport<T> check_identity(const GridFunction<T>&, const Rational&, IdentityId, const CheckOptions&, \
                                         const KernelRows<T>&);

FRACDIFF_INSTANTIATE(double)
FRACDIFF_INSTANTIATE(Rational)

#undef FRACDIFF_INSTANTIATE

}  // namespace fracdiff
