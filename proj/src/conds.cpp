#include "apsums/conds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "apsums/errors.hpp"
#include "apsums/quad.hpp"

namespace apsums {
namespace {

// Decision-rule constants. Thresholds are artifact choices: a limit cannot
// be decided from finitely many samples, so these pick the reading of the
// trajectory that matches the worked examples at desk scale.
constexpr double kSmallLimit = 1e-3;        // "has reached zero" threshold
constexpr double kUnitBand = 0.05;          // |R-1| band for the ratio test
constexpr double kStabilizeBand = 1.5;      // max/min over the tail
constexpr double kDecayFactor = 0.8;        // sustained-decay end/mid bound
constexpr double kConvergedRel = 0.01;      // relative tail range => converged
constexpr int kTailPoints = 5;

struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

std::vector<double> values_of(const std::vector<TrajectoryPoint>& tr) {
  std::vector<double> out;
  out.reserve(tr.size());
  for (const auto& p : tr) out.push_back(p.value);
  return out;
}

std::span<const double> tail(const std::vector<double>& v, int n) {
  const std::size_t count = std::min<std::size_t>(v.size(), static_cast<std::size_t>(n));
  return {v.data() + (v.size() - count), count};
}

bool strictly_decreasing(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

bool strictly_increasing(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

bool within_band(std::span<const double> v, double band) {
  double lo = std::fabs(v.front());
  double hi = lo;
  for (const double x : v) {
    lo = std::min(lo, std::fabs(x));
    hi = std::max(hi, std::fabs(x));
  }
  if (lo == 0.0) return hi == 0.0;
  return hi / lo <= band;
}

// f(n)/f'(n) with a log-scale fallback so steep functions (2^t at large t)
// yield the finite ratio their magnitudes cancel to.
double robust_value_ratio(const ExprPtr& num, const ExprPtr& den, double t) {
  try {
    const double a = eval(num, t);
    const double b = eval(den, t);
    if (b != 0.0) return a / b;
    return std::numeric_limits<double>::quiet_NaN();
  } catch (const EvalError&) {
    const SignedLog a = eval_signed_log(num, t);
    const SignedLog b = eval_signed_log(den, t);
    if (b.sign == 0) return std::numeric_limits<double>::quiet_NaN();
    if (a.sign == 0) return 0.0;
    return a.sign * b.sign * std::exp(a.log_abs - b.log_abs);
  }
}

}  // namespace

std::string_view verdict_name(SuffRatioVerdict v) {
  switch (v) {
    case SuffRatioVerdict::AwayFrom1: return "away_from_1";
    case SuffRatioVerdict::Approaches1: return "approaches_1";
    case SuffRatioVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view verdict_name(DivergenceVerdict v) {
  switch (v) {
    case DivergenceVerdict::Diverges: return "diverges";
    case DivergenceVerdict::Bounded: return "bounded";
    case DivergenceVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view verdict_name(A33Verdict v) {
  switch (v) {
    case A33Verdict::NonzeroLimit: return "nonzero_limit";
    case A33Verdict::ZeroLimit: return "zero_limit";
    case A33Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view verdict_name(NecessaryVerdict v) {
  switch (v) {
    case NecessaryVerdict::TendsToZero: return "tends_to_zero";
    case NecessaryVerdict::BoundedAway: return "bounded_away";
    case NecessaryVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

double b_partial_sum(const FuncProfile& f, std::uint64_t n, const APSpec& ap) {
  const double phi = static_cast<double>(ap.phi_k);
  CompensatedSum acc;
  for (std::uint64_t m = 2; m <= n; ++m) {
    const double md = static_cast<double>(m);
    acc.add(eval(f.expr, md) / (phi * std::log(md)));
  }
  return acc.sum;
}

SufficientCheck check_sufficient(const FuncProfile& f, const APSpec& /*ap*/,
                                 std::span<const double> n_grid, double tol) {
  SufficientCheck out;
  if (f.monotone == Monotonicity::NonMonotoneOnSample)
    out.warnings.push_back(
        "condition 2 violated: f is not strictly monotone on the sample grid "
        "(f' vanishes or changes sign)");

  const ExprPtr deriv = f.deriv;
  for (const double n : n_grid) {
    const double integral =
        integrate([&](double t) { return t * eval(deriv, t) / std::log(t); }, 2.0, n,
                  tol)
            .value;
    out.integral_trajectory.push_back({n, integral});
    const double denom = n * eval(f.expr, n) / std::log(n);
    const double ratio = denom != 0.0 ? integral / denom : 0.0;
    out.ratio_trajectory.push_back({n, ratio});
  }

  const std::vector<double> ratios = values_of(out.ratio_trajectory);
  const auto ratio_tail = tail(ratios, 3);
  const bool all_near_1 = std::all_of(ratio_tail.begin(), ratio_tail.end(),
                                      [](double r) { return std::fabs(r - 1.0) <= kUnitBand; });
  const bool all_far = std::all_of(ratio_tail.begin(), ratio_tail.end(),
                                   [](double r) { return std::fabs(r - 1.0) > kUnitBand; });
  out.ratio_verdict = all_near_1 ? SuffRatioVerdict::Approaches1
                      : all_far  ? SuffRatioVerdict::AwayFrom1
                                 : SuffRatioVerdict::Inconclusive;

  std::vector<double> magnitudes = values_of(out.integral_trajectory);
  for (double& v : magnitudes) v = std::fabs(v);
  const double end = magnitudes.back();
  const double mid = magnitudes[magnitudes.size() / 2];
  const auto mag_tail = tail(magnitudes, kTailPoints);
  const bool nondecreasing_tail = std::is_sorted(mag_tail.begin(), mag_tail.end());
  if (end <= 1e-12)
    out.divergence_verdict = DivergenceVerdict::Bounded;
  else if (nondecreasing_tail && end >= 2.0 * mid)
    out.divergence_verdict = DivergenceVerdict::Diverges;
  else if (std::fabs(end - mid) <= kConvergedRel * std::max(1.0, end))
    out.divergence_verdict = DivergenceVerdict::Bounded;
  else
    out.divergence_verdict = DivergenceVerdict::Inconclusive;

  return out;
}

A33Check check_a33(const FuncProfile& f, std::span<const double> n_grid) {
  A33Check out;
  if (f.monotone != Monotonicity::Increasing) {
    out.warnings.push_back("f is not increasing on the sample grid; the limit test "
                           "assumes f' > 0 and f -> infinity");
    out.verdict = A33Verdict::Inconclusive;
    return out;
  }

  bool derivative_vanished = false;
  for (const double n : n_grid) {
    const double ratio = robust_value_ratio(f.expr, f.deriv, n);
    const double limit_value = ratio / std::log(n);
    if (!std::isfinite(limit_value)) {
      derivative_vanished = true;
      out.warnings.push_back("limit ratio undefined at n = " + std::to_string(n) +
                             " (f' vanishes or the ratio overflows)");
      continue;
    }
    out.trajectory.push_back({n, limit_value});
  }
  if (derivative_vanished || out.trajectory.size() < 3) {
    out.verdict = A33Verdict::Inconclusive;
    return out;
  }

  std::vector<double> magnitudes = values_of(out.trajectory);
  for (double& v : magnitudes) v = std::fabs(v);
  const auto t5 = tail(magnitudes, kTailPoints);
  const double end = magnitudes.back();
  const double mid = magnitudes[magnitudes.size() / 2];

  // Zero limit: either already below the threshold and still falling, or a
  // sustained decay across the grid with no sign of flattening. The latter
  // catches 1/log n shapes whose threshold crossing sits far beyond any
  // representable n.
  if (end < kSmallLimit && magnitudes[magnitudes.size() - 2] > end)
    out.verdict = A33Verdict::ZeroLimit;
  else if (strictly_decreasing(t5) && end <= kDecayFactor * mid)
    out.verdict = A33Verdict::ZeroLimit;
  else if (strictly_increasing(t5) || within_band(t5, kStabilizeBand))
    out.verdict = A33Verdict::NonzeroLimit;
  else
    out.verdict = A33Verdict::Inconclusive;
  return out;
}

NecessaryCheck check_necessary(const FuncProfile& f, const APSpec& ap,
                               std::span<const std::uint64_t> p_grid) {
  NecessaryCheck out;
  if (p_grid.empty()) {
    out.warnings.push_back("empty prime grid");
    return out;
  }

  // One pass over m = 2..max(p), snapshotting B at each grid prime.
  const double phi = static_cast<double>(ap.phi_k);
  std::vector<double> b_at_grid;
  CompensatedSum acc;
  std::size_t next = 0;
  bool zero_denominator = false;
  for (std::uint64_t m = 2; m <= p_grid.back() && next < p_grid.size(); ++m) {
    const double md = static_cast<double>(m);
    acc.add(eval(f.expr, md) / (phi * std::log(md)));
    if (m == p_grid[next]) {
      const double b = acc.sum;
      b_at_grid.push_back(b);
      if (b == 0.0) {
        zero_denominator = true;
        out.warnings.push_back("b-weighted partial sum vanished at p = " +
                               std::to_string(m) + "; ratio undefined");
      } else {
        out.trajectory.push_back(
            {md, std::fabs(eval(f.expr, md)) / std::fabs(b)});
      }
      ++next;
    }
  }

  if (zero_denominator || out.trajectory.size() < 3) {
    out.verdict = NecessaryVerdict::Inconclusive;
    return out;
  }

  // If B(p) itself converges the progression sum cannot track it: the
  // asymptotic's divergence premise fails regardless of how small |f(p)|
  // gets, so the prerequisite is classified as failed.
  const auto b_tail = tail(b_at_grid, 3);
  double b_lo = b_tail.front(), b_hi = b_tail.front();
  for (const double b : b_tail) {
    b_lo = std::min(b_lo, b);
    b_hi = std::max(b_hi, b);
  }
  if (b_hi - b_lo <= kConvergedRel * std::max(1.0, std::fabs(b_tail.back()))) {
    out.warnings.push_back(
        "b-weighted partial sums converge to a constant; the divergence "
        "premise of the asymptotic fails");
    out.verdict = NecessaryVerdict::BoundedAway;
    return out;
  }

  const std::vector<double> ratios = values_of(out.trajectory);
  const auto r_tail = tail(ratios, kTailPoints);
  if (ratios.back() < kSmallLimit && strictly_decreasing(r_tail))
    out.verdict = NecessaryVerdict::TendsToZero;
  else if (ratios.back() >= kSmallLimit && within_band(r_tail, kStabilizeBand))
    out.verdict = NecessaryVerdict::BoundedAway;
  else
    out.verdict = NecessaryVerdict::Inconclusive;
  return out;
}

std::vector<double> default_n_grid() { return geometric_grid(1e2, 1e8, 12); }

std::vector<std::uint64_t> default_p_grid(const APSpec& ap) {
  // Progression primes nearest to 1e2, 1e3, ..., 1e6.
  const PrimeList list = sieve_range(1.05e6, ap);
  std::vector<std::uint64_t> out;
  for (int e = 2; e <= 6; ++e) {
    const auto anchor = static_cast<std::uint64_t>(std::pow(10.0, e));
    const auto it = std::lower_bound(list.primes.begin(), list.primes.end(), anchor);
    std::uint64_t best = 0;
    if (it != list.primes.end()) best = *it;
    if (it != list.primes.begin()) {
      const std::uint64_t below = *(it - 1);
      if (best == 0 || anchor - below < best - anchor) best = below;
    }
    if (best != 0 && (out.empty() || best > out.back())) out.push_back(best);
  }
  return out;
}

ConditionReport run_condition_checks(const std::string& f_text, const FuncProfile& f,
                                     const APSpec& ap) {
  ConditionReport report;
  report.f_text = f_text;
  report.ap = ap;

  const std::vector<double> n_grid = default_n_grid();
  try {
    report.sufficient = check_sufficient(f, ap, n_grid);
  } catch (const Error& e) {
    report.sufficient.warnings.push_back(std::string("check failed: ") + e.what());
  }
  try {
    report.a33 = check_a33(f, n_grid);
  } catch (const Error& e) {
    report.a33.warnings.push_back(std::string("check failed: ") + e.what());
  }
  try {
    const std::vector<std::uint64_t> p_grid = default_p_grid(ap);
    report.necessary = check_necessary(f, ap, p_grid);
  } catch (const Error& e) {
    report.necessary.warnings.push_back(std::string("check failed: ") + e.what());
  }
  return report;
}

}  // namespace apsums
