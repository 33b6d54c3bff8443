#include "apsums/asymp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "apsums/errors.hpp"

namespace apsums {
namespace {

// Kahan-compensated accumulator; sums stay deterministic and accurate for
// long prime lists.
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

}  // namespace

double exact_sum(const FuncProfile& f, double x, const APSpec& ap) {
  const PrimeList list = sieve_range(x, ap);
  CompensatedSum acc;
  for (const std::uint64_t p : list.primes)
    acc.add(eval(f.expr, static_cast<double>(p)));
  return acc.sum;
}

double abel_sum(const FuncProfile& f, double x, const APSpec& ap) {
  const PrimeList list = sieve_range(x, ap);
  const auto n = list.primes.size();
  if (n == 0) return 0.0;

  // pi_l(k,t) equals j on [p_j, p_{j+1}), so the Stieltjes-style integral
  // collapses to sum_j j * (f(t_{j+1}) - f(t_j)) with t_{n+1} = x.
  CompensatedSum integral;
  double prev = eval(f.expr, static_cast<double>(list.primes[0]));
  for (std::size_t j = 0; j < n; ++j) {
    const double next = j + 1 < n ? eval(f.expr, static_cast<double>(list.primes[j + 1]))
                                  : eval(f.expr, x);
    integral.add(static_cast<double>(j + 1) * (next - prev));
    prev = next;
  }
  return static_cast<double>(n) * eval(f.expr, x) - integral.sum;
}

double canonical_main(CanonicalKind kind, double x, const APSpec& ap) {
  const double phi = static_cast<double>(ap.phi_k);
  switch (kind) {
    case CanonicalKind::One: return li_offset(x) / phi;
    case CanonicalKind::Log: return x / phi;
    case CanonicalKind::Inv: return std::log(std::log(x)) / phi;
    case CanonicalKind::LogOverT: return std::log(x) / phi;
    default: throw UnknownKind(std::string(canonical_name(kind)));
  }
}

Prediction predict(const FuncProfile& f, double x, const APSpec& ap, ModelTag model,
                   double c, double theta, double tol) {
  Prediction p;
  p.model = model;
  p.c = c;
  p.theta = theta;
  p.main = main_term(f, x, ap, model, tol);
  p.envelope = envelope(f, x, ap, model, c, theta, tol);
  return p;
}

std::vector<ConvergenceRow> convergence_table(const FuncProfile& f, const APSpec& ap,
                                              std::span<const double> xs,
                                              ModelTag model, double c, double theta,
                                              double tol) {
  if (xs.empty()) return {};
  if (!(xs.front() >= 2.0)) throw Error("convergence grid must start at x >= 2");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw Error("convergence grid must be increasing");

  const PrimeList list = sieve_range(xs.back(), ap);

  std::vector<ConvergenceRow> rows;
  rows.reserve(xs.size());
  CompensatedSum running;
  std::size_t next_prime = 0;
  for (const double x : xs) {
    while (next_prime < list.primes.size() &&
           static_cast<double>(list.primes[next_prime]) <= x) {
      running.add(eval(f.expr, static_cast<double>(list.primes[next_prime])));
      ++next_prime;
    }
    ConvergenceRow row;
    row.x = x;
    row.exact = running.sum;
    row.main = main_term(f, x, ap, model, tol);
    const double env = envelope(f, x, ap, model, c, theta, tol);
    row.ratio = row.main != 0.0 ? row.exact / row.main
                                : std::numeric_limits<double>::quiet_NaN();
    row.normalized_remainder = env != 0.0
                                   ? (row.exact - row.main) / env
                                   : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace apsums
