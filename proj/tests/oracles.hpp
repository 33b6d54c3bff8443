// Independent oracles for the test suites: trial division, a plain
// non-segmented sieve, a fixed-panel midpoint integrator, and central
// finite differences. Deliberately naive; they must not share code with
// the library paths they check.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracles {

inline bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> trial_division_primes(std::uint64_t limit,
                                                        std::uint64_t k = 1,
                                                        std::uint64_t l = 0) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= limit; ++n)
    if (n % k == l && is_prime_trial(n)) out.push_back(n);
  return out;
}

// Plain bool-array Eratosthenes; independent of the segmented path.
inline std::vector<std::uint64_t> simple_sieve_primes(std::uint64_t limit) {
  std::vector<std::uint8_t> composite(limit + 1, 0);
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (composite[n]) continue;
    out.push_back(n);
    for (std::uint64_t m = n * n; m <= limit; m += n) composite[m] = 1;
  }
  return out;
}

// Composite midpoint rule with a fixed panel count.
inline double midpoint_integral(const std::function<double(double)>& g, double a,
                                double b, std::uint64_t panels = 1'000'000) {
  const double h = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  double carry = 0.0;
  for (std::uint64_t i = 0; i < panels; ++i) {
    const double t = a + (static_cast<double>(i) + 0.5) * h;
    const double y = g(t) - carry;
    const double s = sum + y;
    carry = (s - sum) - y;
    sum = s;
  }
  return sum * h;
}

inline double central_difference(const std::function<double(double)>& g, double t) {
  const double h = std::cbrt(2.2e-16) * std::max(1.0, std::fabs(t));
  return (g(t + h) - g(t - h)) / (2.0 * h);
}

}  // namespace oracles
