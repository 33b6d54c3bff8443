// Primes in an arithmetic progression l mod k, plus the elementary
// arithmetic (gcd, Euler phi) used by the density formulas.

#pragma once

#include <cstdint>
#include <vector>

namespace apsums {

// Arithmetic progression {m : m = l (mod k)} with gcd(k, l) = 1.
// k = 1 means "all primes" (l = 0, phi_k = 1).
struct APSpec {
  std::uint64_t k = 1;
  std::uint64_t l = 0;
  std::uint64_t phi_k = 1;
};

std::uint64_t euler_phi(std::uint64_t k);

// Reduces l mod k and computes phi(k). Throws CoprimalityError when
// gcd(k, l mod k) != 1.
APSpec make_ap(std::uint64_t k, std::int64_t l);

// Hard cap on sieve bounds; guards against accidental memory exhaustion.
inline constexpr std::uint64_t kDefaultSieveCap = std::uint64_t{1} << 40;

// Process-wide cap override (the CLI wires APSUMS_MAX_X through here).
std::uint64_t sieve_cap();
void set_sieve_cap(std::uint64_t cap);

struct PrimeList {
  double bound = 0.0;
  APSpec ap;
  std::vector<std::uint64_t> primes;  // ascending, all = l (mod k)
};

// All primes p <= floor(x) with p = l (mod k), ascending. Segmented
// Eratosthenes over odd numbers with a residue post-filter. Throws
// BoundTooLarge when floor(x) exceeds the cap.
PrimeList sieve_range(double x, const APSpec& ap, std::uint64_t cap);
PrimeList sieve_range(double x, const APSpec& ap);  // cap = sieve_cap()

// pi_l(k, x): number of primes p <= x in the progression.
std::uint64_t prime_count_ap(double x, const APSpec& ap);

}  // namespace apsums
