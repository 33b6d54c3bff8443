#include "apsums/apsieve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "apsums/errors.hpp"

namespace apsums {
namespace {

std::atomic<std::uint64_t> g_sieve_cap{kDefaultSieveCap};

}  // namespace

std::uint64_t sieve_cap() { return g_sieve_cap.load(); }
void set_sieve_cap(std::uint64_t cap) { g_sieve_cap.store(cap); }

namespace {

// Odd-number entries per segment; one segment spans twice this range.
constexpr std::uint64_t kSegmentEntries = std::uint64_t{1} << 20;

// Primes up to `limit` by plain odd-only sieving; used for base primes.
std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  out.push_back(2);
  if (limit < 3) return out;
  // index i represents the odd number 2i+3
  const std::uint64_t n = (limit - 1) / 2;
  std::vector<std::uint8_t> composite(n, 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t p = 2 * i + 3;
    if (p * p > limit) break;
    if (composite[i]) continue;
    for (std::uint64_t j = (p * p - 3) / 2; j < n; j += p) composite[j] = 1;
  }
  for (std::uint64_t i = 0; i < n; ++i)
    if (!composite[i]) out.push_back(2 * i + 3);
  return out;
}

}  // namespace

std::uint64_t euler_phi(std::uint64_t k) {
  std::uint64_t result = k;
  std::uint64_t m = k;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    result -= result / p;
  }
  if (m > 1) result -= result / m;
  return result;
}

APSpec make_ap(std::uint64_t k, std::int64_t l) {
  if (k == 0) throw CoprimalityError(0, static_cast<std::uint64_t>(l));
  const auto ks = static_cast<std::int64_t>(k);
  const std::uint64_t reduced = static_cast<std::uint64_t>(((l % ks) + ks) % ks);
  if (std::gcd(k, reduced) != 1) throw CoprimalityError(k, reduced);
  return APSpec{k, reduced, euler_phi(k)};
}

PrimeList sieve_range(double x, const APSpec& ap, std::uint64_t cap) {
  if (!(x >= 2.0)) return PrimeList{x, ap, {}};
  if (x > static_cast<double>(cap)) throw BoundTooLarge(x, cap);
  const auto limit = static_cast<std::uint64_t>(std::floor(x));

  PrimeList out{x, ap, {}};
  const auto in_class = [&](std::uint64_t p) { return p % ap.k == ap.l; };

  if (in_class(2)) out.primes.push_back(2);
  if (limit < 3) return out;

  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  const std::vector<std::uint64_t> base = small_primes(root);

  std::vector<std::uint8_t> composite(kSegmentEntries);
  // segments cover the odd numbers [lo, lo + 2*entries)
  for (std::uint64_t lo = 3; lo <= limit; lo += 2 * kSegmentEntries) {
    const std::uint64_t hi = std::min(limit, lo + 2 * kSegmentEntries - 1);
    const std::uint64_t entries = (hi - lo) / 2 + 1;
    std::fill(composite.begin(), composite.begin() + entries, 0);

    for (const std::uint64_t p : base) {
      if (p == 2) continue;
      if (p * p > hi) break;
      std::uint64_t first = std::max(p * p, ((lo + p - 1) / p) * p);
      if (first % 2 == 0) first += p;
      for (std::uint64_t v = first; v <= hi; v += 2 * p) composite[(v - lo) / 2] = 1;
    }

    for (std::uint64_t i = 0; i < entries; ++i) {
      if (composite[i]) continue;
      const std::uint64_t p = lo + 2 * i;
      if (in_class(p)) out.primes.push_back(p);
    }
  }
  return out;
}

PrimeList sieve_range(double x, const APSpec& ap) {
  return sieve_range(x, ap, sieve_cap());
}

std::uint64_t prime_count_ap(double x, const APSpec& ap) {
  return sieve_range(x, ap).primes.size();
}

}  // namespace apsums
