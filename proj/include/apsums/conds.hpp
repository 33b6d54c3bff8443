// Numerical evaluation of the sufficient conditions (ratio test, integral
// divergence, the f/(log n f') limit) and the necessary condition
// |f(p)| / sum b_m f(m) -> 0, with b_m = 1/(phi(k) ln m).
//
// Limits cannot be decided numerically; every verdict is a heuristic
// classification and the raw trajectory is always part of the report.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apsums/apsieve.hpp"
#include "apsums/exprdsl.hpp"

namespace apsums {

enum class SuffRatioVerdict { AwayFrom1, Approaches1, Inconclusive };
enum class DivergenceVerdict { Diverges, Bounded, Inconclusive };
enum class A33Verdict { NonzeroLimit, ZeroLimit, Inconclusive };
enum class NecessaryVerdict { TendsToZero, BoundedAway, Inconclusive };

std::string_view verdict_name(SuffRatioVerdict v);
std::string_view verdict_name(DivergenceVerdict v);
std::string_view verdict_name(A33Verdict v);
std::string_view verdict_name(NecessaryVerdict v);

struct TrajectoryPoint {
  double n = 0.0;
  double value = 0.0;
};

struct SufficientCheck {
  // R(n) = [int_2^n t f'(t)/log t dt] / [n f(n)/log n]
  std::vector<TrajectoryPoint> ratio_trajectory;
  SuffRatioVerdict ratio_verdict = SuffRatioVerdict::Inconclusive;
  // I(n) = int_2^n t f'(t)/log t dt
  std::vector<TrajectoryPoint> integral_trajectory;
  DivergenceVerdict divergence_verdict = DivergenceVerdict::Inconclusive;
  std::vector<std::string> warnings;
};

struct A33Check {
  // L(n) = f(n) / (log n * f'(n))
  std::vector<TrajectoryPoint> trajectory;
  A33Verdict verdict = A33Verdict::Inconclusive;
  std::vector<std::string> warnings;
};

struct NecessaryCheck {
  // r(p) = |f(p)| / |sum_{m=2}^p b_m f(m)| at progression primes p
  std::vector<TrajectoryPoint> trajectory;
  NecessaryVerdict verdict = NecessaryVerdict::Inconclusive;
  std::vector<std::string> warnings;
};

struct ConditionReport {
  std::string f_text;
  APSpec ap;
  SufficientCheck sufficient;
  A33Check a33;
  NecessaryCheck necessary;
};

// B(n) = sum_{m=2}^n f(m) / (phi(k) ln m); b_1 = 0 so the sum starts at 2.
double b_partial_sum(const FuncProfile& f, std::uint64_t n, const APSpec& ap);

SufficientCheck check_sufficient(const FuncProfile& f, const APSpec& ap,
                                 std::span<const double> n_grid, double tol = 1e-10);

A33Check check_a33(const FuncProfile& f, std::span<const double> n_grid);

NecessaryCheck check_necessary(const FuncProfile& f, const APSpec& ap,
                               std::span<const std::uint64_t> p_grid);

// Default grids: 12 geometric points 1e2..1e8 for the grid-only checks,
// and the progression primes nearest 1e2..1e6 (one per decade) for the
// necessary condition.
std::vector<double> default_n_grid();
std::vector<std::uint64_t> default_p_grid(const APSpec& ap);

// Runs all checks with default grids. A check that fails to evaluate
// (overflow, domain error) is reported inconclusive with a diagnostic
// instead of aborting the others.
ConditionReport run_condition_checks(const std::string& f_text, const FuncProfile& f,
                                     const APSpec& ap);

}  // namespace apsums
