// Exact prime sums, the Abel-summation identity, canonical closed-form
// main terms, and exact-vs-prediction convergence tables.

#pragma once

#include <span>
#include <vector>

#include "apsums/apsieve.hpp"
#include "apsums/exprdsl.hpp"
#include "apsums/quad.hpp"

namespace apsums {

struct Prediction {
  ModelTag model = ModelTag::Pnt;
  double main = 0.0;
  double envelope = 0.0;
  double c = kDefaultC;
  double theta = kDefaultTheta;
};

struct ConvergenceRow {
  double x = 0.0;
  double exact = 0.0;
  double main = 0.0;
  double ratio = 0.0;                 // exact / main (NaN when main == 0)
  double normalized_remainder = 0.0;  // (exact - main) / envelope
};

// Sum of f(p) over progression primes p <= x, ascending, compensated.
double exact_sum(const FuncProfile& f, double x, const APSpec& ap);

// pi_l(k,x) f(x) - int_2^x pi_l(k,t) f'(t) dt with the integral evaluated
// exactly piecewise (the counting function is a step function), so the
// only error is f's own evaluation. Agrees with exact_sum identically.
double abel_sum(const FuncProfile& f, double x, const APSpec& ap);

// Closed-form main terms for the worked families:
//   one -> li_offset(x)/phi, log -> x/phi, inv -> loglog x/phi,
//   log_over_t -> log x/phi. Throws UnknownKind for other kinds.
double canonical_main(CanonicalKind kind, double x, const APSpec& ap);

Prediction predict(const FuncProfile& f, double x, const APSpec& ap, ModelTag model,
                   double c = kDefaultC, double theta = kDefaultTheta,
                   double tol = kDefaultTol);

// One row per grid point; a single sieve pass up to max(xs) with running
// partial sums. xs must be increasing with xs.front() >= 2.
std::vector<ConvergenceRow> convergence_table(const FuncProfile& f, const APSpec& ap,
                                              std::span<const double> xs,
                                              ModelTag model, double c = kDefaultC,
                                              double theta = kDefaultTheta,
                                              double tol = kDefaultTol);

}  // namespace apsums
