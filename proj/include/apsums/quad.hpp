// Adaptive quadrature plus the main terms and remainder envelopes of the
// four prediction models (coarse, pnt, vinogradov, grh).

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "apsums/apsieve.hpp"
#include "apsums/exprdsl.hpp"

namespace apsums {

struct Integral {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::uint64_t evaluations = 0;
};

// Adaptive Simpson over [a, b] (2 <= a <= b). Bisects until the local
// error estimate is below tol * interval_length / (b - a), with a small
// relative floor so rounding noise on large-magnitude integrals cannot
// force the depth limit. Throws NonFiniteIntegrand / MaxDepthExceeded.
Integral integrate(const std::function<double(double)>& g, double a, double b,
                   double tol);

// Offset logarithmic integral: int_2^x dt/log t. li_offset(2) == 0.
double li_offset(double x);

enum class ModelTag { Coarse, Pnt, Vinogradov, Grh };

std::string_view model_name(ModelTag model);
std::optional<ModelTag> parse_model(std::string_view name);

inline constexpr double kDefaultC = 1.0;
inline constexpr double kDefaultTheta = 0.6;
inline constexpr double kDefaultTol = 1e-10;

// Main term of the model's asymptotic for sum f(p) over the progression.
//   coarse:             x f(x) / (phi(k) log x) - (1/phi(k)) int_2^x t f'(t)/log t dt
//   pnt/vinogradov/grh: (1/phi(k)) int_2^x f(t)/log t dt
double main_term(const FuncProfile& f, double x, const APSpec& ap, ModelTag model,
                 double tol = kDefaultTol);

// Remainder envelope shape (the O-constant is dropped; callers fit it):
//   coarse:     |f(x)| x / log^2 x          + int_2^x t|f'(t)| / log^2 t dt
//   pnt:        |f(x)| x e^{-c sqrt(log x)} + int_2^x t|f'(t)| e^{-c sqrt(log t)} dt
//   vinogradov: same shape with e^{-c (log .)^theta}
//   grh:        |f(x)| sqrt(x) log x        + int_2^x |f'(t)| sqrt(t) log t dt
double envelope(const FuncProfile& f, double x, const APSpec& ap, ModelTag model,
                double c = kDefaultC, double theta = kDefaultTheta,
                double tol = kDefaultTol);

// n geometrically spaced points from lo to hi inclusive (n >= 2, lo < hi),
// or {lo} when n == 1.
std::vector<double> geometric_grid(double lo, double hi, int n);

}  // namespace apsums
