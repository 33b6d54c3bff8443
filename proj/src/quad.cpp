#include "apsums/quad.hpp"

#include <algorithm>
#include <cmath>

#include "apsums/errors.hpp"

namespace apsums {
namespace {

constexpr int kMaxDepth = 60;
// Stop refining once the local estimate is within a few ulps of the local
// sum; absolute tolerances below that are unreachable in doubles.
constexpr double kRelFloor = 1e-15;
// At the depth limit an interval is accepted if its error estimate is
// negligible against the whole integral's scale. Integrands with an |f'|
// kink land here: the estimate decays like h^2 around the kink while the
// per-length budget decays like h, yet the leftover error is ~1e-25 of
// the total. Anything larger still throws.
constexpr double kDepthLimitRel = 1e-12;

struct AdaptiveState {
  const std::function<double(double)>& g;
  double tol_per_length;
  double scale = 1.0;  // max(1, |first whole-interval estimate|)
  double error_acc = 0.0;
  std::uint64_t evaluations = 0;
};

double checked_eval(AdaptiveState& st, double t) {
  const double v = st.g(t);
  ++st.evaluations;
  if (!std::isfinite(v)) throw NonFiniteIntegrand(t);
  return v;
}

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(AdaptiveState& st, double a, double b, double fa, double fm, double fb,
              double whole, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = checked_eval(st, lm);
  const double frm = checked_eval(st, rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double halves = left + right;
  const double err = (halves - whole) / 15.0;
  if (std::fabs(err) <= st.tol_per_length * (b - a) ||
      std::fabs(err) <= kRelFloor * std::fabs(halves) ||
      (depth >= kMaxDepth && std::fabs(err) <= kDepthLimitRel * st.scale)) {
    st.error_acc += std::fabs(err);
    return halves + err;  // Richardson extrapolation
  }
  if (depth >= kMaxDepth) throw MaxDepthExceeded();
  return refine(st, a, m, fa, flm, fm, left, depth + 1) +
         refine(st, m, b, fm, frm, fb, right, depth + 1);
}

}  // namespace

Integral integrate(const std::function<double(double)>& g, double a, double b,
                   double tol) {
  if (a == b) return Integral{0.0, 0.0, 0};
  if (!(a < b)) throw Error("integration bounds must satisfy a <= b");
  AdaptiveState st{g, tol / (b - a)};
  const double fa = checked_eval(st, a);
  const double fm = checked_eval(st, 0.5 * (a + b));
  const double fb = checked_eval(st, b);
  const double whole = simpson(a, b, fa, fm, fb);
  st.scale = std::max(1.0, std::fabs(whole));
  const double value = refine(st, a, b, fa, fm, fb, whole, 0);
  return Integral{value, st.error_acc, st.evaluations};
}

double li_offset(double x) {
  return integrate([](double t) { return 1.0 / std::log(t); }, 2.0, x, kDefaultTol)
      .value;
}

std::string_view model_name(ModelTag model) {
  switch (model) {
    case ModelTag::Coarse: return "coarse";
    case ModelTag::Pnt: return "pnt";
    case ModelTag::Vinogradov: return "vinogradov";
    case ModelTag::Grh: return "grh";
  }
  return "?";
}

std::optional<ModelTag> parse_model(std::string_view name) {
  if (name == "coarse") return ModelTag::Coarse;
  if (name == "pnt") return ModelTag::Pnt;
  if (name == "vinogradov") return ModelTag::Vinogradov;
  if (name == "grh") return ModelTag::Grh;
  return std::nullopt;
}

double main_term(const FuncProfile& f, double x, const APSpec& ap, ModelTag model,
                 double tol) {
  const double phi = static_cast<double>(ap.phi_k);
  if (model == ModelTag::Coarse) {
    const ExprPtr deriv = f.deriv;
    const double boundary = x * eval(f.expr, x) / (phi * std::log(x));
    const double integral =
        integrate([&](double t) { return t * eval(deriv, t) / std::log(t); }, 2.0, x,
                  tol)
            .value;
    return boundary - integral / phi;
  }
  const ExprPtr expr = f.expr;
  return integrate([&](double t) { return eval(expr, t) / std::log(t); }, 2.0, x,
                   tol)
             .value /
         phi;
}

double envelope(const FuncProfile& f, double x, const APSpec& /*ap*/, ModelTag model,
                double c, double theta, double tol) {
  const ExprPtr expr = f.expr;
  const ExprPtr deriv = f.deriv;
  const double fx = std::fabs(eval(expr, x));

  switch (model) {
    case ModelTag::Coarse: {
      const double boundary = fx * x / (std::log(x) * std::log(x));
      const double integral =
          integrate(
              [&](double t) {
                const double lg = std::log(t);
                return t * std::fabs(eval(deriv, t)) / (lg * lg);
              },
              2.0, x, tol)
              .value;
      return boundary + integral;
    }
    case ModelTag::Pnt:
    case ModelTag::Vinogradov: {
      const double exponent = model == ModelTag::Pnt ? 0.5 : theta;
      const auto damping = [c, exponent](double t) {
        return std::exp(-c * std::pow(std::log(t), exponent));
      };
      const double boundary = fx * x * damping(x);
      const double integral =
          integrate(
              [&](double t) { return t * std::fabs(eval(deriv, t)) * damping(t); },
              2.0, x, tol)
              .value;
      return boundary + integral;
    }
    case ModelTag::Grh: {
      const double boundary = fx * std::sqrt(x) * std::log(x);
      const double integral =
          integrate(
              [&](double t) {
                return std::fabs(eval(deriv, t)) * std::sqrt(t) * std::log(t);
              },
              2.0, x, tol)
              .value;
      return boundary + integral;
    }
  }
  return 0.0;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> out;
  if (n <= 0) return out;
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  out.reserve(static_cast<std::size_t>(n));
  const double ratio = hi / lo;
  for (int i = 0; i < n; ++i)
    out.push_back(lo * std::pow(ratio, static_cast<double>(i) / (n - 1)));
  out.back() = hi;  // exact endpoint despite rounding
  return out;
}

}  // namespace apsums
