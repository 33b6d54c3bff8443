#include "apsums/exprdsl.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "apsums/errors.hpp"
#include "doctest.h"
#include "expr_gen.hpp"
#include "oracles.hpp"

using namespace apsums;

namespace {

double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
  const ExprPtr log_t = parse("log(t)");
  CHECK(log_t->kind == ExprKind::Log);
  CHECK(log_t->lhs->kind == ExprKind::Var);

  const ExprPtr prod = parse("t^0.5 * log(t)");
  REQUIRE(prod->kind == ExprKind::Mul);
  CHECK(prod->lhs->kind == ExprKind::Pow);
  CHECK(prod->lhs->value == 0.5);
  CHECK(prod->rhs->kind == ExprKind::Log);

  const ExprPtr two_to_t = parse("2^t");
  CHECK(two_to_t->kind == ExprKind::PowBase);
  CHECK(two_to_t->value == 2.0);
  CHECK(parse("2 ^ t")->kind == ExprKind::PowBase);
  CHECK(parse("2.5e0^t")->value == 2.5);

  // numeric exponent stays a Pow even on a constant base
  const ExprPtr eight = parse("2^3");
  CHECK(eight->kind == ExprKind::Pow);
  CHECK(eval(eight, 5.0) == 8.0);

  CHECK(eval(parse("t^-1"), 4.0) == 0.25);
  CHECK(eval(parse("-t^2"), 3.0) == -9.0);
  CHECK(eval(parse("(1 - t)^2"), 3.0) == 4.0);
  CHECK(eval(parse("t - t - t"), 5.0) == -5.0);  // left associative
}

TEST_CASE("parse errors carry the byte offset") {
  try {
    parse("log(");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 4);
    CHECK(!e.expected.empty());
  }
  try {
    parse("t + * 2");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 4);
  }
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("foo(t)"), ParseError);
  CHECK_THROWS_AS(parse("t^t"), ParseError);  // exponent must be a number
}

TEST_CASE("differentiate applies the textbook rules") {
  const ExprPtr cube = differentiate(parse("t^3"));  // 3 t^2
  CHECK(eval(cube, 2.0) == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(eval(cube, 10.0) == doctest::Approx(300.0).epsilon(1e-12));

  const ExprPtr inv = differentiate(parse("log(t)"));  // 1/t
  CHECK(eval(inv, 8.0) == doctest::Approx(0.125).epsilon(1e-12));

  // log t / t -> (1 - log t)/t^2, checked numerically
  const ExprPtr d = differentiate(parse("log(t)/t"));
  for (const double t : {3.0, 10.0, 100.0}) {
    const double want = (1.0 - std::log(t)) / (t * t);
    CHECK(rel_err(eval(d, t), want) < 1e-12);
  }

  const ExprPtr dexp = differentiate(parse("2^t"));  // 2^t ln 2
  CHECK(eval(dexp, 10.0) == doctest::Approx(1024.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("eval examples and error surfacing") {
  CHECK(eval(parse("log(t)"), std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eval(parse("2^t"), 10.0) == 1024.0);
  CHECK_THROWS_AS(eval(parse("log(t - 5)"), 3.0), EvalError);   // log of negative
  CHECK_THROWS_AS(eval(parse("1/(t - 4)"), 4.0), EvalError);    // division by zero
  CHECK_THROWS_AS(eval(parse("exp(t)"), 1e6), EvalError);       // overflow
}

TEST_CASE("derivatives match central finite differences per production") {
  const std::vector<std::string> cases = {
      "t",       "7",          "t + log(t)", "t - 1/t",      "t * log(t)",
      "log(t)/t", "t^2.5",     "1.02^t",     "log(t^2 + 1)", "exp(1/t)",
      "-t^3",     "exp(0.5 * log(t))",
  };
  for (const auto& text : cases) {
    const ExprPtr e = parse(text);
    const ExprPtr d = differentiate(e);
    for (const double t : {2.5, 10.0, 1e3}) {
      const double fd =
          oracles::central_difference([&](double u) { return eval(e, u); }, t);
      const double sym = eval(d, t);
      CHECK_MESSAGE(std::fabs(sym - fd) <= 1e-6 * std::max(1.0, std::fabs(sym)),
                    text, " at t=", t, " sym=", sym, " fd=", fd);
    }
  }
}

using testgen::RandomExprGen;

TEST_CASE("derivatives match finite differences on 20 random expressions") {
  RandomExprGen gen(0x5eed);
  for (int i = 0; i < 20; ++i) {
    const ExprPtr e = gen.safe_expr();
    const ExprPtr d = differentiate(e);
    for (const double t : RandomExprGen::kProbes) {
      const double fd =
          oracles::central_difference([&](double u) { return eval(e, u); }, t);
      const double sym = eval(d, t);
      CHECK_MESSAGE(std::fabs(sym - fd) <= 1e-6 * std::max(1.0, std::fabs(sym)),
                    to_string(e), " at t=", t, " sym=", sym, " fd=", fd);
    }
  }
}

TEST_CASE("print/parse round trip preserves values") {
  RandomExprGen gen(0xabcd);
  std::vector<ExprPtr> exprs = {
      parse("t^0.5 * log(t)"), parse("2^t"),       parse("-t^2 + 1/t"),
      parse("log(t)/t"),       parse("t - t - t"), parse("exp(1/t) * (t + 2)"),
  };
  for (int i = 0; i < 14; ++i) exprs.push_back(gen.safe_expr());

  for (const ExprPtr& e : exprs) {
    const ExprPtr back = parse(to_string(e));
    const ExprPtr deriv = differentiate(e);
    const ExprPtr deriv_back = parse(to_string(deriv));
    for (int i = 0; i < 16; ++i) {
      const double t = 2.0 * std::pow(1e5 / 2.0, i / 15.0);
      try {
        const double want = eval(e, t);
        CHECK(std::fabs(eval(back, t) - want) <= 1e-12 * std::max(1.0, std::fabs(want)));
        const double dwant = eval(deriv, t);
        CHECK(std::fabs(eval(deriv_back, t) - dwant) <=
              1e-12 * std::max(1.0, std::fabs(dwant)));
      } catch (const EvalError&) {
        // outside the candidate's numeric domain at this probe; skip
      }
    }
  }
}

TEST_CASE("printer guards tricky operand shapes") {
  // a negative constant base must not reparse as a negated power
  const ExprPtr neg_base = pow_const(constant(-3.0), 2.0);
  CHECK(eval(neg_base, 5.0) == 9.0);
  CHECK(eval(parse(to_string(neg_base)), 5.0) == 9.0);

  // c^u with a non-variable exponent has no surface form; the printed
  // exp(log c * u) must evaluate identically
  const ExprPtr general = pow_base(2.0, pow_const(var(), 2.0));
  const ExprPtr round = parse(to_string(general));
  for (const double t : {2.0, 3.5, 5.0}) {
    const double want = eval(general, t);
    CHECK(std::fabs(eval(round, t) - want) <= 1e-12 * std::fabs(want));
  }

  // nested negation and subtraction keep their grouping
  const ExprPtr tricky = sub(constant(1.0), add(var(), constant(2.0)));
  CHECK(eval(parse(to_string(tricky)), 4.0) == eval(tricky, 4.0));
}

TEST_CASE("signed-log evaluation agrees with direct evaluation in range") {
  const std::vector<std::string> cases = {
      "t^23 * log(t)", "2^t", "t^2 - 100*t", "log(t)/t", "1/t^2", "exp(t)",
  };
  for (const auto& text : cases) {
    const ExprPtr e = parse(text);
    for (const double t : {2.0, 5.0, 50.0}) {
      double direct;
      try {
        direct = eval(e, t);
      } catch (const EvalError&) {
        continue;
      }
      const SignedLog sl = eval_signed_log(e, t);
      CHECK(std::fabs(sl.value() - direct) <= 1e-9 * std::max(1.0, std::fabs(direct)));
    }
  }

  // far beyond double range: 2^t/(2^t ln 2) style ratios stay exact
  const ExprPtr f = parse("2^t");
  const ExprPtr d = differentiate(f);
  const SignedLog num = eval_signed_log(f, 1e6);
  const SignedLog den = eval_signed_log(d, 1e6);
  CHECK(num.sign == 1);
  CHECK(den.sign == 1);
  CHECK(std::exp(num.log_abs - den.log_abs) ==
        doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("profile classifies monotonicity and canonical families") {
  const FuncProfile grow = profile_text("log(t)", 1e6);
  CHECK(grow.monotone == Monotonicity::Increasing);
  REQUIRE(grow.canonical.has_value());
  CHECK(grow.canonical->kind == CanonicalKind::Log);

  const FuncProfile decay = profile_text("1/t", 1e6);
  CHECK(decay.monotone == Monotonicity::Decreasing);
  REQUIRE(decay.canonical.has_value());
  CHECK(decay.canonical->kind == CanonicalKind::Inv);

  const FuncProfile bump = profile_text("t^2 - 100*t", 1e6);
  CHECK(bump.monotone == Monotonicity::NonMonotoneOnSample);
  CHECK(!bump.canonical.has_value());

  const FuncProfile one = profile_text("1", 1e6);
  REQUIRE(one.canonical.has_value());
  CHECK(one.canonical->kind == CanonicalKind::One);

  const FuncProfile lot = profile_text("log(t)/t", 1e6);
  REQUIRE(lot.canonical.has_value());
  CHECK(lot.canonical->kind == CanonicalKind::LogOverT);

  const FuncProfile pw = profile_text("t^0.5", 1e6);
  REQUIRE(pw.canonical.has_value());
  CHECK(pw.canonical->kind == CanonicalKind::Power);
  CHECK(pw.canonical->param == 0.5);

  const FuncProfile pb = profile_text("2^t", 1e6);
  CHECK(pb.monotone == Monotonicity::Increasing);  // sampled far past overflow
  REQUIRE(pb.canonical.has_value());
  CHECK(pb.canonical->kind == CanonicalKind::PowBase);
  CHECK(pb.canonical->param == 2.0);
}
