// Weight-function DSL: parse, evaluate, symbolically differentiate, and
// profile the f(t) appearing in the prime sums and their integrals.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace apsums {

enum class ExprKind {
  Const,
  Var,      // the symbol t
  Add,
  Sub,
  Mul,
  Div,
  Pow,      // u^alpha, alpha a real constant (stored in value)
  PowBase,  // c^u, c a positive constant (stored in value)
  Log,      // natural log
  Exp,
  Neg,
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable AST node. `value` holds the constant for Const, the exponent
// for Pow, and the base for PowBase. Unary nodes use `lhs` only.
class Expr {
 public:
  Expr(ExprKind kind, double value, ExprPtr lhs, ExprPtr rhs)
      : kind(kind), value(value), lhs(std::move(lhs)), rhs(std::move(rhs)) {}

  ExprKind kind;
  double value;
  ExprPtr lhs;
  ExprPtr rhs;
};

// Node factories (no simplification).
ExprPtr constant(double v);
ExprPtr var();
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr divide(ExprPtr a, ExprPtr b);
ExprPtr pow_const(ExprPtr base, double exponent);
ExprPtr pow_base(double base, ExprPtr exponent);
ExprPtr log_of(ExprPtr a);
ExprPtr exp_of(ExprPtr a);
ExprPtr neg(ExprPtr a);

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' signed-number)?
//   base   := number | 't' | 'log' '(' expr ')' | 'exp' '(' expr ')'
//           | number '^' 't' | '(' expr ')' | '-' factor
// Whitespace is insignificant. Throws ParseError with byte offset.
ExprPtr parse(std::string_view text);

// Symbolic derivative with light simplification (constant folding and
// x*0 / x*1 / x+0 elimination). Total on the grammar.
ExprPtr differentiate(const ExprPtr& e);

// IEEE double evaluation. Throws EvalError on a non-finite intermediate.
double eval(const ExprPtr& e, double t);

// Round-trippable text form: parse(to_string(e)) evaluates identically.
std::string to_string(const ExprPtr& e);

// Value carried as sign * exp(log_abs); exact for magnitudes far beyond
// double range. Used where direct evaluation overflows (e.g. 2^t at
// large t, where only ratios are meaningful).
struct SignedLog {
  double log_abs = 0.0;  // -inf when the value is zero
  int sign = 0;          // -1, 0, +1

  double value() const;
};

SignedLog eval_signed_log(const ExprPtr& e, double t);

enum class Monotonicity { Increasing, Decreasing, NonMonotoneOnSample };

enum class CanonicalKind { One, Log, Inv, LogOverT, Power, PowBase };

struct CanonicalTag {
  CanonicalKind kind;
  double param = 0.0;  // Power: the exponent; PowBase: the base
};

std::string_view canonical_name(CanonicalKind kind);

struct FuncProfile {
  ExprPtr expr;
  ExprPtr deriv;
  Monotonicity monotone = Monotonicity::NonMonotoneOnSample;
  std::optional<CanonicalTag> canonical;
};

std::string_view monotonicity_name(Monotonicity m);

// Differentiates e, classifies monotonicity from the derivative's sign on
// a 64-point geometric grid in [2, sample_hi], and tags known families.
FuncProfile profile(const ExprPtr& e, double sample_hi);

// Convenience: parse + profile.
FuncProfile profile_text(std::string_view text, double sample_hi);

}  // namespace apsums
