#include "apsums/exprdsl.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "apsums/errors.hpp"

namespace apsums {

namespace {

ExprPtr node(ExprKind kind, double value, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr) {
  return std::make_shared<const Expr>(kind, value, std::move(lhs), std::move(rhs));
}

bool is_const(const ExprPtr& e, double v) {
  return e->kind == ExprKind::Const && e->value == v;
}

const char* kind_name(ExprKind k) {
  switch (k) {
    case ExprKind::Const: return "constant";
    case ExprKind::Var: return "t";
    case ExprKind::Add: return "addition";
    case ExprKind::Sub: return "subtraction";
    case ExprKind::Mul: return "multiplication";
    case ExprKind::Div: return "division";
    case ExprKind::Pow: return "power";
    case ExprKind::PowBase: return "exponential base";
    case ExprKind::Log: return "log";
    case ExprKind::Exp: return "exp";
    case ExprKind::Neg: return "negation";
  }
  return "?";
}

}  // namespace

ExprPtr constant(double v) { return node(ExprKind::Const, v); }
ExprPtr var() { return node(ExprKind::Var, 0.0); }
ExprPtr add(ExprPtr a, ExprPtr b) { return node(ExprKind::Add, 0.0, std::move(a), std::move(b)); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return node(ExprKind::Sub, 0.0, std::move(a), std::move(b)); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return node(ExprKind::Mul, 0.0, std::move(a), std::move(b)); }
ExprPtr divide(ExprPtr a, ExprPtr b) { return node(ExprKind::Div, 0.0, std::move(a), std::move(b)); }
ExprPtr pow_const(ExprPtr base, double exponent) {
  return node(ExprKind::Pow, exponent, std::move(base));
}
ExprPtr pow_base(double base, ExprPtr exponent) {
  return node(ExprKind::PowBase, base, std::move(exponent));
}
ExprPtr log_of(ExprPtr a) { return node(ExprKind::Log, 0.0, std::move(a)); }
ExprPtr exp_of(ExprPtr a) { return node(ExprKind::Exp, 0.0, std::move(a)); }
ExprPtr neg(ExprPtr a) { return node(ExprKind::Neg, 0.0, std::move(a)); }

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

enum class Tok { Number, Var, Log, Exp, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t offset;
  double number = 0.0;
};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const auto n = text.size();
  while (i < n) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    switch (c) {
      case '+': out.push_back({Tok::Plus, start}); ++i; continue;
      case '-': out.push_back({Tok::Minus, start}); ++i; continue;
      case '*': out.push_back({Tok::Star, start}); ++i; continue;
      case '/': out.push_back({Tok::Slash, start}); ++i; continue;
      case '^': out.push_back({Tok::Caret, start}); ++i; continue;
      case '(': out.push_back({Tok::LParen, start}); ++i; continue;
      case ')': out.push_back({Tok::RParen, start}); ++i; continue;
      default: break;
    }
    if (c >= '0' && c <= '9') {
      while (i < n && text[i] >= '0' && text[i] <= '9') ++i;
      if (i < n && text[i] == '.') {
        ++i;
        while (i < n && text[i] >= '0' && text[i] <= '9') ++i;
      }
      if (i < n && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < n && text[j] >= '0' && text[j] <= '9') {
          while (j < n && text[j] >= '0' && text[j] <= '9') ++j;
          i = j;
        }
      }
      const std::string s(text.substr(start, i - start));
      out.push_back({Tok::Number, start, std::strtod(s.c_str(), nullptr)});
      continue;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      while (i < n && ((text[i] >= 'a' && text[i] <= 'z') || (text[i] >= 'A' && text[i] <= 'Z')))
        ++i;
      const auto word = text.substr(start, i - start);
      if (word == "t")
        out.push_back({Tok::Var, start});
      else if (word == "log")
        out.push_back({Tok::Log, start});
      else if (word == "exp")
        out.push_back({Tok::Exp, start});
      else
        throw ParseError(start, {"'t'", "'log'", "'exp'"});
      continue;
    }
    throw ParseError(start, {"number", "'t'", "'log'", "'exp'", "'('", "operator"});
  }
  out.push_back({Tok::End, n});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  ExprPtr run() {
    ExprPtr e = parse_expr();
    expect(Tok::End, {"end of input"});
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = pos_ + ahead;
    return toks_[std::min(i, toks_.size() - 1)];
  }
  Token take() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k, std::vector<std::string> expected) {
    if (!accept(k)) throw ParseError(peek().offset, std::move(expected));
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    for (;;) {
      if (accept(Tok::Plus))
        e = add(e, parse_term());
      else if (accept(Tok::Minus))
        e = sub(e, parse_term());
      else
        return e;
    }
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    for (;;) {
      if (accept(Tok::Star))
        e = mul(e, parse_factor());
      else if (accept(Tok::Slash))
        e = divide(e, parse_factor());
      else
        return e;
    }
  }

  ExprPtr parse_factor() {
    ExprPtr base = parse_base();
    if (accept(Tok::Caret)) return pow_const(base, parse_signed_number());
    return base;
  }

  double parse_signed_number() {
    double sign = 1.0;
    if (accept(Tok::Minus))
      sign = -1.0;
    else
      accept(Tok::Plus);
    if (peek().kind != Tok::Number) throw ParseError(peek().offset, {"number"});
    return sign * take().number;
  }

  ExprPtr parse_base() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Number: {
        // number '^' 't' is the c^t production; a numeric exponent is left
        // for parse_factor.
        if (peek(1).kind == Tok::Caret && peek(2).kind == Tok::Var) {
          const double c = take().number;
          take();  // '^'
          take();  // 't'
          return pow_base(c, var());
        }
        return constant(take().number);
      }
      case Tok::Var:
        take();
        return var();
      case Tok::Log: {
        take();
        expect(Tok::LParen, {"'('"});
        ExprPtr inner = parse_expr();
        expect(Tok::RParen, {"')'"});
        return log_of(inner);
      }
      case Tok::Exp: {
        take();
        expect(Tok::LParen, {"'('"});
        ExprPtr inner = parse_expr();
        expect(Tok::RParen, {"')'"});
        return exp_of(inner);
      }
      case Tok::LParen: {
        take();
        ExprPtr inner = parse_expr();
        expect(Tok::RParen, {"')'"});
        return inner;
      }
      case Tok::Minus:
        take();
        return neg(parse_factor());
      default:
        throw ParseError(tok.offset, {"number", "'t'", "'log'", "'exp'", "'('", "'-'"});
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse(std::string_view text) {
  if (text.empty()) throw ParseError(0, {"non-empty expression"});
  return Parser(text).run();
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

namespace {

// Folding constructors: constant folding plus x*0 / x*1 / x+0 elimination.

ExprPtr mk_neg(ExprPtr a);

ExprPtr mk_add(ExprPtr a, ExprPtr b) {
  if (a->kind == ExprKind::Const && b->kind == ExprKind::Const)
    return constant(a->value + b->value);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return add(std::move(a), std::move(b));
}

ExprPtr mk_sub(ExprPtr a, ExprPtr b) {
  if (a->kind == ExprKind::Const && b->kind == ExprKind::Const)
    return constant(a->value - b->value);
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return mk_neg(std::move(b));
  return sub(std::move(a), std::move(b));
}

ExprPtr mk_mul(ExprPtr a, ExprPtr b) {
  if (a->kind == ExprKind::Const && b->kind == ExprKind::Const)
    return constant(a->value * b->value);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return mul(std::move(a), std::move(b));
}

ExprPtr mk_div(ExprPtr a, ExprPtr b) {
  if (a->kind == ExprKind::Const && b->kind == ExprKind::Const && b->value != 0.0)
    return constant(a->value / b->value);
  if (is_const(a, 0.0)) return constant(0.0);
  if (is_const(b, 1.0)) return a;
  return divide(std::move(a), std::move(b));
}

ExprPtr mk_pow(ExprPtr base, double exponent) {
  if (exponent == 0.0) return constant(1.0);
  if (exponent == 1.0) return base;
  if (base->kind == ExprKind::Const) {
    const double v = std::pow(base->value, exponent);
    if (std::isfinite(v)) return constant(v);
  }
  return pow_const(std::move(base), exponent);
}

ExprPtr mk_neg(ExprPtr a) {
  if (a->kind == ExprKind::Const) return constant(-a->value);
  return neg(std::move(a));
}

}  // namespace

ExprPtr differentiate(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Const:
      return constant(0.0);
    case ExprKind::Var:
      return constant(1.0);
    case ExprKind::Add:
      return mk_add(differentiate(e->lhs), differentiate(e->rhs));
    case ExprKind::Sub:
      return mk_sub(differentiate(e->lhs), differentiate(e->rhs));
    case ExprKind::Mul:
      return mk_add(mk_mul(differentiate(e->lhs), e->rhs),
                    mk_mul(e->lhs, differentiate(e->rhs)));
    case ExprKind::Div:
      return mk_div(mk_sub(mk_mul(differentiate(e->lhs), e->rhs),
                           mk_mul(e->lhs, differentiate(e->rhs))),
                    mk_pow(e->rhs, 2.0));
    case ExprKind::Pow:
      // (u^a)' = a * u^(a-1) * u'
      return mk_mul(mk_mul(constant(e->value), mk_pow(e->lhs, e->value - 1.0)),
                    differentiate(e->lhs));
    case ExprKind::PowBase:
      // (c^u)' = c^u * ln(c) * u'
      return mk_mul(mk_mul(pow_base(e->value, e->lhs), constant(std::log(e->value))),
                    differentiate(e->lhs));
    case ExprKind::Log:
      return mk_div(differentiate(e->lhs), e->lhs);
    case ExprKind::Exp:
      return mk_mul(exp_of(e->lhs), differentiate(e->lhs));
    case ExprKind::Neg:
      return mk_neg(differentiate(e->lhs));
  }
  return constant(0.0);
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

double eval_rec(const ExprPtr& e, double t) {
  double v = 0.0;
  switch (e->kind) {
    case ExprKind::Const: v = e->value; break;
    case ExprKind::Var: v = t; break;
    case ExprKind::Add: v = eval_rec(e->lhs, t) + eval_rec(e->rhs, t); break;
    case ExprKind::Sub: v = eval_rec(e->lhs, t) - eval_rec(e->rhs, t); break;
    case ExprKind::Mul: v = eval_rec(e->lhs, t) * eval_rec(e->rhs, t); break;
    case ExprKind::Div: v = eval_rec(e->lhs, t) / eval_rec(e->rhs, t); break;
    case ExprKind::Pow: v = std::pow(eval_rec(e->lhs, t), e->value); break;
    case ExprKind::PowBase: v = std::pow(e->value, eval_rec(e->lhs, t)); break;
    case ExprKind::Log: v = std::log(eval_rec(e->lhs, t)); break;
    case ExprKind::Exp: v = std::exp(eval_rec(e->lhs, t)); break;
    case ExprKind::Neg: v = -eval_rec(e->lhs, t); break;
  }
  if (!std::isfinite(v))
    throw EvalError(t, std::string(kind_name(e->kind)) + " produced a non-finite value");
  return v;
}

}  // namespace

double eval(const ExprPtr& e, double t) { return eval_rec(e, t); }

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string fmt_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Precedence: Add/Sub 1, Mul/Div 2, Neg 3, Pow/PowBase 4, atoms 5.
int precedence(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow:
    case ExprKind::PowBase: return 4;
    case ExprKind::Const: return e->value < 0 ? 3 : 5;
    default: return 5;
  }
}

std::string render(const ExprPtr& e, int min_prec) {
  std::string s;
  switch (e->kind) {
    case ExprKind::Const: s = fmt_number(e->value); break;
    case ExprKind::Var: s = "t"; break;
    case ExprKind::Add: s = render(e->lhs, 1) + " + " + render(e->rhs, 2); break;
    case ExprKind::Sub: s = render(e->lhs, 1) + " - " + render(e->rhs, 2); break;
    case ExprKind::Mul: s = render(e->lhs, 2) + " * " + render(e->rhs, 3); break;
    case ExprKind::Div: s = render(e->lhs, 2) + " / " + render(e->rhs, 3); break;
    case ExprKind::Neg: s = "-" + render(e->lhs, 3); break;
    case ExprKind::Pow: s = render(e->lhs, 5) + "^" + fmt_number(e->value); break;
    case ExprKind::PowBase:
      if (e->lhs->kind == ExprKind::Var) {
        s = fmt_number(e->value) + "^t";
      } else {
        // the grammar has no surface form for c^(general expr)
        s = "exp(" + fmt_number(std::log(e->value)) + " * (" + render(e->lhs, 0) + "))";
      }
      break;
    case ExprKind::Log: s = "log(" + render(e->lhs, 0) + ")"; break;
    case ExprKind::Exp: s = "exp(" + render(e->lhs, 0) + ")"; break;
  }
  if (precedence(e) < min_prec &&
      !(e->kind == ExprKind::Log || e->kind == ExprKind::Exp ||
        (e->kind == ExprKind::PowBase && e->lhs->kind != ExprKind::Var)))
    return "(" + s + ")";
  return s;
}

}  // namespace

std::string to_string(const ExprPtr& e) { return render(e, 0); }

// ---------------------------------------------------------------------------
// Signed-log evaluation
// ---------------------------------------------------------------------------

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

SignedLog sl_zero() { return {kNegInf, 0}; }

SignedLog sl_from_value(double v, double t, const char* what) {
  if (!std::isfinite(v)) throw EvalError(t, std::string(what) + " produced a non-finite value");
  if (v == 0.0) return sl_zero();
  return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
}

SignedLog sl_flip(SignedLog a) {
  a.sign = -a.sign;
  return a;
}

SignedLog sl_add(SignedLog a, SignedLog b, double t) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  const SignedLog& big = a.log_abs >= b.log_abs ? a : b;
  const SignedLog& small = a.log_abs >= b.log_abs ? b : a;
  if (a.sign == b.sign)
    return {big.log_abs + std::log1p(std::exp(small.log_abs - big.log_abs)), a.sign};
  if (a.log_abs == b.log_abs) return sl_zero();
  const double la = big.log_abs + std::log1p(-std::exp(small.log_abs - big.log_abs));
  if (std::isnan(la)) throw EvalError(t, "catastrophic cancellation in log-scale addition");
  return {la, big.sign};
}

SignedLog sl_eval(const ExprPtr& e, double t) {
  switch (e->kind) {
    case ExprKind::Const:
      return sl_from_value(e->value, t, "constant");
    case ExprKind::Var:
      return sl_from_value(t, t, "t");
    case ExprKind::Add:
      return sl_add(sl_eval(e->lhs, t), sl_eval(e->rhs, t), t);
    case ExprKind::Sub:
      return sl_add(sl_eval(e->lhs, t), sl_flip(sl_eval(e->rhs, t)), t);
    case ExprKind::Neg:
      return sl_flip(sl_eval(e->lhs, t));
    case ExprKind::Mul: {
      const SignedLog a = sl_eval(e->lhs, t);
      const SignedLog b = sl_eval(e->rhs, t);
      if (a.sign == 0 || b.sign == 0) return sl_zero();
      return {a.log_abs + b.log_abs, a.sign * b.sign};
    }
    case ExprKind::Div: {
      const SignedLog a = sl_eval(e->lhs, t);
      const SignedLog b = sl_eval(e->rhs, t);
      if (b.sign == 0) throw EvalError(t, "division by zero");
      if (a.sign == 0) return sl_zero();
      return {a.log_abs - b.log_abs, a.sign * b.sign};
    }
    case ExprKind::Pow: {
      const SignedLog u = sl_eval(e->lhs, t);
      const double a = e->value;
      if (u.sign == 0) {
        if (a > 0) return sl_zero();
        if (a == 0) return {0.0, 1};  // matches std::pow(0,0) == 1
        throw EvalError(t, "zero raised to a negative power");
      }
      int sign = 1;
      if (u.sign < 0) {
        if (std::rint(a) != a)
          throw EvalError(t, "negative base with non-integer exponent");
        sign = std::fmod(a, 2.0) == 0.0 ? 1 : -1;
      }
      return {a * u.log_abs, sign};
    }
    case ExprKind::PowBase: {
      if (e->value <= 0.0) throw EvalError(t, "non-positive exponential base");
      const double u = sl_eval(e->lhs, t).value();
      const double la = u * std::log(e->value);
      if (std::isnan(la) || la == kPosInf)
        throw EvalError(t, "exponential overflows the log scale");
      if (la == kNegInf) return sl_zero();
      return {la, 1};
    }
    case ExprKind::Log: {
      const SignedLog u = sl_eval(e->lhs, t);
      if (u.sign <= 0) throw EvalError(t, "log of a non-positive value");
      return sl_from_value(u.log_abs, t, "log");
    }
    case ExprKind::Exp: {
      const double u = sl_eval(e->lhs, t).value();
      if (std::isnan(u) || u == kPosInf)
        throw EvalError(t, "exp overflows the log scale");
      if (u == kNegInf) return sl_zero();
      return {u, 1};
    }
  }
  return sl_zero();
}

}  // namespace

double SignedLog::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

SignedLog eval_signed_log(const ExprPtr& e, double t) { return sl_eval(e, t); }

// ---------------------------------------------------------------------------
// Profiling
// ---------------------------------------------------------------------------

namespace {

std::optional<CanonicalTag> detect_canonical(const ExprPtr& e) {
  if (is_const(e, 1.0)) return CanonicalTag{CanonicalKind::One, 1.0};
  if (e->kind == ExprKind::Var) return CanonicalTag{CanonicalKind::Power, 1.0};
  if (e->kind == ExprKind::Log && e->lhs->kind == ExprKind::Var)
    return CanonicalTag{CanonicalKind::Log};
  if (e->kind == ExprKind::Pow && e->lhs->kind == ExprKind::Var) {
    if (e->value == -1.0) return CanonicalTag{CanonicalKind::Inv, -1.0};
    return CanonicalTag{CanonicalKind::Power, e->value};
  }
  if (e->kind == ExprKind::Div && is_const(e->lhs, 1.0) && e->rhs->kind == ExprKind::Var)
    return CanonicalTag{CanonicalKind::Inv, -1.0};
  const auto is_log_t = [](const ExprPtr& x) {
    return x->kind == ExprKind::Log && x->lhs->kind == ExprKind::Var;
  };
  if (e->kind == ExprKind::Div && is_log_t(e->lhs) && e->rhs->kind == ExprKind::Var)
    return CanonicalTag{CanonicalKind::LogOverT};
  if (e->kind == ExprKind::Mul && is_log_t(e->lhs) && e->rhs->kind == ExprKind::Pow &&
      e->rhs->lhs->kind == ExprKind::Var && e->rhs->value == -1.0)
    return CanonicalTag{CanonicalKind::LogOverT};
  if (e->kind == ExprKind::PowBase && e->lhs->kind == ExprKind::Var)
    return CanonicalTag{CanonicalKind::PowBase, e->value};
  return std::nullopt;
}

}  // namespace

std::string_view canonical_name(CanonicalKind kind) {
  switch (kind) {
    case CanonicalKind::One: return "one";
    case CanonicalKind::Log: return "log";
    case CanonicalKind::Inv: return "inv";
    case CanonicalKind::LogOverT: return "log_over_t";
    case CanonicalKind::Power: return "power";
    case CanonicalKind::PowBase: return "powbase";
  }
  return "?";
}

std::string_view monotonicity_name(Monotonicity m) {
  switch (m) {
    case Monotonicity::Increasing: return "increasing";
    case Monotonicity::Decreasing: return "decreasing";
    case Monotonicity::NonMonotoneOnSample: return "non-monotone-on-sample";
  }
  return "?";
}

FuncProfile profile(const ExprPtr& e, double sample_hi) {
  FuncProfile p;
  p.expr = e;
  p.deriv = differentiate(e);
  p.canonical = detect_canonical(e);

  constexpr int kSamples = 64;
  const double hi = std::max(sample_hi, 2.0);
  int positive = 0;
  int negative = 0;
  for (int i = 0; i < kSamples; ++i) {
    const double t = 2.0 * std::pow(hi / 2.0, static_cast<double>(i) / (kSamples - 1));
    // sign via the log-scale evaluator so steep functions (c^t) do not
    // overflow the sample
    const int s = eval_signed_log(p.deriv, t).sign;
    if (s > 0) ++positive;
    if (s < 0) ++negative;
  }
  if (positive == kSamples)
    p.monotone = Monotonicity::Increasing;
  else if (negative == kSamples)
    p.monotone = Monotonicity::Decreasing;
  else
    p.monotone = Monotonicity::NonMonotoneOnSample;
  return p;
}

FuncProfile profile_text(std::string_view text, double sample_hi) {
  return profile(parse(text), sample_hi);
}

}  // namespace apsums
