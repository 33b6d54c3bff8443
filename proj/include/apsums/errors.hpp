// Error types shared across the apsums library.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace apsums {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// gcd(k, l) != 1: the progression contains at most one prime and none of
// the density formulas apply.
class CoprimalityError : public Error {
 public:
  CoprimalityError(std::uint64_t k, std::uint64_t l)
      : Error("residue " + std::to_string(l) + " is not coprime to modulus " +
              std::to_string(k)),
        k(k),
        l(l) {}
  std::uint64_t k;
  std::uint64_t l;
};

// Sieve bound above the configured hard cap.
class BoundTooLarge : public Error {
 public:
  BoundTooLarge(double x, std::uint64_t cap)
      : Error("sieve bound " + std::to_string(x) + " exceeds cap " +
              std::to_string(cap)),
        x(x),
        cap(cap) {}
  double x;
  std::uint64_t cap;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected)
      : Error(make_message(offset, expected)),
        offset(offset),
        expected(std::move(expected)) {}
  std::size_t offset;
  std::vector<std::string> expected;

 private:
  static std::string make_message(std::size_t offset,
                                  const std::vector<std::string>& expected) {
    std::string msg = "parse error at offset " + std::to_string(offset);
    if (!expected.empty()) {
      msg += ", expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0) msg += (i + 1 == expected.size()) ? " or " : ", ";
        msg += expected[i];
      }
    }
    return msg;
  }
};

// Non-finite value while evaluating an expression.
class EvalError : public Error {
 public:
  EvalError(double t, std::string reason)
      : Error("evaluation failed at t=" + std::to_string(t) + ": " + reason),
        t(t),
        reason(std::move(reason)) {}
  double t;
  std::string reason;
};

class NonFiniteIntegrand : public Error {
 public:
  explicit NonFiniteIntegrand(double t)
      : Error("integrand is non-finite at t=" + std::to_string(t)), t(t) {}
  double t;
};

class MaxDepthExceeded : public Error {
 public:
  MaxDepthExceeded() : Error("adaptive quadrature exceeded maximum bisection depth") {}
};

// canonical_main asked for a kind with no closed-form main term.
class UnknownKind : public Error {
 public:
  explicit UnknownKind(const std::string& kind)
      : Error("no closed-form main term for canonical kind '" + kind + "'") {}
};

}  // namespace apsums
