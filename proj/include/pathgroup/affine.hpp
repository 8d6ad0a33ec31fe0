#pragma once

#include <string>
#include <tuple>

#include "pathgroup/rational.hpp"

namespace pathgroup {

// Exact number p + q*theta, theta a declared irrational parameter.
// Equality is componentwise; {1, theta} are Q-linearly independent.
struct AffineValue {
  Rational p;  // constant part
  Rational q;  // theta coefficient

  AffineValue() = default;
  AffineValue(Rational p_, Rational q_) : p(std::move(p_)), q(std::move(q_)) {}
  static AffineValue integer(long n) { return AffineValue(Rational(n), Rational(0)); }

  AffineValue operator+(const AffineValue& o) const { return {p + o.p, q + o.q}; }
  AffineValue operator-(const AffineValue& o) const { return {p - o.p, q - o.q}; }
  AffineValue operator-() const { return {-p, -q}; }
  AffineValue scaled(const Rational& c) const { return {c * p, c * q}; }
  AffineValue shifted(const BigInt& n) const { return {p + n, q}; }

  bool operator==(const AffineValue& o) const { return p == o.p && q == o.q; }
  bool operator!=(const AffineValue& o) const { return !(*this == o); }
  bool lex_less(const AffineValue& o) const { return std::tie(p, q) < std::tie(o.p, o.q); }

  Rational eval(const Rational& theta) const { return p + q * theta; }
  double numeric(const Rational& theta) const { return to_double(eval(theta)); }

  std::string str() const {
    std::string out = rational_str(p);
    if (q != 0) out += (q > 0 ? " + " : " - ") + rational_str(rational_abs(q)) + "*theta";
    return out;
  }
};

}  // namespace pathgroup
