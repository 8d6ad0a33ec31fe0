#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "pathgroup/errors.hpp"

namespace pathgroup {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// Accepts "3/20", "-7/10", "0.15", "2", "1e-2"-free decimal forms. Exact.
inline Rational parse_rational(const std::string& s) {
  auto bad = [&] { throw BadArgsError("not a rational literal: '" + s + "'"); };
  if (s.empty()) bad();
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
      if (den == 0) bad();
      return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(BigInt(s));
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    if (tail.find_first_not_of("0123456789") != std::string::npos) bad();
    bool neg = !head.empty() && head[0] == '-';
    if (head == "-" || head.empty()) head = neg ? "-0" : "0";
    BigInt ip(head), scale = 1;
    for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
    BigInt frac = tail.empty() ? BigInt(0) : BigInt(tail);
    BigInt num = ip * scale + (neg ? -frac : frac);
    return Rational(num, scale);
  } catch (const std::exception&) {
    bad();
  }
  return Rational();  // unreachable
}

inline std::string rational_str(const Rational& r) {
  std::string n = numerator(r).str();
  if (denominator(r) == 1) return n;
  return n + "/" + denominator(r).str();
}

// Smallest integer >= r.
inline BigInt rational_ceil(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  if (q * denominator(r) < numerator(r)) ++q;
  return q;
}

inline BigInt rational_floor(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  if (q * denominator(r) > numerator(r)) --q;
  return q;
}

}  // namespace pathgroup
