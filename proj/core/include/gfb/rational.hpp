#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace gfb {

// Unbounded rationals: parabolic degrees built from approximated weights
// accumulate denominators that overflow 64-bit quickly.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational rat(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

inline int sign(const Rational& r) { return r.sign(); }

std::string to_string(const Rational& r);
double to_double(const Rational& r);

// Smallest-denominator rational within tol of x, denominators capped at max_den.
Rational approx_rational(double x, double tol = 1e-9, std::int64_t max_den = 1000000);

}  // namespace gfb
