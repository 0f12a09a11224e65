#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace matchgame {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

double to_double(const Rational& q);

// Exact value of a finite double (every double is a dyadic rational).
Rational exact_rational(double x);

// Simplest rational within 1e-12 of x when one with a small denominator
// exists, otherwise the exact dyadic value.  Thresholds that travel through
// double arithmetic come back as the fractions they started from.
Rational snap_rational(double x);

// "p/q", "p" or a decimal literal such as "0.25" or "-1.5e-1".
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

}  // namespace matchgame
