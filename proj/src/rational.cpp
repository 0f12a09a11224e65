#include "matchgame/rational.hpp"

#include "matchgame/errors.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

namespace matchgame {

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw ContractViolation("non-finite value has no rational form");
  int exponent = 0;
  double mantissa = std::frexp(x, &exponent);
  // mantissa * 2^53 is an integer for every double
  auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r{BigInt(scaled)};
  if (exponent > 0) {
    r *= Rational(BigInt(1) << exponent);
  } else if (exponent < 0) {
    r /= Rational(BigInt(1) << -exponent);
  }
  return r;
}

Rational snap_rational(double x) {
  constexpr double kTolerance = 1e-12;
  constexpr std::int64_t kMaxDenominator = 1'000'000'000;
  if (!std::isfinite(x)) throw ContractViolation("non-finite value has no rational form");
  if (x == std::floor(x) && std::fabs(x) < 9e15) return Rational(static_cast<std::int64_t>(x));

  // continued-fraction convergents of the exact value
  Rational exact = exact_rational(x);
  Rational rest = exact;
  BigInt p_prev = 0, q_prev = 1;
  BigInt p = 1, q = 0;
  for (int step = 0; step < 64; ++step) {
    BigInt a = numerator(rest) / denominator(rest);
    if (rest < 0 && a * denominator(rest) != numerator(rest)) a -= 1;
    BigInt p_next = a * p + p_prev;
    BigInt q_next = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    if (q > kMaxDenominator) break;
    Rational candidate(p, q);
    if (std::fabs(to_double(candidate - exact)) <= kTolerance * std::max(1.0, std::fabs(x)))
      return candidate;
    Rational frac = rest - Rational(a);
    if (frac == 0) break;
    rest = 1 / frac;
  }
  return exact;
}

Rational parse_rational(std::string_view text) {
  auto fail = [&] { return ParseError("not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    try {
      BigInt num(std::string(text.substr(0, slash)));
      BigInt den(std::string(text.substr(slash + 1)));
      if (den == 0) throw fail();
      return Rational(num, den);
    } catch (const std::runtime_error&) {
      throw fail();
    }
  }
  // decimal literal, parsed digit by digit so "0.1" is exactly 1/10
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  BigInt digits = 0;
  int scale = 0;
  bool seen_digit = false, seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      if (seen_point) ++scale;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw fail();
  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw fail();
    try {
      std::size_t used = 0;
      exponent = std::stol(std::string(text.substr(pos + 1)), &used);
      if (used != text.size() - pos - 1) throw fail();
    } catch (const std::logic_error&) {
      throw fail();
    }
  }
  exponent -= scale;
  if (exponent > 400 || exponent < -400) throw fail();
  Rational r{digits};
  BigInt power = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(exponent)));
  if (exponent >= 0) {
    r *= Rational(power);
  } else {
    r /= Rational(power);
  }
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace matchgame
