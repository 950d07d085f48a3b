#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "backresp/error.hpp"

namespace backresp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// Row n of Pascal's triangle, C(n,0)..C(n,n).
inline std::vector<BigInt> binomial_row(unsigned n) {
  std::vector<BigInt> row(n + 1);
  row[0] = 1;
  for (unsigned k = 1; k <= n; ++k) row[k] = row[k - 1] * (n - k + 1) / k;
  return row;
}

/// "p/q", or "p" when q = 1.
inline std::string to_fraction_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Fixed-point rendering with round-half-even at `digits` places.
inline std::string to_decimal_string(const Rational& value, unsigned digits) {
  const bool negative = value < 0;
  const Rational mag = negative ? Rational(-value) : value;
  BigInt scale = 1;
  for (unsigned i = 0; i < digits; ++i) scale *= 10;

  const Rational scaled = mag * scale;
  BigInt q = numerator(scaled) / denominator(scaled);
  const BigInt rem2 = 2 * (numerator(scaled) - q * denominator(scaled));
  if (rem2 > denominator(scaled) || (rem2 == denominator(scaled) && (q & 1) != 0)) {
    q += 1;
  }

  std::string digits_str = q.str();
  if (digits_str.size() <= digits) {
    digits_str.insert(0, digits + 1 - digits_str.size(), '0');
  }
  std::string out;
  if (negative && q != 0) out.push_back('-');
  out += digits_str.substr(0, digits_str.size() - digits);
  if (digits > 0) {
    out.push_back('.');
    out += digits_str.substr(digits_str.size() - digits);
  }
  return out;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Accepts "p/q", "p" and an optional leading '-'.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> BigInt {
    std::size_t i = 0;
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw input_error("BadRational", "malformed number '" + std::string(text) + "'");
    BigInt v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') {
        throw input_error("BadRational", "malformed number '" + std::string(text) + "'");
      }
      v = v * 10 + (s[i] - '0');
    }
    return neg ? BigInt(-v) : v;
  };

  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const BigInt num = parse_int(text.substr(0, slash));
  const BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw input_error("BadRational", "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

}  // namespace backresp
