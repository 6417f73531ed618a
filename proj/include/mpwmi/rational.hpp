#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "mpwmi/error.hpp"

namespace mpwmi {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", "-7", "0.125" or "1.5e-3" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&] { throw Error(ErrorCode::ParseError, "not a rational: '" + s + "'"); };
  if (s.empty()) fail();

  if (s.find('/') != std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0 || r.get_den() == 0) fail();
    r.canonicalize();
    return r;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long exponent = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) fail();
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') fail();
    ++pos;
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(s.substr(pos), &used);
    } catch (...) {
      fail();
    }
    if (pos + used != s.size()) fail();
    exponent += e;
  }

  Integer num(digits, 10);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent < 0 ? Rational(num, scale) : Rational(num * scale);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

inline int sign(const Rational& r) { return sgn(r); }

}  // namespace mpwmi
