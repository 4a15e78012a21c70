#include "racah/scalar.hpp"

#include "racah/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <regex>

namespace racah {

namespace {

Integer pow10(unsigned e) {
  Integer r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 10;
  return r;
}

// Integer from decimal digits with an optional sign; leading zeros are not an
// octal prefix here.
Integer decimal_integer(std::string s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  s.erase(0, std::min(s.find_first_not_of('0'), s.size()));
  Integer v(s.empty() ? "0" : s);
  return neg ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  static const std::regex fraction(R"(^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$)");
  static const std::regex decimal(R"(^\s*([+-]?)(\d*)\.?(\d*)(?:[eE]([+-]?\d+))?\s*$)");
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, fraction)) {
    Integer num = decimal_integer(m[1].str());
    Integer den = m[2].matched ? decimal_integer(m[2].str()) : Integer(1);
    if (den == 0) throw ConfigError("zero denominator in \"" + s + "\"");
    return Rational(num, den);
  }
  if (std::regex_match(s, m, decimal) && (m[2].length() > 0 || m[3].length() > 0)) {
    // Leading zeros would be read as an octal prefix.
    std::string digits = m[2].str() + m[3].str();
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
    Rational value(Integer(digits.empty() ? "0" : digits), pow10(static_cast<unsigned>(m[3].length())));
    if (m[4].matched) {
      const long e = std::stol(m[4].str());
      if (e > 4000 || e < -4000) throw ConfigError("exponent out of range in \"" + s + "\"");
      const Integer scale = pow10(static_cast<unsigned>(e < 0 ? -e : e));
      value = e < 0 ? value / Rational(scale) : value * Rational(scale);
    }
    return m[1].str() == "-" ? Rational(-value) : value;
  }
  throw ConfigError("not a rational number: \"" + s + "\"");
}

std::string to_string(const Rational& r) { return r.str(); }

std::string to_string(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool exact_sqrt(const Rational& r, Rational& root) {
  if (r < 0) return false;
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  const Integer sn = boost::multiprecision::sqrt(num);
  const Integer sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den) return false;
  root = Rational(sn, sd);
  return true;
}

}  // namespace racah
