#ifndef RACAH_SCALAR_HPP
#define RACAH_SCALAR_HPP

// Scalar backends shared by every module.
//
// Two scalar types are supported throughout the library:
//   Rational  exact arbitrary-precision rationals (GMP), the verification backend
//   double    IEEE binary64, for larger dimensions and generic parameters
//
// Everything numeric is templated on the scalar; `is_exact_v<T>` selects the
// pass/fail semantics (exact zero vs. relative tolerance).

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>

namespace racah {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

template <typename T>
struct is_exact : std::false_type {};
template <>
struct is_exact<Rational> : std::true_type {};
template <typename T>
inline constexpr bool is_exact_v = is_exact<T>::value;

template <typename T>
inline double to_double(const T& x) {
  if constexpr (is_exact_v<T>) {
    return x.template convert_to<double>();
  } else {
    return static_cast<double>(x);
  }
}

template <typename T>
inline T abs_value(const T& x) {
  if constexpr (is_exact_v<T>) {
    return boost::multiprecision::abs(x);
  } else {
    return std::abs(x);
  }
}

template <typename T>
inline bool is_zero(const T& x) {
  return x == T(0);
}

/// Builds p/q in the scalar type. For double this is a plain division.
template <typename T>
inline T make_ratio(long long p, long long q = 1) {
  if constexpr (is_exact_v<T>) {
    return Rational(p, q);
  } else {
    return static_cast<double>(p) / static_cast<double>(q);
  }
}

/// Converts an exact rational into scalar T (identity for Rational).
template <typename T>
inline T from_rational(const Rational& r) {
  if constexpr (is_exact_v<T>) {
    return r;
  } else {
    return r.convert_to<double>();
  }
}

/// Parses "p", "p/q", or a finite decimal such as "-1.25" or "3e-2" into an
/// exact rational. Throws ConfigError on anything else (e.g. "1.5x").
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& r);

/// Shortest form that round-trips a double ("%.17g").
std::string to_string(double x);

/// Exact square root when r is the square of a rational.
bool exact_sqrt(const Rational& r, Rational& root);

}  // namespace racah

#endif  // RACAH_SCALAR_HPP
