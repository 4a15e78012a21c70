#ifndef RACAH_IRREPS_HPP
#define RACAH_IRREPS_HPP

// Finite-dimensional irreducible representations of the reduced Racah–Wilson
// algebra.
//
// In the K1-eigenbasis psi_0..psi_N:
//   K1 psi_n = lambda_n psi_n,        lambda_n = -(n - sigma)(n - sigma + 1)/2
//   K2 psi_n = A_{n+1} psi_{n+1} + B_n psi_n + A_n psi_{n-1}
//   K3 = [K1, K2]
// with
//   B_n   = -(lambda_n^2 + d lambda_n + e2) / (2 lambda_n)
//   A_n^2 = 1/4 prod_j (n-sigma-xi_j)(n-sigma+xi_j)
//           / ((2n-2sigma)^2 (2n-2sigma+1)(2n-2sigma-1))
// and (d, e1, e2, q) symmetric functions of the signed roots xi_1..xi_4.

#include "racah/algebra.hpp"
#include "racah/errors.hpp"
#include "racah/linalg.hpp"
#include "racah/scalar.hpp"

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace racah {

template <typename T>
struct IrrepSpec {
  std::array<T, 4> roots{};
  T sigma{0};
  int N = 0;

  Index dim() const { return N + 1; }
};

/// Structure constants of the reduced algebra plus the Casimir value q.
template <typename T>
struct IrrepParameters {
  T d{0}, e1{0}, e2{0}, q{0};

  ReducedConstants<T> constants() const { return {d, e1, e2}; }

  friend bool operator==(const IrrepParameters& x, const IrrepParameters& y) {
    return x.d == y.d && x.e1 == y.e1 && x.e2 == y.e2 && x.q == y.q;
  }
};

template <typename T>
struct MatrixElementTable {
  std::vector<T> lambdas;  ///< lambda_0 .. lambda_N
  std::vector<T> Bs;       ///< B_0 .. B_N
  std::vector<T> A2s;      ///< A_1^2 .. A_N^2
};

/// K1 eigenvalue lambda_t for any (possibly half-integer) t.
template <typename T>
T lambda_n(const T& sigma, const T& t) {
  return -(t - sigma) * (t - sigma + T(1)) / T(2);
}

template <typename T>
T lambda_n(const T& sigma, int n) {
  return lambda_n(sigma, T(n));
}

/// g_t = lambda_t - lambda_{t-1} = sigma - t.
template <typename T>
T g_n(const T& sigma, const T& t) {
  return sigma - t;
}

template <typename T>
T diagonal_B(const T& sigma, const T& d, const T& e2, int n) {
  const T lam = lambda_n(sigma, n);
  if (is_zero(lam))
    throw SingularLambda("lambda_" + std::to_string(n) + " = 0, B_n is undefined");
  return -(lam * lam + d * lam + e2) / (T(2) * lam);
}

template <typename T>
T offdiag_A_squared(const std::array<T, 4>& roots, const T& sigma, int n) {
  const T s = T(n) - sigma;
  const T two_s = T(2) * s;
  const T denom = two_s * two_s * (two_s + T(1)) * (two_s - T(1));
  if (is_zero(denom))
    throw SingularDenominator("2(n - sigma) in {-1, 0, 1} at n = " + std::to_string(n));
  T num(1);
  for (const T& xi : roots) num *= (s - xi) * (s + xi);
  return num / (T(4) * denom);
}

template <typename T>
T offdiag_A_squared(const IrrepSpec<T>& spec, int n) {
  return offdiag_A_squared(spec.roots, spec.sigma, n);
}

/// Elementary symmetric polynomials S1..S4 of the squared roots.
template <typename T>
std::array<T, 4> squared_root_symmetric_functions(const std::array<T, 4>& roots) {
  std::array<T, 4> z;
  for (int i = 0; i < 4; ++i) z[i] = roots[i] * roots[i];
  T s1 = z[0] + z[1] + z[2] + z[3];
  T s2 = z[0] * z[1] + z[0] * z[2] + z[0] * z[3] + z[1] * z[2] + z[1] * z[3] + z[2] * z[3];
  T s3 = z[0] * z[1] * z[2] + z[0] * z[1] * z[3] + z[0] * z[2] * z[3] + z[1] * z[2] * z[3];
  T s4 = z[0] * z[1] * z[2] * z[3];
  return {s1, s2, s3, s4};
}

/// (d, e1, e2, q) from signed roots, with P = xi1 xi2 xi3 xi4:
///   d = (S1 - 2)/4, e1 = (S1^2 - 4 S2 + 8P)/64, e2 = P/4,
///   q = (4 S1 (1 - P) + 4 S3 - S1^2 - 4)/64.
template <typename T>
IrrepParameters<T> params_from_roots(const std::array<T, 4>& roots) {
  const auto [s1, s2, s3, s4] = squared_root_symmetric_functions(roots);
  (void)s4;
  const T p = roots[0] * roots[1] * roots[2] * roots[3];
  IrrepParameters<T> out;
  out.d = (s1 - T(2)) / T(4);
  out.e1 = (s1 * s1 - T(4) * s2 + T(8) * p) / T(64);
  out.e2 = p / T(4);
  out.q = (T(4) * s1 * (T(1) - p) + T(4) * s3 - s1 * s1 - T(4)) / T(64);
  return out;
}

/// Coefficients c0..c4 (c4 = 1) of the characteristic quartic in z = xi^2:
///   z^4 - (4d+2) z^3 + (4d^2+4d+1+8e2-16e1) z^2 - 4(d^2+2e2+4d e2+4q) z + 16 e2^2.
template <typename T>
std::array<T, 5> characteristic_coefficients(const IrrepParameters<T>& p) {
  const T& d = p.d;
  return {T(16) * p.e2 * p.e2,
          -T(4) * (d * d + T(2) * p.e2 + T(4) * d * p.e2 + T(4) * p.q),
          T(4) * d * d + T(4) * d + T(1) + T(8) * p.e2 - T(16) * p.e1,
          -(T(4) * d + T(2)),
          T(1)};
}

/// Roots of the characteristic quartic, signed so xi1 xi2 xi3 xi4 = 4 e2.
struct QuarticRoots {
  std::array<std::complex<double>, 4> roots{};    ///< signed xi_j
  std::array<std::complex<double>, 4> squares{};  ///< xi_j^2
  std::array<std::optional<Rational>, 4> exact_squares{};
  std::array<std::optional<Rational>, 4> exact_roots{};

  bool all_exact() const {
    for (const auto& r : exact_roots)
      if (!r) return false;
    return true;
  }
  std::optional<std::array<Rational, 4>> exact() const {
    if (!all_exact()) return std::nullopt;
    return std::array<Rational, 4>{*exact_roots[0], *exact_roots[1], *exact_roots[2],
                                   *exact_roots[3]};
  }
};

/// Exact factorization over Q first, then companion-matrix root finding with
/// Newton polishing for irreducible parts.
QuarticRoots roots_from_params(const IrrepParameters<Rational>& params);
QuarticRoots roots_from_params(const IrrepParameters<double>& params);

struct ValidityReport {
  bool truncation = false;
  int truncation_root_low = -1;   ///< root index matching g_0 = sigma
  int truncation_root_high = -1;  ///< root index matching g_{N+1} = sigma - N - 1
  bool positivity = false;
  int first_nonpositive = -1;  ///< first n in 1..N with A_n^2 <= 0
  bool nondegenerate = false;
  bool lambda_nonzero = false;
  bool sample_pattern_applies = false;  ///< xi1 = sigma, xi4 = sigma - N - 1
  bool sample_condition_holds = false;
  std::vector<std::string> messages;

  bool valid() const { return truncation && positivity && nondegenerate && lambda_nonzero; }
};

template <typename T>
bool near_equal(const T& x, const T& y) {
  if constexpr (is_exact_v<T>) {
    return x == y;
  } else {
    return std::abs(x - y) <= 1e-12 * (1.0 + std::abs(x) + std::abs(y));
  }
}

template <typename T>
ValidityReport validate(const IrrepSpec<T>& spec) {
  ValidityReport rep;
  const T low = spec.sigma;                        // g_0
  const T high = spec.sigma - T(spec.N) - T(1);  // g_{N+1}
  auto matches = [&](const T& g, int j) {
    return near_equal(g, spec.roots[j]) || near_equal(g, T(-spec.roots[j]));
  };
  if (spec.N < 0) {
    rep.messages.push_back("N must be nonnegative");
    return rep;
  }
  for (int i = 0; i < 4 && !rep.truncation; ++i) {
    if (!matches(low, i)) continue;
    for (int j = 0; j < 4; ++j) {
      if (j == i || !matches(high, j)) continue;
      rep.truncation = true;
      rep.truncation_root_low = i;
      rep.truncation_root_high = j;
      break;
    }
  }
  if (!rep.truncation)
    rep.messages.push_back("truncation fails: g_0 and g_{N+1} do not match two distinct +-xi_j");

  rep.lambda_nonzero = true;
  for (int n = 0; n <= spec.N; ++n)
    if (near_equal(lambda_n(spec.sigma, n), T(0))) {
      rep.lambda_nonzero = false;
      rep.messages.push_back("lambda_" + std::to_string(n) + " = 0");
    }

  // lambda_n = lambda_m (n != m) iff n + m = 2 sigma - 1.
  rep.nondegenerate = true;
  for (int n = 0; n <= spec.N && rep.nondegenerate; ++n)
    for (int m = n + 1; m <= spec.N; ++m)
      if (near_equal(T(n + m), T(T(2) * spec.sigma - T(1)))) {
        rep.nondegenerate = false;
        rep.messages.push_back("degenerate K1 spectrum: lambda_" + std::to_string(n) +
                               " = lambda_" + std::to_string(m));
        break;
      }

  rep.positivity = true;
  for (int n = 1; n <= spec.N; ++n) {
    bool ok = false;
    try {
      ok = offdiag_A_squared(spec, n) > T(0);
    } catch (const SingularDenominator&) {
      ok = false;
    }
    if (!ok) {
      rep.positivity = false;
      rep.first_nonpositive = n;
      rep.messages.push_back("A_" + std::to_string(n) + "^2 is not positive");
      break;
    }
  }

  rep.sample_pattern_applies =
      near_equal(spec.roots[0], low) && near_equal(spec.roots[3], high);
  if (rep.sample_pattern_applies) {
    const T& s = spec.sigma;
    const bool sigma_ok = s < T(1) / T(2) || s > T(spec.N) + T(1) / T(2);
    const T x2 = spec.roots[1] * spec.roots[1];
    const T x3 = spec.roots[2] * spec.roots[2];
    const T lo = (s - T(1)) * (s - T(1));
    const T hi = (s - T(spec.N)) * (s - T(spec.N));
    rep.sample_condition_holds = sigma_ok && x2 < lo && x3 > hi;
  }
  return rep;
}

template <typename T>
MatrixElementTable<T> matrix_elements(const IrrepSpec<T>& spec) {
  const IrrepParameters<T> p = params_from_roots(spec.roots);
  MatrixElementTable<T> t;
  for (int n = 0; n <= spec.N; ++n) {
    t.lambdas.push_back(lambda_n(spec.sigma, n));
    t.Bs.push_back(diagonal_B(spec.sigma, p.d, p.e2, n));
    if (n >= 1) t.A2s.push_back(offdiag_A_squared(spec, n));
  }
  return t;
}

/// Residual of 2(g_{n+3/2} A_{n+1}^2 - g_{n-1/2} A_n^2) = B_n^2 + (2 lambda_n + d) B_n + e1
/// over n = 0..N, with A_0^2 = A_{N+1}^2 = 0. `d_offset` shifts d on the
/// right-hand side only.
template <typename T>
Residual<T> a_squared_recurrence_residual(const IrrepSpec<T>& spec, const T& d_offset = T(0),
                                          double tol = kDefaultRelationTolerance) {
  const IrrepParameters<T> p = params_from_roots(spec.roots);
  const MatrixElementTable<T> t = matrix_elements(spec);
  auto a2 = [&](int n) { return n <= 0 || n > spec.N ? T(0) : t.A2s[static_cast<std::size_t>(n - 1)]; };
  Mat<T> lhs(spec.N + 1, 1), rhs(spec.N + 1, 1);
  for (int n = 0; n <= spec.N; ++n) {
    const T& b = t.Bs[static_cast<std::size_t>(n)];
    const T& lam = t.lambdas[static_cast<std::size_t>(n)];
    lhs(n, 0) = T(2) * (g_n(spec.sigma, T(T(n) + T(3) / T(2))) * a2(n + 1) -
                        g_n(spec.sigma, T(T(n) - T(1) / T(2))) * a2(n));
    rhs(n, 0) = b * b + (T(2) * lam + p.d + d_offset) * b + p.e1;
  }
  return make_residual<T>("A^2 recurrence", lhs, rhs, tol);
}

enum class RealizationForm { Symmetric, Monic };

/// K1 = diag(lambda), K2 tridiagonal, K3 = [K1, K2].
/// Monic: superdiagonal 1, subdiagonal A_n^2 (all entries rational).
/// Symmetric: both off-diagonals A_n = +sqrt(A_n^2); for Rational this needs
/// every A_n^2 to be a rational square.
template <typename T>
OperatorTriple<T> build_realization(const IrrepSpec<T>& spec,
                                    RealizationForm form = RealizationForm::Monic) {
  const ValidityReport rep = validate(spec);
  if (!rep.valid()) {
    std::string why;
    for (const auto& m : rep.messages) why += (why.empty() ? "" : "; ") + m;
    throw InvalidSpec(why);
  }
  const MatrixElementTable<T> t = matrix_elements(spec);
  const Index dim = spec.dim();
  Mat<T> k1 = Mat<T>::Zero(dim, dim);
  Mat<T> k2 = Mat<T>::Zero(dim, dim);
  for (Index n = 0; n < dim; ++n) {
    k1(n, n) = t.lambdas[static_cast<std::size_t>(n)];
    k2(n, n) = t.Bs[static_cast<std::size_t>(n)];
  }
  for (Index n = 0; n + 1 < dim; ++n) {
    const T& a2 = t.A2s[static_cast<std::size_t>(n)];
    if (form == RealizationForm::Monic) {
      k2(n, n + 1) = T(1);
      k2(n + 1, n) = a2;
    } else {
      T a;
      if constexpr (is_exact_v<T>) {
        if (!exact_sqrt(a2, a))
          throw InvalidSpec("A_" + std::to_string(n + 1) +
                            "^2 is not a rational square; use the monic form or double");
      } else {
        a = std::sqrt(a2);
      }
      k2(n, n + 1) = a;
      k2(n + 1, n) = a;
    }
  }
  const char* label = form == RealizationForm::Monic ? "psi_n (K1 eigenbasis, monic)"
                                                     : "psi_n (K1 eigenbasis, symmetric)";
  return OperatorTriple<T>::from_pair(std::move(k1), std::move(k2), label);
}

/// D = diag(1, A_1, A_1 A_2, ...), with symmetric = D^{-1} monic D.
inline Vec<double> monic_to_symmetric_scaling(const IrrepSpec<double>& spec) {
  Vec<double> dvec(spec.dim());
  dvec(0) = 1.0;
  for (int n = 1; n <= spec.N; ++n) dvec(n) = dvec(n - 1) * std::sqrt(offdiag_A_squared(spec, n));
  return dvec;
}

/// K2 eigenvalue mu_s = -(s - nu)(s - nu + 1)/2.
template <typename T>
T dual_spectrum(const T& nu_offset, int s) {
  return lambda_n(nu_offset, s);
}

/// Spec of the dual representation (K1 <-> K2, K3 -> -K3, e1 <-> e2): its
/// sigma is the offset nu of the K2 spectrum. Requires rational dual roots;
/// returns std::nullopt otherwise or if no root pair truncates consistently.
std::optional<IrrepSpec<Rational>> dual_spec(const IrrepSpec<Rational>& spec);

/// Leonard-pair check: in the orthonormal K2-eigenbasis (unit vectors, first
/// nonzero entry positive) K1 is tridiagonal. Returns the largest entry
/// outside the three central diagonals relative to max |K1|.
double leonard_offtridiagonal(const IrrepSpec<double>& spec);

}  // namespace racah

#endif  // RACAH_IRREPS_HPP
