#ifndef RACAH_RACAH_POLY_HPP
#define RACAH_RACAH_POLY_HPP

// Racah polynomials R_n(lambda(x); alpha, beta, gamma, delta) on the lattice
// lambda(x) = x(x + gamma + delta + 1), x = 0..N, evaluated three ways:
//   hypergeometric  terminating 4F3(-n, n+a+b+1, -x, x+g+d+1; a+1, b+d+1, g+1; 1)
//   recurrence      lambda R_n = C_n R_{n+1} - (C_n + D_n) R_n + D_n R_{n-1}
//   difference      [B(x) T+ - (B(x) + E(x)) + E(x) T-] R_n = mu_n R_n

#include "racah/algebra.hpp"
#include "racah/errors.hpp"
#include "racah/irreps.hpp"
#include "racah/linalg.hpp"
#include "racah/scalar.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <vector>

namespace racah {

template <typename T>
struct RacahParams {
  T alpha{0}, beta{0}, gamma{0}, delta{0};
  int N = 0;

  /// Lattice point lambda(x) = x(x + gamma + delta + 1).
  T lattice(const T& x) const { return x * (x + gamma + delta + T(1)); }
  T lattice(int x) const { return lattice(T(x)); }

  /// Which of alpha+1 = -N, beta+delta+1 = -N, gamma+1 = -N hold.
  std::array<bool, 3> termination() const {
    const T m = T(-N);
    return {alpha + T(1) == m, beta + delta + T(1) == m, gamma + T(1) == m};
  }
  bool terminates() const {
    const auto t = termination();
    return t[0] || t[1] || t[2];
  }

  /// Parameters of the dual family: (gamma, delta, alpha, beta).
  RacahParams dual() const { return {gamma, delta, alpha, beta, N}; }
};

template <typename T>
using GridFunction = Vec<T>;

template <typename T>
T pochhammer(const T& a, int k) {
  T r(1);
  for (int i = 0; i < k; ++i) r *= a + T(i);
  return r;
}

/// Leading coefficient in lambda of the bare 4F3, so monic = bare / lead.
template <typename T>
T monic_prefactor(int n, const RacahParams<T>& p) {
  const T den = pochhammer(T(T(n) + p.alpha + p.beta + T(1)), n);
  if (is_zero(den))
    throw PochhammerPole("(n+alpha+beta+1)_n = 0 at n = " + std::to_string(n));
  return pochhammer(T(p.alpha + T(1)), n) * pochhammer(T(p.beta + p.delta + T(1)), n) *
         pochhammer(T(p.gamma + T(1)), n) / den;
}

/// Terminating 4F3 sum over k = 0..min(n, x), accumulated by term ratios.
/// Denominator Pochhammer factors are scanned before summing.
template <typename T>
T racah_hypergeometric(int n, int x, const RacahParams<T>& p, bool monic = false) {
  if (n < 0 || x < 0) throw InvalidSpec("n and x must be nonnegative");
  const int kmax = std::min(n, x);
  const T a1 = p.alpha + T(1);
  const T a2 = p.beta + p.delta + T(1);
  const T a3 = p.gamma + T(1);
  for (int k = 0; k < kmax; ++k) {
    if (is_zero(T(a1 + T(k))) || is_zero(T(a2 + T(k))) || is_zero(T(a3 + T(k))))
      throw PochhammerPole("denominator factor vanishes at k = " + std::to_string(k) +
                           " (n = " + std::to_string(n) + ", x = " + std::to_string(x) + ")");
  }
  const T b1 = T(n) + p.alpha + p.beta + T(1);
  const T b2 = T(x) + p.gamma + p.delta + T(1);
  T term(1), sum(1);
  for (int k = 0; k < kmax; ++k) {
    const T kk(k);
    term *= (kk - T(n)) * (b1 + kk) * (kk - T(x)) * (b2 + kk);
    term /= (a1 + kk) * (a2 + kk) * (a3 + kk) * (kk + T(1));
    sum += term;
  }
  return monic ? T(monic_prefactor(n, p) * sum) : sum;
}

/// Forward coefficient C_n of the three-term recurrence.
template <typename T>
T recurrence_C(int n, const RacahParams<T>& p) {
  const T ab = p.alpha + p.beta;
  const T den = (T(2 * n) + ab + T(1)) * (T(2 * n) + ab + T(2));
  if (is_zero(den)) throw RecurrenceBreakdown("C_" + std::to_string(n) + " has a zero denominator");
  const T nn(n);
  return (nn + p.alpha + T(1)) * (nn + ab + T(1)) * (nn + p.gamma + T(1)) *
         (nn + p.beta + p.delta + T(1)) / den;
}

/// Backward coefficient D_n, with denominator (2n+a+b)(2n+a+b+1).
template <typename T>
T recurrence_D(int n, const RacahParams<T>& p) {
  if (n == 0) return T(0);
  const T ab = p.alpha + p.beta;
  const T den = (T(2 * n) + ab) * (T(2 * n) + ab + T(1));
  if (is_zero(den)) throw RecurrenceBreakdown("D_" + std::to_string(n) + " has a zero denominator");
  const T nn(n);
  return nn * (nn + p.beta) * (nn + p.alpha - p.delta) * (nn + ab - p.gamma) / den;
}

/// R_0..R_nmax at lattice point x by forward recurrence from R_0 = 1.
template <typename T>
std::vector<T> racah_recurrence_column(int nmax, int x, const RacahParams<T>& p) {
  const T lam = p.lattice(x);
  std::vector<T> r{T(1)};
  T prev(0);
  for (int n = 0; n < nmax; ++n) {
    const T c = recurrence_C(n, p);
    if (is_zero(c))
      throw RecurrenceBreakdown("C_" + std::to_string(n) + " = 0 before reaching degree " +
                                std::to_string(nmax));
    const T d = recurrence_D(n, p);
    const T cur = r.back();
    const T next = ((lam + c + d) * cur - d * prev) / c;
    prev = cur;
    r.push_back(next);
  }
  return r;
}

template <typename T>
T racah_recurrence_eval(int n, int x, const RacahParams<T>& p, bool monic = false) {
  if (n < 0 || x < 0) throw InvalidSpec("n and x must be nonnegative");
  const T value = racah_recurrence_column(n, x, p).back();
  return monic ? T(monic_prefactor(n, p) * value) : value;
}

namespace detail {

// num / den. At the natural boundary (E at x = 0, B at x = N) a vanishing
// numerator gives 0 whatever the denominator; anywhere else 0/0 is a pole too.
template <typename T>
T coefficient_ratio(const T& num, const T& den, const char* name, int x, bool boundary) {
  if (boundary && is_zero(num)) return T(0);
  if (is_zero(den))
    throw CoefficientPole(std::string(name) + "(" + std::to_string(x) + ") has a zero denominator");
  return num / den;
}

}  // namespace detail

template <typename T>
T difference_B(int x, const RacahParams<T>& p) {
  const T xx(x);
  const T gd = p.gamma + p.delta;
  const T num = (xx + p.alpha + T(1)) * (xx + p.beta + p.delta + T(1)) * (xx + p.gamma + T(1)) *
                (xx + gd + T(1));
  const T den = (T(2) * xx + gd + T(1)) * (T(2) * xx + gd + T(2));
  return detail::coefficient_ratio(num, den, "B", x, x == p.N);
}

template <typename T>
T difference_E(int x, const RacahParams<T>& p) {
  const T xx(x);
  const T gd = p.gamma + p.delta;
  const T num = xx * (xx - p.alpha + gd) * (xx - p.beta + p.gamma) * (xx + p.delta);
  const T den = (T(2) * xx + gd) * (T(2) * xx + gd + T(1));
  return detail::coefficient_ratio(num, den, "E", x, x == 0);
}

/// mu_n = n(n + alpha + beta + 1).
template <typename T>
T difference_eigenvalue(int n, const RacahParams<T>& p) {
  return T(n) * (T(n) + p.alpha + p.beta + T(1));
}

/// Matrix of the difference operator on the grid x = 0..N.
template <typename T>
Mat<T> difference_matrix(const RacahParams<T>& p) {
  const Index dim = p.N + 1;
  Mat<T> k2 = Mat<T>::Zero(dim, dim);
  for (int x = 0; x <= p.N; ++x) {
    const T b = difference_B(x, p);
    const T e = difference_E(x, p);
    if (x < p.N) {
      k2(x, x + 1) = b;
    } else if (!is_zero(b)) {
      throw CoefficientPole("B(N) != 0: the parameters do not truncate the grid");
    }
    if (x > 0) k2(x, x - 1) = e;
    k2(x, x) = -(b + e);
  }
  return k2;
}

template <typename T>
GridFunction<T> difference_apply(const GridFunction<T>& f, const RacahParams<T>& p) {
  if (f.size() != p.N + 1)
    throw DimensionMismatch("grid function has " + std::to_string(f.size()) + " values, expected " +
                            std::to_string(p.N + 1));
  return difference_matrix(p) * f;
}

/// Eigenfunction of the difference operator for mu_n, normalized by f(0) = 1,
/// built by sweeping the tridiagonal rows x = 0..N-1 upward.
template <typename T>
GridFunction<T> difference_eigenfunction(int n, const RacahParams<T>& p) {
  const T mu = difference_eigenvalue(n, p);
  GridFunction<T> f = GridFunction<T>::Zero(p.N + 1);
  f(0) = T(1);
  for (int x = 0; x < p.N; ++x) {
    const T b = difference_B(x, p);
    if (is_zero(b)) throw RecurrenceBreakdown("B(" + std::to_string(x) + ") = 0 inside the grid");
    const T e = difference_E(x, p);
    const T below = x > 0 ? T(f(x - 1)) : T(0);
    f(x + 1) = ((mu + b + e) * f(x) - e * below) / b;
  }
  return f;
}

/// Structure constants realized by the difference/recurrence pair.
template <typename T>
StructureConstants<T> difference_structure_constants(const RacahParams<T>& p) {
  const T& a = p.alpha;
  const T& b = p.beta;
  const T& g = p.gamma;
  const T& dl = p.delta;
  StructureConstants<T> sc;
  sc.a1 = T(-2);
  sc.a2 = T(-2);
  sc.c1 = -(a + b) * (T(2) + a + b);
  sc.c2 = -(g + dl) * (T(2) + g + dl);
  sc.e1 = -(a + T(1)) * (a + b) * (b + dl + T(1)) * (g + T(1));
  sc.e2 = -(a + T(1)) * (b + dl + T(1)) * (g + T(1)) * (g + dl);
  sc.d = b * (dl - g - T(2)) - a * (T(2) * b + g + dl + T(2)) - T(2) * (g + T(1)) * (dl + T(1));
  return sc;
}

/// K1 = diag lambda(x), K2 = difference operator, K3 = [K1, K2].
template <typename T>
std::pair<OperatorTriple<T>, StructureConstants<T>> realize_difference_algebra(
    const RacahParams<T>& p) {
  Mat<T> k1 = Mat<T>::Zero(p.N + 1, p.N + 1);
  for (int x = 0; x <= p.N; ++x) k1(x, x) = p.lattice(x);
  auto ops = OperatorTriple<T>::from_pair(std::move(k1), difference_matrix(p), "grid x = 0..N");
  return {std::move(ops), difference_structure_constants(p)};
}

/// K3 = (2x+g+d) E(x) T- - (2x+g+d+2) B(x) T+, assembled directly.
template <typename T>
Mat<T> difference_K3(const RacahParams<T>& p) {
  const Index dim = p.N + 1;
  Mat<T> k3 = Mat<T>::Zero(dim, dim);
  const T gd = p.gamma + p.delta;
  for (int x = 0; x <= p.N; ++x) {
    if (x > 0) k3(x, x - 1) = (T(2 * x) + gd) * difference_E(x, p);
    if (x < p.N) k3(x, x + 1) = -(T(2 * x) + gd + T(2)) * difference_B(x, p);
  }
  return k3;
}

/// Closed forms of the reduced constants in terms of (alpha, beta, gamma,
/// delta). `d_alt` is the second, dual-looking expression for d.
template <typename T>
struct ReducedClosedForm {
  ReducedConstants<T> constants;
  T d_alt{0};
};

template <typename T>
ReducedClosedForm<T> reduced_constants_closed_form(const RacahParams<T>& p) {
  const T h(T(1) / T(2));
  const T amb = (p.alpha - p.beta) * h;
  const T apb = (p.alpha + p.beta) * h;
  const T gmd = (p.gamma - p.delta) * h;
  const T gpd = (p.gamma + p.delta) * h;
  const T q(T(1) / T(4));
  ReducedClosedForm<T> out;
  out.constants.e1 = q * amb * apb * (apb - p.gamma) * (amb - p.delta);
  out.constants.e2 = q * gmd * gpd * (gpd - p.alpha) * (gmd - p.beta);
  const T a3 = gpd - p.alpha;
  const T a4 = gmd - p.beta;
  out.constants.d = q * (gmd * gmd + gpd * gpd + a3 * a3 + a4 * a4 - T(2));
  const T b3 = apb - p.gamma;
  const T b4 = amb - p.delta;
  out.d_alt = q * (amb * amb + apb * apb + b3 * b3 + b4 * b4 - T(2));
  return out;
}

/// Compares R_n(lambda(x); a, b, g, d) with R_x(lambda'(n); g, d, a, b).
template <typename T>
Report<T> duality_check(const RacahParams<T>& p, int n, int x,
                        double tol = kDefaultRelationTolerance) {
  Mat<T> lhs(1, 1), rhs(1, 1);
  lhs(0, 0) = racah_hypergeometric(n, x, p);
  rhs(0, 0) = racah_hypergeometric(x, n, p.dual());
  Report<T> rep;
  rep.tolerance = tol;
  rep.residuals.push_back(make_residual<T>("R_n(lambda(x)) = R_x(lambda'(n))", lhs, rhs, tol));
  return rep;
}

/// Monic Jacobi matrix: diagonal -(C_n + D_n), superdiagonal 1, subdiagonal
/// C_{n-1} D_n. Its eigenvalues are lambda(0..N).
template <typename T>
Mat<T> monic_jacobi_matrix(const RacahParams<T>& p) {
  const Index dim = p.N + 1;
  Mat<T> j = Mat<T>::Zero(dim, dim);
  for (int n = 0; n <= p.N; ++n) {
    j(n, n) = -(recurrence_C(n, p) + recurrence_D(n, p));
    if (n < p.N) {
      j(n, n + 1) = T(1);
      j(n + 1, n) = recurrence_C(n, p) * recurrence_D(n + 1, p);
    }
  }
  return j;
}

template <typename T>
struct IrrepRacahMap {
  RacahParams<T> params;
  T tau{0};
};

/// Roots in terms of Racah parameters:
///   xi1 = -(a+b)/2, xi2 = (b-a)/2 + d, xi3 = (b-a)/2, xi4 = g - (a+b)/2.
template <typename T>
std::array<T, 4> racah_to_roots(const RacahParams<T>& p) {
  const T h(T(1) / T(2));
  const T s = (p.alpha + p.beta) * h;
  const T t = (p.beta - p.alpha) * h;
  return {-s, t + p.delta, t, p.gamma - s};
}

/// Shift tau = (2 + g + d)(g + d)/8 relating x~ = -2(x + tau) to lambda.
template <typename T>
T racah_shift(const RacahParams<T>& p) {
  const T gd = p.gamma + p.delta;
  return (T(2) + gd) * gd / T(8);
}

/// Racah parameters of an irrep truncated by xi1 = sigma, xi4 = sigma - N - 1.
template <typename T>
IrrepRacahMap<T> irrep_to_racah(const IrrepSpec<T>& spec) {
  const T& x1 = spec.roots[0];
  const T& x2 = spec.roots[1];
  const T& x3 = spec.roots[2];
  const T& x4 = spec.roots[3];
  if (!near_equal(x1, spec.sigma) || !near_equal(x4, T(spec.sigma - T(spec.N) - T(1))))
    throw PatternMismatch("only xi1 = sigma, xi4 = sigma - N - 1 is supported");
  IrrepRacahMap<T> out;
  out.params.alpha = -x1 - x3;
  out.params.beta = x3 - x1;
  out.params.delta = x2 - x3;
  out.params.gamma = x4 - x1;
  out.params.N = spec.N;
  out.tau = racah_shift(out.params);
  return out;
}

/// Monic recurrence coefficients of the irrep in x~ = -2(x + tau):
///   B~_n = (s-n)(n-s+1)/2 + P/(2(s-n)(n-s+1)) + S1/4 - (2 tau + 1/2)
///   A~_n^2 = prod_j ((s-n)^2 - xi_j^2) / ((2n-2s)^2 (2n-2s+1)(2n-2s-1))
template <typename T>
std::pair<T, T> irrep_monic_coefficients(const IrrepSpec<T>& spec, const T& tau, int n) {
  const T& s = spec.sigma;
  const T u = (s - T(n)) * (T(n) - s + T(1));
  if (is_zero(u)) throw SingularLambda("(sigma - n)(n - sigma + 1) = 0 at n = " + std::to_string(n));
  const T p = spec.roots[0] * spec.roots[1] * spec.roots[2] * spec.roots[3];
  T s1(0);
  for (const T& xi : spec.roots) s1 += xi * xi;
  const T b = u / T(2) + p / (T(2) * u) + s1 / T(4) - (T(2) * tau + T(1) / T(2));
  T a2(0);
  if (n > 0) a2 = T(4) * offdiag_A_squared(spec, n);
  return {b, a2};
}

/// Orthonormal Racah table: entry (x, n) = p_n(lambda(x)) / |p(lambda(x))|
/// where p_n are the orthonormal polynomials of the monic Jacobi matrix.
/// Needs C_{n-1} D_n > 0 for n = 1..N.
template <typename T>
Mat<double> normalized_racah_table(const RacahParams<T>& p) {
  const Index dim = p.N + 1;
  std::vector<double> scale(static_cast<std::size_t>(dim), 1.0);
  for (int n = 1; n <= p.N; ++n) {
    const double u = to_double(T(recurrence_C(n - 1, p) * recurrence_D(n, p)));
    if (!(u > 0.0))
      throw InvalidSpec("C_{n-1} D_n is not positive at n = " + std::to_string(n));
    scale[static_cast<std::size_t>(n)] = scale[static_cast<std::size_t>(n - 1)] * std::sqrt(u);
  }
  Mat<double> w(dim, dim);
  for (int x = 0; x <= p.N; ++x) {
    for (int n = 0; n <= p.N; ++n)
      w(x, n) = to_double(racah_hypergeometric(n, x, p, true)) / scale[static_cast<std::size_t>(n)];
    w.row(x).normalize();
  }
  return w;
}

}  // namespace racah

#endif  // RACAH_RACAH_POLY_HPP
