#ifndef RACAH_SUPERINTEGRABLE_HPP
#define RACAH_SUPERINTEGRABLE_HPP

// Generic three-parameter superintegrable system on the 2-sphere, modeled
// through the su(1,1) coupling: with nu_i = (k_i + 1)/2 and a_i = k_i^2 - 1/4,
//   L3 = 4 C12 - a1 - a2 + 1,  L1 = 4 C23 - a2 - a3 + 1,  L2 = 4 C31 - a3 - a1 + 1,
//   R = [L1, L2],  H = 4 C4 + 3/4.

#include "racah/algebra.hpp"
#include "racah/coupling.hpp"
#include "racah/errors.hpp"
#include "racah/linalg.hpp"
#include "racah/scalar.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <string>
#include <vector>

namespace racah {

template <typename T>
struct ModelParams {
  std::array<T, 3> k{T(1), T(1), T(1)};

  T a(int i) const { return k[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(i)] - T(1) / T(4); }
  T nu(int i) const { return (k[static_cast<std::size_t>(i)] + T(1)) / T(2); }

  CouplingSpec<T> coupling(int N) const { return {{nu(0), nu(1), nu(2)}, N}; }
};

template <typename T>
void check_model_params(const ModelParams<T>& p) {
  for (const T& ki : p.k)
    if (!(ki > T(-1))) throw InvalidParams("k_i must exceed -1 (got " + to_string(ki) + ")");
}

template <typename T>
struct SymmetryQuadruple {
  Mat<T> L1, L2, L3, R, H;
  ModelParams<T> params;
  int N = 0;
  Subspace where = Subspace::Eigenspace;
};

template <typename T>
SymmetryQuadruple<T> build_symmetries(const ModelParams<T>& params, int N,
                                      Subspace where = Subspace::Eigenspace) {
  check_model_params(params);
  const CouplingSpec<T> spec = params.coupling(N);
  check_coupling_spec(spec);
  Mat<T> c12 = grade_intermediate_casimir(spec.nu, N, Pair::P12);
  Mat<T> c23 = grade_intermediate_casimir(spec.nu, N, Pair::P23);
  Mat<T> c31 = grade_intermediate_casimir(spec.nu, N, Pair::P31);
  Mat<T> c4 = grade_total_casimir_sum(spec.nu, N);
  if (where == Subspace::Eigenspace) {
    const CoupledSpace<T> space(spec);
    c12 = space.restrict(c12);
    c23 = space.restrict(c23);
    c31 = space.restrict(c31);
    c4 = space.restrict(c4);
  }
  const Mat<T> id = identity<T>(c12.rows());
  SymmetryQuadruple<T> sq;
  sq.params = params;
  sq.N = N;
  sq.where = where;
  sq.L3 = T(4) * c12 - (params.a(0) + params.a(1) - T(1)) * id;
  sq.L1 = T(4) * c23 - (params.a(1) + params.a(2) - T(1)) * id;
  sq.L2 = T(4) * c31 - (params.a(2) + params.a(0) - T(1)) * id;
  sq.R = commutator(sq.L1, sq.L2);
  sq.H = T(4) * c4 + (T(3) / T(4)) * id;
  return sq;
}

inline constexpr double kDefaultSymmetryTolerance = 1e-9;

/// Residuals of
///   [L_i, R] = 4{L_i,L_j} - 4{L_i,L_k} - (8-16a_j)L_j + (8-16a_k)L_k + 8(a_j-a_k)
/// for (i,j,k) = (1,2,3), (2,3,1), (3,1,2); the cubic relation for R^2;
/// H = L1 + L2 + L3 + a1 + a2 + a3; and [H, L_i] = 0. `offset` is added to
/// the constant 8(a_j - a_k) to probe the checker.
template <typename T>
Report<T> verify_symmetry_algebra(const SymmetryQuadruple<T>& sq,
                                  double tol = kDefaultSymmetryTolerance, const T& offset = T(0)) {
  const std::array<const Mat<T>*, 3> L{&sq.L1, &sq.L2, &sq.L3};
  std::array<T, 3> a{sq.params.a(0), sq.params.a(1), sq.params.a(2)};
  const Mat<T> id = identity<T>(sq.L1.rows());
  Report<T> rep;
  rep.tolerance = tol;

  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    const Mat<T>& li = *L[i];
    const Mat<T>& lj = *L[j];
    const Mat<T>& lk = *L[k];
    Mat<T> rhs = T(4) * anticommutator(li, lj) - T(4) * anticommutator(li, lk) -
                 (T(8) - T(16) * a[j]) * lj + (T(8) - T(16) * a[k]) * lk +
                 (T(8) * (a[j] - a[k]) + offset) * id;
    rep.residuals.push_back(make_residual<T>(
        "[L" + std::to_string(i + 1) + ",R]", commutator(li, sq.R), rhs, tol));
  }

  const Mat<T>& l1 = sq.L1;
  const Mat<T>& l2 = sq.L2;
  const Mat<T>& l3 = sq.L3;
  const Mat<T> sym3 = l1 * l2 * l3 + l1 * l3 * l2 + l2 * l1 * l3 + l2 * l3 * l1 + l3 * l1 * l2 + l3 * l2 * l1;
  Mat<T> r2 = -(T(8) / T(3)) * sym3;
  for (int i = 0; i < 3; ++i) {
    const Mat<T>& li = *L[i];
    r2 -= (T(12) - T(16) * a[i]) * (li * li) + ((T(16) - T(176) * a[i]) / T(3)) * li +
          (T(32) / T(3)) * a[i] * id;
  }
  r2 += (T(52) / T(3)) * (anticommutator(l1, l2) + anticommutator(l2, l3) + anticommutator(l1, l3));
  r2 += (T(48) * (a[0] * a[1] + a[1] * a[2] + a[2] * a[0]) - T(64) * a[0] * a[1] * a[2]) * id;
  rep.residuals.push_back(make_residual<T>("R^2", Mat<T>(sq.R * sq.R), r2, tol));

  Mat<T> hsum = l1 + l2 + l3 + (a[0] + a[1] + a[2]) * id;
  rep.residuals.push_back(make_residual<T>("H=L1+L2+L3+a1+a2+a3", sq.H, hsum, tol));

  const Mat<T> zero = Mat<T>::Zero(sq.H.rows(), sq.H.cols());
  for (int i = 0; i < 3; ++i)
    rep.residuals.push_back(
        make_residual<T>("[H,L" + std::to_string(i + 1) + "]", commutator(sq.H, *L[i]), zero, tol));
  return rep;
}

/// E_N = [2(N+1) + k1 + k2 + k3]^2 - 1/4.
template <typename T>
T energy_closed_form(const ModelParams<T>& p, int N) {
  const T s = T(2 * (N + 1)) + p.k[0] + p.k[1] + p.k[2];
  return s * s - T(1) / T(4);
}

template <typename T>
struct EnergyLevel {
  int N = 0;
  T energy{0};          ///< closed form
  T from_casimir{0};    ///< 4 nu4 (nu4 - 1) + 3/4
  bool hamiltonian_scalar = false;  ///< H restricted to the eigenspace is energy * I
  int degeneracy = 0;   ///< distinct C12 eigenvalues on the eigenspace
  Index eigenspace_dim = 0;
};

namespace detail {

// Distinct eigenvalues of a restricted intermediate Casimir.
template <typename T>
int count_distinct_eigenvalues(const Mat<T>& c, const std::vector<T>& labels) {
  if constexpr (is_exact_v<T>) {
    // Every eigenvalue must be one of the nu(nu - 1); count those present and
    // require their multiplicities to fill the space.
    int distinct = 0;
    Index total = 0;
    for (const T& v : labels) {
      const T theta = v * (v - T(1));
      const Index nullity = c.rows() - rank(Mat<T>(c - theta * identity<T>(c.rows())));
      if (nullity > 0) ++distinct;
      total += nullity;
    }
    return total == c.rows() ? distinct : -1;
  } else {
    (void)labels;
    Eigen::SelfAdjointEigenSolver<Mat<double>> es(c);
    const auto& ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    int distinct = ev.size() > 0 ? 1 : 0;
    for (Index k = 1; k < ev.size(); ++k)
      if (ev(k) - ev(k - 1) > 1e-8 * scale) ++distinct;
    return distinct;
  }
}

}  // namespace detail

template <typename T>
std::vector<EnergyLevel<T>> energy_spectrum(const ModelParams<T>& params, int n_max) {
  check_model_params(params);
  std::vector<EnergyLevel<T>> out;
  for (int N = 0; N <= n_max; ++N) {
    const CouplingSpec<T> spec = params.coupling(N);
    const CoupledSpace<T> space(spec);
    EnergyLevel<T> lvl;
    lvl.N = N;
    lvl.energy = energy_closed_form(params, N);
    const T v4 = spec.nu4();
    lvl.from_casimir = T(4) * v4 * (v4 - T(1)) + T(3) / T(4);
    const Mat<T> h = T(4) * space.restrict(grade_total_casimir_sum(spec.nu, N)) +
                     (T(3) / T(4)) * identity<T>(space.dim());
    const auto scalar = scalar_multiple_of_identity(h, 1e-9);
    if constexpr (is_exact_v<T>) {
      lvl.hamiltonian_scalar = scalar && *scalar == lvl.energy;
    } else {
      lvl.hamiltonian_scalar = scalar && std::abs(*scalar - lvl.energy) <= 1e-9 * (1.0 + std::abs(lvl.energy));
    }
    lvl.eigenspace_dim = space.dim();
    const Mat<T> c12 = space.restrict(grade_intermediate_casimir(spec.nu, N, Pair::P12));
    lvl.degeneracy = detail::count_distinct_eigenvalues(c12, intermediate_labels(spec, Pair::P12));
    out.push_back(lvl);
  }
  return out;
}

/// Overlaps between the L-operator eigenbases inside one energy eigenspace.
/// The default pair is (L1, L3), i.e. (C23, C12).
template <typename T>
RacahTable<T> interbasis_expansion(const ModelParams<T>& params, int N, Pair rows = Pair::P23,
                                   Pair cols = Pair::P12) {
  check_model_params(params);
  return racah_coefficients(params.coupling(N), rows, cols);
}

/// [S, C^(ij)] on the grades N-1, N, N+1 (those that exist), where
/// S = 2 J0^(4) + J+^(4) + J-^(4) moves between adjacent grades.
template <typename T>
Residual<T> s_commutation_residual(const ModelParams<T>& params, int N, Pair pair,
                                   double tol = 1e-11) {
  check_model_params(params);
  const CouplingSpec<T> spec = params.coupling(N);
  const int lo = std::max(0, N - 1);
  const int hi = N + 1;
  std::vector<Index> offset;
  Index total = 0;
  for (int g = lo; g <= hi; ++g) {
    offset.push_back(total);
    total += static_cast<Index>(g + 1) * (g + 2) / 2;
  }
  Mat<T> s = Mat<T>::Zero(total, total);
  Mat<T> c = Mat<T>::Zero(total, total);
  for (int g = lo; g <= hi; ++g) {
    const Index o = offset[static_cast<std::size_t>(g - lo)];
    const Mat<T> cg = grade_intermediate_casimir(spec.nu, g, pair);
    c.block(o, o, cg.rows(), cg.cols()) = cg;
    const Mat<T> j0 = grade_total_J0(spec.nu, g);
    s.block(o, o, j0.rows(), j0.cols()) = T(2) * j0;
    if (g < hi) {
      const Mat<T> up = grade_raising(spec.nu, g);
      s.block(offset[static_cast<std::size_t>(g + 1 - lo)], o, up.rows(), up.cols()) = up;
    }
    if (g > lo) {
      const Mat<T> down = grade_lowering(spec.nu, g);
      s.block(offset[static_cast<std::size_t>(g - 1 - lo)], o, down.rows(), down.cols()) = down;
    }
  }
  return make_residual<T>("[S,C" + pair_name(pair) + "]", commutator(s, c),
                          Mat<T>::Zero(total, total), tol);
}

}  // namespace racah

#endif  // RACAH_SUPERINTEGRABLE_HPP
