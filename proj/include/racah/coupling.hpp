#ifndef RACAH_COUPLING_HPP
#define RACAH_COUPLING_HPP

// Three-fold tensor product of su(1,1) positive-discrete-series irreps.
//
// Grade N is spanned by product states (n1, n2, n3) with n1 + n2 + n3 = N.
// Two bases are supported:
//   Monic        e_n = J+^n |nu, 0>, so J+ e_n = e_{n+1},
//                J- e_n = n(n + 2nu - 1) e_{n-1}; entries rational for
//                rational nu; Gram matrix diag(prod_i n_i! (2 nu_i)_{n_i}).
//   Orthonormal  the canonical basis |nu, n>; operators symmetric, double only.
//
// The coupled space is the nu4 = nu1 + nu2 + nu3 + N eigenspace of the total
// Casimir inside grade N, i.e. the kernel of J-^(4) there (dimension N+1).

#include "racah/algebra.hpp"
#include "racah/irreps.hpp"
#include "racah/scalar.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace racah {

template <typename T>
struct CouplingSpec {
  std::array<T, 3> nu{T(1), T(1), T(1)};
  int N = 0;

  T nu4() const { return nu[0] + nu[1] + nu[2] + T(N); }

  /// Casimir eigenvalue nu_i (nu_i - 1) for i = 0..3 (3 is the total).
  T lambda(int i) const {
    const T v = i == 3 ? nu4() : nu[static_cast<std::size_t>(i)];
    return v * (v - T(1));
  }
};

template <typename T>
void check_coupling_spec(const CouplingSpec<T>& spec) {
  if (spec.N < 0) throw InvalidSpec("N must be nonnegative");
  for (const T& v : spec.nu)
    if (!(v > T(0))) throw InvalidSpec("nu_i must be positive");
}

enum class Pair { P12, P23, P31 };

/// Index pair (i, j) of a Pair, zero-based.
std::pair<int, int> pair_indices(Pair pair);
std::string pair_name(Pair pair);

enum class ProductBasis { Monic, Orthonormal };

template <typename T>
constexpr ProductBasis default_basis() {
  return is_exact_v<T> ? ProductBasis::Monic : ProductBasis::Orthonormal;
}

/// Product states of grade N in lexicographic order.
std::vector<std::array<int, 3>> coupled_basis(int N);

/// Position of a product state within `coupled_basis(n1 + n2 + n3)`.
Index basis_position(const std::array<int, 3>& state);

// Operators on a single grade (or between adjacent grades).

template <typename T>
Mat<T> grade_intermediate_casimir(const std::array<T, 3>& nu, int grade, Pair pair,
                                  ProductBasis basis = default_basis<T>());

/// J0^(4) on a grade (diagonal).
template <typename T>
Mat<T> grade_total_J0(const std::array<T, 3>& nu, int grade);

/// J-^(4) from grade `grade` to grade - 1 (empty rows for grade 0).
template <typename T>
Mat<T> grade_lowering(const std::array<T, 3>& nu, int grade, ProductBasis basis = default_basis<T>());

/// J+^(4) from grade `grade` to grade + 1.
template <typename T>
Mat<T> grade_raising(const std::array<T, 3>& nu, int grade, ProductBasis basis = default_basis<T>());

/// Gram matrix diagonal of the monic basis on a grade.
template <typename T>
Vec<T> grade_gram(const std::array<T, 3>& nu, int grade);

/// Total Casimir on a grade as C12 + C23 + C31 - C1 - C2 - C3.
template <typename T>
Mat<T> grade_total_casimir_sum(const std::array<T, 3>& nu, int grade,
                               ProductBasis basis = default_basis<T>());

/// Total Casimir on a grade as (J0)^2 - J+ J- - J0 of the summed generators.
template <typename T>
Mat<T> grade_total_casimir_direct(const std::array<T, 3>& nu, int grade,
                                  ProductBasis basis = default_basis<T>());

/// Restriction of grade operators to the coupled space.
///
/// Exact backend: kernel basis K of J-^(4) from the RREF; an invariant operator
/// M restricts to the rows of M K at the free coordinates (K is the identity
/// there). Float backend: orthonormal kernel basis Q, restriction Q^T M Q.
template <typename T>
class CoupledSpace {
 public:
  explicit CoupledSpace(const CouplingSpec<T>& spec);

  Index dim() const { return basis_.cols(); }
  Index grade_dim() const { return basis_.rows(); }
  ProductBasis product_basis() const { return product_basis_; }
  const CouplingSpec<T>& spec() const { return spec_; }

  /// Columns span the coupled space, in grade coordinates.
  const Mat<T>& basis() const { return basis_; }

  Mat<T> restrict(const Mat<T>& grade_op) const;

  /// Grade coordinates of a coupled-space vector.
  Vec<T> lift(const Vec<T>& y) const { return basis_ * y; }

 private:
  CouplingSpec<T> spec_;
  ProductBasis product_basis_;
  Mat<T> basis_;
  std::vector<Index> free_rows_;
};

enum class Subspace { FullGrade, Eigenspace };

template <typename T>
Mat<T> intermediate_casimir(const CouplingSpec<T>& spec, Pair pair,
                            Subspace where = Subspace::Eigenspace);

/// Total Casimir: nu4(nu4 - 1) I on the eigenspace; on the full grade it has
/// eigenvalues nu4'(nu4' - 1) for every nu4' = nu1 + nu2 + nu3 + N', N' <= N.
template <typename T>
Mat<T> total_casimir(const CouplingSpec<T>& spec, Subspace where = Subspace::Eigenspace);

/// d = (l1+l2+l3+l4)/2, e1 = (l1-l4)(l2-l3)/4, e2 = (l1-l2)(l4-l3)/4.
template <typename T>
ReducedConstants<T> coupling_constants(const CouplingSpec<T>& spec);

/// kappa1 = -C12/2, kappa2 = -C23/2, kappa3 = [kappa1, kappa2] on the
/// coupled space.
template <typename T>
std::pair<OperatorTriple<T>, ReducedConstants<T>> kappa_triple(const CouplingSpec<T>& spec);

/// xi = (1-nu1-nu2, nu1-nu2, nu4+nu3-1, nu3-nu4), sigma = 1-nu1-nu2.
template <typename T>
IrrepSpec<T> roots_for_coupling(const CouplingSpec<T>& spec);

/// Eigenvalue labels nu_ij = nu_i + nu_j + n for n = 0..N.
template <typename T>
std::vector<T> intermediate_labels(const CouplingSpec<T>& spec, Pair pair);

inline constexpr const char* kSignConvention = "first-nonzero-positive";

template <typename T>
struct RacahTable {
  CouplingSpec<T> spec;
  Pair rows_pair = Pair::P23;
  Pair cols_pair = Pair::P12;
  std::vector<T> row_labels;  ///< nu_23 values, n23 ascending
  std::vector<T> col_labels;  ///< nu_12 values, n12 ascending
  Mat<double> coeffs;
  /// Exact backend: sign(c) c^2 for each entry.
  std::optional<Mat<Rational>> signed_squares;
  std::string sign_convention = kSignConvention;
  std::string backend;
};

/// Overlaps between normalized eigenvectors of the two intermediate Casimirs
/// on the coupled space. Each eigenvector has its first nonzero coefficient in
/// the lexicographic product basis positive.
template <typename T>
RacahTable<T> racah_coefficients(const CouplingSpec<T>& spec, Pair rows = Pair::P23,
                                 Pair cols = Pair::P12);

/// Largest |T T^t - I| and |T^t T - I| entry.
double orthogonality_residual(const Mat<double>& table);

}  // namespace racah

#endif  // RACAH_COUPLING_HPP
