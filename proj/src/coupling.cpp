#include "racah/coupling.hpp"

#include "racah/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace racah {

namespace {

Index grade_size(int grade) { return grade < 0 ? 0 : static_cast<Index>(grade + 1) * (grade + 2) / 2; }

template <typename T>
void require_basis(ProductBasis basis) {
  if constexpr (is_exact_v<T>) {
    if (basis == ProductBasis::Orthonormal)
      throw InvalidSpec("the orthonormal product basis has irrational entries; use double");
  }
}

// Coefficient of J+ |n> -> |n+1>.
template <typename T>
T raise_amp(const T& nu, int n, ProductBasis basis) {
  if (basis == ProductBasis::Monic) return T(1);
  if constexpr (is_exact_v<T>) {
    return T(0);
  } else {
    return std::sqrt((n + 1.0) * (n + 2.0 * nu));
  }
}

// Coefficient of J- |n> -> |n-1>.
template <typename T>
T lower_amp(const T& nu, int n, ProductBasis basis) {
  const T sq = T(n) * (T(n) + T(2) * nu - T(1));
  if (basis == ProductBasis::Monic) return sq;
  if constexpr (is_exact_v<T>) {
    return T(0);
  } else {
    return std::sqrt(sq);
  }
}

template <typename T>
T casimir_value(const T& nu) {
  return nu * (nu - T(1));
}

}  // namespace

std::pair<int, int> pair_indices(Pair pair) {
  switch (pair) {
    case Pair::P12:
      return {0, 1};
    case Pair::P23:
      return {1, 2};
    case Pair::P31:
      return {2, 0};
  }
  return {0, 1};
}

std::string pair_name(Pair pair) {
  switch (pair) {
    case Pair::P12:
      return "12";
    case Pair::P23:
      return "23";
    case Pair::P31:
      return "31";
  }
  return "?";
}

std::vector<std::array<int, 3>> coupled_basis(int N) {
  std::vector<std::array<int, 3>> out;
  if (N < 0) return out;
  for (int a = 0; a <= N; ++a)
    for (int b = 0; a + b <= N; ++b) out.push_back({a, b, N - a - b});
  return out;
}

Index basis_position(const std::array<int, 3>& s) {
  const Index N = s[0] + s[1] + s[2];
  const Index a = s[0];
  return a * (N + 1) - a * (a - 1) / 2 + s[1];
}

template <typename T>
Mat<T> grade_intermediate_casimir(const std::array<T, 3>& nu, int grade, Pair pair,
                                  ProductBasis basis) {
  require_basis<T>(basis);
  const auto [i, j] = pair_indices(pair);
  const auto states = coupled_basis(grade);
  const Index dim = grade_size(grade);
  Mat<T> c = Mat<T>::Zero(dim, dim);
  const T li = casimir_value(nu[i]);
  const T lj = casimir_value(nu[j]);
  for (Index col = 0; col < dim; ++col) {
    const auto& s = states[static_cast<std::size_t>(col)];
    c(col, col) = T(2) * (T(s[i]) + nu[i]) * (T(s[j]) + nu[j]) + li + lj;
    // -(J+^(i) J-^(j) + J-^(i) J+^(j))
    if (s[j] > 0) {
      auto t = s;
      ++t[i];
      --t[j];
      c(basis_position(t), col) -= raise_amp(nu[i], s[i], basis) * lower_amp(nu[j], s[j], basis);
    }
    if (s[i] > 0) {
      auto t = s;
      --t[i];
      ++t[j];
      c(basis_position(t), col) -= lower_amp(nu[i], s[i], basis) * raise_amp(nu[j], s[j], basis);
    }
  }
  return c;
}

template <typename T>
Mat<T> grade_total_J0(const std::array<T, 3>& nu, int grade) {
  const Index dim = grade_size(grade);
  Mat<T> j0 = Mat<T>::Zero(dim, dim);
  const T v = nu[0] + nu[1] + nu[2] + T(grade);
  for (Index k = 0; k < dim; ++k) j0(k, k) = v;
  return j0;
}

template <typename T>
Mat<T> grade_lowering(const std::array<T, 3>& nu, int grade, ProductBasis basis) {
  require_basis<T>(basis);
  const auto states = coupled_basis(grade);
  Mat<T> l = Mat<T>::Zero(grade_size(grade - 1), grade_size(grade));
  for (Index col = 0; col < static_cast<Index>(states.size()); ++col) {
    const auto& s = states[static_cast<std::size_t>(col)];
    for (int i = 0; i < 3; ++i) {
      if (s[i] == 0) continue;
      auto t = s;
      --t[i];
      l(basis_position(t), col) += lower_amp(nu[i], s[i], basis);
    }
  }
  return l;
}

template <typename T>
Mat<T> grade_raising(const std::array<T, 3>& nu, int grade, ProductBasis basis) {
  require_basis<T>(basis);
  const auto states = coupled_basis(grade);
  Mat<T> r = Mat<T>::Zero(grade_size(grade + 1), grade_size(grade));
  for (Index col = 0; col < static_cast<Index>(states.size()); ++col) {
    const auto& s = states[static_cast<std::size_t>(col)];
    for (int i = 0; i < 3; ++i) {
      auto t = s;
      ++t[i];
      r(basis_position(t), col) += raise_amp(nu[i], s[i], basis);
    }
  }
  return r;
}

template <typename T>
Vec<T> grade_gram(const std::array<T, 3>& nu, int grade) {
  const auto states = coupled_basis(grade);
  Vec<T> g(static_cast<Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) {
    T w(1);
    for (int i = 0; i < 3; ++i)
      for (int m = 0; m < states[k][i]; ++m) w *= T(m + 1) * (T(2) * nu[i] + T(m));
    g(static_cast<Index>(k)) = w;
  }
  return g;
}

template <typename T>
Mat<T> grade_total_casimir_sum(const std::array<T, 3>& nu, int grade, ProductBasis basis) {
  Mat<T> c = grade_intermediate_casimir(nu, grade, Pair::P12, basis) +
             grade_intermediate_casimir(nu, grade, Pair::P23, basis) +
             grade_intermediate_casimir(nu, grade, Pair::P31, basis);
  const T shift = casimir_value(nu[0]) + casimir_value(nu[1]) + casimir_value(nu[2]);
  return c - shift * identity<T>(c.rows());
}

template <typename T>
Mat<T> grade_total_casimir_direct(const std::array<T, 3>& nu, int grade, ProductBasis basis) {
  const Mat<T> j0 = grade_total_J0(nu, grade);
  Mat<T> c = j0 * j0 - j0;
  if (grade > 0) c -= grade_raising(nu, grade - 1, basis) * grade_lowering(nu, grade, basis);
  return c;
}

template <typename T>
CoupledSpace<T>::CoupledSpace(const CouplingSpec<T>& spec)
    : spec_(spec), product_basis_(default_basis<T>()) {
  check_coupling_spec(spec);
  const Index gdim = grade_size(spec.N);
  if (spec.N == 0) {
    basis_ = identity<T>(1);
    free_rows_ = {0};
    return;
  }
  const Mat<T> lower = grade_lowering(spec.nu, spec.N, product_basis_);
  if constexpr (is_exact_v<T>) {
    basis_ = nullspace(lower);
    free_rows_ = free_coordinates(lower);
  } else {
    Eigen::SelfAdjointEigenSolver<Mat<double>> es(lower.transpose() * lower);
    basis_ = es.eigenvectors().leftCols(spec.N + 1);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (es.eigenvalues()(spec.N) > 1e-9 * scale ||
        (spec.N + 1 < gdim && es.eigenvalues()(spec.N + 1) < 1e-9 * scale))
      throw DegenerateIntermediateSpectrum("J-^(4) kernel is not (N+1)-dimensional numerically");
  }
  if (basis_.cols() != spec.N + 1)
    throw DimensionMismatch("coupled space has dimension " + std::to_string(basis_.cols()) +
                            ", expected " + std::to_string(spec.N + 1));
}

template <typename T>
Mat<T> CoupledSpace<T>::restrict(const Mat<T>& grade_op) const {
  if (grade_op.rows() != grade_dim() || grade_op.cols() != grade_dim())
    throw DimensionMismatch("operator does not act on grade " + std::to_string(spec_.N));
  if constexpr (is_exact_v<T>) {
    const Mat<T> image = grade_op * basis_;
    Mat<T> out(dim(), dim());
    for (std::size_t r = 0; r < free_rows_.size(); ++r) out.row(static_cast<Index>(r)) = image.row(free_rows_[r]);
    return out;
  } else {
    return basis_.transpose() * grade_op * basis_;
  }
}

template <typename T>
Mat<T> intermediate_casimir(const CouplingSpec<T>& spec, Pair pair, Subspace where) {
  check_coupling_spec(spec);
  Mat<T> c = grade_intermediate_casimir(spec.nu, spec.N, pair);
  if (where == Subspace::FullGrade) return c;
  return CoupledSpace<T>(spec).restrict(c);
}

template <typename T>
Mat<T> total_casimir(const CouplingSpec<T>& spec, Subspace where) {
  check_coupling_spec(spec);
  Mat<T> c = grade_total_casimir_sum(spec.nu, spec.N);
  if (where == Subspace::FullGrade) return c;
  return CoupledSpace<T>(spec).restrict(c);
}

template <typename T>
ReducedConstants<T> coupling_constants(const CouplingSpec<T>& spec) {
  const T l1 = spec.lambda(0), l2 = spec.lambda(1), l3 = spec.lambda(2), l4 = spec.lambda(3);
  return {(l1 + l2 + l3 + l4) / T(2), (l1 - l4) * (l2 - l3) / T(4), (l1 - l2) * (l4 - l3) / T(4)};
}

template <typename T>
std::pair<OperatorTriple<T>, ReducedConstants<T>> kappa_triple(const CouplingSpec<T>& spec) {
  const CoupledSpace<T> space(spec);
  const T half(T(1) / T(2));
  Mat<T> k1 = -half * space.restrict(grade_intermediate_casimir(spec.nu, spec.N, Pair::P12));
  Mat<T> k2 = -half * space.restrict(grade_intermediate_casimir(spec.nu, spec.N, Pair::P23));
  auto ops = OperatorTriple<T>::from_pair(std::move(k1), std::move(k2), "coupled nu4-eigenspace");
  return {std::move(ops), coupling_constants(spec)};
}

template <typename T>
IrrepSpec<T> roots_for_coupling(const CouplingSpec<T>& spec) {
  const auto& nu = spec.nu;
  const T v4 = spec.nu4();
  IrrepSpec<T> out;
  out.roots = {T(1) - nu[0] - nu[1], nu[0] - nu[1], v4 + nu[2] - T(1), nu[2] - v4};
  out.sigma = T(1) - nu[0] - nu[1];
  out.N = spec.N;
  return out;
}

template <typename T>
std::vector<T> intermediate_labels(const CouplingSpec<T>& spec, Pair pair) {
  const auto [i, j] = pair_indices(pair);
  std::vector<T> out;
  for (int n = 0; n <= spec.N; ++n) out.push_back(spec.nu[i] + spec.nu[j] + T(n));
  return out;
}

namespace {

template <typename T>
void make_first_nonzero_positive(Vec<T>& v) {
  if constexpr (is_exact_v<T>) {
    for (Index k = 0; k < v.size(); ++k)
      if (!is_zero(v(k))) {
        if (v(k) < 0) v = -v;
        return;
      }
  } else {
    const double cut = 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff());
    for (Index k = 0; k < v.size(); ++k)
      if (std::abs(v(k)) > cut) {
        if (v(k) < 0) v = -v;
        return;
      }
  }
}

// Eigenvectors of an intermediate Casimir on the coupled space, in grade
// coordinates, ordered by the intermediate label ascending.
std::vector<Vec<Rational>> exact_eigenvectors(const CoupledSpace<Rational>& space, Pair pair) {
  const auto& spec = space.spec();
  const Mat<Rational> c = space.restrict(grade_intermediate_casimir(spec.nu, spec.N, pair));
  std::vector<Vec<Rational>> out;
  for (const Rational& label : intermediate_labels(spec, pair)) {
    const Rational theta = label * (label - Rational(1));
    const Mat<Rational> ker = nullspace(Mat<Rational>(c - theta * identity<Rational>(c.rows())));
    if (ker.cols() != 1)
      throw DegenerateIntermediateSpectrum("C" + pair_name(pair) + " eigenvalue " + to_string(theta) +
                                           " has multiplicity " + std::to_string(ker.cols()));
    Vec<Rational> v = space.lift(ker.col(0));
    make_first_nonzero_positive(v);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vec<double>> float_eigenvectors(const CoupledSpace<double>& space, Pair pair) {
  const auto& spec = space.spec();
  const Mat<double> c = space.restrict(grade_intermediate_casimir(spec.nu, spec.N, pair));
  Eigen::SelfAdjointEigenSolver<Mat<double>> es(c);
  const auto labels = intermediate_labels(spec, pair);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Index k = 0; k + 1 < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()(k + 1) - es.eigenvalues()(k) < 1e-10 * scale)
      throw DegenerateIntermediateSpectrum("C" + pair_name(pair) + " has a repeated eigenvalue");
  std::vector<Vec<double>> out;
  for (std::size_t n = 0; n < labels.size(); ++n) {
    // theta(nu) = nu(nu - 1) increases with n, so ascending order matches.
    const double theta = labels[n] * (labels[n] - 1.0);
    const double got = es.eigenvalues()(static_cast<Index>(n));
    if (std::abs(got - theta) > 1e-8 * (1.0 + std::abs(theta)))
      throw RacahError("C" + pair_name(pair) + " eigenvalue " + to_string(got) +
                       " does not match nu(nu-1) = " + to_string(theta));
    Vec<double> v = space.lift(es.eigenvectors().col(static_cast<Index>(n)));
    v.normalize();
    make_first_nonzero_positive(v);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

template <typename T>
RacahTable<T> racah_coefficients(const CouplingSpec<T>& spec, Pair rows, Pair cols) {
  const CoupledSpace<T> space(spec);
  RacahTable<T> table;
  table.spec = spec;
  table.rows_pair = rows;
  table.cols_pair = cols;
  table.row_labels = intermediate_labels(spec, rows);
  table.col_labels = intermediate_labels(spec, cols);
  const Index dim = spec.N + 1;
  table.coeffs = Mat<double>::Zero(dim, dim);
  if constexpr (is_exact_v<T>) {
    table.backend = "exact";
    const auto w = exact_eigenvectors(space, rows);
    const auto v = exact_eigenvectors(space, cols);
    const Vec<Rational> gram = grade_gram(spec.nu, spec.N);
    auto inner = [&](const Vec<Rational>& a, const Vec<Rational>& b) {
      Rational s(0);
      for (Index k = 0; k < a.size(); ++k) s += a(k) * b(k) * gram(k);
      return s;
    };
    Mat<Rational> sq(dim, dim);
    for (Index r = 0; r < dim; ++r) {
      const Rational wn = inner(w[static_cast<std::size_t>(r)], w[static_cast<std::size_t>(r)]);
      for (Index c = 0; c < dim; ++c) {
        const Rational vn = inner(v[static_cast<std::size_t>(c)], v[static_cast<std::size_t>(c)]);
        const Rational ov = inner(w[static_cast<std::size_t>(r)], v[static_cast<std::size_t>(c)]);
        const Rational s = ov * ov / (wn * vn);
        sq(r, c) = ov < 0 ? Rational(-s) : s;
        const double mag = std::sqrt(s.convert_to<double>());
        table.coeffs(r, c) = ov < 0 ? -mag : mag;
      }
    }
    table.signed_squares = std::move(sq);
  } else {
    table.backend = "float";
    const auto w = float_eigenvectors(space, rows);
    const auto v = float_eigenvectors(space, cols);
    for (Index r = 0; r < dim; ++r)
      for (Index c = 0; c < dim; ++c)
        table.coeffs(r, c) = w[static_cast<std::size_t>(r)].dot(v[static_cast<std::size_t>(c)]);
  }
  return table;
}

double orthogonality_residual(const Mat<double>& table) {
  const Mat<double> id = Mat<double>::Identity(table.rows(), table.cols());
  const double a = (table * table.transpose() - id).cwiseAbs().maxCoeff();
  const double b = (table.transpose() * table - id).cwiseAbs().maxCoeff();
  return std::max(a, b);
}

#define RACAH_INSTANTIATE(T)                                                                        \
  template Mat<T> grade_intermediate_casimir(const std::array<T, 3>&, int, Pair, ProductBasis);    \
  template Mat<T> grade_total_J0(const std::array<T, 3>&, int);                                    \
  template Mat<T> grade_lowering(const std::array<T, 3>&, int, ProductBasis);                      \
  template Mat<T> grade_raising(const std::array<T, 3>&, int, ProductBasis);                       \
  template Vec<T> grade_gram(const std::array<T, 3>&, int);                                        \
  template Mat<T> grade_total_casimir_sum(const std::array<T, 3>&, int, ProductBasis);             \
  template Mat<T> grade_total_casimir_direct(const std::array<T, 3>&, int, ProductBasis);          \
  template class CoupledSpace<T>;                                                                  \
  template Mat<T> intermediate_casimir(const CouplingSpec<T>&, Pair, Subspace);                    \
  template Mat<T> total_casimir(const CouplingSpec<T>&, Subspace);                                 \
  template ReducedConstants<T> coupling_constants(const CouplingSpec<T>&);                         \
  template std::pair<OperatorTriple<T>, ReducedConstants<T>> kappa_triple(const CouplingSpec<T>&); \
  template IrrepSpec<T> roots_for_coupling(const CouplingSpec<T>&);                                \
  template std::vector<T> intermediate_labels(const CouplingSpec<T>&, Pair);                       \
  template RacahTable<T> racah_coefficients(const CouplingSpec<T>&, Pair, Pair);

RACAH_INSTANTIATE(Rational)
RACAH_INSTANTIATE(double)

#undef RACAH_INSTANTIATE

}  // namespace racah
