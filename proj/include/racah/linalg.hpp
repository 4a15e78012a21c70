#ifndef RACAH_LINALG_HPP
#define RACAH_LINALG_HPP

// Small dense helpers that work for both scalar backends.

#include "racah/errors.hpp"
#include "racah/scalar.hpp"

#include <optional>
#include <string>
#include <vector>

namespace racah {

template <typename T>
Mat<T> commutator(const Mat<T>& a, const Mat<T>& b) {
  return a * b - b * a;
}

template <typename T>
Mat<T> anticommutator(const Mat<T>& a, const Mat<T>& b) {
  return a * b + b * a;
}

template <typename T>
Mat<T> identity(Index n) {
  return Mat<T>::Identity(n, n);
}

/// Entrywise max-abs norm; 0 for empty matrices.
template <typename T>
T max_abs(const Mat<T>& m) {
  T best(0);
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      T v = abs_value(m(i, j));
      if (v > best) best = v;
    }
  return best;
}

/// Returns q when m == q * I (exactly for Rational, within `tol` relative for
/// double), std::nullopt otherwise.
template <typename T>
std::optional<T> scalar_multiple_of_identity(const Mat<T>& m, double tol = 1e-10) {
  if (m.rows() != m.cols() || m.rows() == 0) return std::nullopt;
  T q = m(0, 0);
  Mat<T> diff = m - q * identity<T>(m.rows());
  if constexpr (is_exact_v<T>) {
    if (!is_zero(max_abs(diff))) return std::nullopt;
  } else {
    if (max_abs(diff) > tol * (1.0 + std::abs(q))) return std::nullopt;
  }
  return q;
}

template <typename T>
void require_square(const Mat<T>& m, const char* what) {
  if (m.rows() != m.cols())
    throw DimensionMismatch(std::string(what) + " is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
}

/// Reduced row echelon form. Pivot positions are appended to `pivots`.
/// For double, entries below `tol` times the largest entry count as zero.
template <typename T>
Mat<T> rref(Mat<T> a, std::vector<Index>& pivots, double tol = 1e-12) {
  pivots.clear();
  const Index rows = a.rows();
  const Index cols = a.cols();
  T scale(1);
  if constexpr (!is_exact_v<T>) scale = std::max(T(1), max_abs(a));
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index best = -1;
    if constexpr (is_exact_v<T>) {
      for (Index i = r; i < rows; ++i)
        if (!is_zero(a(i, c))) {
          best = i;
          break;
        }
    } else {
      T big(0);
      for (Index i = r; i < rows; ++i)
        if (std::abs(a(i, c)) > big) {
          big = std::abs(a(i, c));
          best = i;
        }
      if (big <= tol * scale) best = -1;
    }
    if (best < 0) continue;
    a.row(r).swap(a.row(best));
    T inv = T(1) / a(r, c);
    a.row(r) *= inv;
    for (Index i = 0; i < rows; ++i) {
      if (i == r || is_zero(a(i, c))) continue;
      T f = a(i, c);
      a.row(i) -= f * a.row(r);
    }
    pivots.push_back(c);
    ++r;
  }
  return a;
}

/// Kernel basis from the RREF. Column k of the result has a 1 in the k-th
/// free coordinate and 0 in every other free coordinate, so the free rows of
/// the basis form an identity block (see `free_coordinates`).
template <typename T>
Mat<T> nullspace(const Mat<T>& a, double tol = 1e-12) {
  std::vector<Index> pivots;
  Mat<T> r = rref(a, pivots, tol);
  const Index n = a.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (Index p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<Index> free;
  for (Index c = 0; c < n; ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free.push_back(c);
  Mat<T> basis = Mat<T>::Zero(n, static_cast<Index>(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) {
    const Index f = free[k];
    basis(f, static_cast<Index>(k)) = T(1);
    for (std::size_t pr = 0; pr < pivots.size(); ++pr)
      basis(pivots[pr], static_cast<Index>(k)) = -r(static_cast<Index>(pr), f);
  }
  return basis;
}

/// Coordinates that are free in the RREF of `a` (the identity rows of
/// `nullspace(a)`).
template <typename T>
std::vector<Index> free_coordinates(const Mat<T>& a, double tol = 1e-12) {
  std::vector<Index> pivots;
  rref(a, pivots, tol);
  std::vector<Index> free;
  std::size_t p = 0;
  for (Index c = 0; c < a.cols(); ++c) {
    if (p < pivots.size() && pivots[p] == c) {
      ++p;
      continue;
    }
    free.push_back(c);
  }
  return free;
}

template <typename T>
Index rank(const Mat<T>& a, double tol = 1e-12) {
  std::vector<Index> pivots;
  rref(a, pivots, tol);
  return static_cast<Index>(pivots.size());
}

/// Determinant by Gaussian elimination: exact for rationals, partial
/// pivoting for double.
template <typename T>
T determinant(Mat<T> a) {
  require_square(a, "determinant argument");
  const Index n = a.rows();
  T det(1);
  for (Index c = 0; c < n; ++c) {
    Index piv = -1;
    if constexpr (is_exact_v<T>) {
      for (Index i = c; i < n; ++i)
        if (!is_zero(a(i, c))) {
          piv = i;
          break;
        }
    } else {
      T big(0);
      for (Index i = c; i < n; ++i)
        if (std::abs(a(i, c)) > big) {
          big = std::abs(a(i, c));
          piv = i;
        }
      if (big == T(0)) piv = -1;
    }
    if (piv < 0) return T(0);
    if (piv != c) {
      a.row(c).swap(a.row(piv));
      det = -det;
    }
    det *= a(c, c);
    for (Index i = c + 1; i < n; ++i) {
      if (is_zero(a(i, c))) continue;
      T f = a(i, c) / a(c, c);
      a.row(i).tail(n - c) -= f * a.row(c).tail(n - c);
    }
  }
  return det;
}

/// Converts a matrix between scalar backends (Rational -> double, or identity).
template <typename To, typename From>
Mat<To> cast_matrix(const Mat<From>& m) {
  Mat<To> out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      if constexpr (std::is_same_v<To, From>) {
        out(i, j) = m(i, j);
      } else {
        out(i, j) = to_double(m(i, j));
      }
    }
  return out;
}

}  // namespace racah

#endif  // RACAH_LINALG_HPP
