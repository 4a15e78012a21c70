#ifndef RACAH_ALGEBRA_HPP
#define RACAH_ALGEBRA_HPP

// The Racah–Wilson algebra: structure constants, the affine reduction to the
// three-parameter form, and relation/Casimir checks on matrix realizations.
//
// General relations, with K3 = [K1, K2]:
//   [K2, K3] = a2 K2^2 + a1 {K1, K2} + c1 K1 + d K2 + e1
//   [K3, K1] = a1 K1^2 + a2 {K1, K2} + c2 K2 + d K1 + e2
// The reduced form has a1 = a2 = 1, c1 = c2 = 0.

#include "racah/errors.hpp"
#include "racah/linalg.hpp"
#include "racah/scalar.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace racah {

template <typename T>
struct ReducedConstants;

template <typename T>
struct StructureConstants {
  T a1{1}, a2{1}, c1{0}, c2{0}, d{0}, e1{0}, e2{0};

  bool is_reduced() const { return a1 == T(1) && a2 == T(1) && is_zero(c1) && is_zero(c2); }
};

/// The three surviving parameters of the reduced algebra.
template <typename T>
struct ReducedConstants {
  T d{0}, e1{0}, e2{0};

  StructureConstants<T> general() const { return {T(1), T(1), T(0), T(0), d, e1, e2}; }

  /// Constants of the dual algebra (K1 <-> K2, K3 -> -K3).
  ReducedConstants dual() const { return {d, e2, e1}; }

  friend bool operator==(const ReducedConstants& x, const ReducedConstants& y) {
    return x.d == y.d && x.e1 == y.e1 && x.e2 == y.e2;
  }
};

/// Substitution new K1 = u1 K1 + v1, new K2 = u2 K2 + v2, new K3 = u1 u2 K3.
template <typename T>
struct AffineMap {
  T u1{1}, u2{1}, v1{0}, v2{0};

  bool is_identity() const { return u1 == T(1) && u2 == T(1) && is_zero(v1) && is_zero(v2); }
};

template <typename T>
struct OperatorTriple {
  Mat<T> K1, K2, K3;
  std::string basis_label;

  Index dim() const { return K1.rows(); }

  /// Builds the triple with K3 = K1 K2 - K2 K1.
  static OperatorTriple from_pair(Mat<T> k1, Mat<T> k2, std::string label) {
    require_square(k1, "K1");
    require_square(k2, "K2");
    if (k1.rows() != k2.rows()) throw DimensionMismatch("K1 and K2 differ in dimension");
    Mat<T> k3 = commutator(k1, k2);
    return {std::move(k1), std::move(k2), std::move(k3), std::move(label)};
  }
};

template <typename T>
void check_dimensions(const OperatorTriple<T>& ops) {
  require_square(ops.K1, "K1");
  require_square(ops.K2, "K2");
  require_square(ops.K3, "K3");
  if (ops.K1.rows() != ops.K2.rows() || ops.K1.rows() != ops.K3.rows())
    throw DimensionMismatch("K1, K2, K3 must have equal dimension");
}

/// Residual of one matrix identity LHS = RHS.
template <typename T>
struct Residual {
  std::string name;
  T abs_residual{0};  ///< max |LHS - RHS|
  T scale{1};         ///< 1 + max |RHS|
  bool passed = false;

  double relative() const { return to_double(abs_residual) / to_double(scale); }
};

template <typename T>
struct Report {
  std::vector<Residual<T>> residuals;
  double tolerance = 0.0;

  bool passed() const {
    for (const auto& r : residuals)
      if (!r.passed) return false;
    return true;
  }

  const Residual<T>& at(const std::string& name) const {
    for (const auto& r : residuals)
      if (r.name == name) return r;
    throw std::out_of_range("no residual named " + name);
  }

  /// Largest relative residual over all entries.
  double worst() const {
    double w = 0.0;
    for (const auto& r : residuals) w = std::max(w, r.relative());
    return w;
  }
};

inline constexpr double kDefaultRelationTolerance = 1e-10;

/// Residual of lhs = rhs. Exact backend: passes iff the difference is zero.
/// Float backend: passes iff max|lhs - rhs| <= tol * (1 + max|rhs|).
template <typename T>
Residual<T> make_residual(std::string name, const Mat<T>& lhs, const Mat<T>& rhs, double tol) {
  Residual<T> r;
  r.name = std::move(name);
  r.abs_residual = max_abs(Mat<T>(lhs - rhs));
  r.scale = T(1) + max_abs(rhs);
  if constexpr (is_exact_v<T>) {
    r.passed = is_zero(r.abs_residual);
  } else {
    r.passed = r.abs_residual <= tol * r.scale;
  }
  return r;
}

/// Derives the reduced constants and the map that realizes them.
template <typename T>
std::pair<ReducedConstants<T>, AffineMap<T>> canonical_reduce(const StructureConstants<T>& sc) {
  if (is_zero(sc.a1) || is_zero(sc.a2))
    throw DegenerateAlgebra("a1 * a2 = 0 (Clebsch-Gordan regime) has no reduced form");
  const T& a1 = sc.a1;
  const T& a2 = sc.a2;
  AffineMap<T> map{T(1) / a2, T(1) / a1, sc.c2 / (T(2) * a2 * a2), sc.c1 / (T(2) * a1 * a1)};
  // Old generators in terms of new: K1 = a2 X + w1, K2 = a1 Y + w2.
  const T w1 = -sc.c2 / (T(2) * a2);
  const T w2 = -sc.c1 / (T(2) * a1);
  ReducedConstants<T> rc;
  rc.d = (sc.d - a2 * sc.c1 / a1 - a1 * sc.c2 / a2) / (a1 * a2);
  rc.e1 = (a2 * w2 * w2 + T(2) * a1 * w1 * w2 + sc.c1 * w1 + sc.d * w2 + sc.e1) / (a1 * a1 * a2);
  rc.e2 = (a1 * w1 * w1 + T(2) * a2 * w1 * w2 + sc.c2 * w2 + sc.d * w1 + sc.e2) / (a1 * a2 * a2);
  return {rc, map};
}

template <typename T>
OperatorTriple<T> apply_map(const AffineMap<T>& map, const OperatorTriple<T>& ops) {
  check_dimensions(ops);
  const Mat<T> id = identity<T>(ops.dim());
  OperatorTriple<T> out;
  out.K1 = map.u1 * ops.K1 + map.v1 * id;
  out.K2 = map.u2 * ops.K2 + map.v2 * id;
  out.K3 = (map.u1 * map.u2) * ops.K3;
  out.basis_label = ops.basis_label;
  return out;
}

/// Checks [K1,K2] = K3 and the two quadratic relations for `sc`.
template <typename T>
Report<T> verify_relations(const OperatorTriple<T>& ops, const StructureConstants<T>& sc,
                           double tol = kDefaultRelationTolerance) {
  check_dimensions(ops);
  const Mat<T>& k1 = ops.K1;
  const Mat<T>& k2 = ops.K2;
  const Mat<T>& k3 = ops.K3;
  const Mat<T> id = identity<T>(ops.dim());
  const Mat<T> k12 = anticommutator(k1, k2);

  Report<T> rep;
  rep.tolerance = tol;
  rep.residuals.push_back(make_residual<T>("[K1,K2]=K3", commutator(k1, k2), k3, tol));
  Mat<T> rhs2 = sc.a2 * (k2 * k2) + sc.a1 * k12 + sc.c1 * k1 + sc.d * k2 + sc.e1 * id;
  rep.residuals.push_back(make_residual<T>("[K2,K3]", commutator(k2, k3), rhs2, tol));
  Mat<T> rhs3 = sc.a1 * (k1 * k1) + sc.a2 * k12 + sc.c2 * k2 + sc.d * k1 + sc.e2 * id;
  rep.residuals.push_back(make_residual<T>("[K3,K1]", commutator(k3, k1), rhs3, tol));
  return rep;
}

template <typename T>
Report<T> verify_relations(const OperatorTriple<T>& ops, const ReducedConstants<T>& rc,
                           double tol = kDefaultRelationTolerance) {
  return verify_relations(ops, rc.general(), tol);
}

/// Matrix of the Casimir element
///   Q = a1{K1^2,K2} + a2{K1,K2^2} + K3^2 + (a1^2+c1)K1^2 + (a2^2+c2)K2^2
///       + (d+a1a2){K1,K2} + (d a1 + 2e1)K1 + (d a2 + 2e2)K2.
template <typename T>
Mat<T> casimir_matrix(const OperatorTriple<T>& ops, const StructureConstants<T>& sc) {
  check_dimensions(ops);
  const Mat<T>& k1 = ops.K1;
  const Mat<T>& k2 = ops.K2;
  const Mat<T> k1sq = k1 * k1;
  const Mat<T> k2sq = k2 * k2;
  Mat<T> q = sc.a1 * anticommutator(k1sq, k2) + sc.a2 * anticommutator(k1, k2sq) +
             ops.K3 * ops.K3 + (sc.a1 * sc.a1 + sc.c1) * k1sq + (sc.a2 * sc.a2 + sc.c2) * k2sq +
             (sc.d + sc.a1 * sc.a2) * anticommutator(k1, k2) + (sc.d * sc.a1 + T(2) * sc.e1) * k1 +
             (sc.d * sc.a2 + T(2) * sc.e2) * k2;
  return q;
}

template <typename T>
Mat<T> casimir_matrix(const OperatorTriple<T>& ops, const ReducedConstants<T>& rc) {
  return casimir_matrix(ops, rc.general());
}

}  // namespace racah

#endif  // RACAH_ALGEBRA_HPP
