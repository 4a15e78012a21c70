#include "racah/coupling.hpp"
#include "racah/irreps.hpp"
#include "racah/linalg.hpp"
#include "racah/racah_poly.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

using namespace racah;

namespace {

CouplingSpec<Rational> exact_spec(Rational a, Rational b, Rational c, int N) { return {{a, b, c}, N}; }

CouplingSpec<double> to_float(const CouplingSpec<Rational>& s) {
  return {{to_double(s.nu[0]), to_double(s.nu[1]), to_double(s.nu[2])}, s.N};
}

CouplingSpec<Rational> random_spec(testgen::Generator& gen, int n_max) {
  return exact_spec(gen.positive(3, 4), gen.positive(3, 4), gen.positive(3, 4), gen.integer(0, n_max));
}

// Independent oracle: single-mode operators truncated at n <= N, tensored with
// Kronecker products, then restricted to the rows/columns of grade N.
struct ProductOracle {
  int N;
  std::array<double, 3> nu;
  int m;  // modes per factor
  std::array<Mat<double>, 3> j0, jp, jm;

  ProductOracle(const std::array<double, 3>& nu_, int N_) : N(N_), nu(nu_), m(N_ + 2) {
    for (int f = 0; f < 3; ++f) {
      Mat<double> z0 = Mat<double>::Zero(m, m), zp = z0, zm = z0;
      for (int n = 0; n < m; ++n) {
        z0(n, n) = n + nu[f];
        if (n + 1 < m) {
          zp(n + 1, n) = std::sqrt((n + 1.0) * (n + 2.0 * nu[f]));
          zm(n, n + 1) = zp(n + 1, n);
        }
      }
      j0[f] = embed(z0, f);
      jp[f] = embed(zp, f);
      jm[f] = embed(zm, f);
    }
  }

  Mat<double> kron(const Mat<double>& a, const Mat<double>& b) const {
    Mat<double> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  }

  Mat<double> embed(const Mat<double>& op, int f) const {
    const Mat<double> id = Mat<double>::Identity(m, m);
    std::array<Mat<double>, 3> parts{id, id, id};
    parts[static_cast<std::size_t>(f)] = op;
    return kron(kron(parts[0], parts[1]), parts[2]);
  }

  Mat<double> casimir(int i, int j, bool literal = false) const {
    const double li = nu[i] * (nu[i] - 1), lj = nu[j] * (nu[j] - 1);
    const Index dim = j0[0].rows();
    Mat<double> cross = jp[i] * jm[j] + (literal ? Mat<double>(jp[j] * jm[j]) : Mat<double>(jm[i] * jp[j]));
    return 2 * j0[i] * j0[j] - cross + (li + lj) * Mat<double>::Identity(dim, dim);
  }

  Mat<double> total() const {
    const Mat<double> j0s = j0[0] + j0[1] + j0[2];
    const Mat<double> jps = jp[0] + jp[1] + jp[2], jms = jm[0] + jm[1] + jm[2];
    return j0s * j0s - jps * jms - j0s;
  }

  // Grade-N block in the lexicographic order of coupled_basis(N).
  Mat<double> grade_block(const Mat<double>& op) const {
    const auto states = coupled_basis(N);
    const Index d = static_cast<Index>(states.size());
    Mat<double> out(d, d);
    auto flat = [&](const std::array<int, 3>& s) { return (s[0] * m + s[1]) * m + s[2]; };
    for (Index r = 0; r < d; ++r)
      for (Index c = 0; c < d; ++c)
        out(r, c) = op(flat(states[static_cast<std::size_t>(r)]), flat(states[static_cast<std::size_t>(c)]));
    return out;
  }
};

std::vector<double> sorted_eigenvalues(const Mat<double>& m) {
  Eigen::EigenSolver<Mat<double>> es(m);
  std::vector<double> out;
  for (Index k = 0; k < m.rows(); ++k) out.push_back(es.eigenvalues()(k).real());
  std::sort(out.begin(), out.end());
  return out;
}

// Aligns `b` to `a` by flipping row signs from column 0 and column signs from
// row 0, then returns the largest entrywise difference.
double signed_distance(const Mat<double>& a, Mat<double> b) {
  for (Index r = 0; r < b.rows(); ++r)
    if (a(r, 0) * b(r, 0) < 0) b.row(r) *= -1;
  for (Index c = 0; c < b.cols(); ++c)
    if (a(0, c) * b(0, c) < 0) b.col(c) *= -1;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(CoupledBasis, Enumeration) {
  EXPECT_EQ(coupled_basis(0), (std::vector<std::array<int, 3>>{{0, 0, 0}}));
  EXPECT_EQ(coupled_basis(1), (std::vector<std::array<int, 3>>{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}));
  EXPECT_EQ(coupled_basis(4).size(), 15u);
  for (int N = 0; N < 7; ++N) {
    const auto states = coupled_basis(N);
    EXPECT_TRUE(std::is_sorted(states.begin(), states.end()));
    for (std::size_t k = 0; k < states.size(); ++k)
      EXPECT_EQ(basis_position(states[k]), static_cast<Index>(k));
  }
}

TEST(IntermediateCasimir, OneDimensional) {
  const auto spec = exact_spec(Rational(2, 3), Rational(5, 4), Rational(1, 2), 0);
  const Rational v = spec.nu[0] + spec.nu[1];
  EXPECT_EQ(intermediate_casimir(spec, Pair::P12), Mat<Rational>::Constant(1, 1, v * (v - 1)));
}

TEST(IntermediateCasimir, UnitWeightsSpectrum) {
  const auto spec = exact_spec(Rational(1), Rational(1), Rational(1), 1);
  const auto full = sorted_eigenvalues(cast_matrix<double>(intermediate_casimir(spec, Pair::P12, Subspace::FullGrade)));
  const auto coupled = sorted_eigenvalues(cast_matrix<double>(intermediate_casimir(spec, Pair::P12)));
  ASSERT_EQ(full.size(), 3u);
  ASSERT_EQ(coupled.size(), 2u);
  EXPECT_NEAR(full[0], 2, 1e-12);
  EXPECT_NEAR(full[1], 2, 1e-12);
  EXPECT_NEAR(full[2], 6, 1e-12);
  EXPECT_NEAR(coupled[0], 2, 1e-12);
  EXPECT_NEAR(coupled[1], 6, 1e-12);
}

TEST(IntermediateCasimir, MatchesKroneckerOracle) {
  testgen::Generator gen(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = to_float(random_spec(gen, 4));
    const ProductOracle oracle(spec.nu, spec.N);
    const std::array<std::pair<Pair, std::pair<int, int>>, 3> pairs{
        {{Pair::P12, {0, 1}}, {Pair::P23, {1, 2}}, {Pair::P31, {2, 0}}}};
    for (const auto& [pair, ij] : pairs) {
      const Mat<double> ours = grade_intermediate_casimir(spec.nu, spec.N, pair, ProductBasis::Orthonormal);
      const Mat<double> ref = oracle.grade_block(oracle.casimir(ij.first, ij.second));
      EXPECT_LT((ours - ref).cwiseAbs().maxCoeff(), 1e-10) << "trial " << trial;
      EXPECT_LT((ours - ours.transpose()).cwiseAbs().maxCoeff(), 1e-13);
    }
    const Mat<double> direct = grade_total_casimir_direct(spec.nu, spec.N, ProductBasis::Orthonormal);
    EXPECT_LT((direct - oracle.grade_block(oracle.total())).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(IntermediateCasimir, MonicIsDiagonalSimilarityOfOrthonormal) {
  const std::array<double, 3> nu{0.7, 1.3, 2.25};
  const int N = 4;
  const Mat<double> mon = grade_intermediate_casimir(nu, N, Pair::P23, ProductBasis::Monic);
  const Mat<double> orth = grade_intermediate_casimir(nu, N, Pair::P23, ProductBasis::Orthonormal);
  const Vec<double> s = grade_gram(nu, N).cwiseSqrt();
  const Mat<double> conj = s.asDiagonal() * mon * s.cwiseInverse().asDiagonal();
  EXPECT_LT((conj - orth).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(IntermediateCasimir, LiteralCrossTermBreaksInvariance) {
  // The printed cross term J+^(i) J-^(j) + J+^(j) J-^(j) does not commute with
  // the total Casimir; the adopted J+^(i) J-^(j) + J-^(i) J+^(j) does.
  const std::array<double, 3> nu{0.5, 0.75, 1.5};
  const int N = 3;
  const ProductOracle oracle(nu, N);
  const Mat<double> c4 = oracle.grade_block(oracle.total());
  const Mat<double> adopted = oracle.grade_block(oracle.casimir(0, 1));
  const Mat<double> literal = oracle.grade_block(oracle.casimir(0, 1, true));
  EXPECT_LT(commutator(adopted, c4).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_GT(commutator(literal, c4).cwiseAbs().maxCoeff(), 1e-2);
}

TEST(TotalCasimir, Examples) {
  const auto unit = exact_spec(Rational(1), Rational(1), Rational(1), 1);
  EXPECT_EQ(total_casimir(unit), Mat<Rational>(Rational(12) * identity<Rational>(2)));
  const auto zero = exact_spec(Rational(1, 3), Rational(1, 2), Rational(5, 2), 0);
  const Rational s = zero.nu[0] + zero.nu[1] + zero.nu[2];
  EXPECT_EQ(total_casimir(zero), Mat<Rational>::Constant(1, 1, s * (s - 1)));
}

TEST(TotalCasimir, SumAndDirectFormsAgree) {
  testgen::Generator gen(42);
  for (int trial = 0; trial < 15; ++trial) {
    const auto spec = random_spec(gen, 5);
    EXPECT_EQ(grade_total_casimir_sum(spec.nu, spec.N), grade_total_casimir_direct(spec.nu, spec.N));
    const Rational v4 = spec.nu4();
    EXPECT_EQ(total_casimir(spec), Mat<Rational>(v4 * (v4 - 1) * identity<Rational>(spec.N + 1)));
  }
}

TEST(TotalCasimir, FullGradeSpectrum) {
  const auto spec = exact_spec(Rational(1, 2), Rational(2, 3), Rational(3, 4), 3);
  const auto ev = sorted_eigenvalues(cast_matrix<double>(total_casimir(spec, Subspace::FullGrade)));
  std::vector<double> expected;
  const double base = to_double(spec.nu[0] + spec.nu[1] + spec.nu[2]);
  for (int n = 0; n <= spec.N; ++n)
    for (int mult = 0; mult <= n; ++mult) expected.push_back((base + n) * (base + n - 1));
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(ev.size(), expected.size());
  for (std::size_t k = 0; k < ev.size(); ++k) EXPECT_NEAR(ev[k], expected[k], 1e-9);
}

TEST(CoupledSpace, DimensionAndInvariance) {
  testgen::Generator gen(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = random_spec(gen, 5);
    const CoupledSpace<Rational> space(spec);
    EXPECT_EQ(space.dim(), spec.N + 1);
    EXPECT_EQ(space.grade_dim(), (spec.N + 1) * (spec.N + 2) / 2);
    if (spec.N > 0) {
      const Mat<Rational> lower = grade_lowering(spec.nu, spec.N);
      EXPECT_TRUE(Mat<Rational>(lower * space.basis()).isZero());
    }
    // Restriction is compatible with lifting for an invariant operator.
    const Mat<Rational> c = grade_intermediate_casimir(spec.nu, spec.N, Pair::P31);
    EXPECT_EQ(Mat<Rational>(c * space.basis()), Mat<Rational>(space.basis() * space.restrict(c)));
  }
}

TEST(CoupledSpace, RejectsBadSpecs) {
  EXPECT_THROW(CoupledSpace<Rational>(exact_spec(Rational(0), Rational(1), Rational(1), 1)), InvalidSpec);
  EXPECT_THROW(CoupledSpace<Rational>(exact_spec(Rational(1), Rational(1), Rational(1), -1)), InvalidSpec);
}

TEST(KappaTriple, UnitWeights) {
  const auto [ops, rc] = kappa_triple(exact_spec(Rational(1), Rational(1), Rational(1), 1));
  EXPECT_EQ(rc, (ReducedConstants<Rational>{Rational(6), Rational(0), Rational(0)}));
  EXPECT_TRUE(verify_relations(ops, rc).passed());
  const auto [ops0, rc0] = kappa_triple(exact_spec(Rational(1), Rational(1), Rational(1), 0));
  EXPECT_EQ(ops0.K3, Mat<Rational>::Zero(1, 1));
  EXPECT_TRUE(verify_relations(ops0, rc0).passed());
}

TEST(KappaTriple, ClosureOnRandomWeightsExact) {
  testgen::Generator gen(44);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = random_spec(gen, 6);
    const auto [ops, rc] = kappa_triple(spec);
    const auto rep = verify_relations(ops, rc);
    EXPECT_TRUE(rep.passed()) << "trial " << trial;
    for (const auto& r : rep.residuals) EXPECT_TRUE(is_zero(r.abs_residual));
    // Casimir value agrees with the irrep formula.
    const auto q = scalar_multiple_of_identity(casimir_matrix(ops, rc));
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, params_from_roots(roots_for_coupling(spec).roots).q);
  }
}

TEST(KappaTriple, ClosureFloat) {
  testgen::Generator gen(45);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = to_float(random_spec(gen, 6));
    const auto [ops, rc] = kappa_triple(spec);
    EXPECT_TRUE(verify_relations(ops, rc, 1e-11).passed()) << "trial " << trial;
    EXPECT_LT((ops.K1 - ops.K1.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(KappaTriple, SpectrumMatchesIrrep) {
  testgen::Generator gen(46);
  for (int trial = 0; trial < 15; ++trial) {
    const auto spec = random_spec(gen, 5);
    const auto [ops, rc] = kappa_triple(spec);
    const auto irrep = roots_for_coupling(spec);
    const Mat<Rational> id = identity<Rational>(spec.N + 1);
    for (int n = 0; n <= spec.N; ++n) {
      const Mat<Rational> shifted = ops.K1 - lambda_n(irrep.sigma, n) * id;
      EXPECT_EQ(shifted.rows() - static_cast<Index>(nullspace(shifted).cols()), spec.N);
    }
  }
}

TEST(RootsForCoupling, Examples) {
  const auto spec = roots_for_coupling(exact_spec(Rational(1), Rational(1), Rational(1), 1));
  EXPECT_EQ(spec.roots, (std::array<Rational, 4>{-1, 0, 4, -3}));
  EXPECT_EQ(spec.sigma, Rational(-1));
  EXPECT_EQ(spec.N, 1);
}

TEST(RootsForCoupling, ConstantsAgreeAndSpecValidates) {
  testgen::Generator gen(47);
  for (int trial = 0; trial < 30; ++trial) {
    const auto spec = random_spec(gen, 6);
    const auto irrep = roots_for_coupling(spec);
    EXPECT_EQ(irrep.roots[3], irrep.sigma - Rational(spec.N + 1));
    EXPECT_EQ(params_from_roots(irrep.roots).constants(), coupling_constants(spec));
    EXPECT_TRUE(validate(irrep).valid()) << "trial " << trial;
  }
}

TEST(RacahCoefficients, OneDimensional) {
  const auto t = racah_coefficients(exact_spec(Rational(2), Rational(1, 3), Rational(1), 0));
  EXPECT_EQ(t.coeffs, Mat<double>::Ones(1, 1));
  ASSERT_TRUE(t.signed_squares.has_value());
  EXPECT_EQ((*t.signed_squares)(0, 0), Rational(1));
}

TEST(RacahCoefficients, UnitWeightsExact) {
  const auto t = racah_coefficients(exact_spec(Rational(1), Rational(1), Rational(1), 1));
  ASSERT_TRUE(t.signed_squares.has_value());
  Mat<Rational> expected(2, 2);
  expected << Rational(1, 4), Rational(3, 4), Rational(3, 4), Rational(-1, 4);
  EXPECT_EQ(*t.signed_squares, expected);
  EXPECT_NEAR(t.coeffs(0, 1), std::sqrt(3.0) / 2, 1e-15);
  EXPECT_EQ(t.row_labels, (std::vector<Rational>{2, 3}));
  EXPECT_EQ(t.col_labels, (std::vector<Rational>{2, 3}));
  EXPECT_EQ(t.sign_convention, "first-nonzero-positive");
}

TEST(RacahCoefficients, FrozenTable) {
  Mat<double> frozen(4, 4);
  frozen << 0.238394750009426, 0.494084523990369, 0.626031769586146, 0.554195497807401,
      0.395332968885921, 0.546230993599135, 0.069210416218649, -0.735223410692550,
      0.547448901451359, 0.210113710691375, -0.713609398404875, 0.383293041141415,
      0.697982440452113, -0.642934221646673, 0.306685128860062, -0.073486945726342;
  const auto exact = exact_spec(Rational(1, 2), Rational(3, 4), Rational(3, 2), 3);
  EXPECT_LT((racah_coefficients(exact).coeffs - frozen).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((racah_coefficients(to_float(exact)).coeffs - frozen).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(RacahCoefficients, OrthogonalityAndBackendAgreement) {
  testgen::Generator gen(48);
  for (int trial = 0; trial < 15; ++trial) {
    const auto spec = random_spec(gen, 6);
    const auto exact = racah_coefficients(spec);
    const auto flt = racah_coefficients(to_float(spec));
    const auto& sq = *exact.signed_squares;
    for (Index r = 0; r <= spec.N; ++r) {
      Rational row(0), col(0);
      for (Index c = 0; c <= spec.N; ++c) {
        row += abs(sq(r, c));
        col += abs(sq(c, r));
      }
      EXPECT_EQ(row, Rational(1));
      EXPECT_EQ(col, Rational(1));
    }
    EXPECT_LT(orthogonality_residual(flt.coeffs), 1e-12);
    EXPECT_LT((exact.coeffs - flt.coeffs).cwiseAbs().maxCoeff(), 1e-9) << "trial " << trial;
  }
}

TEST(RacahCoefficients, OtherPairs) {
  const auto spec = to_float(exact_spec(Rational(1, 2), Rational(3, 4), Rational(3, 2), 3));
  const auto t1 = racah_coefficients(spec, Pair::P23, Pair::P31);
  const auto t2 = racah_coefficients(spec, Pair::P31, Pair::P12);
  EXPECT_LT(orthogonality_residual(t1.coeffs), 1e-12);
  EXPECT_LT(orthogonality_residual(t2.coeffs), 1e-12);
  // Composition of overlaps: <23|12> = <23|31><31|12>.
  const auto t0 = racah_coefficients(spec);
  EXPECT_LT((t0.coeffs - t1.coeffs * t2.coeffs).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(RacahCoefficients, MatchNormalizedRacahPolynomials) {
  testgen::Generator gen(49);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = random_spec(gen, 6);
    const auto table = racah_coefficients(to_float(spec));
    const auto map = irrep_to_racah(roots_for_coupling(spec));
    const Mat<double> w = normalized_racah_table(map.params);
    // Row n23 pairs with grid point x = N - n23, column n12 with degree n.
    Mat<double> reordered = w.colwise().reverse();
    EXPECT_LT(signed_distance(table.coeffs, reordered), 1e-9) << "trial " << trial;
    ++checked;
  }
  EXPECT_EQ(checked, 20);
}
