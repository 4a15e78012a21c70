#include "racah/irreps.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace racah {

namespace {

// Polynomials over Q, coefficients ordered from the constant term upward.
using Poly = std::vector<Rational>;
using cld = std::complex<long double>;

void trim(Poly& p) {
  while (!p.empty() && is_zero(p.back())) p.pop_back();
}

int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Poly make_monic(Poly p) {
  trim(p);
  if (p.empty()) return p;
  const Rational lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

// Quotient and remainder of a / b (b nonzero).
std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
  trim(a);
  const int db = degree(b);
  if (degree(a) < db) return {Poly{}, a};
  Poly q(static_cast<std::size_t>(degree(a) - db + 1), Rational(0));
  while (!a.empty() && degree(a) >= db) {
    const int shift = degree(a) - db;
    const Rational f = a.back() / b.back();
    q[static_cast<std::size_t>(shift)] = f;
    for (int i = 0; i <= db; ++i) a[static_cast<std::size_t>(i + shift)] -= f * b[static_cast<std::size_t>(i)];
    trim(a);
  }
  return {q, a};
}

Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<long>(i)));
  trim(d);
  return d;
}

Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

Rational eval(const Poly& p, const Rational& x) {
  Rational acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly subtract(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

// Yun's square-free decomposition: (factor, multiplicity) pairs.
std::vector<std::pair<Poly, int>> squarefree(const Poly& f) {
  std::vector<std::pair<Poly, int>> out;
  const Poly a = make_monic(f);
  if (degree(a) <= 0) return out;
  const Poly da = derivative(a);
  const Poly b = gcd(a, da);
  Poly c = divmod(a, b).first;
  Poly d = subtract(divmod(da, b).first, derivative(c));
  for (int mult = 1; degree(c) > 0; ++mult) {
    const Poly g = gcd(c, d);
    if (degree(g) > 0) out.emplace_back(g, mult);
    c = divmod(c, g).first;
    d = subtract(divmod(d, g).first, derivative(c));
  }
  return out;
}

template <typename C>
std::vector<cld> numeric_roots(const std::vector<C>& coeffs_low_to_high) {
  std::vector<long double> c;
  for (const auto& x : coeffs_low_to_high) {
    if constexpr (std::is_same_v<C, Rational>) {
      c.push_back(x.template convert_to<long double>());
    } else {
      c.push_back(static_cast<long double>(x));
    }
  }
  while (!c.empty() && c.back() == 0.0L) c.pop_back();
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<cld> roots;
  if (n <= 0) return roots;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = static_cast<double>(-c[static_cast<std::size_t>(i)] / c.back());
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  for (int i = 0; i < n; ++i) {
    cld z(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
    for (int it = 0; it < 60; ++it) {
      cld p = 0, dp = 0;
      for (int k = n; k >= 0; --k) {
        dp = dp * z + p;
        p = p * z + c[static_cast<std::size_t>(k)];
      }
      if (std::abs(dp) == 0.0L) break;
      const cld step = p / dp;
      z -= step;
      if (std::abs(step) <= 1e-19L * (1.0L + std::abs(z))) break;
    }
    roots.push_back(z);
  }
  return roots;
}

// Rational candidates close to x: round(x * lead)/lead and continued-fraction
// convergents.
std::vector<Rational> rational_candidates(long double x, const Integer& lead) {
  std::vector<Rational> out;
  if (!std::isfinite(x)) return out;
  const long double scaled = x * lead.convert_to<long double>();
  if (std::fabs(scaled) < 1e30L) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.0Lf", std::nearbyint(scaled));
    out.emplace_back(Integer(buf), lead);
  }
  long double r = x;
  Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int it = 0; it < 40; ++it) {
    const long double a = std::floor(r);
    if (std::fabs(a) > 1e18L) break;
    const Integer ai(static_cast<long long>(a));
    Integer h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    out.emplace_back(h2, k2);
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const long double frac = r - a;
    if (frac < 1e-15L) break;
    r = 1.0L / frac;
  }
  return out;
}

Integer leading_integer(const Poly& p) {
  Integer l = 1;
  for (const auto& c : p) {
    const Integer den = boost::multiprecision::denominator(c);
    l = boost::multiprecision::lcm(l, den);
  }
  Integer g = 0;
  for (const auto& c : p) g = boost::multiprecision::gcd(g, boost::multiprecision::numerator(c * Rational(l)));
  const Rational lead = p.back() * Rational(l) / Rational(g == 0 ? Integer(1) : g);
  return boost::multiprecision::abs(boost::multiprecision::numerator(lead));
}

struct RootOfSquare {
  std::complex<double> value;
  std::optional<Rational> exact;
};

std::vector<RootOfSquare> solve_exact(const Poly& quartic) {
  std::vector<RootOfSquare> out;
  for (auto [factor, mult] : squarefree(quartic)) {
    Poly f = factor;
    std::vector<RootOfSquare> found;
    bool progress = true;
    while (degree(f) > 0 && progress) {
      progress = false;
      if (degree(f) == 1) {
        found.push_back({{}, Rational(-f[0] / f[1])});
        f = Poly{Rational(1)};
        break;
      }
      const Integer lead = leading_integer(f);
      for (const cld& z : numeric_roots(f)) {
        if (std::fabs(z.imag()) > 1e-9L * (1.0L + std::fabs(z.real()))) continue;
        for (const Rational& cand : rational_candidates(z.real(), lead)) {
          if (!is_zero(eval(f, cand))) continue;
          found.push_back({{}, cand});
          f = divmod(f, Poly{Rational(-cand), Rational(1)}).first;
          progress = true;
          break;
        }
        if (progress) break;
      }
    }
    if (degree(f) > 0)
      for (const cld& z : numeric_roots(f))
        found.push_back({std::complex<double>(static_cast<double>(z.real()), static_cast<double>(z.imag())), std::nullopt});
    for (auto& r : found) {
      if (r.exact) r.value = r.exact->convert_to<double>();
      for (int m = 0; m < mult; ++m) out.push_back(r);
    }
  }
  return out;
}

QuarticRoots finish(std::vector<RootOfSquare> squares, std::complex<double> target_product,
                    const std::optional<Rational>& exact_target) {
  std::sort(squares.begin(), squares.end(), [](const RootOfSquare& a, const RootOfSquare& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  QuarticRoots out;
  for (std::size_t j = 0; j < 4 && j < squares.size(); ++j) {
    out.squares[j] = squares[j].value;
    out.exact_squares[j] = squares[j].exact;
    Rational root;
    if (squares[j].exact && exact_sqrt(*squares[j].exact, root)) {
      out.exact_roots[j] = root;
      out.roots[j] = root.convert_to<double>();
    } else {
      out.roots[j] = std::sqrt(squares[j].value);
    }
  }
  // Fix the sign of one nonzero root so that xi1 xi2 xi3 xi4 = 4 e2.
  bool flip = false;
  if (out.all_exact() && exact_target) {
    Rational p = *out.exact_roots[0] * *out.exact_roots[1] * *out.exact_roots[2] * *out.exact_roots[3];
    flip = p != *exact_target && p == -*exact_target;
  } else {
    const std::complex<double> p = out.roots[0] * out.roots[1] * out.roots[2] * out.roots[3];
    flip = std::abs(p + target_product) < std::abs(p - target_product);
  }
  if (flip) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (std::abs(out.roots[j]) == 0.0) continue;
      out.roots[j] = -out.roots[j];
      if (out.exact_roots[j]) out.exact_roots[j] = Rational(-*out.exact_roots[j]);
      break;
    }
  }
  return out;
}

}  // namespace

QuarticRoots roots_from_params(const IrrepParameters<Rational>& params) {
  const auto c = characteristic_coefficients(params);
  Poly quartic(c.begin(), c.end());
  const Rational target = Rational(4) * params.e2;
  return finish(solve_exact(quartic), target.convert_to<double>(), target);
}

QuarticRoots roots_from_params(const IrrepParameters<double>& params) {
  const auto c = characteristic_coefficients(params);
  std::vector<double> coeffs(c.begin(), c.end());
  std::vector<RootOfSquare> squares;
  for (const cld& z : numeric_roots(coeffs))
    squares.push_back({std::complex<double>(static_cast<double>(z.real()), static_cast<double>(z.imag())), std::nullopt});
  return finish(std::move(squares), 4.0 * params.e2, std::nullopt);
}

std::optional<IrrepSpec<Rational>> dual_spec(const IrrepSpec<Rational>& spec) {
  const IrrepParameters<Rational> p = params_from_roots(spec.roots);
  const IrrepParameters<Rational> dual_params{p.d, p.e2, p.e1, p.q};
  const auto roots = roots_from_params(dual_params).exact();
  if (!roots) return std::nullopt;
  const OperatorTriple<Rational> ops = build_realization(spec, RealizationForm::Monic);
  const Rational target = Rational(4) * dual_params.e2;
  const Rational top = Rational(spec.N + 1);

  for (int j = 0; j < 4; ++j) {
    for (int sign : {1, -1}) {
      const Rational nu = Rational(sign) * (*roots)[j];
      for (int k = 0; k < 4; ++k) {
        if (k == j) continue;
        const Rational hi = nu - top;
        if (hi != (*roots)[k] && hi != -(*roots)[k]) continue;
        std::array<int, 2> rest{};
        int r = 0;
        for (int i = 0; i < 4; ++i)
          if (i != j && i != k) rest[r++] = i;
        IrrepSpec<Rational> cand;
        cand.sigma = nu;
        cand.N = spec.N;
        cand.roots = {nu, (*roots)[rest[0]], (*roots)[rest[1]], hi};
        Rational prod = cand.roots[0] * cand.roots[1] * cand.roots[2] * cand.roots[3];
        if (prod != target) cand.roots[1] = -cand.roots[1];
        prod = cand.roots[0] * cand.roots[1] * cand.roots[2] * cand.roots[3];
        if (prod != target) continue;
        if (!(params_from_roots(cand.roots) == dual_params)) continue;
        if (!validate(cand).valid()) continue;
        bool spectrum_ok = true;
        for (int s = 0; s <= spec.N && spectrum_ok; ++s) {
          Mat<Rational> shifted = ops.K2 - dual_spectrum(nu, s) * identity<Rational>(ops.dim());
          spectrum_ok = is_zero(determinant(shifted));
        }
        if (spectrum_ok) return cand;
      }
    }
  }
  return std::nullopt;
}

double leonard_offtridiagonal(const IrrepSpec<double>& spec) {
  const OperatorTriple<double> ops = build_realization(spec, RealizationForm::Symmetric);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ops.K2);
  Eigen::MatrixXd v = es.eigenvectors();
  for (Index c = 0; c < v.cols(); ++c) {
    v.col(c).normalize();
    for (Index r = 0; r < v.rows(); ++r)
      if (std::abs(v(r, c)) > 1e-14) {
        if (v(r, c) < 0) v.col(c) *= -1.0;
        break;
      }
  }
  const Eigen::MatrixXd k1 = v.transpose() * ops.K1 * v;
  const Index n = k1.rows();
  const double scale = std::max(1.0, ops.K1.cwiseAbs().maxCoeff());
  if (n <= 2) return 0.0;
  // Eigenvalues sorted by size need not follow the dual index s, so recover the
  // order from the coupling graph of K1, which must be a path.
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(k1(i, j)) > 1e-6 * scale) {
        adj[static_cast<std::size_t>(i)].push_back(j);
        adj[static_cast<std::size_t>(j)].push_back(i);
      }
  Index start = -1;
  for (Index i = 0; i < n; ++i) {
    const std::size_t deg = adj[static_cast<std::size_t>(i)].size();
    if (deg > 2 || deg == 0) return 1.0;
    if (deg == 1 && start < 0) start = i;
  }
  if (start < 0) return 1.0;
  std::vector<Index> order{start};
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  seen[static_cast<std::size_t>(start)] = true;
  while (static_cast<Index>(order.size()) < n) {
    Index next = -1;
    for (Index j : adj[static_cast<std::size_t>(order.back())])
      if (!seen[static_cast<std::size_t>(j)]) next = j;
    if (next < 0) return 1.0;
    seen[static_cast<std::size_t>(next)] = true;
    order.push_back(next);
  }
  double worst = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (std::abs(i - j) > 1)
        worst = std::max(worst, std::abs(k1(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)])));
  return worst / scale;
}

}  // namespace racah
