#include "cli.hpp"

#include "racah/algebra.hpp"
#include "racah/coupling.hpp"
#include "racah/irreps.hpp"
#include "racah/racah_poly.hpp"
#include "racah/superintegrable.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace racah::cli {

namespace {

using json = nlohmann::ordered_json;

struct JobConfig {
  std::string command;
  std::string suite;
  std::string nu, k, roots, racah, sigma;
  int N = -1;
  int n_max = -1;
  std::string backend = "exact";
  std::optional<double> tol;
  std::string format = "json";
  std::string output;
  std::string inject = "0";
  bool monic = false;
};

// Keys accepted in a --config file, mapped onto the config fields.
using Setter = std::function<void(JobConfig&, const std::string&)>;

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const int n = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: \"" + v + "\"");
  }
}

const std::map<std::string, Setter>& config_keys() {
  static const std::map<std::string, Setter> keys{
      {"suite", [](JobConfig& c, const std::string& v) { c.suite = v; }},
      {"nu", [](JobConfig& c, const std::string& v) { c.nu = v; }},
      {"k", [](JobConfig& c, const std::string& v) { c.k = v; }},
      {"roots", [](JobConfig& c, const std::string& v) { c.roots = v; }},
      {"sigma", [](JobConfig& c, const std::string& v) { c.sigma = v; }},
      {"racah", [](JobConfig& c, const std::string& v) { c.racah = v; }},
      {"N", [](JobConfig& c, const std::string& v) { c.N = parse_int("N", v); }},
      {"Nmax", [](JobConfig& c, const std::string& v) { c.n_max = parse_int("Nmax", v); }},
      {"backend", [](JobConfig& c, const std::string& v) { c.backend = v; }},
      {"tol", [](JobConfig& c, const std::string& v) { c.tol = parse_rational(v).convert_to<double>(); }},
      {"format", [](JobConfig& c, const std::string& v) { c.format = v; }},
      {"output", [](JobConfig& c, const std::string& v) { c.output = v; }},
      {"inject-offset", [](JobConfig& c, const std::string& v) { c.inject = v; }},
      {"monic", [](JobConfig& c, const std::string& v) { c.monic = v == "1" || v == "true"; }},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void load_config_file(const std::string& path, JobConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line.substr(0, line.find('#')));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    const auto it = config_keys().find(key);
    if (it == config_keys().end())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key \"" + key + "\"");
    it->second(cfg, trim(t.substr(eq + 1)));
  }
}

// --config is honoured before the flags are parsed so flags override it.
std::optional<std::string> find_config_path(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config") {
      if (i + 1 >= argc) throw ConfigError("--config needs a path");
      return std::string(argv[i + 1]);
    }
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return std::nullopt;
}

template <typename T>
T parse_scalar(const std::string& text) {
  const Rational r = parse_rational(text);
  if constexpr (is_exact_v<T>) {
    return r;
  } else {
    return r.template convert_to<double>();
  }
}

template <typename T>
std::vector<T> parse_list(const std::string& flag, const std::string& text, std::size_t count) {
  if (text.empty()) throw ConfigError("--" + flag + " is required");
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_scalar<T>(trim(item)));
  if (out.size() != count)
    throw ConfigError("--" + flag + " needs " + std::to_string(count) + " comma-separated values, got " +
                      std::to_string(out.size()));
  return out;
}

int require_nonnegative(const std::string& flag, int v) {
  if (v < 0) throw ConfigError("--" + flag + " is required and must be nonnegative");
  return v;
}

template <typename T>
json scalar_json(const T& x) {
  if constexpr (is_exact_v<T>) {
    return to_string(x);
  } else {
    return x;
  }
}

template <typename T, typename Container>
json list_json(const Container& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(scalar_json<T>(x));
  return a;
}

json matrix_json(const Mat<double>& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
std::string csv_value(const T& x) {
  return to_string(x);
}

template <typename T>
void append_report(json& residuals, bool& passed, const Report<T>& rep, const std::string& prefix = "") {
  for (const auto& r : rep.residuals) {
    residuals.push_back({{"name", prefix + r.name},
                         {"abs_residual", scalar_json<T>(r.abs_residual)},
                         {"relative", r.relative()},
                         {"passed", r.passed}});
    passed = passed && r.passed;
  }
}

template <typename T>
void append_residual(json& residuals, bool& passed, const Residual<T>& r) {
  Report<T> rep;
  rep.residuals.push_back(r);
  append_report(residuals, passed, rep);
}

struct Outcome {
  json document;
  std::string csv;
  int code = kExitPass;
};

// verify ----------------------------------------------------------------------

template <typename T>
Outcome verify_coupling(const JobConfig& cfg, double tol, const T& offset) {
  const auto nu = parse_list<T>("nu", cfg.nu, 3);
  const CouplingSpec<T> spec{{nu[0], nu[1], nu[2]}, require_nonnegative("N", cfg.N)};
  try {
    check_coupling_spec(spec);
  } catch (const InvalidSpec& e) {
    throw ConfigError(e.what());
  }
  Outcome o;
  o.document["parameters"] = {{"nu", list_json<T>(nu)}, {"N", spec.N}};
  json res = json::array();
  bool ok = true;
  auto [ops, rc] = kappa_triple(spec);
  o.document["constants"] = {{"d", scalar_json<T>(rc.d)}, {"e1", scalar_json<T>(rc.e1)}, {"e2", scalar_json<T>(rc.e2)}};
  ReducedConstants<T> probe = rc;
  probe.d += offset;
  append_report(res, ok, verify_relations(ops, probe, tol));
  const T q = params_from_roots(roots_for_coupling(spec).roots).q;
  const Mat<T> id = identity<T>(ops.dim());
  append_residual(res, ok, make_residual<T>("Casimir=q*I", casimir_matrix(ops, probe), Mat<T>(q * id), tol));
  const T v4 = spec.nu4();
  append_residual(res, ok, make_residual<T>("C4=nu4(nu4-1)*I", total_casimir(spec), Mat<T>(v4 * (v4 - T(1)) * id), tol));
  append_residual(res, ok, make_residual<T>("C4 sum=direct", grade_total_casimir_sum(spec.nu, spec.N),
                                            grade_total_casimir_direct(spec.nu, spec.N), tol));
  o.document["residuals"] = res;
  o.document["passed"] = ok;
  o.code = ok ? kExitPass : kExitFailure;
  return o;
}

template <typename T>
Outcome verify_symmetry(const JobConfig& cfg, double tol, const T& offset) {
  const auto k = parse_list<T>("k", cfg.k, 3);
  const ModelParams<T> params{{k[0], k[1], k[2]}};
  const int N = require_nonnegative("N", cfg.N);
  try {
    check_model_params(params);
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }
  Outcome o;
  o.document["parameters"] = {{"k", list_json<T>(k)}, {"N", N}};
  json res = json::array();
  bool ok = true;
  append_report(res, ok, verify_symmetry_algebra(build_symmetries(params, N, Subspace::FullGrade), tol, offset),
                "grade:");
  append_report(res, ok, verify_symmetry_algebra(build_symmetries(params, N, Subspace::Eigenspace), tol, offset),
                "eigenspace:");
  for (const Pair pair : {Pair::P12, Pair::P23, Pair::P31})
    append_residual(res, ok, s_commutation_residual(params, N, pair, std::min(tol, 1e-11)));
  o.document["residuals"] = res;
  o.document["passed"] = ok;
  o.code = ok ? kExitPass : kExitFailure;
  return o;
}

template <typename T>
Outcome verify_irrep(const JobConfig& cfg, double tol, const T& offset) {
  IrrepSpec<T> spec;
  if (!cfg.roots.empty()) {
    const auto roots = parse_list<T>("roots", cfg.roots, 4);
    std::copy(roots.begin(), roots.end(), spec.roots.begin());
    if (cfg.sigma.empty()) throw ConfigError("--sigma is required with --roots");
    spec.sigma = parse_scalar<T>(cfg.sigma);
    spec.N = require_nonnegative("N", cfg.N);
  } else if (!cfg.nu.empty()) {
    const auto nu = parse_list<T>("nu", cfg.nu, 3);
    spec = roots_for_coupling(CouplingSpec<T>{{nu[0], nu[1], nu[2]}, require_nonnegative("N", cfg.N)});
  } else {
    throw ConfigError("the irrep suite needs --roots and --sigma, or --nu");
  }
  Outcome o;
  o.document["parameters"] = {{"roots", list_json<T>(spec.roots)}, {"sigma", scalar_json<T>(spec.sigma)}, {"N", spec.N}};
  const ValidityReport validity = validate(spec);
  o.document["validity"] = {{"truncation", validity.truncation},
                            {"positivity", validity.positivity},
                            {"nondegenerate", validity.nondegenerate},
                            {"lambda_nonzero", validity.lambda_nonzero},
                            {"messages", validity.messages}};
  json res = json::array();
  if (!validity.valid()) {
    o.document["residuals"] = res;
    o.document["passed"] = false;
    o.code = kExitFailure;
    return o;
  }
  bool ok = true;
  const auto params = params_from_roots(spec.roots);
  const auto ops = build_realization(spec);
  ReducedConstants<T> probe = params.constants();
  probe.d += offset;
  append_report(res, ok, verify_relations(ops, probe, tol));
  append_residual(res, ok,
                  make_residual<T>("Casimir=q*I", casimir_matrix(ops, probe), Mat<T>(params.q * identity<T>(ops.dim())), tol));
  append_residual(res, ok, a_squared_recurrence_residual(spec, offset, tol));
  o.document["residuals"] = res;
  o.document["passed"] = ok;
  o.code = ok ? kExitPass : kExitFailure;
  return o;
}

template <typename T>
RacahParams<T> racah_params_from(const JobConfig& cfg) {
  const auto v = parse_list<T>("racah", cfg.racah, 4);
  RacahParams<T> p{v[0], v[1], v[2], v[3], require_nonnegative("N", cfg.N)};
  if (!p.terminates())
    throw ConfigError("parameters do not terminate: need alpha+1, beta+delta+1 or gamma+1 equal to -N");
  return p;
}

template <typename T>
json racah_params_json(const RacahParams<T>& p) {
  return {{"alpha", scalar_json<T>(p.alpha)}, {"beta", scalar_json<T>(p.beta)}, {"gamma", scalar_json<T>(p.gamma)},
          {"delta", scalar_json<T>(p.delta)}, {"N", p.N}};
}

template <typename T>
Outcome verify_poly(const JobConfig& cfg, double tol, const T& offset) {
  const auto p = racah_params_from<T>(cfg);
  Outcome o;
  o.document["parameters"] = racah_params_json(p);
  const Index dim = p.N + 1;
  Mat<T> hyper(dim, dim), rec(dim, dim), diff(dim, dim), applied(dim, dim), scaled(dim, dim);
  for (int n = 0; n <= p.N; ++n) {
    const auto f = difference_eigenfunction(n, p);
    for (int x = 0; x <= p.N; ++x) {
      hyper(n, x) = racah_hypergeometric(n, x, p);
      rec(n, x) = racah_recurrence_eval(n, x, p);
      diff(n, x) = f(x);
    }
    const GridFunction<T> row = hyper.row(n).transpose();
    applied.row(n) = difference_apply(row, p).transpose();
    scaled.row(n) = ((difference_eigenvalue(n, p) + offset) * row).transpose();
  }
  json res = json::array();
  bool ok = true;
  append_residual(res, ok, make_residual<T>("recurrence=hypergeometric", rec, hyper, tol));
  append_residual(res, ok, make_residual<T>("eigenfunction=hypergeometric", diff, hyper, tol));
  append_residual(res, ok, make_residual<T>("difference eigenvalue", applied, scaled, tol));
  int skipped = 0;
  Mat<T> lhs = Mat<T>::Zero(dim, dim), rhs = Mat<T>::Zero(dim, dim);
  for (int n = 0; n <= p.N; ++n)
    for (int x = 0; x <= p.N; ++x) {
      try {
        rhs(n, x) = racah_hypergeometric(x, n, p.dual());
        lhs(n, x) = hyper(n, x);
      } catch (const PochhammerPole&) {
        ++skipped;
      }
    }
  append_residual(res, ok, make_residual<T>("duality", lhs, rhs, tol));
  o.document["duality_points_skipped"] = skipped;
  o.document["residuals"] = res;
  o.document["passed"] = ok;
  o.code = ok ? kExitPass : kExitFailure;
  return o;
}

template <typename T>
Outcome verify_difference(const JobConfig& cfg, double tol, const T& offset) {
  const auto p = racah_params_from<T>(cfg);
  Outcome o;
  o.document["parameters"] = racah_params_json(p);
  auto [ops, sc] = realize_difference_algebra(p);
  StructureConstants<T> probe = sc;
  probe.d += offset;
  json res = json::array();
  bool ok = true;
  append_report(res, ok, verify_relations(ops, probe, tol));
  append_residual(res, ok, make_residual<T>("K3 closed form", ops.K3, difference_K3(p), tol));
  const auto [rc, map] = canonical_reduce(probe);
  const auto closed = reduced_constants_closed_form(p);
  Mat<T> got(3, 1), want(3, 1);
  got << rc.d, rc.e1, rc.e2;
  want << closed.constants.d, closed.constants.e1, closed.constants.e2;
  append_residual(res, ok, make_residual<T>("reduced constants=closed form", got, want, tol));
  append_report(res, ok, verify_relations(apply_map(map, ops), rc, tol), "reduced:");
  o.document["residuals"] = res;
  o.document["passed"] = ok;
  o.code = ok ? kExitPass : kExitFailure;
  return o;
}

template <typename T>
Outcome cmd_verify(const JobConfig& cfg) {
  static const std::map<std::string, double> default_tol{
      {"coupling", 1e-11}, {"symmetry", 1e-9}, {"irrep", 1e-10}, {"poly", 1e-10}, {"difference", 1e-10}};
  const auto it = default_tol.find(cfg.suite);
  if (it == default_tol.end())
    throw ConfigError("unknown suite \"" + cfg.suite + "\" (coupling, symmetry, irrep, poly, difference)");
  const double tol = cfg.tol.value_or(it->second);
  const T offset = parse_scalar<T>(cfg.inject);
  Outcome o;
  if (cfg.suite == "coupling") o = verify_coupling<T>(cfg, tol, offset);
  else if (cfg.suite == "symmetry") o = verify_symmetry<T>(cfg, tol, offset);
  else if (cfg.suite == "irrep") o = verify_irrep<T>(cfg, tol, offset);
  else if (cfg.suite == "poly") o = verify_poly<T>(cfg, tol, offset);
  else o = verify_difference<T>(cfg, tol, offset);
  json doc;
  doc["command"] = "verify";
  doc["suite"] = cfg.suite;
  doc["backend"] = is_exact_v<T> ? "exact" : "float";
  doc["tolerance"] = tol;
  doc["injected_offset"] = scalar_json<T>(offset);
  for (auto& [key, value] : o.document.items()) doc[key] = value;
  std::ostringstream csv;
  csv << "name,abs_residual,relative,passed\n";
  for (const auto& r : doc["residuals"])
    csv << '"' << r["name"].get<std::string>() << "\"," << (r["abs_residual"].is_string() ? r["abs_residual"].get<std::string>() : to_string(r["abs_residual"].get<double>()))
        << ',' << to_string(r["relative"].get<double>()) << ',' << (r["passed"].get<bool>() ? "true" : "false") << '\n';
  o.document = std::move(doc);
  o.csv = csv.str();
  return o;
}

// racah-table -----------------------------------------------------------------

template <typename T>
Outcome cmd_racah_table(const JobConfig& cfg) {
  const auto nu = parse_list<T>("nu", cfg.nu, 3);
  const CouplingSpec<T> spec{{nu[0], nu[1], nu[2]}, require_nonnegative("N", cfg.N)};
  try {
    check_coupling_spec(spec);
  } catch (const InvalidSpec& e) {
    throw ConfigError(e.what());
  }
  const auto table = racah_coefficients(spec);
  Outcome o;
  json doc;
  doc["nu"] = list_json<T>(nu);
  doc["N"] = spec.N;
  doc["rows_nu23"] = list_json<T>(table.row_labels);
  doc["cols_nu12"] = list_json<T>(table.col_labels);
  doc["coeffs"] = matrix_json(table.coeffs);
  if (table.signed_squares) {
    json rows = json::array();
    for (Index r = 0; r < table.signed_squares->rows(); ++r) {
      json row = json::array();
      for (Index c = 0; c < table.signed_squares->cols(); ++c) row.push_back(to_string((*table.signed_squares)(r, c)));
      rows.push_back(std::move(row));
    }
    doc["signed_squares"] = std::move(rows);
  }
  doc["sign_convention"] = table.sign_convention;
  doc["backend"] = table.backend;
  const double orth = orthogonality_residual(table.coeffs);
  doc["orthogonality_residual"] = orth;
  std::ostringstream csv;
  csv << "nu23\\nu12";
  for (const auto& c : table.col_labels) csv << ',' << csv_value(c);
  csv << '\n';
  for (Index r = 0; r < table.coeffs.rows(); ++r) {
    csv << csv_value(table.row_labels[static_cast<std::size_t>(r)]);
    for (Index c = 0; c < table.coeffs.cols(); ++c) csv << ',' << to_string(table.coeffs(r, c));
    csv << '\n';
  }
  o.document = std::move(doc);
  o.csv = csv.str();
  o.code = orth <= 1e-12 ? kExitPass : kExitFailure;
  return o;
}

// poly ------------------------------------------------------------------------

template <typename T>
Outcome cmd_poly(const JobConfig& cfg) {
  const auto p = racah_params_from<T>(cfg);
  const Index dim = p.N + 1;
  Mat<T> hyper(dim, dim), rec(dim, dim), diff(dim, dim);
  for (int n = 0; n <= p.N; ++n) {
    const auto f = difference_eigenfunction(n, p);
    const T scale = cfg.monic ? monic_prefactor(n, p) : T(1);
    for (int x = 0; x <= p.N; ++x) {
      hyper(n, x) = racah_hypergeometric(n, x, p, cfg.monic);
      rec(n, x) = racah_recurrence_eval(n, x, p, cfg.monic);
      diff(n, x) = scale * f(x);
    }
  }
  const T discrepancy = std::max(max_abs(Mat<T>(rec - hyper)), max_abs(Mat<T>(diff - hyper)));
  auto grid = [](const Mat<T>& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Index c = 0; c < m.cols(); ++c) row.push_back(scalar_json<T>(m(r, c)));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  json doc;
  doc["command"] = "poly";
  doc["backend"] = is_exact_v<T> ? "exact" : "float";
  doc["parameters"] = racah_params_json(p);
  doc["monic"] = cfg.monic;
  json lattice = json::array(), eig = json::array();
  for (int x = 0; x <= p.N; ++x) lattice.push_back(scalar_json<T>(p.lattice(x)));
  for (int n = 0; n <= p.N; ++n) eig.push_back(scalar_json<T>(difference_eigenvalue(n, p)));
  doc["lattice"] = std::move(lattice);
  doc["eigenvalues"] = std::move(eig);
  doc["values"] = {{"hypergeometric", grid(hyper)}, {"recurrence", grid(rec)}, {"difference", grid(diff)}};
  doc["max_discrepancy"] = scalar_json<T>(discrepancy);
  bool ok;
  if constexpr (is_exact_v<T>) {
    ok = is_zero(discrepancy);
  } else {
    ok = discrepancy <= cfg.tol.value_or(1e-10) * (1.0 + max_abs(hyper));
  }
  doc["passed"] = ok;
  std::ostringstream csv;
  csv << "n,x,hypergeometric,recurrence,difference\n";
  for (int n = 0; n <= p.N; ++n)
    for (int x = 0; x <= p.N; ++x)
      csv << n << ',' << x << ',' << csv_value(T(hyper(n, x))) << ',' << csv_value(T(rec(n, x))) << ','
          << csv_value(T(diff(n, x))) << '\n';
  Outcome o;
  o.document = std::move(doc);
  o.csv = csv.str();
  o.code = ok ? kExitPass : kExitFailure;
  return o;
}

// spectrum --------------------------------------------------------------------

template <typename T>
Outcome cmd_spectrum(const JobConfig& cfg) {
  const auto k = parse_list<T>("k", cfg.k, 3);
  const ModelParams<T> params{{k[0], k[1], k[2]}};
  try {
    check_model_params(params);
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }
  const int n_max = require_nonnegative("Nmax", cfg.n_max);
  json doc;
  doc["command"] = "spectrum";
  doc["backend"] = is_exact_v<T> ? "exact" : "float";
  doc["k"] = list_json<T>(k);
  doc["Nmax"] = n_max;
  json levels = json::array();
  std::ostringstream csv;
  csv << "N,energy,degeneracy\n";
  bool ok = true;
  for (const auto& lvl : energy_spectrum(params, n_max)) {
    bool consistent = lvl.hamiltonian_scalar && lvl.degeneracy == lvl.N + 1;
    if constexpr (is_exact_v<T>) {
      consistent = consistent && lvl.from_casimir == lvl.energy;
    } else {
      consistent = consistent && std::abs(lvl.from_casimir - lvl.energy) <= 1e-9 * (1.0 + std::abs(lvl.energy));
    }
    ok = ok && consistent;
    levels.push_back({{"N", lvl.N},
                      {"energy", scalar_json<T>(lvl.energy)},
                      {"degeneracy", lvl.degeneracy},
                      {"from_casimir", scalar_json<T>(lvl.from_casimir)},
                      {"hamiltonian_scalar", lvl.hamiltonian_scalar},
                      {"consistent", consistent}});
    csv << lvl.N << ',' << csv_value(lvl.energy) << ',' << lvl.degeneracy << '\n';
  }
  doc["levels"] = std::move(levels);
  doc["passed"] = ok;
  Outcome o;
  o.document = std::move(doc);
  o.csv = csv.str();
  o.code = ok ? kExitPass : kExitFailure;
  return o;
}

template <typename T>
Outcome dispatch(const JobConfig& cfg) {
  if (cfg.command == "verify") return cmd_verify<T>(cfg);
  if (cfg.command == "racah-table") return cmd_racah_table<T>(cfg);
  if (cfg.command == "poly") return cmd_poly<T>(cfg);
  return cmd_spectrum<T>(cfg);
}

void emit(const JobConfig& cfg, const Outcome& o, std::ostream& out) {
  const std::string text = cfg.format == "csv" ? o.csv : o.document.dump(2) + "\n";
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output);
  if (!file) throw ConfigError("cannot write " + cfg.output);
  file << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  JobConfig cfg;
  if (const char* env = std::getenv("RACAH_KIT_BACKEND"); env && *env) cfg.backend = env;

  CLI::App app{"Racah-Wilson algebra toolkit", "racah-kit"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value file supplying defaults");
  app.add_option("--backend", cfg.backend, "exact or float (default: $RACAH_KIT_BACKEND, else exact)");
  app.add_option("--format", cfg.format, "json or csv");
  app.add_option("--output", cfg.output, "output file (default: stdout)");
  app.add_option("--tol", cfg.tol, "relative tolerance for the float backend");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", cfg.suite, "coupling, symmetry, irrep, poly or difference");
  verify->add_option("--inject-offset", cfg.inject, "shift one structure constant to exercise the checker");
  auto* table = app.add_subcommand("racah-table", "Racah coefficients from the coupling problem");
  auto* poly = app.add_subcommand("poly", "Racah polynomial values by three methods");
  poly->add_flag("--monic", cfg.monic, "monic normalization");
  auto* spectrum = app.add_subcommand("spectrum", "energy levels of the superintegrable model");
  for (auto* sub : {verify, table, poly, spectrum}) sub->fallthrough();
  for (auto* sub : {verify, table}) sub->add_option("--nu", cfg.nu, "nu1,nu2,nu3");
  for (auto* sub : {verify, spectrum}) sub->add_option("--k", cfg.k, "k1,k2,k3");
  verify->add_option("--roots", cfg.roots, "xi1,xi2,xi3,xi4");
  verify->add_option("--sigma", cfg.sigma, "sigma");
  for (auto* sub : {verify, poly}) sub->add_option("--racah", cfg.racah, "alpha,beta,gamma,delta");
  for (auto* sub : {verify, table, poly}) sub->add_option("--N", cfg.N, "grade / polynomial degree bound");
  spectrum->add_option("--Nmax", cfg.n_max, "largest N");

  try {
    if (const auto path = find_config_path(argc, argv)) load_config_file(*path, cfg);
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  } catch (const RacahError& e) {
    err << e.what() << '\n';
    return kExitConfig;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.backend != "exact" && cfg.backend != "float")
      throw ConfigError("backend must be exact or float, got \"" + cfg.backend + "\"");
    if (cfg.format != "json" && cfg.format != "csv")
      throw ConfigError("format must be json or csv, got \"" + cfg.format + "\"");
    if (cfg.tol && !(*cfg.tol > 0.0)) throw ConfigError("--tol must be positive");
    const Outcome o = cfg.backend == "exact" ? dispatch<Rational>(cfg) : dispatch<double>(cfg);
    emit(cfg, o, out);
    if (o.code != kExitPass) err << cfg.command << ": check failed\n";
    return o.code;
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitConfig;
  } catch (const RacahError& e) {
    err << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace racah::cli
