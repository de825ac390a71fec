// lattika: command-line front end for the lattika headers.
//
// Exit codes: 0 success, 1 usage or input error, 2 a checked identity failed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lattika/io.hpp"
#include "lattika/lattika.hpp"
#include "lattika/selftest.hpp"

namespace {

using lattika::io::json;
using lattika::io::to_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolated = 2;

struct RunConfig {
  double tol = 1e-10;
  std::uint64_t budget = 10'000'000;
  std::string out;
  std::string format = "json";
};

lattika::EnumerationOptions enumeration_options(RunConfig const& config) {
  lattika::EnumerationOptions options;
  options.budget = config.budget;
  return options;
}

void emit(RunConfig const& config, std::string const& text) {
  if (config.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(config.out);
  if (!file) throw lattika::Error(lattika::ErrorKind::ParseError, "cannot write " + config.out);
  file << text;
}

void emit(RunConfig const& config, json const& j) { emit(config, lattika::io::dump(j)); }

void require_json(RunConfig const& config, std::string const& command) {
  if (config.format != "json") {
    throw CLI::ValidationError("--format", command + " only writes json");
  }
}

json bounded(double value, double bound) { return json{{"value", value}, {"bound", bound}}; }

json qresult(lattika::QuadratureResult const& q) { return bounded(q.value, q.error); }

int cmd_invariants(RunConfig const& config, std::string const& path, double eps) {
  require_json(config, "invariants");
  auto const lattice = lattika::io::read_lattice(path);
  auto const options = enumeration_options(config);
  auto const h0 = lattika::h0_ar(lattice, options);
  auto const shortest = lattika::minimum_and_short_vectors(lattice, options);
  json j;
  if (lattice.label()) j["label"] = *lattice.label();
  j["rank"] = lattice.rank();
  j["determinant"] = to_json(lattice.determinant());
  j["covolume"] = to_json(lattika::covolume(lattice));
  j["degree"] = to_json(lattika::arithmetic_degree(lattice));
  j["h0_ar"] = json{{"count", h0.count}, {"value", h0.value.estimate}, {"bound", h0.value.bound}};
  j["h0_theta"] = to_json(lattika::h0_theta(lattice, eps, options));
  j["minimum"] = to_json(shortest.minimum);
  j["minimal_vectors"] = shortest.vectors.size();
  j["integral"] = lattika::is_integral(lattice);
  emit(config, j);
  return kExitOk;
}

int cmd_enumerate(RunConfig const& config, std::string const& path, std::string const& radius_text, bool list) {
  require_json(config, "enumerate");
  auto const lattice = lattika::io::read_lattice(path);
  lattika::Rational const radius_sq = lattika::parse_rational(radius_text);
  if (radius_sq < 0) throw lattika::Error(lattika::ErrorKind::RadiusNegative, "radius_sq must be >= 0");
  json j;
  j["radius_sq"] = to_json(radius_sq);
  if (list) {
    auto const ball = lattika::enumerate_ball(lattice, radius_sq, enumeration_options(config));
    j["count"] = ball.exact_count;
    json vectors = json::array();
    for (auto const& v : ball.vectors) vectors.push_back(v.coords);
    j["vectors"] = vectors;
  } else {
    j["count"] = lattika::count_ball(lattice, radius_sq, enumeration_options(config));
  }
  double const count = j["count"].get<double>();
  j["log_count"] = bounded(std::log(count), std::log(count) * lattika::BoundedReal::kUlp);
  emit(config, j);
  return kExitOk;
}

int cmd_theta(RunConfig const& config, std::string const& path, double t, double eps) {
  require_json(config, "theta");
  auto const lattice = lattika::io::read_lattice(path);
  auto const theta = lattika::theta_series(lattice, t, eps, enumeration_options(config));
  json j;
  j["t"] = t;
  j["value"] = theta.value;
  j["bound"] = theta.tail + theta.rounding;
  j["tail"] = theta.tail;
  j["rounding"] = theta.rounding;
  emit(config, j);
  return kExitOk;
}

int cmd_rr_check(RunConfig const& config, std::string const& path, double eps) {
  require_json(config, "rr-check");
  auto const lattice = lattika::io::read_lattice(path);
  auto const check = lattika::rr_defect(lattice, eps, enumeration_options(config));
  json j;
  j["h0_theta"] = to_json(check.h0_theta);
  j["h0_theta_dual"] = to_json(check.h0_theta_dual);
  j["degree"] = to_json(check.degree);
  j["defect"] = check.defect.estimate;
  j["bound"] = check.defect.bound;
  j["verified"] = check.verified();
  emit(config, j);
  return check.verified() ? kExitOk : kExitViolated;
}

int cmd_poisson(RunConfig const& config, std::string const& path, double t, double r, double eps) {
  require_json(config, "poisson");
  auto const lattice = lattika::io::read_lattice(path);
  auto const check = lattika::poisson_identity(lattice, t, r, eps, enumeration_options(config));
  json j;
  j["t"] = t;
  j["r"] = r;
  j["lhs"] = to_json(check.lhs);
  j["rhs"] = to_json(check.rhs);
  j["verified"] = check.verified();
  emit(config, j);
  return check.verified() ? kExitOk : kExitViolated;
}

int cmd_uncertainty(RunConfig const& config, std::string const& path, double r, std::vector<double> const& grid,
                    double eps) {
  auto const lattice = lattika::io::read_lattice(path);
  auto const rows = lattika::uncertainty_report(lattice, r, grid, eps, enumeration_options(config));
  if (config.format == "csv") {
    std::ostringstream out;
    lattika::write_uncertainty_csv(out, rows);
    emit(config, out.str());
    return kExitOk;
  }
  json arr = json::array();
  for (auto const& row : rows) {
    arr.push_back(json{{"t", row.t},
                       {"lhs", row.lhs.estimate},
                       {"lhs_bound", row.lhs.bound},
                       {"rhs", row.rhs.estimate},
                       {"rhs_bound", row.rhs.bound},
                       {"count_primal", row.count_primal},
                       {"count_dual", row.count_dual}});
  }
  emit(config, arr);
  return kExitOk;
}

int cmd_arakelov_h0(RunConfig const& config, std::string const& path, bool theta, double eps) {
  require_json(config, "arakelov h0");
  auto const divisor = lattika::io::divisor_from_json(lattika::io::read_json_file(path));
  auto const bundle = lattika::line_bundle_lattice(divisor);
  json j;
  j["divisor"] = to_json(divisor);
  j["degree"] = lattika::degree(divisor);
  j["generator"] = to_json(bundle.generator);
  j["gram"] = to_json(bundle.gram);
  if (theta) {
    j["h0_theta"] = to_json(lattika::h0_theta(bundle, eps, enumeration_options(config)));
  } else {
    auto const h0 = lattika::h0_ar(bundle, enumeration_options(config));
    j["h0_ar"] = json{{"count", h0.count}, {"value", h0.value.estimate}, {"bound", h0.value.bound}};
  }
  emit(config, j);
  return kExitOk;
}

int cmd_mellin_verify(RunConfig const& config, std::string const& name, std::vector<double> const& s_list,
                      double tol) {
  require_json(config, "mellin verify");
  lattika::EffectivityFn fn;
  if (name == "gs") {
    fn = lattika::gauss_schoof_effectivity();
  } else if (name == "symexp") {
    fn = lattika::symmetric_exponential_effectivity();
  } else if (name == "delta") {
    fn = lattika::delta_effectivity(lattika::find_x0(1e-10).x0);
  } else {
    throw CLI::ValidationError("--f", "expected gs, symexp or delta");
  }
  auto const rows = lattika::verify_theorem_4_1(fn, s_list, tol);
  json arr = json::array();
  bool ok = true;
  for (auto const& row : rows) {
    ok = ok && row.pass;
    arr.push_back(json{{"s", row.s},
                       {"mellin", qresult(row.mellin)},
                       {"divisor_side", qresult(row.divisor_side)},
                       {"difference", row.difference},
                       {"tol", tol},
                       {"pass", row.pass}});
  }
  emit(config, json{{"f", name}, {"c", fn.c}, {"rows", arr}});
  return ok ? kExitOk : kExitViolated;
}

int cmd_delta_tau(RunConfig const& config, std::size_t n) {
  auto const table = lattika::tau_coefficients(n);
  if (config.format == "csv") {
    std::ostringstream out;
    out << "n,tau\n";
    for (std::size_t k = 1; k <= n; ++k) out << k << ',' << table.tau[k].get_str() << '\n';
    emit(config, out.str());
    return kExitOk;
  }
  json arr = json::array();
  for (std::size_t k = 1; k <= n; ++k) arr.push_back(table.tau[k].get_str());
  emit(config, json{{"n_max", n}, {"tau", arr}});
  return kExitOk;
}

int cmd_delta_lfunction(RunConfig const& config, std::vector<double> const& s_list, double tol) {
  require_json(config, "delta lfunction");
  json arr = json::array();
  for (double s : s_list) {
    auto const l = lattika::l_delta(s, tol);
    arr.push_back(json{{"s", s}, {"value", l.value}, {"bound", l.error}, {"terms", l.evaluations}});
  }
  emit(config, arr);
  return kExitOk;
}

int cmd_delta_verify(RunConfig const& config, std::vector<double> const& s_list, double tol) {
  require_json(config, "delta verify");
  auto const rows = lattika::verify_example_4_2(s_list, tol);
  json arr = json::array();
  bool ok = true;
  for (auto const& row : rows) {
    ok = ok && row.pass;
    arr.push_back(json{{"s", row.s},
                       {"l_series", qresult(row.l_series)},
                       {"l_divisor", qresult(row.l_divisor)},
                       {"relative_difference", row.relative_difference},
                       {"tol", tol},
                       {"pass", row.pass}});
  }
  emit(config, arr);
  return ok ? kExitOk : kExitViolated;
}

int cmd_classify(RunConfig const& config, std::string const& path) {
  require_json(config, "classify");
  auto const forms = lattika::io::read_forms(path);
  lattika::IsometryOptions options;
  options.enumeration = enumeration_options(config);
  auto const partition = lattika::classify_family(forms, options);
  json certs = json::array();
  bool ok = true;
  for (auto const& [pair, cert] : partition.certificates) {
    bool const verified = lattika::verify_certificate(forms[pair.first], forms[pair.second], cert);
    ok = ok && verified;
    certs.push_back(json{{"from", pair.first}, {"to", pair.second}, {"U", to_json(cert.U)}, {"verified", verified}});
  }
  json inconclusive = json::array();
  for (auto const& [a, b] : partition.inconclusive) inconclusive.push_back({a, b});
  emit(config, json{{"classes", partition.classes}, {"certificates", certs}, {"inconclusive", inconclusive}});
  return ok ? kExitOk : kExitViolated;
}

int cmd_genus(RunConfig const& config, std::string const& path, std::string const& pairs) {
  require_json(config, "genus");
  if (pairs != "all") throw CLI::ValidationError("--pairs", "only 'all' is supported");
  auto const forms = lattika::io::read_forms(path);
  json arr = json::array();
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (std::size_t j = i + 1; j < forms.size(); ++j) {
      auto const cmp = lattika::same_genus_partial(forms[i], forms[j]);
      json symbols = json::array();
      if (cmp.verdict != lattika::GenusVerdict::Different || !cmp.odd_primes.empty()) {
        for (auto const& p : cmp.odd_primes) {
          symbols.push_back(json{{"first", to_json(lattika::local_symbol_odd(forms[i], p))},
                                 {"second", to_json(lattika::local_symbol_odd(forms[j], p))}});
        }
      }
      arr.push_back(json{{"pair", {i, j}},
                         {"verdict", lattika::to_string(cmp.verdict)},
                         {"reason", cmp.reason},
                         {"odd_symbols", symbols}});
    }
  emit(config, arr);
  return kExitOk;
}

int cmd_selftest(RunConfig const& config) {
  auto const results = lattika::run_acceptance();
  std::ostringstream out;
  bool ok = true;
  for (auto const& r : results) {
    lattika::print_criterion(out, r);
    ok = ok && r.pass;
  }
  emit(config, out.str());
  return ok ? kExitOk : kExitViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattika: Euclidean lattice invariants and their cross-checks"};
  app.require_subcommand(1);
  RunConfig config;
  if (char const* env = std::getenv("LATTIKA_BUDGET")) {
    try {
      config.budget = std::stoull(env);
    } catch (std::exception const&) {
      std::cerr << "LATTIKA_BUDGET is not an integer\n";
      return kExitUsage;
    }
  }
  app.add_option("--tol", config.tol, "Default tolerance")->check(CLI::PositiveNumber);
  app.add_option("--budget", config.budget, "Point-count budget for enumerations")->check(CLI::PositiveNumber);
  app.add_option("--out", config.out, "Write output to this file instead of stdout");
  app.add_option("--format", config.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  std::string lattice_path, radius_sq = "1", divisor_path, forms_path, f_name, pairs = "all";
  double t = 1.0, r = 1.0, eps = 1e-12;
  bool list = false, use_theta = false, use_ar = false;
  std::size_t tau_n = 10;
  std::vector<double> s_list, t_grid;
  std::optional<double> local_tol;

  auto* invariants = app.add_subcommand("invariants", "Rank, determinant, covolume, degree, h0_Ar, h0_theta, minimum");
  invariants->add_option("--lattice", lattice_path)->required();
  invariants->add_option("--eps", eps);

  auto* enumerate = app.add_subcommand("enumerate", "Count or list lattice points with norm_sq <= radius_sq");
  enumerate->add_option("--lattice", lattice_path)->required();
  enumerate->add_option("--radius-sq", radius_sq, "Rational, e.g. 5/2")->required();
  enumerate->add_flag("--list", list);

  auto* theta = app.add_subcommand("theta", "Theta series sum exp(-pi t |v|^2)");
  theta->add_option("--lattice", lattice_path)->required();
  theta->add_option("--t", t)->check(CLI::PositiveNumber);
  theta->add_option("--eps", eps)->check(CLI::PositiveNumber);

  auto* rr = app.add_subcommand("rr-check", "h0_theta(E) - h0_theta(E^dual) - deg(E)");
  rr->add_option("--lattice", lattice_path)->required();
  rr->add_option("--eps", eps)->check(CLI::PositiveNumber);

  auto* poisson = app.add_subcommand("poisson", "Both sides of the Poisson identity for the smoothed ball");
  poisson->add_option("--lattice", lattice_path)->required();
  poisson->add_option("--t", t)->check(CLI::PositiveNumber);
  poisson->add_option("--r", r)->check(CLI::PositiveNumber);
  poisson->add_option("--eps", eps)->check(CLI::PositiveNumber);

  auto* uncertainty = app.add_subcommand("uncertainty", "Sweep of the Poisson identity over t");
  uncertainty->add_option("--lattice", lattice_path)->required();
  uncertainty->add_option("--r", r)->check(CLI::PositiveNumber);
  uncertainty->add_option("--t-grid", t_grid)->delimiter(',')->required();
  uncertainty->add_option("--eps", eps)->check(CLI::PositiveNumber);

  auto* arakelov = app.add_subcommand("arakelov", "Arakelov divisors");
  arakelov->require_subcommand(1);
  auto* arakelov_h0 = arakelov->add_subcommand("h0", "h0 of O(D)");
  arakelov_h0->add_option("--divisor", divisor_path)->required();
  auto* theta_flag = arakelov_h0->add_flag("--theta", use_theta);
  arakelov_h0->add_flag("--ar", use_ar)->excludes(theta_flag);
  arakelov_h0->add_option("--eps", eps)->check(CLI::PositiveNumber);

  auto* mellin = app.add_subcommand("mellin", "Mellin transforms");
  mellin->require_subcommand(1);
  auto* mellin_verify = mellin->add_subcommand("verify", "Mellin transform against the divisor integral");
  mellin_verify->add_option("--f", f_name)->required()->check(CLI::IsMember({"gs", "symexp", "delta"}));
  mellin_verify->add_option("--s", s_list)->delimiter(',')->required();
  mellin_verify->add_option("--tol", local_tol)->check(CLI::PositiveNumber);

  auto* delta = app.add_subcommand("delta", "The modular discriminant");
  delta->require_subcommand(1);
  auto* delta_tau = delta->add_subcommand("tau", "Ramanujan tau(1..n)");
  delta_tau->add_option("--n", tau_n)->required()->check(CLI::Range(1, 100000));
  auto* delta_l = delta->add_subcommand("lfunction", "L(s, Delta) for s > 7.5");
  delta_l->add_option("--s", s_list)->delimiter(',')->required();
  delta_l->add_option("--tol", local_tol)->check(CLI::PositiveNumber);
  auto* delta_verify = delta->add_subcommand("verify", "L(s, Delta) from tau against the divisor integral");
  delta_verify->add_option("--s", s_list)->delimiter(',')->required();
  delta_verify->add_option("--tol", local_tol)->check(CLI::PositiveNumber);

  auto* classify = app.add_subcommand("classify", "Partition forms into isometry classes");
  classify->add_option("--forms", forms_path)->required();

  auto* genus = app.add_subcommand("genus", "Pairwise partial genus comparison");
  genus->add_option("--forms", forms_path)->required();
  genus->add_option("--pairs", pairs);

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance checks");

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  double const tol = local_tol.value_or(config.tol);
  try {
    if (*invariants) return cmd_invariants(config, lattice_path, eps);
    if (*enumerate) return cmd_enumerate(config, lattice_path, radius_sq, list);
    if (*theta) return cmd_theta(config, lattice_path, t, eps);
    if (*rr) return cmd_rr_check(config, lattice_path, eps);
    if (*poisson) return cmd_poisson(config, lattice_path, t, r, eps);
    if (*uncertainty) return cmd_uncertainty(config, lattice_path, r, t_grid, eps);
    if (*arakelov_h0) return cmd_arakelov_h0(config, divisor_path, use_theta, eps);
    if (*mellin_verify) return cmd_mellin_verify(config, f_name, s_list, local_tol.value_or(1e-6));
    if (*delta_tau) return cmd_delta_tau(config, tau_n);
    if (*delta_l) return cmd_delta_lfunction(config, s_list, tol);
    if (*delta_verify) return cmd_delta_verify(config, s_list, local_tol.value_or(1e-6));
    if (*classify) return cmd_classify(config, forms_path);
    if (*genus) return cmd_genus(config, forms_path, pairs);
    if (*selftest) return cmd_selftest(config);
  } catch (CLI::ValidationError const& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (lattika::Error const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
