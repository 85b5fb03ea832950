#include <breather/breather.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace breather;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  bool skip_check = false;
};

struct Context {
  RunConfig cfg;
  std::string hash;
  fs::path out;
};

Context prepare(const Options& o) {
  nlohmann::json j = read_json_file(o.config);
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  if (o.seed) j["seed"] = *o.seed;
  if (o.threads) j["threads"] = *o.threads;
  Context c{parse_config(j), "", fs::path(o.out)};
  nlohmann::json hashed = j;
  hashed.erase("threads");  // does not change any output
  c.hash = config_hash(hashed);
  set_threads(c.cfg.threads);
  fs::create_directories(c.out);
  return c;
}

const char* side_name(Side s) { return to_string(s); }

void add_intervals(CsvWriter& w, const std::vector<Interval>& bands, const std::vector<Interval>& gaps,
                   const std::string& side) {
  std::vector<std::pair<Interval, const char*>> rows;
  for (const auto& b : bands) rows.push_back({b, "band"});
  for (const auto& g : gaps) rows.push_back({g, "gap"});
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first.lo < b.first.lo; });
  for (const auto& [iv, type] : rows) {
    CsvWriter::Row r;
    r << iv.lo << iv.hi << type << side;
    w.add(r);
  }
}

int run_bands(const Context& c) {
  const BandStructure bs = band_scan(c.cfg.pot(), c.cfg.scan_lambda_max(), c.cfg.scan.resolution);
  CsvWriter w({"lambda_lo", "lambda_hi", "type", "side"}, c.hash);
  for (const auto* sb : {&bs.plus, &bs.minus}) add_intervals(w, sb->bands, sb->gaps, side_name(sb->side));
  add_intervals(w, bs.bands, bs.gaps, "joint");
  w.save(c.out / "bands.csv");
  for (const auto& m : bs.warnings) std::cerr << "warning: " << m << "\n";
  std::cout << "bands: " << bs.bands.size() << " joint bands, " << bs.gaps.size() << " gaps up to lambda = "
            << format_double(bs.lambda_max) << " -> " << (c.out / "bands.csv").string() << "\n";
  return 0;
}

int run_density(const Context& c) {
  const double lmax = c.cfg.density.lambda_max > 0 ? c.cfg.density.lambda_max : c.cfg.scan_lambda_max();
  const BandStructure bs = band_scan(c.cfg.pot(), lmax, c.cfg.scan.resolution);
  const auto eigs = gap_eigenvalues(c.cfg.pot(), bs);
  const SpectralMeasure mu(c.cfg.pot(), bs, eigs, c.cfg.density.nodes_per_band);
  CsvWriter w({"lambda", "weight", "M11", "ReM12", "ImM12", "M22", "plus", "minus", "excluded"}, c.hash);
  for (const auto& n : mu.nodes()) {
    const auto& M = n.sample.M;
    CsvWriter::Row r;
    r << n.lambda << n.weight << M.a.real() << M.b.real() << M.b.imag() << M.d.real() << n.sample.plus
      << n.sample.minus << n.sample.excluded;
    w.add(r);
  }
  w.save(c.out / "density.csv");
  CsvWriter pm({"lambda", "v0_u", "v0_du", "norm_sq"}, c.hash);
  for (const auto& p : mu.point_masses()) {
    CsvWriter::Row r;
    r << p.lambda << p.v0[0] << p.v0[1] << p.norm_sq;
    pm.add(r);
  }
  pm.save(c.out / "point_masses.csv");
  std::cout << "density: " << mu.nodes().size() << " nodes (" << mu.excluded() << " excluded), "
            << mu.point_masses().size() << " point masses\n";
  return 0;
}

int run_eigs(const Context& c) {
  const BandStructure bs = band_scan(c.cfg.pot(), c.cfg.scan_lambda_max(), c.cfg.scan.resolution);
  const auto eigs = gap_eigenvalues(c.cfg.pot(), bs);
  CsvWriter w({"lambda", "residual", "sign_change", "edge_flag", "rho_plus", "rho_minus"}, c.hash);
  for (const auto& e : eigs) {
    CsvWriter::Row r;
    r << e.lambda << e.residual << e.sign_change << e.edge_flag << e.rho_plus << e.rho_minus;
    w.add(r);
  }
  w.save(c.out / "eigenvalues.csv");
  std::cout << "eigs: " << eigs.size() << " gap eigenvalues up to lambda = " << format_double(bs.lambda_max)
            << "\n";
  return 0;
}

AssumptionReport assumptions(const Context& c, bool embedding) {
  CheckOptions opt;
  opt.k_max = c.cfg.check.k_max;
  if (embedding && c.cfg.solver.p > 2) opt.p = c.cfg.solver.p;
  return check_assumptions(c.cfg.pot(), c.cfg.gamma ? &*c.cfg.gamma : nullptr, c.cfg.T, opt);
}

int run_check(const Context& c) {
  const AssumptionReport rep = assumptions(c, c.cfg.check.embedding);
  nlohmann::json j = to_json(rep);
  j["potential_kind"] = to_string(c.cfg.pot().kind());
  if (c.cfg.check.embedding && !(c.cfg.solver.p > 2)) j["embedding_note"] = "skipped: requires p > 2";
  write_json_file(c.out / "check.json", j, c.hash);
  std::cout << "check: " << (rep.all_pass ? "PASS" : "FAIL") << " (a1 " << rep.a1_ok << ", a2 " << rep.a2_ok
            << ", a3 " << rep.a3.pass << " delta = " << format_double(rep.a3.delta) << ", a4 " << rep.a4.pass;
  if (rep.embedding) std::cout << ", embedding " << rep.embedding->pass;
  if (rep.multistep && rep.multistep->alpha) std::cout << ", alpha = " << to_string(*rep.multistep->alpha);
  std::cout << ")\n";
  return rep.all_pass ? 0 : kExitFail;
}

int run_bound_scan(const Context& c) {
  const auto& b = c.cfg.bounds;
  const BoundScan s = bound_scan(c.cfg.pot(), b.I, b.J, b.lambda_max, b.samples, b.angles);
  CsvWriter w({"lambda", "max_ratio", "argmax_angle", "min_ratio", "reverse_ok"}, c.hash);
  bool reverse = true;
  for (const auto& x : s.samples) {
    CsvWriter::Row r;
    r << x.lambda << x.max_ratio << x.argmax_angle << x.min_ratio << x.reverse_ok;
    w.add(r);
    reverse = reverse && x.reverse_ok;
  }
  w.save(c.out / "bound_scan.csv");
  const Plateau pl = plateau(s);
  std::cout << "bound-scan: sup ratio " << format_double(s.sup_ratio) << " at lambda = "
            << format_double(s.sup_lambda) << ", last/mid decade max " << format_double(pl.ratio)
            << ", reverse inequality "<< (reverse ? "holds" : "FAILS") << "\n";
  return 0;
}

int run_solve(const Context& c, bool skip_check) {
  if (!c.cfg.gamma) throw ConfigError("solve: config needs a 'gamma' section");
  nlohmann::json check = nullptr;
  if (!skip_check) {
    const AssumptionReport rep = assumptions(c, false);
    check = to_json(rep);
    if (!rep.all_pass) {
      write_json_file(c.out / "check.json", check, c.hash);
      std::cerr << "solve: assumptions fail for this potential and period (see check.json); "
                   "rerun with --skip-check to force\n";
      return kExitFail;
    }
  }
  const BreatherSolution sol = solve_breather(c.cfg.pot(), *c.cfg.gamma, c.cfg.solver);
  const BreatherProblem& prob = *sol.problem;

  nlohmann::json coef = {{"omega", prob.omega()},
                         {"T", 2.0 * std::numbers::pi / prob.omega()},
                         {"p", prob.p()},
                         {"R", prob.basis().R()},
                         {"ks", prob.ks()},
                         {"lambda", prob.basis().eigenvalues()}};
  nlohmann::json modes = nlohmann::json::array();
  for (Eigen::Index k = 0; k < sol.c.cols(); ++k) {
    std::vector<double> re(sol.c.rows()), im(sol.c.rows());
    for (Eigen::Index m = 0; m < sol.c.rows(); ++m) {
      re[m] = sol.c(m, k).real();
      im[m] = sol.c(m, k).imag();
    }
    modes.push_back({{"k", prob.ks()[k]}, {"re", re}, {"im", im}});
  }
  coef["modes"] = modes;
  coef["convention"] = "u(x,t) = 2 Re sum_k sum_m c_{m,k} phi_m(x) exp(i k omega t)";
  write_json_file(c.out / "coefficients.json", coef, c.hash);

  const int nx = c.cfg.output.field_nx, nt = c.cfg.output.field_nt;
  const double R = prob.basis().R();
  std::vector<double> xs(nx);
  for (int i = 0; i < nx; ++i) xs[i] = -R + 2.0 * R * i / (nx - 1);
  const Eigen::MatrixXd U = sample_field(prob, sol.c, xs, nt);
  const double T = 2.0 * std::numbers::pi / prob.omega();
  CsvWriter f({"x", "t", "u"}, c.hash);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nt; ++j) {
      CsvWriter::Row r;
      r << xs[i] << T * j / nt << U(i, j);
      f.add(r);
    }
  f.save(c.out / "field.csv");

  nlohmann::json rep = to_json(sol.report);
  rep["assumptions"] = check;
  write_json_file(c.out / "report.json", rep, c.hash);
  std::cout << "solve: J = " << format_double(sol.report.J) << ", residual " << format_double(sol.report.pde_residual)
            << ", boundary mass " << format_double(sol.report.boundary_mass)
            << (sol.report.converged ? "" : " (NOT converged)") << "\n";
  return sol.report.converged ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis and breather ground states for perturbed-periodic step potentials"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);
  Options opt;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory (created if missing)");
    sub->add_option("--threads", opt.threads, "worker threads, 0 = hardware");
    sub->add_option("--seed", opt.seed, "random seed, overrides the config");
  };
  CLI::App* bands = app.add_subcommand("bands", "band/gap structure of both tails -> bands.csv");
  CLI::App* density = app.add_subcommand("density", "spectral density nodes and point masses");
  CLI::App* eigs = app.add_subcommand("eigs", "eigenvalues in spectral gaps -> eigenvalues.csv");
  CLI::App* check = app.add_subcommand("check", "assumption report -> check.json; exit 1 on failure");
  CLI::App* bscan = app.add_subcommand("bound-scan", "sup-norm over L2-norm ratio scan -> bound_scan.csv");
  CLI::App* solve = app.add_subcommand("solve", "breather ground state -> coefficients, field, report");
  for (auto* s : {bands, density, eigs, check, bscan, solve}) common(s);
  solve->add_flag("--skip-check", opt.skip_check, "solve even if the assumption check fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const Context c = prepare(opt);
    if (*bands) return run_bands(c);
    if (*density) return run_density(c);
    if (*eigs) return run_eigs(c);
    if (*check) return run_check(c);
    if (*bscan) return run_bound_scan(c);
    if (*solve) return run_solve(c, opt.skip_check);
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
