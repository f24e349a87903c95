// hcx: batch front end. Reads a representation file, runs one experiment and
// writes CSV/JSON. Exit codes: 0 ok, 2 file error, 3 precondition error,
// 4 numerical failure.

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hyperconvex.hpp"

namespace {

using namespace hcx;

struct Config {
  std::string rep_path;
  std::string out_path;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  double perturb_eps = 0;
  int max_len = 12;
  int n_max = 12;
  std::vector<double> phi;
  std::vector<double> dir;
  std::string mode = "conjugacy";
  std::string kind = "limit";
  double norm_floor = 1.0;
  double tol = 1e-6;
  double t = NAN;
  int resolution = 16;
  double half_angle = 0.04;
  int root_index = 1;
  bool to_boundary = false;
  std::vector<double> epsilons{0, 1e-4, 1e-3, 1e-2, 5e-2};
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::kFile: return 2;
    case ErrorKind::kInvalidParameter:
    case ErrorKind::kInvalidInput:
    case ErrorKind::kNotInDualCone:
    case ErrorKind::kNotOnBoundary:
    case ErrorKind::kDegenerateCone: return 3;
    default: return 4;
  }
}

Vector as_vector(const std::vector<double>& v, int d, const char* what) {
  require(static_cast<int>(v.size()) == d, ErrorKind::kInvalidParameter,
          std::string(what) + " needs " + std::to_string(d) + " values");
  return Eigen::Map<const Vector>(v.data(), d);
}

Representation load(const Config& c) {
  Representation rep = load_rep(c.rep_path);
  if (c.perturb_eps > 0) rep = perturb(rep, c.perturb_eps, c.seed);
  return rep;
}

void emit(const Config& c, const std::string& content) {
  require(!c.out_path.empty(), ErrorKind::kInvalidParameter, "--out is required");
  io::write_file(c.out_path, content);
}

std::string run(const std::string& cmd, const Config& c) {
  const Representation rep = load(c);
  const int d = rep.dim();
  if (cmd == "spectra") {
    emit(c, io::spectra_csv(rep, c.max_len));
    std::size_t words = 0;
    for (int l = 1; l <= c.max_len; ++l) words += reduced_word_count(rep.rank(), l);
    return "words: " + std::to_string(words);
  }
  if (cmd == "cone") {
    require(c.kind == "limit" || c.kind == "asymptotic", ErrorKind::kInvalidParameter, "--kind is limit or asymptotic");
    const ConeHull h = c.kind == "limit" ? limit_cone(rep, c.max_len, c.threads)
                                         : asymptotic_cone(rep, c.max_len, c.norm_floor, c.threads);
    emit(c, io::hull_csv(h));
    return "extreme directions: " + std::to_string(h.hull.size()) + " area: " + io::num(h.area());
  }
  if (cmd == "exponent") {
    require(c.mode == "conjugacy" || c.mode == "element", ErrorKind::kInvalidParameter, "--mode is conjugacy or element");
    const ExponentEstimate e = critical_exponent_direct(rep, Functional(as_vector(c.phi, d, "--phi")), c.max_len,
                                                        c.mode == "conjugacy" ? CountMode::kConjugacy : CountMode::kElement,
                                                        c.threads);
    emit(c, io::exponent_csv(e));
    return "h = " + io::num(e.value) + " (se " + io::num(e.std_error) + ")";
  }
  if (cmd == "pressure") {
    const PeriodTable table = class_spectra(rep, c.n_max, c.threads);
    const Vector phi = Functional(as_vector(c.phi, d, "--phi")).coeffs();
    if (!std::isnan(c.t)) {
      const PressureTable p = pressure_table(table, phi, c.t, "phi");
      emit(c, io::pressure_csv(p));
      return "extrapolated pressure: " + io::num(p.extrapolated) + (p.extrapolation_flag ? " (fallback)" : "");
    }
    const PressureRoot r = pressure_root(table, phi, c.tol, c.n_max);
    emit(c, io::root_json(phi, r).dump(2) + "\n");
    return "root: " + io::num(r.root) + (r.extrapolation_flag ? " (fallback)" : "");
  }
  if (cmd == "boundary") {
    const DualBody body = boundary_curve(class_spectra(rep, c.n_max, c.threads), c.resolution, c.n_max, c.threads);
    emit(c, io::boundary_json(body).dump(2) + "\n");
    return "boundary points: " + std::to_string(body.boundary.size()) + " gaps: " + std::to_string(body.gap_angles.size());
  }
  if (cmd == "psi") {
    const Vector v = as_vector(c.dir, d, "--dir").normalized();
    const DualBody body = boundary_curve(class_spectra(rep, c.n_max, c.threads), c.resolution, c.n_max, c.threads);
    const DualPsi dual = psi_from_duality(body, v);
    const GrowthIndicatorSample direct = growth_indicator_direct(rep, v, c.half_angle, c.max_len, c.threads);
    emit(c, io::comparison_csv({{v, dual.value, PsiMethod::kDuality}, {v, direct.value, PsiMethod::kDirectCount}}, d));
    return "psi duality: " + io::psi_text(dual.value) + (dual.boundary_flag ? " (window edge)" : "") +
           " direct: " + io::psi_text(direct.value);
  }
  if (cmd == "entropy") {
    const PeriodTable table = class_spectra(rep, c.n_max, c.threads);
    Vector phi = Functional(as_vector(c.phi, d, "--phi")).coeffs();
    if (c.to_boundary) phi *= pressure_root(table, phi, 1e-12, c.n_max).root;
    const double h = entropy_of_state(table, phi, c.n_max);
    emit(c, nlohmann::json{{"phi", io::to_std(phi)}, {"entropy", h}, {"n", c.n_max}}.dump(2) + "\n");
    return "entropy: " + io::num(h);
  }
  if (cmd == "counting-check") {
    const OrbitCountRatio r = orbit_count_ratio(rep, c.root_index, c.max_len, c.threads);
    emit(c, io::ratio_csv(r));
    return "h = " + io::num(r.h) + " last ratio: " + io::num(r.rows.back().ratio);
  }
  if (cmd == "perturb-scan") {
    std::vector<Vector> probes{as_vector(c.dir, d, "--dir").normalized()};
    ContinuityOptions opt;
    opt.n_max = c.n_max;
    const auto rows = continuity_scan(rep, c.epsilons, c.seed, probes, opt, c.threads);
    emit(c, io::continuity_csv(rows));
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.failed;
    return "rows: " + std::to_string(rows.size()) + " failed: " + std::to_string(failed);
  }
  throw Error(ErrorKind::kInvalidParameter, "unknown command " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperconvex representation experiments"};
  app.require_subcommand(1);
  Config c;
  auto common = [&](CLI::App* s) {
    s->add_option("--rep", c.rep_path, "representation file (text or JSON)")->required();
    s->add_option("--out", c.out_path, "output file")->required();
    s->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1u, 256u));
    s->add_option("--seed", c.seed, "seed for every random choice");
    s->add_option("--perturb", c.perturb_eps, "perturb the loaded representation by this epsilon first")
        ->check(CLI::NonNegativeNumber);
  };
  auto* spectra = app.add_subcommand("spectra", "Cartan and Jordan projections of every reduced word");
  common(spectra);
  spectra->add_option("--max-len", c.max_len)->check(CLI::Range(1, 16));

  auto* cone_cmd = app.add_subcommand("cone", "limit or asymptotic cone hull");
  common(cone_cmd);
  cone_cmd->add_option("--max-len", c.max_len)->check(CLI::Range(4, 16));
  cone_cmd->add_option("--kind", c.kind, "limit | asymptotic");
  cone_cmd->add_option("--norm-floor", c.norm_floor);

  auto* exponent = app.add_subcommand("exponent", "critical exponent by direct counting");
  common(exponent);
  exponent->add_option("--phi", c.phi, "functional coefficients")->required()->expected(2, 64);
  exponent->add_option("--max-len", c.max_len)->check(CLI::Range(6, 16));
  exponent->add_option("--mode", c.mode, "conjugacy | element");

  auto* pressure = app.add_subcommand("pressure", "pressure root, or level pressures at --t");
  common(pressure);
  pressure->add_option("--phi", c.phi)->required()->expected(2, 64);
  pressure->add_option("--n-max", c.n_max)->check(CLI::Range(3, 16));
  pressure->add_option("--tol", c.tol);
  pressure->add_option("--t", c.t, "write the level table at this t instead of the root");

  auto* boundary = app.add_subcommand("boundary", "trace the boundary of the dual body");
  common(boundary);
  boundary->add_option("--resolution", c.resolution)->check(CLI::Range(8, 1024));
  boundary->add_option("--n-max", c.n_max)->check(CLI::Range(3, 16));

  auto* psi = app.add_subcommand("psi", "growth indicator by duality and by cone counting");
  common(psi);
  psi->add_option("--dir", c.dir)->required()->expected(2, 64);
  psi->add_option("--resolution", c.resolution)->check(CLI::Range(8, 1024));
  psi->add_option("--n-max", c.n_max)->check(CLI::Range(3, 16));
  psi->add_option("--max-len", c.max_len)->check(CLI::Range(4, 16));
  psi->add_option("--half-angle", c.half_angle);

  auto* entropy = app.add_subcommand("entropy", "entropy of the equilibrium state of a boundary functional");
  common(entropy);
  entropy->add_option("--phi", c.phi)->required()->expected(2, 64);
  entropy->add_option("--n-max", c.n_max)->check(CLI::Range(3, 16));
  entropy->add_flag("--to-boundary", c.to_boundary, "rescale phi onto the boundary first");

  auto* counting = app.add_subcommand("counting-check", "orbit counting ratio table");
  common(counting);
  counting->add_option("--root-index", c.root_index);
  counting->add_option("--max-len", c.max_len)->check(CLI::Range(6, 16));

  auto* scan = app.add_subcommand("perturb-scan", "continuity scan under random perturbation");
  common(scan);
  scan->add_option("--epsilons", c.epsilons)->expected(1, 64);
  scan->add_option("--dir", c.dir, "probe direction")->required()->expected(2, 64);
  scan->add_option("--n-max", c.n_max)->check(CLI::Range(4, 16));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }
  default_threads() = c.threads;
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    std::cout << cmd << ": " << run(cmd, c) << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "hcx " << cmd << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "hcx " << cmd << ": " << e.what() << "\n";
    return 4;
  }
}
