// Command-line front end: profile, scan, spheres, pairs, discoid.
// Exit codes: 0 success, 2 usage, 3 numerical failure.

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "helfrich/analysis.hpp"
#include "helfrich/discoid.hpp"
#include "helfrich/errors.hpp"
#include "helfrich/io.hpp"
#include "helfrich/profile_ode.hpp"
#include "helfrich/sphere_search.hpp"
#include "helfrich/surface.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace helfrich;

namespace {

constexpr int kUsage = 2;
constexpr int kNumerical = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct Solver {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double h0 = 0, z_stop = 0, s_max = 0, max_step = 0;
  CLI::Option* h0_opt = nullptr;
  CLI::Option* z_stop_opt = nullptr;
  CLI::Option* s_max_opt = nullptr;

  SolverConfig config() const {
    SolverConfig c;
    c.rel_tol = rel_tol;
    c.abs_tol = abs_tol;
    c.max_step = max_step;
    if (*h0_opt) c.h0 = h0;
    if (*z_stop_opt) c.z_stop = z_stop;
    if (*s_max_opt) c.s_max = s_max;
    return c;
  }
};

fs::path out_dir;

std::ofstream open_out(const std::string& name) {
  std::ofstream f(out_dir / name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + (out_dir / name).string());
  return f;
}

void write_json(const std::string& name, const json& j) { open_out(name) << j.dump(2) << '\n'; }

void validated(const ShootingParams& p, const SolverConfig& c) {
  try {
    c.validate(p);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---- profile

int cmd_profile(double c_o, double z0, double grid, const SolverConfig& cfg) {
  const ShootingParams p{c_o, z0};
  validated(p, cfg);
  if (!(grid > 0)) throw UsageError("--grid must be positive");

  const auto curve = integrate_profile(p, cfg);
  {
    auto f = open_out("profile.csv");
    io::write_profile_csv(f, curve);
  }
  write_json("profile.json", io::profile_json(curve, cfg));

  json a{{"schema", "analysis/1"},
         {"params", io::to_json(p)},
         {"class", to_string(classify(p))},
         {"termination", to_string(curve.termination)},
         {"samples", curve.samples.size()},
         {"stop_height", curve.stop_height},
         {"conserved_residual", conserved_residual(curve)},
         {"rme_residual", rme_residual(curve)}};
  std::cout << "class " << to_string(classify(p)) << ", termination " << to_string(curve.termination) << '\n';

  int rc = curve.termination == Termination::StepFailure ? kNumerical : 0;
  if (curve.termination == Termination::EquatorReached) {
    try {
      const auto e = endpoint_extrapolate(curve, cfg);
      a["endpoint"] = io::to_json(e);
      const double id = endpoint_dphi_identity(c_o, e.phi_end, e.r_star);
      a["dphi_identity"] = id;
      a["dphi_identity_gap"] = std::abs(e.dphi - id);
      std::cout << "ell " << io::fmt(e.ell) << "  r* " << io::fmt(e.r_star) << "  phi'(ell) " << io::fmt(e.dphi)
                << "  phi''(ell) " << io::fmt(e.ddphi) << " +- " << io::fmt(e.fit_uncertainty) << '\n';
      const auto u = uniform_profile(p, cfg, grid);
      a["el_residual"] = {{"grid", grid}, {"value", el_residual(u)}};
    } catch (const std::exception& ex) {
      a["endpoint_error"] = ex.what();
      std::cerr << "endpoint: " << ex.what() << '\n';
      rc = kNumerical;
    }
  }
  write_json("analysis.json", a);
  return rc;
}

// ---- scans

std::vector<ScanRecord> run_scan(double c_o, double zmax, int n, bool refine, const SolverConfig& cfg) {
  auto recs = scan(c_o, uniform_grid(zmax, n), cfg);
  if (refine) recs = refine_scan(c_o, recs, cfg);
  return recs;
}

void check_range(double zmax, int n) {
  if (!(zmax > 0)) throw UsageError("--zmax must be positive");
  if (n < 2) throw UsageError("--n must be at least 2");
}

void write_scan_outputs(double c_o, const std::vector<ScanRecord>& recs) {
  {
    auto f = open_out("scan.csv");
    io::write_scan_csv(f, c_o, recs);
  }
  auto f = open_out("spiral.csv");
  io::write_spiral_csv(f, spiral_curve(recs));
}

int cmd_scan(double c_o, double zmax, int n, bool refine, const SolverConfig& cfg) {
  check_range(zmax, n);
  validated({c_o, zmax}, cfg);
  const auto recs = run_scan(c_o, zmax, n, refine, cfg);
  write_scan_outputs(c_o, recs);
  std::map<std::string, int> tally;
  for (const auto& r : recs) ++tally[to_string(r.status)];
  for (const auto& [k, v] : tally) std::cout << k << ' ' << v << '\n';
  return 0;
}

json surface_summary(const SphereRoot& root, double c_o, const SolverConfig& cfg, int mesh_n, bool& certified) {
  const auto cap = make_cap({c_o, root.z0_root}, cfg);
  const auto surf = glue(cap, cap);
  const auto rep = regularity_report(surf);
  const auto ar = area(surf);
  const auto en = helfrich_energy(surf, c_o);
  const auto rs = rescaling_integral(surf, c_o);
  const auto n3 = surface_integral(surf, [](const FieldPoint& q) { return q.nu3; });
  const auto hn = surface_integral(surf, [](const FieldPoint& q) { return 2.0 * q.H * q.nu3; });
  const double rme = rme_residual(cap.curve);
  certified = rep.c3_gap <= 1e-4 && std::abs(rs.value) <= 1e-5 * ar.value && rme <= 1e-6;

  const auto mesh = revolve_mesh(surf, mesh_n);
  const std::string name = "sphere_" + std::to_string(root.index);
  {
    auto f = open_out(name + ".obj");
    io::write_obj(f, mesh, name);
  }
  return {{"schema", "surface/1"},
          {"index", root.index},
          {"params", io::to_json(cap.curve.params)},
          {"r_star", surf.r_star},
          {"symmetric", surf.symmetric},
          {"endpoint", io::to_json(cap.endpoint)},
          {"regularity", io::to_json(rep)},
          {"area", io::to_json(ar)},
          {"helfrich_energy", io::to_json(en)},
          {"rescaling_integral", io::to_json(rs)},
          {"nu3_integral", io::to_json(n3)},
          {"two_H_nu3_integral", io::to_json(hn)},
          {"rme_residual", rme},
          {"certified", certified},
          {"mesh", {{"file", name + ".obj"},
                    {"n_theta", mesh_n},
                    {"vertices", mesh.vertices.size()},
                    {"faces", mesh.faces.size()},
                    {"euler_characteristic", euler_characteristic(mesh)},
                    {"area", mesh_area(mesh)}}}};
}

int cmd_spheres(double c_o, double zmax, int n, int count, double tol, int mesh_n, double zmax_limit,
                const SolverConfig& cfg) {
  check_range(zmax, n);
  if (count < 0) throw UsageError("--count must be non-negative");
  if (!(tol > 0)) throw UsageError("--tol must be positive");
  if (mesh_n < 8) throw UsageError("--mesh-n must be at least 8");
  validated({c_o, zmax}, cfg);

  std::vector<ScanRecord> recs;
  RootSearch found;
  const double density = n / zmax;
  for (;;) {
    recs = run_scan(c_o, zmax, static_cast<int>(std::lround(density * zmax)), true, cfg);
    found = bracket_and_refine(recs, tol, c_o, cfg);
    if (found.round_sphere_family || count == 0 || static_cast<int>(found.roots.size()) >= count) break;
    if (zmax >= zmax_limit) break;
    zmax = std::min(zmax_limit, zmax * 1.25);
    std::cout << "found " << found.roots.size() << " roots, extending the scan to z0 <= " << io::fmt(zmax) << '\n';
  }
  write_scan_outputs(c_o, recs);
  write_json("roots.json", io::roots_json(c_o, found));
  if (found.round_sphere_family) {
    std::cout << "c_o = 0: every cap closes into a round sphere\n";
    return 0;
  }

  int rc = 0;
  const std::size_t wanted = count > 0 ? static_cast<std::size_t>(count) : found.roots.size();
  if (found.roots.size() < wanted) {
    std::cerr << "only " << found.roots.size() << " roots up to z0 = " << io::fmt(zmax) << '\n';
    rc = kNumerical;
  }
  json index = json::array();
  for (std::size_t i = 0; i < std::min(wanted, found.roots.size()); ++i) {
    const auto& root = found.roots[i];
    const std::string name = "sphere_" + std::to_string(root.index) + ".json";
    try {
      bool ok = false;
      write_json(name, surface_summary(root, c_o, cfg, mesh_n, ok));
      std::cout << "root " << root.index << "  z0 " << io::fmt(root.z0_root) << "  r* "
                << io::fmt(root.endpoint.r_star) << (ok ? "  certified" : "  NOT certified") << '\n';
      if (!ok) rc = kNumerical;
      index.push_back({{"index", root.index}, {"file", name}, {"certified", ok}});
    } catch (const std::exception& ex) {
      std::cerr << "root " << root.index << ": " << ex.what() << '\n';
      index.push_back({{"index", root.index}, {"error", ex.what()}});
      rc = kNumerical;
    }
  }
  for (const auto& l : found.lost) std::cerr << "lost bracket [" << l.z0_lo << ", " << l.z0_hi << "]: " << l.reason << '\n';
  write_json("spheres.json", {{"schema", "spheres/1"}, {"c_o", c_o}, {"zmax", zmax}, {"surfaces", index}});
  return rc;
}

int cmd_pairs(double c_o, double zmax, int n, double tol_r, double tol_d, const SolverConfig& cfg) {
  check_range(zmax, n);
  if (!(tol_r > 0) || !(tol_d > 0)) throw UsageError("tolerances must be positive");
  validated({c_o, zmax}, cfg);
  const auto recs = run_scan(c_o, zmax, n, false, cfg);
  const auto res = asymmetric_pair_search(recs, tol_r, tol_d, c_o, cfg);
  write_json("pairs.json", io::pairs_json(c_o, res));
  std::cout << res.candidates << " candidates, " << res.pairs.size() << " pairs\n";
  return 0;
}

// ---- discoid

int cmd_discoid(double c_o, double A, std::optional<double> r_max, std::vector<double> eps, double grid,
                int mesh_n, const SolverConfig& base) {
  if (!std::isfinite(c_o) || !std::isfinite(A)) throw UsageError("--co and --A must be finite");
  if (r_max && !(*r_max > 0)) throw UsageError("--rmax must be positive");
  if (eps.size() < 4) throw UsageError("--eps needs at least four radii");
  for (std::size_t i = 0; i < eps.size(); ++i)
    if (!(eps[i] > 0) || (i > 0 && !(eps[i] < eps[i - 1]))) throw UsageError("--eps must be positive and decreasing");
  if (!(grid > 0)) throw UsageError("--grid must be positive");
  if (mesh_n < 8) throw UsageError("--mesh-n must be at least 8");

  const DiscoidSpec spec{c_o, A};
  SolverConfig cfg = base;
  cfg.output_step = grid;
  const auto curve = discoid_profile(spec, cfg, r_max);
  {
    auto f = open_out("discoid.csv");
    io::write_profile_csv(f, curve, "discoid/1");
  }
  json j{{"schema", "discoid/1"},
         {"spec", {{"c_o", c_o}, {"A", A}}},
         {"termination", to_string(curve.termination)},
         {"r_end", curve.samples.back().r},
         {"el_residual", {{"grid", grid}, {"r_min", 0.05}, {"value", discoid_el_residual(curve, 0.05)}}},
         {"rme_residual", rme_residual(curve)}};
  const auto flux = boundary_flux(curve, spec, eps);
  j["flux"] = {{"epsilons", flux.epsilons},
               {"dH_dn_term", flux.flux_values},
               {"gradient_term", flux.gradient_values},
               {"psi_term", flux.psi_term_values},
               {"extrapolated_limit", flux.extrapolated_limit},
               {"target_per_pole", flux.target},
               {"dirac_total", flux.dirac_total}};
  const auto verdict = discoid_verdict(spec, flux);
  j["verdict"] = verdict;
  if (curve.termination == Termination::EquatorReached) {
    const auto mesh = revolve_profile(curve, mesh_n);
    auto f = open_out("discoid.obj");
    io::write_obj(f, mesh, "discoid");
    j["mesh"] = {{"file", "discoid.obj"}, {"n_theta", mesh_n}, {"euler_characteristic", euler_characteristic(mesh)}};
  }
  write_json("discoid.json", j);
  std::cout << "pole defect total " << io::fmt(flux.dirac_total) << " (8 pi c_o = " << io::fmt(8 * std::numbers::pi * c_o)
            << ")\n"
            << verdict << '\n';
  return 0;
}

std::string timestamp() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void append_log(int argc, char** argv, int rc, double seconds) {
  std::ofstream log(out_dir / "run.log", std::ios::app);
  if (!log) return;
  log << timestamp() << " exit=" << rc << " seconds=" << seconds << " threads=" << omp_get_max_threads() << " :";
  for (int i = 0; i < argc; ++i) log << ' ' << argv[i];
  log << '\n';
}

int apply_thread_cap() {
  const char* env = std::getenv("HELFRICH_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) {
    std::cerr << "HELFRICH_THREADS must be a positive integer\n";
    return kUsage;
  }
  omp_set_num_threads(static_cast<int>(std::min<long>(n, omp_get_max_threads())));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Axially symmetric Helfrich surfaces: profiles, sphere search, discoids"};
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  std::string out = ".";
  Solver solver;
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--rel-tol", solver.rel_tol, "relative step tolerance")->capture_default_str();
  app.add_option("--abs-tol", solver.abs_tol, "absolute step tolerance")->capture_default_str();
  solver.h0_opt = app.add_option("--h0", solver.h0, "series start length (default 1e-6 max(1,|z0|))");
  solver.z_stop_opt = app.add_option("--z-stop", solver.z_stop, "stop height (default 1e-4 |z0|)");
  solver.s_max_opt = app.add_option("--s-max", solver.s_max, "arc-length cap (default 50 / max(c_o, 1))");
  app.add_option("--max-step", solver.max_step, "largest step, 0 for none")->capture_default_str();

  double c_o = 1.0, z0 = 1.0, grid = 1e-3;
  auto* profile = app.add_subcommand("profile", "integrate one cap and analyse it");
  profile->add_option("--co", c_o, "spontaneous curvature")->required();
  profile->add_option("--z0", z0, "initial height on the axis")->required();
  profile->add_option("--grid", grid, "uniform spacing for the Euler-Lagrange check")->capture_default_str();

  double zmax = 6.0, tol = 1e-8, zmax_limit = 50.0, tol_r = 1e-4, tol_d = 1e-4;
  int n = 2000, count = 0, mesh_n = 64;
  bool refine = false;
  auto* scan_cmd = app.add_subcommand("scan", "scan phi''(ell) over z0 in (0, zmax]");
  scan_cmd->add_option("--co", c_o, "spontaneous curvature")->required();
  scan_cmd->add_option("--zmax", zmax, "upper end of the z0 range")->capture_default_str();
  scan_cmd->add_option("--n", n, "grid points")->capture_default_str();
  scan_cmd->add_flag("--refine", refine, "add midpoints where |phi''| is small");

  auto* spheres = app.add_subcommand("spheres", "find, glue and certify symmetric Helfrich spheres");
  spheres->add_option("--co", c_o, "spontaneous curvature")->required();
  spheres->add_option("--zmax", zmax, "upper end of the z0 range")->capture_default_str();
  spheres->add_option("--n", n, "grid points")->capture_default_str();
  spheres->add_option("--count", count, "roots wanted; the scan range grows until found (0: all in range)")
      ->capture_default_str();
  spheres->add_option("--tol", tol, "root tolerance on |phi''(ell)|")->capture_default_str();
  spheres->add_option("--mesh-n", mesh_n, "azimuthal resolution of the OBJ meshes")->capture_default_str();
  spheres->add_option("--zmax-limit", zmax_limit, "largest z0 the range may grow to")->capture_default_str();

  auto* pairs = app.add_subcommand("pairs", "search for asymmetric cap pairs");
  pairs->add_option("--co", c_o, "spontaneous curvature")->required();
  pairs->add_option("--zmax", zmax, "upper end of the z0 range")->capture_default_str();
  pairs->add_option("--n", n, "grid points")->capture_default_str();
  pairs->add_option("--tol-r", tol_r, "radius tolerance")->capture_default_str();
  pairs->add_option("--tol-d", tol_d, "phi'' tolerance")->capture_default_str();

  double A = 0.0, r_max = 0.0;
  std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5};
  auto* discoid = app.add_subcommand("discoid", "closed-form discoid: profile, flux and verdict");
  discoid->add_option("--co", c_o, "spontaneous curvature")->capture_default_str();
  discoid->add_option("--A", A, "integration constant")->capture_default_str();
  auto* rmax_opt = discoid->add_option("--rmax", r_max, "stop at this radius instead of the equator");
  discoid->add_option("--eps", eps, "decreasing cut radii for the flux")->capture_default_str();
  discoid->add_option("--grid", grid, "uniform spacing for the Euler-Lagrange check")->capture_default_str();
  discoid->add_option("--mesh-n", mesh_n, "azimuthal resolution of the OBJ mesh")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }
  if (const int rc = apply_thread_cap()) return rc;

  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    out_dir = out;
    fs::create_directories(out_dir);
    const auto cfg = solver.config();
    if (*profile)
      rc = cmd_profile(c_o, z0, grid, cfg);
    else if (*scan_cmd)
      rc = cmd_scan(c_o, zmax, n, refine, cfg);
    else if (*spheres)
      rc = cmd_spheres(c_o, zmax, n, count, tol, mesh_n, zmax_limit, cfg);
    else if (*pairs)
      rc = cmd_pairs(c_o, zmax, n, tol_r, tol_d, cfg);
    else if (*discoid)
      rc = cmd_discoid(c_o, A, *rmax_opt ? std::optional<double>(r_max) : std::nullopt, eps, grid, mesh_n, cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    rc = kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    rc = kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    rc = kNumerical;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out_dir.empty()) append_log(argc, argv, rc, secs);
  return rc;
}
