#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tfpm/analysis.hpp"
#include "tfpm/config.hpp"
#include "tfpm/csv.hpp"
#include "tfpm/errors.hpp"
#include "tfpm/fode.hpp"
#include "tfpm/profile.hpp"
#include "tfpm/special_functions.hpp"
#include "tfpm/spectral.hpp"
#include "tfpm/stepper.hpp"

namespace tfpm {

/// Output directory precedence: explicit override (--out), TFPM_OUT
/// environment variable, config `output_dir`, current directory.
inline std::filesystem::path resolve_output_dir(const Config& cfg,
                                                const std::string& override_dir) {
  std::filesystem::path dir;
  if (!override_dir.empty())
    dir = override_dir;
  else if (const char* env = std::getenv("TFPM_OUT"); env && *env)
    dir = env;
  else
    dir = cfg.str_or("output_dir", ".");
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::shared_ptr<const SpectralBasis> basis_from_config(const Config& cfg) {
  return make_interval_basis(cfg.number_or("length", M_PI), cfg.integer_or("n_modes", 64),
                             cfg.integer_or("n_grid", 256), cfg.number_or("s_power", 1.0));
}

inline SolverConfig solver_from_config(const Config& cfg) {
  SolverConfig sc;
  sc.alpha = cfg.number("alpha");
  sc.m = cfg.number("m");
  sc.tau = cfg.number("tau");
  const double t_final = cfg.number("t_final");
  if (!(sc.tau > 0.0)) throw ConfigError("tau", "must be positive");
  if (!(t_final > 0.0)) throw ConfigError("t_final", "must be positive");
  const double steps = t_final / sc.tau;
  sc.n_steps = static_cast<int>(std::llround(steps));
  if (sc.n_steps < 1 || std::abs(steps - sc.n_steps) > 1e-9 * steps)
    throw ConfigError("t_final", "must be an integer multiple of tau");
  sc.newton_tol = cfg.number_or("newton_tol", 1e-12);
  sc.newton_max_iter = cfg.integer_or("newton_max_iter", 60);
  sc.validate();
  return sc;
}

/// Builds the initial field named by `initial.type`:
///   eigenfunction   amplitude * Phi_mode          (initial.mode, initial.amplitude)
///   gaussian        bump exp(-(x-c)^2 / 2w^2)     (initial.center/.width/.amplitude)
///   profile_scaled  scale * S                     (initial.scale, initial.profile_tol)
///   csv             x,u samples, linearly interpolated onto the grid (initial.path)
inline Field make_initial(const Config& cfg, const SpectralBasis& basis) {
  const std::string type = cfg.str("initial.type");
  if (type == "eigenfunction") {
    const int mode = cfg.integer_or("initial.mode", 1);
    if (mode < 1 || mode > basis.n_modes())
      throw ConfigError("initial.mode", "mode outside 1..n_modes");
    std::vector<double> c(basis.n_modes(), 0.0);
    c[mode - 1] = cfg.number_or("initial.amplitude", 1.0);
    return Field::from_coeffs(std::move(c));
  }
  if (type == "gaussian") {
    const double center = cfg.number_or("initial.center", 0.5 * basis.length());
    const double width = cfg.number_or("initial.width", 0.1 * basis.length());
    const double amplitude = cfg.number_or("initial.amplitude", 1.0);
    if (!(width > 0.0)) throw ConfigError("initial.width", "must be positive");
    std::vector<double> v(basis.n_grid());
    for (int g = 0; g < basis.n_grid(); ++g) {
      const double d = (basis.grid()[g] - center) / width;
      v[g] = amplitude * std::exp(-0.5 * d * d);
    }
    return Field::from_values(std::move(v));
  }
  if (type == "profile_scaled") {
    const double scale = cfg.number_or("initial.scale", 1.0);
    const double tol = cfg.number_or("initial.profile_tol", 1e-8);
    Field s = solve_elliptic_profile(basis, cfg.number("m"), tol);
    for (double& v : s.values) v *= scale;
    for (double& v : s.coeffs) v *= scale;
    return s;
  }
  if (type == "csv") {
    const std::string path = cfg.str("initial.path");
    std::ifstream in(path);
    if (!in) throw ConfigError("initial.path", "cannot open '" + path + "'");
    std::vector<double> xs, us;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw ConfigError("initial.path", "expected x,u rows");
      xs.push_back(std::stod(line.substr(0, comma)));
      us.push_back(std::stod(line.substr(comma + 1)));
    }
    if (xs.size() < 2) throw ConfigError("initial.path", "need at least two samples");
    std::vector<double> v(basis.n_grid());
    for (int g = 0; g < basis.n_grid(); ++g) {
      const double x = basis.grid()[g];
      size_t i = 1;
      while (i + 1 < xs.size() && xs[i] < x) ++i;
      const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
      v[g] = us[i - 1] + std::clamp(w, 0.0, 1.0) * (us[i] - us[i - 1]);
    }
    return Field::from_values(std::move(v));
  }
  throw ConfigError("initial.type",
                    "unknown type '" + type +
                        "' (expected eigenfunction|gaussian|profile_scaled|csv)");
}

inline void write_manifest(const Config& cfg, const std::filesystem::path& path,
                           const SolverConfig& solver) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open manifest " + path.string());
  Config resolved = cfg;
  resolved.set("resolved.n_steps", std::to_string(solver.n_steps));
  resolved.set("resolved.newton_tol", CsvWriter::format(solver.newton_tol));
  for (const auto& [k, v] : resolved.entries()) out << k << " = " << v << '\n';
}

struct RunResult {
  Trajectory trajectory;
  std::filesystem::path norms_csv;
  int data_rows = 0;
};

/// `run` subcommand: evolve the configured problem, write per-step norms,
/// optional state snapshots, and a manifest echoing the resolved config.
inline RunResult run_experiment(const Config& cfg, const std::string& out_override,
                                bool quiet) {
  const auto dir = resolve_output_dir(cfg, out_override);
  auto basis = basis_from_config(cfg);
  const SolverConfig solver = solver_from_config(cfg);
  const Field u0 = make_initial(cfg, *basis);

  RunResult result;
  result.trajectory = evolve(u0, solver, basis);
  const Trajectory& traj = result.trajectory;

  result.norms_csv = dir / "norms.csv";
  CsvWriter csv(result.norms_csv);
  csv.header({"t", "l1", "l2", "linf", "l1_phi1", "hstar", "energy"});
  const NormSeries ns = norm_series(traj);
  for (size_t k = 0; k < ns.t.size(); ++k) {
    csv.row({ns.t[k], ns.l1[k], ns.l2[k], ns.linf[k], ns.l1_phi1[k], ns.hstar[k],
             ns.energy[k]});
    ++result.data_rows;
  }
  csv.close();

  const int every = cfg.integer_or("snapshot_every", 0);
  if (every > 0) {
    for (int k = 0; k <= traj.steps(); k += every) {
      char name[40];
      std::snprintf(name, sizeof name, "snapshot_%06d.csv", k);
      CsvWriter snap(dir / name);
      snap.header({"x", "u"});
      for (int g = 0; g < basis->n_grid(); ++g)
        snap.row({basis->grid()[g], traj.states[k].values[g]});
    }
  }

  write_manifest(cfg, dir / "manifest.txt", solver);
  if (!quiet)
    std::cout << "run: wrote " << result.norms_csv.string() << " (" << result.data_rows
              << " rows)\n";
  return result;
}

struct ConvergencePoint {
  double tau = 0.0;
  double hstar_error = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergencePoint> points;
  double observed_order = 0.0;
  bool pass = false;
  std::filesystem::path csv_path;
};

/// `convergence` subcommand: tau-refinement study of the dual-norm error at
/// t_final.  m = 1 is measured against the exact per-mode Mittag-Leffler
/// solution; m != 1 against a Richardson reference at tau_min/2.  Passes when
/// the observed order reaches alpha/4.
inline ConvergenceResult run_convergence(const Config& cfg, const std::string& out_override,
                                         bool quiet) {
  const auto dir = resolve_output_dir(cfg, out_override);
  auto basis = basis_from_config(cfg);
  const double alpha = cfg.number("alpha");
  const double m = cfg.number("m");
  const double t_final = cfg.number_or("t_final", 1.0);
  const double tau_max = cfg.number_or("conv.tau_max", 0.03125);
  const int levels = cfg.integer_or("conv.levels", 6);
  if (levels < 2) throw ConfigError("conv.levels", "need at least two tau levels");

  const Field u0 = make_initial(cfg, *basis);

  auto run_at = [&](double tau) {
    SolverConfig sc;
    sc.alpha = alpha;
    sc.m = m;
    sc.tau = tau;
    const double steps = t_final / tau;
    sc.n_steps = static_cast<int>(std::llround(steps));
    if (std::abs(steps - sc.n_steps) > 1e-9 * steps)
      throw ConfigError("conv.tau_max", "t_final must be an integer multiple of every tau");
    sc.newton_tol = cfg.number_or("newton_tol", 1e-12);
    return evolve(u0, sc, basis);
  };

  std::vector<double> ref;  // coefficients of the reference solution at t_final
  if (m == 1.0) {
    ref = basis->coeffs_of(u0);
    for (int j = 0; j < basis->n_modes(); ++j)
      ref[j] *= mittag_leffler(alpha, -basis->eigenvalues()[j] * std::pow(t_final, alpha));
  } else {
    const double tau_ref = tau_max / std::pow(2.0, levels);  // one level below the finest
    ref = run_at(tau_ref).states.back().coeffs;
  }

  ConvergenceResult result;
  for (int lvl = 0; lvl < levels; ++lvl) {
    const double tau = tau_max / std::pow(2.0, lvl);
    const Trajectory traj = run_at(tau);
    const auto& c = traj.states.back().coeffs;
    double err = 0.0;
    for (int j = 0; j < basis->n_modes(); ++j) {
      const double d = c[j] - ref[j];
      err += d * d / basis->eigenvalues()[j];
    }
    result.points.push_back({tau, std::sqrt(err)});
  }

  std::vector<double> lt, le;
  for (const auto& p : result.points) {
    lt.push_back(std::log(p.tau));
    le.push_back(std::log(std::max(p.hstar_error, 1e-300)));
  }
  result.observed_order = detail::fit_line(lt, le).slope;
  result.pass = result.observed_order >= alpha / 4.0;

  result.csv_path = dir / "convergence.csv";
  CsvWriter csv(result.csv_path);
  csv.header({"tau", "hstar_error"});
  for (const auto& p : result.points) csv.row({p.tau, p.hstar_error});
  csv.close();

  if (!quiet)
    std::cout << "convergence: observed order " << result.observed_order << " (need >= "
              << alpha / 4.0 << ") -> " << (result.pass ? "pass" : "FAIL") << "\n";
  return result;
}

struct DecayRow {
  double alpha = 0.0;
  double m = 0.0;
  double slope_linf = 0.0;
  double slope_l1 = 0.0;
  double slope_l2 = 0.0;
  double expected = 0.0;
  bool extinguished = false;
};

/// `decay-study` subcommand: fits the log-log decay slope of the Linf/L1/L2
/// norms over an (alpha, m) grid; expected slope is -alpha/m for all of them.
/// Profiles are reused per m and the runs fan out across a thread pool.
inline std::vector<DecayRow> run_decay_study(const Config& cfg,
                                             const std::string& out_override, bool quiet) {
  const auto dir = resolve_output_dir(cfg, out_override);
  auto basis = basis_from_config(cfg);
  const auto alphas = cfg.number_list("decay.alphas");
  const auto ms = cfg.number_list("decay.ms");
  const double tau = cfg.number_or("tau", 0.25);
  const double t_final = cfg.number_or("t_final", 1000.0);
  const double win_lo = cfg.number_or("decay.window_lo", 10.0);
  const double win_hi = cfg.number_or("decay.window_hi", t_final);
  const double scale_small = cfg.number_or("decay.scale_small_m", 1.0);
  const double scale_large = cfg.number_or("decay.scale_large_m", 2.0);
  const double profile_tol = cfg.number_or("initial.profile_tol", 1e-8);

  std::map<double, Field> profiles;
  for (const double m : ms)
    if (!profiles.count(m)) profiles.emplace(m, solve_elliptic_profile(*basis, m, profile_tol));

  auto run_one = [&](double alpha, double m) {
    SolverConfig sc;
    sc.alpha = alpha;
    sc.m = m;
    sc.tau = tau;
    sc.n_steps = static_cast<int>(std::llround(t_final / tau));
    sc.newton_tol = cfg.number_or("newton_tol", 1e-12);
    Field u0 = profiles.at(m);
    const double scale = (m < 1.0) ? scale_small : scale_large;
    for (double& v : u0.values) v *= scale;
    for (double& v : u0.coeffs) v *= scale;
    const Trajectory traj = evolve(u0, sc, basis);
    const NormSeries ns = norm_series(traj);
    DecayRow row;
    row.alpha = alpha;
    row.m = m;
    row.expected = -alpha / m;
    const SlopeFit fi = fit_decay_slope(ns.t, ns.linf, win_lo, win_hi);
    const SlopeFit f1 = fit_decay_slope(ns.t, ns.l1, win_lo, win_hi);
    const SlopeFit f2 = fit_decay_slope(ns.t, ns.l2, win_lo, win_hi);
    row.extinguished = fi.extinguished || f1.extinguished || f2.extinguished;
    row.slope_linf = fi.slope;
    row.slope_l1 = f1.slope;
    row.slope_l2 = f2.slope;
    return row;
  };

  std::vector<std::future<DecayRow>> futures;
  for (const double a : alphas)
    for (const double m : ms)
      futures.push_back(std::async(std::launch::async, run_one, a, m));

  std::vector<DecayRow> rows;
  for (auto& f : futures) rows.push_back(f.get());

  CsvWriter csv(dir / "decay_study.csv");
  csv.header({"alpha", "m", "slope_linf", "slope_l1", "slope_l2", "expected", "extinguished"});
  for (const auto& r : rows)
    csv.row({r.alpha, r.m, r.slope_linf, r.slope_l1, r.slope_l2, r.expected,
             r.extinguished ? 1.0 : 0.0});
  csv.close();

  if (!quiet) std::cout << "decay-study: " << rows.size() << " (alpha, m) combinations\n";
  return rows;
}

/// `fode-table` subcommand: scalar fractional-ODE table with the series
/// solution where one exists (m = 1) and the fitted decay envelopes.
inline FodeSolution run_fode_table(const Config& cfg, const std::string& out_override,
                                   bool quiet) {
  const auto dir = resolve_output_dir(cfg, out_override);
  const double alpha = cfg.number("alpha");
  const double m = cfg.number("m");
  const double lambda = cfg.number_or("fode.lambda", 1.0);
  const double v0 = cfg.number_or("fode.v0", 1.0);
  const double tau = cfg.number("tau");
  const double t_final = cfg.number("t_final");
  const int n_steps = static_cast<int>(std::llround(t_final / tau));

  const FodeSolution sol = solve_scalar_fode(alpha, lambda, m, v0, tau, n_steps);

  CsvWriter csv(dir / "fode_table.csv");
  csv.header({"t", "v_numeric", "v_series", "envelope_lo", "envelope_hi"});
  for (size_t k = 0; k < sol.times.size(); ++k) {
    const double t = sol.times[k];
    const double series =
        (m == 1.0) ? v0 * mittag_leffler(alpha, -lambda * std::pow(t, alpha))
                   : std::numeric_limits<double>::quiet_NaN();
    csv.row({t, sol.values[k], series, sol.envelope_c1 * decay_envelope(alpha, m, t),
             sol.envelope_c2 * decay_envelope(alpha, m, t)});
  }
  csv.close();
  if (!quiet) std::cout << "fode-table: " << sol.times.size() << " rows\n";
  return sol;
}

/// `harnack` subcommand: evolve big data (scale * S) and report the two-sided
/// boundary band with its fitted envelopes.
inline HarnackBand run_harnack(const Config& cfg, const std::string& out_override,
                               bool quiet) {
  const auto dir = resolve_output_dir(cfg, out_override);
  auto basis = basis_from_config(cfg);
  const SolverConfig solver = solver_from_config(cfg);
  const double gamma = cfg.number_or("harnack.gamma", 1.0);
  const double scale = cfg.number_or("harnack.scale", 2.0);
  const double profile_tol = cfg.number_or("initial.profile_tol", 1e-8);

  Field u0 = solve_elliptic_profile(*basis, solver.m, profile_tol);
  for (double& v : u0.values) v *= scale;
  for (double& v : u0.coeffs) v *= scale;

  const Trajectory traj = evolve(u0, solver, basis);
  const HarnackBand band = harnack_band(traj, gamma);

  CsvWriter csv(dir / "harnack.csv");
  csv.header({"t", "band_inf", "band_sup", "envelope_lo", "envelope_hi"});
  for (size_t i = 0; i < band.times.size(); ++i) {
    const double t = band.times[i];
    csv.row({t, band.band_inf[i], band.band_sup[i], band.c0 / (1.0 + std::pow(t, solver.alpha)),
             band.c1 / std::pow(t, solver.alpha)});
  }
  csv.close();
  if (!quiet)
    std::cout << "harnack: c0 = " << band.c0 << ", c1 = " << band.c1 << ", violations = "
              << band.violations << "\n";
  return band;
}

}  // namespace tfpm
