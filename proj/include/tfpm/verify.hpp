#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "tfpm/analysis.hpp"
#include "tfpm/caputo.hpp"
#include "tfpm/config.hpp"
#include "tfpm/csv.hpp"
#include "tfpm/fode.hpp"
#include "tfpm/profile.hpp"
#include "tfpm/runner.hpp"
#include "tfpm/special_functions.hpp"

namespace tfpm {

struct VerifyRow {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;  ///< value <= threshold (or > 0 for positivity checks)
};

struct VerifySummary {
  std::vector<VerifyRow> rows;
  bool all_pass = true;
  std::filesystem::path csv_path;
};

namespace detail {

inline Field verify_bump(const SpectralBasis& basis, double center, double width,
                         double amplitude, double floor_phi1) {
  std::vector<double> v(basis.n_grid());
  for (int g = 0; g < basis.n_grid(); ++g) {
    const double d = (basis.grid()[g] - center) / width;
    v[g] = amplitude * std::exp(-0.5 * d * d) + floor_phi1 * basis.phi(1, g);
  }
  Field f = Field::from_values(std::move(v));
  return f;
}

}  // namespace detail

/// `verify` subcommand: one quantitative check per theorem at desk-lite scale,
/// emitted as a pass/fail table (CSV + stdout).  The acceptance suite pins the
/// same statements at full scale; this battery is the quick health check.
inline VerifySummary run_verify(const Config& cfg, const std::string& out_override,
                                bool quiet) {
  const auto dir = resolve_output_dir(cfg, out_override);
  const double alpha = cfg.number_or("alpha", 0.5);

  VerifySummary summary;
  auto add = [&](const std::string& name, double value, double threshold, bool pass) {
    summary.rows.push_back({name, value, threshold, pass});
    summary.all_pass = summary.all_pass && pass;
  };
  auto add_le = [&](const std::string& name, double value, double threshold) {
    add(name, value, threshold, value <= threshold);
  };

  // Weight integrity: positivity and the complement identity.
  {
    const int K = cfg.integer_or("verify.weights_horizon", 20000);
    const CaputoWeights w = compute_weights(alpha, K);
    double min_c = w.c[1], min_tail = w.tail[1], worst = 0.0;
    detail::CompensatedSum partial;
    for (int k = 1; k <= K; ++k) {
      if (k > 1) {
        partial.add(w.c[k - 1]);
        min_c = std::min(min_c, w.c[k - 1]);
      }
      min_tail = std::min(min_tail, w.tail[k]);
      worst = std::max(worst,
                       std::abs(w.c[0] - (w.tail[k] + partial.value())) / w.c[0]);
    }
    add_le("weights.identity_max_rel", worst, 1e-10);
    add("weights.min_c", min_c, 0.0, min_c > 0.0);
    add("weights.min_tail", min_tail, 0.0, min_tail > 0.0);
  }

  // Chain-rule inequality on random scalar histories.
  {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const CaputoWeights w = compute_weights(alpha, 40);
    double worst = -1.0;
    for (int trial = 0; trial < 2000; ++trial) {
      const int len = 2 + static_cast<int>(rng() % 30);
      std::vector<double> hist(len + 1);
      for (double& h : hist) h = unif(rng);
      std::vector<double> sq(hist.size()), sqp(hist.size());
      for (size_t i = 0; i < hist.size(); ++i) {
        sq[i] = hist[i] * hist[i];
        const double p = std::max(hist[i], 0.0);
        sqp[i] = p * p;
      }
      for (int k = 1; k <= len; ++k) {
        const double du = discrete_caputo(hist, w, 1.0, k);
        worst = std::max(worst, discrete_caputo(sq, w, 1.0, k) - 2.0 * hist[k] * du);
        worst = std::max(worst,
                         discrete_caputo(sqp, w, 1.0, k) -
                             2.0 * std::max(hist[k], 0.0) * du);
      }
    }
    add_le("chainrule.max_violation", worst, 1e-12);
  }

  // Special-function identities.
  add_le("mittag_leffler.exp_identity", std::abs(mittag_leffler(1.0, -1.0) - std::exp(-1.0)),
         1e-10);
  add_le("mittag_leffler.erfc_identity",
         std::abs(mittag_leffler(0.5, -1.0) - std::exp(1.0) * std::erfc(1.0)), 1e-8);
  {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> ua(0.3, 0.95), ux(-2.0, 1.5);
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
      const double a = ua(rng), x = ux(rng);
      worst = std::max(worst, std::abs(kilbas_saigo(a, 1.0, 0.0, x) - mittag_leffler(a, x)));
    }
    add_le("kilbas_saigo.degeneration", worst, 1e-8);
  }

  // Scheme theorems on a small ordered pair per nonlinearity regime.
  for (const double m : {0.5, 2.0}) {
    auto basis = make_interval_basis(M_PI, 24, 96, 1.0);
    SolverConfig sc;
    sc.alpha = alpha;
    sc.m = m;
    sc.tau = 0.01;
    sc.n_steps = 300;
    const Field u0 = detail::verify_bump(*basis, 1.2, 0.45, 0.8, 0.05);
    const Field v0 = detail::verify_bump(*basis, 1.9, 0.55, 1.1, 0.15);
    Field w0 = u0;
    {
      auto vv = basis->values_of(v0);
      auto uu = basis->values_of(u0);
      for (size_t g = 0; g < vv.size(); ++g) vv[g] += uu[g];
      w0 = Field::from_values(std::move(vv));
    }
    const Trajectory tu = evolve(u0, sc, basis);
    const Trajectory tw = evolve(w0, sc, basis);
    const std::string tag = (m < 1.0) ? ".fast" : ".slow";

    add_le("comparison.max_violation" + tag, check_comparison(tu, tw), 1e-8);
    double energy_excess = 0.0;
    for (int k = 1; k <= tu.steps(); ++k)
      energy_excess = std::max(energy_excess,
                               tu.diagnostics[k].energy - tu.diagnostics[0].energy);
    add_le("energy.max_excess" + tag, energy_excess, 1e-10);
    const ContractivityReport rep = check_contractivity(tu, tw);
    add_le("tcontract.max_excess" + tag, rep.max_tplus_excess, 1e-8);
    add_le("hstar_contract.max_excess" + tag, rep.max_hstar_excess, 1e-8);
    add_le("monotonicity.max_violation" + tag, check_monotonicity(tu, alpha, m), 1e-6);
    if (m < 1.0) {
      const double mass = min_l1_mass(tu);
      add("nonextinction.min_mass", mass, 0.0, mass > 0.0);
    }
  }

  // Sharp decay exponent at one (alpha, m).
  {
    auto basis = make_interval_basis(M_PI, 24, 96, 1.0);
    const double m = cfg.number_or("m", 2.0);
    SolverConfig sc;
    sc.alpha = alpha;
    sc.m = m;
    sc.tau = 0.5;
    sc.n_steps = 800;
    Field u0 = solve_elliptic_profile(*basis, m, 1e-7);
    const double scale = (m < 1.0) ? 1.0 : 2.0;
    for (double& v : u0.values) v *= scale;
    for (double& v : u0.coeffs) v *= scale;
    const Trajectory traj = evolve(u0, sc, basis);
    const NormSeries ns = norm_series(traj);
    const SlopeFit fit = fit_decay_slope(ns.t, ns.linf, 5.0, 400.0);
    const double expected = -alpha / m;
    add_le("decay.slope_rel_err", std::abs((fit.slope - expected) / expected), 0.2);
  }

  // Memory identity for the linear problem.
  {
    auto basis = make_interval_basis(M_PI, 16, 128, 1.0);
    SolverConfig sc;
    sc.alpha = alpha;
    sc.m = 1.0;
    sc.tau = 4e-3;
    sc.n_steps = 250;
    std::vector<double> c(basis->n_modes(), 0.0);
    c[0] = 1.0;
    const Trajectory traj = evolve(Field::from_coeffs(std::move(c)), sc, basis);
    add_le("pointwise_formula.residual",
           pointwise_formula_residual(traj, basis->n_grid() / 2, traj.steps()), 0.05);
  }

  // Separable self-consistency.
  {
    auto basis = make_interval_basis(M_PI, 24, 96, 1.0);
    SolverConfig sc;
    sc.alpha = alpha;
    sc.m = 2.0;
    sc.tau = 1e-2;
    sc.n_steps = 500;
    const Field s = solve_elliptic_profile(*basis, sc.m, 1e-9);
    const Trajectory ref = separable_solution(s, 1.0, sc, basis);
    const Trajectory pde = evolve(ref.states[0], sc, basis);
    double worst = 0.0;
    for (int k = 0; k <= sc.n_steps; ++k) {
      double num = 0.0, den = 0.0;
      for (int g = 0; g < basis->n_grid(); ++g) {
        const double d = pde.states[k].values[g] - ref.states[k].values[g];
        num += d * d;
        den += ref.states[k].values[g] * ref.states[k].values[g];
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
    add_le("separable.tracking_rel_l2", worst, 0.05);
  }

  summary.csv_path = dir / "verify.csv";
  {
    std::ofstream out(summary.csv_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + summary.csv_path.string());
    out << "check,value,threshold,pass\n";
    for (const auto& r : summary.rows)
      out << r.name << ',' << CsvWriter::format(r.value) << ','
          << CsvWriter::format(r.threshold) << ',' << (r.pass ? 1 : 0) << '\n';
  }

  if (!quiet) {
    for (const auto& r : summary.rows)
      std::printf("%-36s %12.4e  (threshold %g)  %s\n", r.name.c_str(), r.value, r.threshold,
                  r.pass ? "pass" : "FAIL");
    std::printf("verify: %s\n", summary.all_pass ? "all checks passed" : "FAILURES present");
  }
  return summary;
}

}  // namespace tfpm
