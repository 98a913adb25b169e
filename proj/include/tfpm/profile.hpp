#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tfpm/errors.hpp"
#include "tfpm/fode.hpp"
#include "tfpm/spectral.hpp"
#include "tfpm/stepper.hpp"

namespace tfpm {

namespace detail {

/// Galerkin residual || L S^m - S ||_2 of an in-span profile, measured in
/// coefficient space (by Parseval the L^2 norm of the resolved residual
/// field).  The nodal residual would additionally contain the out-of-span
/// projection error of the boundary layer, which no in-span S can remove.
inline double elliptic_residual(const SpectralBasis& basis, const Field& s, double m) {
  const auto vals = basis.values_of(s);
  const auto shat = basis.coeffs_of(s);
  std::vector<double> sm(vals.size());
  for (size_t g = 0; g < vals.size(); ++g) sm[g] = std::pow(std::max(vals[g], 0.0), m);
  const auto smhat = basis.analyze(sm);
  double acc = 0.0;
  for (int j = 0; j < basis.n_modes(); ++j) {
    const double d = basis.eigenvalues()[j] * smhat[j] - shat[j];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace detail

/// Solves the stationary profile equation L S^m = S on the interval, S >= 0
/// nontrivial, normalized so the relation holds with constant exactly 1.
///
/// Strategy: the sup-normalized fixed point sweep S <- (L^{-1} S_+)^{1/m}
/// (order-preserving since the Green kernel is nonnegative), then an
/// eigen-constant rescale (possible for m != 1), then a damped Newton polish
/// on the coefficient residual.  The normalized sweep contracts transversally
/// at rate ~ (1/m)(lambda_1/lambda_2), which covers every m above ~1/4 on the
/// interval.  For m = 1 the profile exists only when lambda_1 = 1, in which
/// case it is the first eigenfunction.
inline Field solve_elliptic_profile(const SpectralBasis& basis, double m, double tol,
                                    int max_sweeps = 600) {
  if (!(m > 0.0)) throw InvalidParameterError("solve_elliptic_profile: m must be positive");
  if (!(tol > 0.0)) throw InvalidParameterError("solve_elliptic_profile: tol must be positive");
  const double m_crit = (1.0 - 2.0 * basis.s_power()) / (1.0 + 2.0 * basis.s_power());
  if (m <= m_crit)
    throw UnsupportedParameterError(
        "solve_elliptic_profile: m below the Sobolev threshold (N-2s)/(N+2s)");

  const int n = basis.n_modes();
  const int ng = basis.n_grid();
  const auto& lam = basis.eigenvalues();

  if (m == 1.0) {
    if (std::abs(lam[0] - 1.0) > 1e-10)
      throw UnsupportedParameterError(
          "solve_elliptic_profile: m = 1 requires lambda_1 = 1 (length pi, s = 1)");
    std::vector<double> e1(n, 0.0);
    e1[0] = 1.0;
    Field f = Field::from_coeffs(std::move(e1));
    basis.ensure_values(f);
    return f;
  }

  // Fixed-point sweeps, starting from the first eigenfunction.
  std::vector<double> s(ng);
  for (int g = 0; g < ng; ++g) s[g] = std::max(basis.phi(1, g), 0.0);
  {
    const double mx = *std::max_element(s.begin(), s.end());
    for (double& v : s) v /= mx;
  }

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    std::vector<double> next(ng);
    auto shat = basis.analyze(s);
    for (int j = 0; j < n; ++j) shat[j] /= lam[j];
    const auto w = basis.synthesize(shat);
    for (int g = 0; g < ng; ++g) next[g] = std::pow(std::max(w[g], 0.0), 1.0 / m);
    const double mx = *std::max_element(next.begin(), next.end());
    if (!(mx > 0.0))
      throw SolverError("solve_elliptic_profile: iteration collapsed to zero", 0.0, sweep);
    double delta = 0.0;
    for (int g = 0; g < ng; ++g) {
      next[g] /= mx;
      delta = std::max(delta, std::abs(next[g] - s[g]));
    }
    s.swap(next);
    if (delta < 1e-13) break;
  }

  // Rescale so the eigen-relation constant is exactly 1:  L S^m = mu S  ->
  // multiply by mu^{1/(1-m)}.
  {
    std::vector<double> sm(ng);
    for (int g = 0; g < ng; ++g) sm[g] = std::pow(std::max(s[g], 0.0), m);
    auto smhat = basis.analyze(sm);
    for (int j = 0; j < n; ++j) smhat[j] *= lam[j];
    const auto lsm = basis.synthesize(smhat);
    double num = 0.0, den = 0.0;
    for (int g = 0; g < ng; ++g) {
      num += lsm[g] * s[g];
      den += s[g] * s[g];
    }
    const double mu = num / den;
    if (!(mu > 0.0)) throw SolverError("solve_elliptic_profile: nonpositive eigen-constant", mu, -1);
    const double scale = std::pow(mu, 1.0 / (1.0 - m));
    for (double& v : s) v *= scale;
  }

  // Damped Newton polish on rho(S) = Lambda * analyze(S_+^m) - S in
  // coefficient space; keeps the best iterate.  The unknown is the in-span
  // projection, so hand over synthesized values.
  auto shat = basis.analyze(s);
  s = basis.synthesize(shat);
  auto eval_res = [&](std::span<const double> sh, std::span<const double> sv,
                      std::vector<double>& rho) {
    std::vector<double> sm(ng);
    for (int g = 0; g < ng; ++g) sm[g] = std::pow(std::max(sv[g], 0.0), m);
    auto smhat = basis.analyze(sm);
    double rn = 0.0;
    rho.resize(n);
    for (int j = 0; j < n; ++j) {
      rho[j] = lam[j] * smhat[j] - sh[j];
      rn += rho[j] * rho[j];
    }
    return std::sqrt(rn);
  };

  std::vector<double> rho;
  double rn = eval_res(shat, s, rho);
  std::vector<double> best_hat = shat, best_vals = s;
  double best_rn = rn;
  const double eps = 1e-12;
  for (int it = 0; it < 40 && rn > 0.1 * tol; ++it) {
    std::vector<double> jac(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> slope(ng), weighted(ng);
    for (int g = 0; g < ng; ++g)
      slope[g] = m * std::pow(std::max(s[g], 0.0) + eps, m - 1.0) * basis.dx();
    for (int i = 0; i < n; ++i) {
      const double* rowi = basis.phi_row(i + 1);
      for (int g = 0; g < ng; ++g) weighted[g] = slope[g] * rowi[g];
      for (int j = 0; j < n; ++j) {
        const double* rowj = basis.phi_row(j + 1);
        double acc = 0.0;
        for (int g = 0; g < ng; ++g) acc += weighted[g] * rowj[g];
        jac[static_cast<size_t>(i) * n + j] = lam[i] * acc;
      }
      jac[static_cast<size_t>(i) * n + i] -= 1.0;
    }
    std::vector<double> d(rho);
    for (double& v : d) v = -v;
    detail::lu_solve(jac, d, n);

    double damp = 1.0;
    bool improved = false;
    for (; damp >= 1.0 / 1024.0; damp *= 0.5) {
      std::vector<double> try_hat(n);
      for (int j = 0; j < n; ++j) try_hat[j] = shat[j] + damp * d[j];
      auto try_vals = basis.synthesize(try_hat);
      std::vector<double> try_rho;
      const double try_rn = eval_res(try_hat, try_vals, try_rho);
      if (try_rn < rn) {
        shat.swap(try_hat);
        s = std::move(try_vals);
        rho = std::move(try_rho);
        rn = try_rn;
        improved = true;
        break;
      }
    }
    if (rn < best_rn) {
      best_rn = rn;
      best_hat = shat;
      best_vals = s;
    }
    if (!improved) break;
  }

  Field f = Field::from_coeffs(std::move(best_hat));
  f.values = std::move(best_vals);
  f.has_values = true;
  const double final_res = detail::elliptic_residual(basis, f, m);
  if (!(final_res < tol))
    throw SolverError("solve_elliptic_profile: residual above tolerance", final_res, -1);
  return f;
}

/// Max |S(x_j) - S(length - x_j)| over the (symmetric) grid; the profile on a
/// symmetric domain should be symmetric, but this is reported, not enforced.
inline double profile_symmetry_defect(const SpectralBasis& basis, const Field& s) {
  const auto v = basis.values_of(s);
  double d = 0.0;
  const int ng = basis.n_grid();
  for (int j = 0; j < ng; ++j) d = std::max(d, std::abs(v[j] - v[ng - 1 - j]));
  return d;
}

/// Separate-variables reference trajectory u(t_k, x) = F_k S(x), with F the
/// discrete solution of D^alpha F = -F^m (separation constant 1, matching the
/// profile normalization).  Given an exact profile this is itself an exact
/// solution of the discrete scheme.
inline Trajectory separable_solution(const Field& profile, double f0, const SolverConfig& cfg,
                                     std::shared_ptr<const SpectralBasis> basis) {
  cfg.validate();
  if (!basis) throw InvalidParameterError("separable_solution: basis must not be null");
  if (!(f0 > 0.0)) throw InvalidParameterError("separable_solution: F0 must be positive");

  const FodeSolution f = solve_scalar_fode(cfg.alpha, 1.0, cfg.m, f0, cfg.tau, cfg.n_steps);

  Field s = Field::from_coeffs(basis->coeffs_of(profile));
  basis->ensure_values(s);

  Trajectory traj;
  traj.basis = basis;
  traj.config = cfg;
  traj.states.reserve(static_cast<size_t>(cfg.n_steps) + 1);
  traj.diagnostics.resize(static_cast<size_t>(cfg.n_steps) + 1);
  for (int k = 0; k <= cfg.n_steps; ++k) {
    Field st;
    st.coeffs.resize(s.coeffs.size());
    st.values.resize(s.values.size());
    for (size_t j = 0; j < s.coeffs.size(); ++j) st.coeffs[j] = f.values[k] * s.coeffs[j];
    for (size_t g = 0; g < s.values.size(); ++g) st.values[g] = f.values[k] * s.values[g];
    st.has_coeffs = st.has_values = true;
    traj.diagnostics[k].energy = basis->norms(st, 1.0, cfg.m).energy;
    traj.states.push_back(std::move(st));
  }
  return traj;
}

/// Two-sided boundary-rate band of one trajectory: per time step the inf and
/// sup over the grid of u_+^m(t, x) / dist(x, boundary)^gamma, plus constants
/// c0, c1 fitted on the asymptotic half of the run so that
///   c0 / (1 + t^alpha) <= band <= c1 / t^alpha .
/// violations counts (a) grid points where the ratio is not strictly positive
/// and finite, and (b) steps escaping the fitted band; the principle asserts
/// one pair of constants works for every t > 0, so both counts are expected
/// to be zero.
struct HarnackBand {
  std::vector<double> times;
  std::vector<double> band_inf;
  std::vector<double> band_sup;
  double c0 = 0.0;
  double c1 = 0.0;
  int violations = 0;
  bool degenerate = false;  ///< trajectory without strictly positive states
};

inline HarnackBand harnack_band(const Trajectory& traj, double gamma, double fit_fraction = 0.5,
                                double slack = 1e-9) {
  if (!traj.basis) throw InvalidParameterError("harnack_band: trajectory has no basis");
  const SpectralBasis& basis = *traj.basis;
  const double alpha = traj.config.alpha;
  const double m = traj.config.m;
  const int ng = basis.n_grid();

  std::vector<double> distg(ng);
  for (int g = 0; g < ng; ++g)
    distg[g] = std::pow(basis.distance_to_boundary(basis.grid()[g]), gamma);

  HarnackBand band;
  const int ksteps = traj.steps();
  band.times.reserve(ksteps);
  band.band_inf.reserve(ksteps);
  band.band_sup.reserve(ksteps);
  for (int k = 1; k <= ksteps; ++k) {
    const auto& v = traj.states[k].values;
    double lo = std::numeric_limits<double>::max(), hi = 0.0;
    for (int g = 0; g < ng; ++g) {
      const double ratio = std::pow(std::max(v[g], 0.0), m) / distg[g];
      if (!(ratio > 0.0) || !std::isfinite(ratio)) ++band.violations;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    band.times.push_back(traj.time_at(k));
    band.band_inf.push_back(lo);
    band.band_sup.push_back(hi);
  }

  const size_t fit_from =
      static_cast<size_t>(static_cast<double>(band.times.size()) *
                          std::clamp(1.0 - fit_fraction, 0.0, 1.0));
  double c0 = std::numeric_limits<double>::max(), c1 = 0.0;
  for (size_t i = fit_from; i < band.times.size(); ++i) {
    const double t = band.times[i];
    c0 = std::min(c0, band.band_inf[i] * (1.0 + std::pow(t, alpha)));
    c1 = std::max(c1, band.band_sup[i] * std::pow(t, alpha));
  }
  if (!(c0 > 0.0) || !(c1 > 0.0) || !std::isfinite(c1)) {
    band.degenerate = true;
    band.c0 = band.c1 = 0.0;
    return band;
  }
  band.c0 = c0;
  band.c1 = c1;
  for (size_t i = 0; i < band.times.size(); ++i) {
    const double t = band.times[i];
    if (band.band_inf[i] < c0 / (1.0 + std::pow(t, alpha)) * (1.0 - slack)) ++band.violations;
    if (band.band_sup[i] > c1 / std::pow(t, alpha) * (1.0 + slack)) ++band.violations;
  }
  return band;
}

}  // namespace tfpm
