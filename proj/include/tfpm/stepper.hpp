#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tfpm/caputo.hpp"
#include "tfpm/detail/linalg.hpp"
#include "tfpm/errors.hpp"
#include "tfpm/spectral.hpp"

namespace tfpm {

/// Odd power-law nonlinearity phi(u) = |u|^{m-1} u (phi(0) = 0 for every m > 0).
inline double power_nonlinearity(double u, double m) {
  if (u == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(u), m), u);
}

/// Regularized slope (|u| + eps)^{m-2} (m |u| + eps) of the map above; equals
/// m |u|^{m-1} at eps = 0.  The regularization only enters the Jacobian, so
/// the accepted roots solve the unregularized residual.
inline double power_nonlinearity_slope(double u, double m, double eps) {
  const double a = std::abs(u);
  return std::pow(a + eps, m - 2.0) * (m * a + eps);
}

struct SolverConfig {
  double alpha = 0.5;
  double m = 1.0;
  double tau = 1e-2;
  int n_steps = 100;
  double newton_tol = 1e-12;   ///< residual tolerance in the l2 coefficient norm
  int newton_max_iter = 60;
  double phi_eps = 1e-10;      ///< Jacobian regularization of phi' for m < 2

  void validate() const {
    if (!(alpha > 0.0) || !(alpha < 1.0))
      throw InvalidParameterError("SolverConfig: alpha must lie in (0, 1)");
    if (!(m > 0.0)) throw InvalidParameterError("SolverConfig: m must be positive");
    if (!(tau > 0.0)) throw InvalidParameterError("SolverConfig: tau must be positive");
    if (n_steps < 1) throw InvalidParameterError("SolverConfig: n_steps must be >= 1");
    if (!(newton_tol > 0.0))
      throw InvalidParameterError("SolverConfig: newton_tol must be positive");
  }
};

struct StepDiagnostics {
  int newton_iterations = 0;
  double residual = 0.0;
  double energy = 0.0;
};

/// Full time history of one evolution.  The scheme is non-Markovian: every
/// step reads all prior states, so the whole sequence is state.
struct Trajectory {
  std::shared_ptr<const SpectralBasis> basis;
  SolverConfig config;
  std::vector<Field> states;             ///< U_0 .. U_K, both representations
  std::vector<StepDiagnostics> diagnostics;

  int steps() const noexcept { return static_cast<int>(states.size()) - 1; }
  double time_at(int k) const noexcept { return config.tau * k; }
};

namespace detail {

/// History combination r = (c_k^k U_0 + sum_{i=1}^{k-1} c_i U_{k-i}) / c_0 in
/// coefficient space; a positive convex combination of the history.
inline std::vector<double> history_combination(std::span<const Field> history,
                                               const CaputoWeights& w, int n_modes, int k) {
  std::vector<double> r(static_cast<size_t>(n_modes), 0.0);
  const auto& c0coeffs = history[0].coeffs;
  for (int j = 0; j < n_modes; ++j) r[j] = w.tail[k] * c0coeffs[j];
  for (int i = 1; i <= k - 1; ++i) {
    const double ci = w.c[i];
    const auto& cc = history[k - i].coeffs;
    for (int j = 0; j < n_modes; ++j) r[j] += ci * cc[j];
  }
  for (double& v : r) v /= w.c[0];
  return r;
}

/// Movement objective G(u) = (a/2) sum_j lambda_j^{-1} (u_j - r_j)^2 + E(u);
/// the step solves grad G = 0, and G is strictly convex, so damped Newton with
/// a descent line search converges globally.
inline double movement_objective(const SpectralBasis& basis, std::span<const double> uhat,
                                 std::span<const double> rhat,
                                 std::span<const double> u_nodal, double a, double m) {
  const auto& lam = basis.eigenvalues();
  double quad = 0.0;
  for (int j = 0; j < basis.n_modes(); ++j) {
    const double d = uhat[j] - rhat[j];
    quad += d * d / lam[j];
  }
  double en = 0.0;
  for (double v : u_nodal) en += std::pow(std::abs(v), 1.0 + m);
  en *= basis.dx() / (1.0 + m);
  return 0.5 * a * quad + en;
}

struct StepResult {
  Field field;
  StepDiagnostics diag;
};

inline StepResult step_impl(std::span<const Field> history, const CaputoWeights& w,
                            const SpectralBasis& basis, const SolverConfig& cfg) {
  const int k = static_cast<int>(history.size());
  if (k < 1) throw InvalidParameterError("step: history must contain at least U_0");
  if (k > w.horizon)
    throw HorizonError("step: step index " + std::to_string(k) + " exceeds weight horizon " +
                       std::to_string(w.horizon));
  for (const Field& f : history)
    if (!f.has_coeffs)
      throw InvalidParameterError("step: history entries must carry spectral coefficients");
  if (!(w.tail[k] > 0.0))
    throw WeightIntegrityError("step: nonpositive tail weight c_k^k at k = " +
                               std::to_string(k));

  const int n = basis.n_modes();
  const int ng = basis.n_grid();
  const auto& lam = basis.eigenvalues();
  const double a = w.c[0] / w.tau_alpha(cfg.tau);
  const std::vector<double> rhat = history_combination(history, w, n, k);

  StepResult out;

  if (cfg.m == 1.0) {
    // Diagonal closed form per mode.
    std::vector<double> uhat(n);
    for (int j = 0; j < n; ++j) uhat[j] = a * rhat[j] / (a + lam[j]);
    Field f = Field::from_coeffs(std::move(uhat));
    basis.ensure_values(f);
    out.diag.newton_iterations = 0;
    double rn = 0.0;
    for (int j = 0; j < n; ++j) {
      const double res = a * (f.coeffs[j] - rhat[j]) + lam[j] * f.coeffs[j];
      rn += res * res;
    }
    out.diag.residual = std::sqrt(rn);
    out.diag.energy = basis.norms(f, 1.0, cfg.m).energy;
    out.field = std::move(f);
    return out;
  }

  // Newton on H(u) = a (u - r) + Lambda * analyze(phi(synthesize(u))) = 0 in
  // coefficient space, with an Armijo backtracking line search on the convex
  // movement objective.
  std::vector<double> uhat = rhat;
  std::vector<double> u = basis.synthesize(uhat);
  std::vector<double> res(n), phin(ng), dstep(n);
  std::vector<double> jac(static_cast<size_t>(n) * n);

  auto residual = [&](std::span<const double> uh, std::span<const double> un,
                      std::span<double> out_res) {
    for (int g = 0; g < ng; ++g) phin[g] = power_nonlinearity(un[g], cfg.m);
    const auto ph = basis.analyze(phin);
    double rn = 0.0;
    for (int j = 0; j < n; ++j) {
      out_res[j] = a * (uh[j] - rhat[j]) + lam[j] * ph[j];
      rn += out_res[j] * out_res[j];
    }
    return std::sqrt(rn);
  };

  double rnorm = residual(uhat, u, res);
  int it = 0;
  for (; it < cfg.newton_max_iter && rnorm > cfg.newton_tol; ++it) {
    // J = a I + Lambda A diag(phi'(u)) S, assembled from the Galerkin product
    // M_ij = dx sum_g phi'(u_g) Phi_i(g) Phi_j(g) (M symmetric).
    // phi' is singular (m < 1) or merely nonsmooth (m < 2) at u = 0; the
    // regularization enters the Jacobian only, so accepted roots still solve
    // the unregularized residual.
    std::vector<double> slope(ng);
    const double eps = cfg.m < 2.0 ? cfg.phi_eps : 0.0;
    for (int g = 0; g < ng; ++g)
      slope[g] = power_nonlinearity_slope(u[g], cfg.m, eps) * basis.dx();
    std::vector<double> weighted(ng);
    for (int i = 0; i < n; ++i) {
      const double* rowi = basis.phi_row(i + 1);
      for (int g = 0; g < ng; ++g) weighted[g] = slope[g] * rowi[g];
      for (int j = i; j < n; ++j) {
        const double* rowj = basis.phi_row(j + 1);
        double s = 0.0;
        for (int g = 0; g < ng; ++g) s += weighted[g] * rowj[g];
        jac[static_cast<size_t>(i) * n + j] = s;
        jac[static_cast<size_t>(j) * n + i] = s;
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) jac[static_cast<size_t>(i) * n + j] *= lam[i];
      jac[static_cast<size_t>(i) * n + i] += a;
    }
    for (int j = 0; j < n; ++j) dstep[j] = -res[j];
    lu_solve(jac, dstep, n);

    // grad G . d, with grad G = Lambda^{-1} H.
    double gdotd = 0.0;
    for (int j = 0; j < n; ++j) gdotd += res[j] * dstep[j] / lam[j];
    const double g0 = movement_objective(basis, uhat, rhat, u, a, cfg.m);

    // Accept a step when it shrinks the residual (local quadratic phase) or
    // satisfies Armijo descent on G up to roundoff (globalization; the plain
    // Armijo test stalls once the decrease drops below eps * G).
    double s = 1.0;
    bool accepted = false;
    std::vector<double> utry(n), u_nodal_try, res_try(n);
    double rn_try = rnorm;
    while (s >= std::ldexp(1.0, -40)) {
      for (int j = 0; j < n; ++j) utry[j] = uhat[j] + s * dstep[j];
      u_nodal_try = basis.synthesize(utry);
      rn_try = residual(utry, u_nodal_try, res_try);
      if (rn_try < rnorm) {
        accepted = true;
        break;
      }
      const double g1 = movement_objective(basis, utry, rhat, u_nodal_try, a, cfg.m);
      if (g1 <= g0 + 1e-4 * s * gdotd + 8.0 * std::numeric_limits<double>::epsilon() *
                                            std::abs(g0)) {
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) break;
    uhat.swap(utry);
    u.swap(u_nodal_try);
    res.swap(res_try);
    rnorm = rn_try;
  }

  if (rnorm > cfg.newton_tol)
    throw SolverError("step: Newton did not reach tolerance", rnorm, k);

  Field f = Field::from_coeffs(std::move(uhat));
  f.values = std::move(u);
  f.has_values = true;
  out.diag.newton_iterations = it;
  out.diag.residual = rnorm;
  out.diag.energy = basis.norms(f, 1.0, cfg.m).energy;
  out.field = std::move(f);
  return out;
}

}  // namespace detail

/// Discrete Caputo derivative of a field history at step k, applied
/// coefficient-wise (the derivative is linear, so it commutes with the
/// transform).  history must hold entries 0..k with coefficients present.
inline Field discrete_caputo(std::span<const Field> history, const CaputoWeights& w,
                             double tau, int k, const SpectralBasis& basis) {
  if (k < 0 || k > w.horizon)
    throw HorizonError("discrete_caputo: step index exceeds weight horizon");
  if (static_cast<int>(history.size()) < k + 1)
    throw DimensionError("discrete_caputo: history shorter than k + 1");
  if (!(tau > 0.0)) throw InvalidParameterError("discrete_caputo: tau must be positive");
  const int n = basis.n_modes();
  for (int i = 0; i <= k; ++i)
    if (!history[i].has_coeffs || static_cast<int>(history[i].coeffs.size()) != n)
      throw InvalidParameterError(
          "discrete_caputo: history entries must carry spectral coefficients");

  std::vector<double> out(static_cast<size_t>(n), 0.0);
  if (k > 0) {
    const auto& uk = history[k].coeffs;
    const auto& u0 = history[0].coeffs;
    for (int j = 0; j < n; ++j) out[j] = w.tail[k] * (uk[j] - u0[j]);
    for (int i = 1; i <= k - 1; ++i) {
      const double ci = w.c[i];
      const auto& ui = history[k - i].coeffs;
      for (int j = 0; j < n; ++j) out[j] += ci * (uk[j] - ui[j]);
    }
    const double ta = w.tau_alpha(tau);
    for (double& v : out) v /= ta;
  }
  return Field::from_coeffs(std::move(out));
}

/// Advances one implicit step: given U_0..U_{k-1} (history, coefficient
/// representation required), returns the U_k solving
///   (D_tau^alpha U)_k = -L phi(U_k)
/// in spectral coefficients, residual below cfg.newton_tol.  m = 1 solves the
/// diagonal system in closed form.
inline Field step(std::span<const Field> history, const CaputoWeights& w,
                  const SpectralBasis& basis, const SolverConfig& cfg) {
  return detail::step_impl(history, w, basis, cfg).field;
}

/// Runs the full discretized evolution from u0.  u0 is projected onto the
/// basis span first; states then carry consistent nodal and spectral
/// representations throughout.  Strictly sequential in k.
inline Trajectory evolve(const Field& u0, const SolverConfig& cfg,
                         std::shared_ptr<const SpectralBasis> basis) {
  cfg.validate();
  if (!basis) throw InvalidParameterError("evolve: basis must not be null");

  const CaputoWeights w = compute_weights(cfg.alpha, cfg.n_steps);

  Trajectory traj;
  traj.basis = basis;
  traj.config = cfg;
  traj.states.reserve(static_cast<size_t>(cfg.n_steps) + 1);
  traj.diagnostics.reserve(static_cast<size_t>(cfg.n_steps) + 1);

  Field state0 = Field::from_coeffs(basis->coeffs_of(u0));
  basis->ensure_values(state0);
  StepDiagnostics d0;
  d0.energy = basis->norms(state0, 1.0, cfg.m).energy;
  traj.states.push_back(std::move(state0));
  traj.diagnostics.push_back(d0);

  for (int k = 1; k <= cfg.n_steps; ++k) {
    std::span<const Field> history(traj.states.data(), static_cast<size_t>(k));
    auto result = detail::step_impl(history, w, *basis, cfg);
    traj.states.push_back(std::move(result.field));
    traj.diagnostics.push_back(result.diag);
  }
  return traj;
}

}  // namespace tfpm
