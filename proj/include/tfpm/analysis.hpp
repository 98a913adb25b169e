#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "tfpm/detail/linalg.hpp"
#include "tfpm/errors.hpp"
#include "tfpm/spectral.hpp"
#include "tfpm/stepper.hpp"

namespace tfpm {

/// Per-step norm columns of one trajectory, in CSV order.
struct NormSeries {
  std::vector<double> t, l1, l2, linf, l1_phi1, hstar, energy;
};

inline NormSeries norm_series(const Trajectory& traj) {
  NormSeries s;
  const int K = traj.steps();
  s.t.reserve(K + 1);
  for (int k = 0; k <= K; ++k) {
    const NormSet n1 = traj.basis->norms(traj.states[k], 1.0, traj.config.m);
    const NormSet n2 = traj.basis->norms(traj.states[k], 2.0, traj.config.m);
    s.t.push_back(traj.time_at(k));
    s.l1.push_back(n1.lp);
    s.l2.push_back(n2.lp);
    s.linf.push_back(n1.linf);
    s.l1_phi1.push_back(n1.l1_phi1);
    s.hstar.push_back(n1.hstar);
    s.energy.push_back(n1.energy);
  }
  return s;
}

namespace detail {

inline void ensure_compatible(const Trajectory& u, const Trajectory& v) {
  if (!u.basis || !v.basis)
    throw InvalidParameterError("trajectory comparison: missing basis");
  const bool same_grid = u.basis->n_grid() == v.basis->n_grid() &&
                         u.basis->n_modes() == v.basis->n_modes() &&
                         u.basis->length() == v.basis->length() &&
                         u.basis->s_power() == v.basis->s_power();
  if (!same_grid || u.config.tau != v.config.tau || u.steps() != v.steps() ||
      u.config.alpha != v.config.alpha || u.config.m != v.config.m)
    throw InvalidParameterError(
        "trajectory comparison: trajectories differ in grid, time mesh or equation");
}

}  // namespace detail

/// Max over steps and grid points of (U_k - V_k)_+ for an ordered pair
/// u0 <= v0; zero (to solver tolerance) when the comparison principle holds.
inline double check_comparison(const Trajectory& u, const Trajectory& v) {
  detail::ensure_compatible(u, v);
  double worst = 0.0;
  for (int k = 0; k <= u.steps(); ++k) {
    const auto& a = u.states[k].values;
    const auto& b = v.states[k].values;
    for (size_t g = 0; g < a.size(); ++g) worst = std::max(worst, a[g] - b[g]);
  }
  return std::max(worst, 0.0);
}

/// Max pointwise violation of the scaled-in-time monotonicity: for m < 1 the
/// sequence t^{-alpha/(1-m)} U_k must be non-increasing, for m > 1 the
/// sequence t^{alpha/(m-1)} U_k non-decreasing (k >= 1; t = 0 is skipped).
inline double check_monotonicity(const Trajectory& traj, double alpha, double m) {
  if (m == 1.0)
    throw UnsupportedParameterError("check_monotonicity: m = 1 has no scaled monotonicity");
  const double e = (m < 1.0) ? -alpha / (1.0 - m) : alpha / (m - 1.0);
  double worst = 0.0;
  for (int k = 1; k < traj.steps(); ++k) {
    const double wk = std::pow(traj.time_at(k), e);
    const double wk1 = std::pow(traj.time_at(k + 1), e);
    const auto& a = traj.states[k].values;
    const auto& b = traj.states[k + 1].values;
    for (size_t g = 0; g < a.size(); ++g) {
      const double viol = (m < 1.0) ? wk1 * b[g] - wk * a[g] : wk * a[g] - wk1 * b[g];
      worst = std::max(worst, viol);
    }
  }
  return worst;
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
  bool extinguished = false;
  int first_nonpositive_index = -1;
};

/// Least-squares slope of log(norm) against log(t) over [window_lo, window_hi].
/// A nonpositive norm inside the window is reported as extinction rather than
/// fitted around: for the fractional dynamics this must never happen.
inline SlopeFit fit_decay_slope(std::span<const double> times, std::span<const double> norms,
                                double window_lo, double window_hi) {
  if (times.size() != norms.size())
    throw DimensionError("fit_decay_slope: times/norms size mismatch");
  SlopeFit fit;
  std::vector<double> lx, ly;
  for (size_t i = 0; i < times.size(); ++i) {
    if (times[i] < window_lo || times[i] > window_hi) continue;
    if (!(norms[i] > 0.0)) {
      fit.extinguished = true;
      fit.first_nonpositive_index = static_cast<int>(i);
      return fit;
    }
    lx.push_back(std::log(times[i]));
    ly.push_back(std::log(norms[i]));
  }
  const auto line = detail::fit_line(lx, ly);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.points = line.points;
  return fit;
}

/// Relative residual of the memory identity
///   int (u0 - u(t)) G(x0, .) dx = 1/Gamma(alpha) int_0^t u^m(s, x0)/(t-s)^{1-alpha} ds
/// at grid point x0 and step t_index.  The left side uses Green-kernel
/// quadrature; the right side integrates the singular weight exactly against
/// the piecewise-constant interpolant of u^m, so no graded mesh is needed.
/// The deconvolution weights invert this exact product quadrature, so for
/// trajectories of the scheme the identity holds with no time-discretization
/// error at all; what remains is the spatial quadrature of the left side.
inline double pointwise_formula_residual(const Trajectory& traj, int x0_index, int t_index) {
  if (!traj.basis) throw InvalidParameterError("pointwise_formula_residual: missing basis");
  const SpectralBasis& basis = *traj.basis;
  if (x0_index < 0 || x0_index >= basis.n_grid())
    throw DomainError("pointwise_formula_residual: x0 index outside grid");
  if (t_index < 0 || t_index > traj.steps())
    throw DomainError("pointwise_formula_residual: t index outside trajectory");
  if (t_index == 0) return 0.0;

  const double alpha = traj.config.alpha;
  const double m = traj.config.m;
  const double tau = traj.config.tau;
  const double t = traj.time_at(t_index);
  const double x0 = basis.grid()[x0_index];

  double lhs = 0.0;
  {
    const auto& u0 = traj.states[0].values;
    const auto& ut = traj.states[t_index].values;
    for (int g = 0; g < basis.n_grid(); ++g)
      lhs += (u0[g] - ut[g]) * basis.green_kernel(x0, basis.grid()[g]);
    lhs *= basis.dx();
  }

  double rhs = 0.0;
  {
    const double ga1 = std::tgamma(alpha + 1.0);
    for (int j = 1; j <= t_index; ++j) {
      const double w =
          (std::pow(t - (j - 1) * tau, alpha) - std::pow(t - j * tau, alpha)) / ga1;
      rhs += w * power_nonlinearity(traj.states[j].values[x0_index], m);
    }
  }

  const double denom = std::abs(lhs) + std::abs(rhs);
  return denom > 0.0 ? std::abs(lhs - rhs) / denom : 0.0;
}

/// Distances between two trajectories step by step, against their initial
/// values: T-contractivity in the Phi_1-weighted L^1 norm and plain
/// contractivity in the dual norm.
struct ContractivityReport {
  std::vector<double> tplus_l1_phi1;  ///< ||(U_k - V_k)_+||_{L1_Phi1}
  std::vector<double> hstar_distance; ///< ||U_k - V_k||_{H*}
  double max_tplus_excess = 0.0;      ///< max_k (tplus_k - tplus_0)
  double max_hstar_excess = 0.0;      ///< max_k (hstar_k - hstar_0)
};

inline ContractivityReport check_contractivity(const Trajectory& u, const Trajectory& v) {
  detail::ensure_compatible(u, v);
  const SpectralBasis& basis = *u.basis;
  const auto& lam = basis.eigenvalues();

  ContractivityReport rep;
  const int K = u.steps();
  rep.tplus_l1_phi1.reserve(K + 1);
  rep.hstar_distance.reserve(K + 1);
  for (int k = 0; k <= K; ++k) {
    const auto& a = u.states[k].values;
    const auto& b = v.states[k].values;
    double tp = 0.0;
    for (int g = 0; g < basis.n_grid(); ++g)
      tp += std::max(a[g] - b[g], 0.0) * basis.phi(1, g);
    rep.tplus_l1_phi1.push_back(basis.dx() * tp);

    const auto& ca = u.states[k].coeffs;
    const auto& cb = v.states[k].coeffs;
    double hs = 0.0;
    for (int j = 0; j < basis.n_modes(); ++j) {
      const double d = ca[j] - cb[j];
      hs += d * d / lam[j];
    }
    rep.hstar_distance.push_back(std::sqrt(hs));
  }
  for (int k = 1; k <= K; ++k) {
    rep.max_tplus_excess =
        std::max(rep.max_tplus_excess, rep.tplus_l1_phi1[k] - rep.tplus_l1_phi1[0]);
    rep.max_hstar_excess =
        std::max(rep.max_hstar_excess, rep.hstar_distance[k] - rep.hstar_distance[0]);
  }
  return rep;
}

/// Boundary-rate report: q(t) = sup over the grid of u_+^m / dist^gamma is
/// fitted against t over the window (expected exponent about -alpha) and the
/// prefactor kappa = max q(t) t^alpha / ||u0||_p is returned.
struct BoundaryReport {
  double fitted_exponent = 0.0;
  double kappa = 0.0;
  bool degenerate = false;
};

inline BoundaryReport check_boundary(const Trajectory& traj, double gamma, double p,
                                     double window_lo, double window_hi) {
  if (!traj.basis) throw InvalidParameterError("check_boundary: missing basis");
  const SpectralBasis& basis = *traj.basis;
  const double alpha = traj.config.alpha;
  const double m = traj.config.m;

  std::vector<double> t, q;
  for (int k = 1; k <= traj.steps(); ++k) {
    const auto& v = traj.states[k].values;
    double hi = 0.0;
    for (int g = 0; g < basis.n_grid(); ++g) {
      const double dist = basis.distance_to_boundary(basis.grid()[g]);
      hi = std::max(hi, std::pow(std::max(v[g], 0.0), m) / std::pow(dist, gamma));
    }
    t.push_back(traj.time_at(k));
    q.push_back(hi);
  }

  BoundaryReport rep;
  const double u0p = basis.norms(traj.states[0], p, m).lp;
  if (!(u0p > 0.0)) {
    rep.degenerate = true;
    return rep;
  }
  const SlopeFit fit = fit_decay_slope(t, q, window_lo, window_hi);
  if (fit.extinguished) {
    rep.degenerate = true;
    return rep;
  }
  rep.fitted_exponent = fit.slope;
  double kap = 0.0;
  for (size_t i = 0; i < t.size(); ++i)
    if (t[i] >= window_lo && t[i] <= window_hi)
      kap = std::max(kap, q[i] * std::pow(t[i], alpha) / u0p);
  rep.kappa = kap;
  return rep;
}

/// Smallest L^1 mass over the trajectory (k >= 1); strictly positive for the
/// fractional dynamics (non-extinction), unlike the classical fast diffusion.
inline double min_l1_mass(const Trajectory& traj) {
  double lo = std::numeric_limits<double>::max();
  for (int k = 1; k <= traj.steps(); ++k)
    lo = std::min(lo, traj.basis->norms(traj.states[k], 1.0, traj.config.m).lp);
  return lo;
}

}  // namespace tfpm
