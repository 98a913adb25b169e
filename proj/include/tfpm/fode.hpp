#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tfpm/caputo.hpp"
#include "tfpm/errors.hpp"

namespace tfpm {

/// Trajectory of a scalar fractional ODE together with the fitted two-sided
/// envelope constants: c1 <= v(t) (1 + t^{alpha/m}) <= c2 over the run.
struct FodeSolution {
  double alpha = 0.0;
  double lambda = 0.0;
  double m = 1.0;
  double v0 = 0.0;
  std::vector<double> times;
  std::vector<double> values;
  double envelope_c1 = 0.0;
  double envelope_c2 = 0.0;
};

/// Decay envelope 1 / (1 + t^{alpha/m}) from the sharp fractional-ODE bounds.
inline double decay_envelope(double alpha, double m, double t) {
  return 1.0 / (1.0 + std::pow(t, alpha / m));
}

/// Closed-form solution of the classical ODE v' = -lambda v^m, v(0) = v0.
/// For m < 1 this extinguishes at t = v0^{1-m} / (lambda (1-m)); the
/// fractional dynamics never does, which is the contrast the comparison
/// tables exhibit.
inline double classical_ode_value(double m, double lambda, double v0, double t) {
  if (!(v0 > 0.0)) throw InvalidParameterError("classical_ode_value: v0 must be positive");
  if (!(m > 0.0)) throw InvalidParameterError("classical_ode_value: m must be positive");
  if (t < 0.0) throw DomainError("classical_ode_value: t must be nonnegative");
  if (m == 1.0) return v0 * std::exp(-lambda * t);
  if (m < 1.0) {
    const double core = std::pow(v0, 1.0 - m) - lambda * (1.0 - m) * t;
    return core > 0.0 ? std::pow(core, 1.0 / (1.0 - m)) : 0.0;
  }
  return std::pow(std::pow(v0, -(m - 1.0)) + lambda * (m - 1.0) * t, -1.0 / (m - 1.0));
}

namespace detail {

/// Solves a(x - r) + lambda x^m = 0 for x in (0, r] by Newton safeguarded with
/// bisection.  g(0) < 0 < g(r) when r > 0 and lambda > 0, and g is strictly
/// increasing, so the bracket never fails.
inline double solve_step_scalar(double a, double r, double lambda, double m, int step) {
  if (r <= 0.0)
    throw SolverError("scalar step: nonpositive history combination", r, step);
  if (lambda == 0.0) return r;
  double lo = 0.0, hi = r;
  double x = r;
  for (int it = 0; it < 200; ++it) {
    const double g = a * (x - r) + lambda * std::pow(x, m);
    const double scale = a * (std::abs(x) + std::abs(r)) + lambda * std::pow(std::abs(x), m);
    if (std::abs(g) <= 1e-15 * scale) return x;
    if (g > 0.0)
      hi = x;
    else
      lo = x;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return x;
    const double dg = a + lambda * m * std::pow(x, m - 1.0);
    double xn = x - g / dg;
    if (!(xn > lo) || !(xn > 0.0) || !(xn < hi)) xn = 0.5 * (lo + hi);
    x = xn;
  }
  const double g = a * (x - r) + lambda * std::pow(x, m);
  if (std::abs(g) <= 1e-10 * (a * r + lambda)) return x;
  throw SolverError("scalar step: root finder stalled", g, step);
}

inline void fit_envelope(FodeSolution& s) {
  double lo = std::numeric_limits<double>::max();
  double hi = 0.0;
  for (size_t k = 0; k < s.values.size(); ++k) {
    const double q = s.values[k] / decay_envelope(s.alpha, s.m, s.times[k]);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  s.envelope_c1 = lo;
  s.envelope_c2 = hi;
}

}  // namespace detail

/// Discrete solution of D^alpha v = -lambda v^m, v(0) = v0 > 0, on a uniform
/// mesh.  Each step solves (c_0/tau^alpha)(v_k - r_k) + lambda v_k^m = 0 where
/// r_k is the positive convex combination of the history prescribed by the
/// weights; all v_k remain strictly positive (no finite-time extinction and
/// v_k <= v0 by the nonpositive-derivative stability).
inline FodeSolution solve_scalar_fode(double alpha, double lambda, double m, double v0,
                                      double tau, int n_steps) {
  if (!(v0 > 0.0)) throw InvalidParameterError("solve_scalar_fode: v0 must be positive");
  if (!(lambda >= 0.0)) throw InvalidParameterError("solve_scalar_fode: lambda must be >= 0");
  if (!(m > 0.0)) throw InvalidParameterError("solve_scalar_fode: m must be positive");
  if (!(tau > 0.0)) throw InvalidParameterError("solve_scalar_fode: tau must be positive");

  const CaputoWeights w = compute_weights(alpha, n_steps);
  const double a = w.c[0] / w.tau_alpha(tau);

  FodeSolution s;
  s.alpha = alpha;
  s.lambda = lambda;
  s.m = m;
  s.v0 = v0;
  s.times.resize(static_cast<size_t>(n_steps) + 1);
  s.values.resize(static_cast<size_t>(n_steps) + 1);
  s.values[0] = v0;
  for (int k = 0; k <= n_steps; ++k) s.times[k] = tau * k;

  for (int k = 1; k <= n_steps; ++k) {
    double hist = w.tail[k] * v0;
    for (int i = 1; i <= k - 1; ++i) hist += w.c[i] * s.values[k - i];
    const double r = hist / w.c[0];
    const double vk = detail::solve_step_scalar(a, r, lambda, m, k);
    if (!(vk > 0.0)) throw SolverError("solve_scalar_fode: lost positivity", vk, k);
    s.values[k] = vk;
  }
  detail::fit_envelope(s);
  return s;
}

/// Discrete solution of the linear equation with power-law coefficient,
/// D^alpha v = -lambda t^beta v, v(0) = v0 (beta > -alpha).  Matches
/// v0 E_{alpha, 1+beta/alpha, beta/alpha}(-lambda t^{alpha+beta}) up to the
/// discretization error; the coefficient is frozen at t_k within each step,
/// which makes every step a closed-form linear solve.
inline FodeSolution solve_kilbas_fode(double alpha, double beta, double lambda, double v0,
                                      double tau, int n_steps) {
  if (!(beta > -alpha)) throw InvalidParameterError("solve_kilbas_fode: need beta > -alpha");
  if (!(v0 > 0.0)) throw InvalidParameterError("solve_kilbas_fode: v0 must be positive");
  if (!(lambda >= 0.0)) throw InvalidParameterError("solve_kilbas_fode: lambda must be >= 0");
  if (!(tau > 0.0)) throw InvalidParameterError("solve_kilbas_fode: tau must be positive");

  const CaputoWeights w = compute_weights(alpha, n_steps);
  const double ta = w.tau_alpha(tau);

  FodeSolution s;
  s.alpha = alpha;
  s.lambda = lambda;
  s.m = 1.0;
  s.v0 = v0;
  s.times.resize(static_cast<size_t>(n_steps) + 1);
  s.values.resize(static_cast<size_t>(n_steps) + 1);
  s.values[0] = v0;
  for (int k = 0; k <= n_steps; ++k) s.times[k] = tau * k;

  for (int k = 1; k <= n_steps; ++k) {
    double hist = w.tail[k] * v0;
    for (int i = 1; i <= k - 1; ++i) hist += w.c[i] * s.values[k - i];
    s.values[k] = hist / (w.c[0] + ta * lambda * std::pow(s.times[k], beta));
    if (!(s.values[k] > 0.0))
      throw SolverError("solve_kilbas_fode: lost positivity", s.values[k], k);
  }
  detail::fit_envelope(s);
  return s;
}

}  // namespace tfpm
