#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "tfpm/detail/linalg.hpp"
#include "tfpm/errors.hpp"

namespace tfpm {

/// Weights of the deconvolution discretization of the Caputo derivative.
///
/// c_0 = Gamma(1 + alpha) and, with rho_d = (d+1)^alpha - d^alpha,
///   c_i = rho_i c_0 - sum_{j=1}^{i-1} rho_{i-j} c_j ,   i >= 1,
/// i.e. the c's invert the piecewise-constant quadrature of the kernel
/// t^{alpha-1}/Gamma(alpha).  All c_i are positive, their series sums to c_0,
/// and the tails c_k^k = c_0 - sum_{i<k} c_i stay positive and decay like
/// k^{-alpha}/Gamma(1-alpha).
struct CaputoWeights {
  double alpha = 0.0;
  int horizon = 0;                 ///< largest usable step index K
  std::vector<double> c;           ///< c[0..K]
  std::vector<double> tail;        ///< tail[k] = c_k^k, k = 0..K (tail[0] = c[0])

  double tau_alpha(double tau) const { return std::pow(tau, alpha); }
};

/// Computes the recursive weights for one (alpha, horizon) pair.  O(K^2); the
/// result depends only on alpha, so compute once and share.
///
/// alpha must lie strictly inside (0, 1): at alpha = 1 the scheme degenerates
/// (c_1 = c_0, every tail vanishes) and the scheme's positivity requirement
/// c_k^k > 0 fails.
inline CaputoWeights compute_weights(double alpha, int horizon) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw InvalidParameterError("compute_weights: alpha must lie in the open interval (0, 1)");
  if (horizon < 1) throw InvalidParameterError("compute_weights: horizon must be >= 1");

  CaputoWeights w;
  w.alpha = alpha;
  w.horizon = horizon;
  w.c.resize(static_cast<size_t>(horizon) + 1);
  w.tail.resize(static_cast<size_t>(horizon) + 1);

  // rho_d = (d+1)^a - d^a, written as d^a * expm1(a*log1p(1/d)) so the
  // difference stays accurate when d is large.
  std::vector<double> rho(static_cast<size_t>(horizon) + 1);
  rho[0] = 1.0;
  for (int d = 1; d <= horizon; ++d)
    rho[d] = std::pow(d, alpha) * std::expm1(alpha * std::log1p(1.0 / d));

  w.c[0] = std::tgamma(1.0 + alpha);
  for (int i = 1; i <= horizon; ++i) {
    double s = rho[i] * w.c[0];
    const double* cp = w.c.data();
    const double* rp = rho.data();
    for (int d = 1; d < i; ++d) s -= rp[d] * cp[i - d];
    if (!(s > 0.0))
      throw WeightIntegrityError("compute_weights: c_" + std::to_string(i) +
                                 " is not positive");
    w.c[i] = s;
  }

  // Tails as exact complements of the running sum, compensated so the
  // positivity of c_k^k survives K ~ 1e5.
  detail::CompensatedSum partial;
  w.tail[0] = w.c[0];
  for (int k = 1; k <= horizon; ++k) {
    if (k > 1) partial.add(w.c[k - 1]);
    const double t = w.c[0] - partial.value();
    if (!(t > 0.0))
      throw WeightIntegrityError("compute_weights: tail c_k^k is not positive at k = " +
                                 std::to_string(k));
    w.tail[k] = t;
  }
  return w;
}

/// Discrete Caputo derivative of a scalar history at step k:
///   (D_tau^alpha U)_k = tau^{-alpha} ( c_k^k (U_k - U_0)
///                                      + sum_{i=1}^{k-1} c_i (U_k - U_{k-i}) ).
/// history must hold entries 0..k.  k = 0 returns 0.
inline double discrete_caputo(std::span<const double> history, const CaputoWeights& w,
                              double tau, int k) {
  if (k < 0 || k > w.horizon)
    throw HorizonError("discrete_caputo: step index " + std::to_string(k) +
                       " exceeds weight horizon " + std::to_string(w.horizon));
  if (static_cast<int>(history.size()) < k + 1)
    throw DimensionError("discrete_caputo: history shorter than k + 1");
  if (!(tau > 0.0)) throw InvalidParameterError("discrete_caputo: tau must be positive");
  if (k == 0) return 0.0;

  double acc = w.tail[k] * (history[k] - history[0]);
  for (int i = 1; i <= k - 1; ++i) acc += w.c[i] * (history[k] - history[k - i]);
  return acc / w.tau_alpha(tau);
}

/// Alternate form of the same derivative,
///   (D_tau^alpha U)_k = tau^{-alpha} ( c_0 (U_k - U_0)
///                                      - sum_{i=1}^{k-1} c_i (U_{k-i} - U_0) ).
/// The source convention writes this with the state index one step ahead of
/// the derivative index; shifting both to step k makes the two forms agree
/// identically through the complement identity c_0 = c_k^k + sum_{i<k} c_i.
inline double discrete_caputo_alt(std::span<const double> history, const CaputoWeights& w,
                                  double tau, int k) {
  if (k < 0 || k > w.horizon)
    throw HorizonError("discrete_caputo_alt: step index exceeds weight horizon");
  if (static_cast<int>(history.size()) < k + 1)
    throw DimensionError("discrete_caputo_alt: history shorter than k + 1");
  if (!(tau > 0.0)) throw InvalidParameterError("discrete_caputo_alt: tau must be positive");
  if (k == 0) return 0.0;

  double acc = w.c[0] * (history[k] - history[0]);
  for (int i = 1; i <= k - 1; ++i) acc -= w.c[i] * (history[k - i] - history[0]);
  return acc / w.tau_alpha(tau);
}

/// Memory kernel k(t) = t^{-alpha} / Gamma(1 - alpha).
inline double kernel_k(double t, double alpha) {
  if (!(t > 0.0)) throw DomainError("kernel_k: t must be positive");
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw InvalidParameterError("kernel_k: alpha must lie in (0, 1)");
  return std::pow(t, -alpha) / std::tgamma(1.0 - alpha);
}

/// Convolution inverse ell(t) = t^{alpha-1} / Gamma(alpha); (k * ell)(t) = 1.
inline double kernel_ell(double t, double alpha) {
  if (!(t > 0.0)) throw DomainError("kernel_ell: t must be positive");
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw InvalidParameterError("kernel_ell: alpha must lie in (0, 1)");
  return std::pow(t, alpha - 1.0) / std::tgamma(alpha);
}

}  // namespace tfpm
