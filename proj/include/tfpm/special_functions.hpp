#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "tfpm/errors.hpp"

namespace tfpm {

namespace detail {

/// Taylor sum of E_alpha(x) in extended precision.  Valid while the largest
/// intermediate term stays far enough below 1/eps(long double); the caller is
/// responsible for choosing the branch.
inline long double mittag_leffler_series(double alpha, double x) {
  const long double lx = std::log(std::abs(static_cast<long double>(x)));
  const bool negative = x < 0.0;
  long double sum = 1.0L;  // k = 0 term
  long double prev = 1.0L;
  int flat = 0;
  for (int k = 1; k < 40000; ++k) {
    const long double lt = k * lx - std::lgamma(static_cast<long double>(alpha) * k + 1.0L);
    long double term = std::exp(lt);
    if (negative && (k & 1)) term = -term;
    sum += term;
    // stop once two consecutive terms are negligible and the terms are decaying
    if (std::abs(term) < 1e-22L * std::abs(sum) && std::abs(term) <= prev) {
      if (++flat >= 2) break;
    } else {
      flat = 0;
    }
    prev = std::abs(term);
  }
  return sum;
}

/// Smallest-term truncation of the large-|x| expansion on the negative axis,
///   E_alpha(-y) ~ sum_{k>=1} (-1)^{k+1} y^{-k} / Gamma(1 - alpha k),
/// with 1/Gamma(1 - alpha k) = Gamma(alpha k) sin(pi alpha k) / pi.
/// The divergence test uses the sin-free envelope Gamma(alpha k) y^{-k} / pi:
/// the sine factor oscillates through zero, so a rebound in the literal term
/// size does not mean the expansion has turned.  Returns the sum and an
/// absolute error estimate (the smallest envelope term reached).
inline std::pair<long double, long double> mittag_leffler_asymptotic(double alpha, double y) {
  const long double pi = 3.14159265358979323846264338328L;
  const long double ly = std::log(static_cast<long double>(y));
  long double sum = 0.0L;
  long double smallest = std::numeric_limits<long double>::max();
  long double prev_env = std::numeric_limits<long double>::max();
  for (int k = 1; k < 2000; ++k) {
    const long double ak = static_cast<long double>(alpha) * k;
    const long double env = std::exp(std::lgamma(ak) - k * ly) / pi;
    if (env > prev_env) break;  // expansion started diverging
    const long double s = std::sin(pi * ak);
    const long double sign = ((k & 1) ? 1.0L : -1.0L) * (s >= 0 ? 1.0L : -1.0L);
    sum += sign * env * std::abs(s);
    prev_env = env;
    if (env < smallest) smallest = env;
    if (std::abs(sum) > 0 && env < 1e-24L * std::abs(sum)) break;
  }
  return {sum, smallest};
}

}  // namespace detail

/// Mittag-Leffler function E_alpha(x) = sum_{k>=0} x^k / Gamma(alpha k + 1),
/// alpha in (0, 1].
///
/// Evaluation: Taylor series for moderate arguments, smallest-term asymptotic
/// expansion deep on the negative axis.  The crossover is alpha-dependent
/// (|x| ~ 21^alpha): the series loses digits to cancellation once its peak
/// term reaches ~e^{|x|^{1/alpha}}, while the expansion resolves down to
/// ~e^{-|x|^{1/alpha}}; the two regions overlap for every alpha in (0,1).
/// Past the crossover the branch with the smaller estimated error wins.
inline double mittag_leffler(double alpha, double x) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw InvalidParameterError("mittag_leffler: alpha must lie in (0, 1]");
  if (!std::isfinite(x)) throw InvalidParameterError("mittag_leffler: x must be finite");
  if (alpha == 1.0) return std::exp(x);
  if (x == 0.0) return 1.0;

  const double crossover = std::pow(21.0, alpha);
  if (x >= -crossover)
    return static_cast<double>(detail::mittag_leffler_series(alpha, x));

  const auto [asym, asym_err] = detail::mittag_leffler_asymptotic(alpha, -x);
  if (std::abs(asym) > 0 && asym_err <= 1e-13L * std::abs(asym))
    return static_cast<double>(asym);
  // cancellation estimate for the series: eps_ld * (peak term e^{y^{1/alpha}})
  const double series_log_err =
      std::pow(-x, 1.0 / alpha) + std::log(std::numeric_limits<long double>::epsilon());
  if (series_log_err < std::log(static_cast<double>(asym_err)))
    return static_cast<double>(detail::mittag_leffler_series(alpha, x));
  return static_cast<double>(asym);
}

/// Kilbas-Saigo function E_{alpha,r,l}(x) = sum_{k>=0} c_k x^k with c_0 = 1 and
///   c_{k+1} = c_k * Gamma(alpha(kr + l) + 1) / Gamma(alpha(kr + l + 1) + 1).
/// E_{alpha,1,0} coincides with E_alpha.  Series evaluation only; intended for
/// moderate arguments (cross-validation of the discrete solver).
inline double kilbas_saigo(double alpha, double r, double l, double x) {
  if (!(alpha > 0.0) || alpha >= 1.0)
    throw InvalidParameterError("kilbas_saigo: alpha must lie in (0, 1)");
  if (!(r > 0.0)) throw InvalidParameterError("kilbas_saigo: r must be positive");
  if (!(l > r - 1.0 / alpha))
    throw InvalidParameterError("kilbas_saigo: need l > r - 1/alpha");
  if (!std::isfinite(x)) throw InvalidParameterError("kilbas_saigo: x must be finite");

  const long double la = alpha;
  long double coeff = 1.0L;
  long double sum = 1.0L;
  long double xk = 1.0L;
  for (int k = 0; k < 40000; ++k) {
    const long double arg = la * (static_cast<long double>(k) * r + l);
    coeff *= std::exp(std::lgamma(arg + 1.0L) - std::lgamma(arg + la + 1.0L));
    xk *= x;
    const long double term = coeff * xk;
    sum += term;
    if (std::abs(term) <= 1e-12L * std::abs(sum) && k > 2)
      return static_cast<double>(sum);
  }
  throw SolverError("kilbas_saigo: series did not converge (argument too large)",
                    std::numeric_limits<double>::quiet_NaN(), -1);
}

}  // namespace tfpm
