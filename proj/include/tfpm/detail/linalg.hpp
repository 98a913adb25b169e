#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "tfpm/errors.hpp"

namespace tfpm::detail {

/// Neumaier compensated accumulator.  Used wherever a long positive sum must
/// stay accurate to ~1 ulp (weight tails, norm partial sums).
class CompensatedSum {
public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Solves A x = b in place by LU with partial pivoting.  A is row-major n x n
/// and is destroyed; b holds the solution on return.
inline void lu_solve(std::vector<double>& a, std::span<double> b, int n) {
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(a[static_cast<size_t>(k) * n + k]);
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a[static_cast<size_t>(i) * n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) throw SolverError("singular matrix in lu_solve", 0.0, -1);
    if (p != k) {
      for (int j = 0; j < n; ++j)
        std::swap(a[static_cast<size_t>(k) * n + j], a[static_cast<size_t>(p) * n + j]);
      std::swap(b[k], b[p]);
    }
    const double inv = 1.0 / a[static_cast<size_t>(k) * n + k];
    for (int i = k + 1; i < n; ++i) {
      const double f = a[static_cast<size_t>(i) * n + k] * inv;
      a[static_cast<size_t>(i) * n + k] = f;
      if (f != 0.0) {
        for (int j = k + 1; j < n; ++j)
          a[static_cast<size_t>(i) * n + j] -= f * a[static_cast<size_t>(k) * n + j];
        b[i] -= f * b[k];
      }
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a[static_cast<size_t>(i) * n + j] * b[j];
    b[i] = s / a[static_cast<size_t>(i) * n + i];
  }
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

/// Ordinary least squares y = slope * x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  LineFit f;
  const size_t n = std::min(x.size(), y.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || den == 0.0)
    throw InvalidParameterError("fit_line: need at least two distinct abscissae");
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / static_cast<double>(n);
  f.points = static_cast<int>(n);
  return f;
}

}  // namespace tfpm::detail
