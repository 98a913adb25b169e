#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tfpm/errors.hpp"

namespace tfpm {

/// A spatial function carried as nodal values on the collocation grid and/or
/// spectral coefficients in the sine eigenbasis.  Flags mark which
/// representation is current; SpectralBasis fills in the missing one.
struct Field {
  std::vector<double> values;
  std::vector<double> coeffs;
  bool has_values = false;
  bool has_coeffs = false;

  static Field from_values(std::vector<double> v) {
    Field f;
    f.values = std::move(v);
    f.has_values = true;
    return f;
  }
  static Field from_coeffs(std::vector<double> c) {
    Field f;
    f.coeffs = std::move(c);
    f.has_coeffs = true;
    return f;
  }
};

/// All norms of one field in one record.  lp and energy use grid quadrature,
/// h/hstar use spectral coefficients.
struct NormSet {
  double lp = 0.0;
  double linf = 0.0;
  double l1_phi1 = 0.0;
  double h = 0.0;
  double hstar = 0.0;
  double energy = 0.0;
};

/// Interval (0, length) with the diffusion operator diagonalized by the sine
/// basis: eigenvalues lambda_k = ((k pi / length)^2)^s and eigenfunctions
/// Phi_k(x) = sqrt(2/length) sin(k pi x / length).  s = 1 is the Dirichlet
/// Laplacian; s < 1 its spectral fractional power.
///
/// The collocation grid is uniform, x_j = j h with h = length/(n_grid + 1),
/// and quadrature is the composite trapezoid rule (boundary values vanish, so
/// the rule reduces to h * sum over interior nodes).  On this grid the sine
/// modes are discretely orthonormal, which makes analyze/synthesize exact
/// inverses on the resolved span.
///
/// Immutable after construction; safe to share across threads.
class SpectralBasis {
public:
  SpectralBasis(double length, int n_modes, int n_grid, double s_power)
      : length_(length), s_power_(s_power), n_modes_(n_modes), n_grid_(n_grid) {
    if (!(length > 0.0))
      throw InvalidParameterError("SpectralBasis: length must be positive");
    if (n_modes < 1 || n_grid < 1)
      throw InvalidParameterError("SpectralBasis: mode and grid counts must be positive");
    if (n_grid < n_modes)
      throw InvalidParameterError("SpectralBasis: need n_grid >= n_modes");
    if (!(s_power > 0.0) || s_power > 1.0)
      throw InvalidParameterError("SpectralBasis: s_power must lie in (0, 1]");

    dx_ = length_ / (n_grid_ + 1);
    grid_.resize(n_grid_);
    for (int j = 0; j < n_grid_; ++j) grid_[j] = dx_ * (j + 1);

    eigenvalues_.resize(n_modes_);
    for (int k = 1; k <= n_modes_; ++k) {
      const double lap = (k * M_PI / length_) * (k * M_PI / length_);
      eigenvalues_[k - 1] = std::pow(lap, s_power_);
    }

    phi_.resize(static_cast<size_t>(n_modes_) * n_grid_);
    const double amp = std::sqrt(2.0 / length_);
    for (int k = 1; k <= n_modes_; ++k)
      for (int j = 0; j < n_grid_; ++j)
        phi_[static_cast<size_t>(k - 1) * n_grid_ + j] =
            amp * std::sin(k * M_PI * grid_[j] / length_);
  }

  double length() const noexcept { return length_; }
  double s_power() const noexcept { return s_power_; }
  int n_modes() const noexcept { return n_modes_; }
  int n_grid() const noexcept { return n_grid_; }
  double dx() const noexcept { return dx_; }
  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }

  /// k is the 1-based mode index.
  double eigenvalue(int k) const {
    check_mode(k);
    return eigenvalues_[k - 1];
  }

  /// Tabulated Phi_k(x_j); k 1-based, j 0-based grid index.
  double phi(int k, int j) const {
    check_mode(k);
    return phi_[static_cast<size_t>(k - 1) * n_grid_ + j];
  }

  /// Row Phi_k(x_0..x_{n_grid-1}) of the eigenfunction table; k 1-based.
  const double* phi_row(int k) const {
    check_mode(k);
    return &phi_[static_cast<size_t>(k - 1) * n_grid_];
  }

  /// Phi_k evaluated at an arbitrary point of the closed interval.
  double eigenfunction(int k, double x) const {
    check_mode(k);
    return std::sqrt(2.0 / length_) * std::sin(k * M_PI * x / length_);
  }

  double distance_to_boundary(double x) const { return std::min(x, length_ - x); }

  /// Trapezoid quadrature of a nodal function vanishing at the boundary.
  double quadrature(std::span<const double> nodal) const {
    if (static_cast<int>(nodal.size()) != n_grid_)
      throw DimensionError("quadrature: nodal size != n_grid");
    double s = 0.0;
    for (double v : nodal) s += v;
    return dx_ * s;
  }

  /// values -> coefficients, \hat u_k = int u Phi_k.
  std::vector<double> analyze(std::span<const double> values) const {
    if (static_cast<int>(values.size()) != n_grid_)
      throw DimensionError("analyze: values size != n_grid");
    std::vector<double> c(n_modes_);
    for (int k = 0; k < n_modes_; ++k) {
      const double* row = &phi_[static_cast<size_t>(k) * n_grid_];
      double s = 0.0;
      for (int j = 0; j < n_grid_; ++j) s += row[j] * values[j];
      c[k] = dx_ * s;
    }
    return c;
  }

  /// coefficients -> values, u(x_j) = sum_k \hat u_k Phi_k(x_j).
  std::vector<double> synthesize(std::span<const double> coeffs) const {
    if (static_cast<int>(coeffs.size()) != n_modes_)
      throw DimensionError("synthesize: coeffs size != n_modes");
    std::vector<double> v(n_grid_, 0.0);
    for (int k = 0; k < n_modes_; ++k) {
      const double ck = coeffs[k];
      if (ck == 0.0) continue;
      const double* row = &phi_[static_cast<size_t>(k) * n_grid_];
      for (int j = 0; j < n_grid_; ++j) v[j] += ck * row[j];
    }
    return v;
  }

  void ensure_coeffs(Field& f) const {
    if (f.has_coeffs) return;
    if (!f.has_values) throw InvalidParameterError("ensure_coeffs: field is empty");
    f.coeffs = analyze(f.values);
    f.has_coeffs = true;
  }

  void ensure_values(Field& f) const {
    if (f.has_values) return;
    if (!f.has_coeffs) throw InvalidParameterError("ensure_values: field is empty");
    f.values = synthesize(f.coeffs);
    f.has_values = true;
  }

  /// Coefficients of f, computing them from values when needed (pure).
  std::vector<double> coeffs_of(const Field& f) const {
    if (f.has_coeffs) {
      if (static_cast<int>(f.coeffs.size()) != n_modes_)
        throw DimensionError("coeffs_of: coeffs size != n_modes");
      return f.coeffs;
    }
    if (!f.has_values) throw InvalidParameterError("coeffs_of: field is empty");
    return analyze(f.values);
  }

  /// Nodal values of f, computing them from coefficients when needed (pure).
  std::vector<double> values_of(const Field& f) const {
    if (f.has_values) {
      if (static_cast<int>(f.values.size()) != n_grid_)
        throw DimensionError("values_of: values size != n_grid");
      return f.values;
    }
    if (!f.has_coeffs) throw InvalidParameterError("values_of: field is empty");
    return synthesize(f.coeffs);
  }

  /// L u: multiplies coefficients by lambda_k.  Modes above n_modes are
  /// truncated by construction.
  Field apply_operator(const Field& f) const {
    auto c = coeffs_of(f);
    for (int k = 0; k < n_modes_; ++k) c[k] *= eigenvalues_[k];
    return Field::from_coeffs(std::move(c));
  }

  /// L^{-1} u: multiplies coefficients by lambda_k^{-1}.
  Field apply_inverse(const Field& f) const {
    auto c = coeffs_of(f);
    for (int k = 0; k < n_modes_; ++k) c[k] /= eigenvalues_[k];
    return Field::from_coeffs(std::move(c));
  }

  /// Green function of the operator.  s = 1 has the closed form
  /// min(x,y)(length - max(x,y))/length; s < 1 falls back to the truncated
  /// spectral sum  sum_k lambda_k^{-1} Phi_k(x) Phi_k(y).
  double green_kernel(double x, double y) const {
    if (!(x > 0.0) || !(x < length_) || !(y > 0.0) || !(y < length_))
      throw DomainError("green_kernel: point outside the open interval");
    if (s_power_ == 1.0)
      return std::min(x, y) * (length_ - std::max(x, y)) / length_;
    double s = 0.0;
    for (int k = n_modes_; k >= 1; --k)
      s += eigenfunction(k, x) * eigenfunction(k, y) / eigenvalues_[k - 1];
    return s;
  }

  /// All norms of one field; p is the Lebesgue exponent (p >= 1), m_exponent
  /// the nonlinearity power entering the energy 1/(1+m) int |u|^{1+m}.
  NormSet norms(const Field& f, double p, double m_exponent) const {
    if (!(p >= 1.0)) throw InvalidParameterError("norms: p must be >= 1");
    if (!(m_exponent > 0.0)) throw InvalidParameterError("norms: m must be positive");
    const auto v = values_of(f);
    const auto c = coeffs_of(f);

    NormSet n;
    double sp = 0.0, s1p = 0.0, se = 0.0;
    const double* phi1 = &phi_[0];
    for (int j = 0; j < n_grid_; ++j) {
      const double a = std::abs(v[j]);
      sp += std::pow(a, p);
      s1p += a * phi1[j];
      se += std::pow(a, 1.0 + m_exponent);
      n.linf = std::max(n.linf, a);
    }
    n.lp = std::pow(dx_ * sp, 1.0 / p);
    n.l1_phi1 = dx_ * s1p;
    n.energy = dx_ * se / (1.0 + m_exponent);

    double sh = 0.0, shs = 0.0;
    for (int k = 0; k < n_modes_; ++k) {
      const double c2 = c[k] * c[k];
      sh += eigenvalues_[k] * c2;
      shs += c2 / eigenvalues_[k];
    }
    n.h = std::sqrt(sh);
    n.hstar = std::sqrt(shs);
    return n;
  }

private:
  void check_mode(int k) const {
    if (k < 1 || k > n_modes_)
      throw DimensionError("mode index " + std::to_string(k) + " outside 1.." +
                           std::to_string(n_modes_));
  }

  double length_;
  double s_power_;
  int n_modes_;
  int n_grid_;
  double dx_ = 0.0;
  std::vector<double> eigenvalues_;
  std::vector<double> grid_;
  std::vector<double> phi_;
};

inline SpectralBasis build_interval_basis(double length, int n_modes, int n_grid,
                                          double s_power) {
  return SpectralBasis(length, n_modes, n_grid, s_power);
}

inline std::shared_ptr<const SpectralBasis> make_interval_basis(double length, int n_modes,
                                                                int n_grid, double s_power) {
  return std::make_shared<const SpectralBasis>(length, n_modes, n_grid, s_power);
}

}  // namespace tfpm
