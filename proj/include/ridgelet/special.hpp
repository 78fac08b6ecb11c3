#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "ridgelet/errors.hpp"

namespace ridgelet {

/// Tolerances and panel layout shared by the 1-D quadrature routines.
struct QuadratureSpec {
  int panel_count = 16;
  int points_per_panel = 20;
  double rel_tol = 1e-9;
  double abs_tol = 1e-15;
  /// Radius beyond which integrands are treated as (numerically) supported-out.
  double truncation_radius = 12.0;

  void validate() const {
    if (panel_count < 1 || points_per_panel < 1) throw DomainError("QuadratureSpec: panel counts must be >= 1");
    if (!(rel_tol > 0)) throw DomainError("QuadratureSpec: rel_tol must be positive");
    if (!(truncation_radius > 0)) throw DomainError("QuadratureSpec: truncation_radius must be positive");
  }

  /// Kernel-building default.
  static QuadratureSpec kernel() { return {}; }
  /// Transform-level default.
  static QuadratureSpec transform() {
    QuadratureSpec q;
    q.rel_tol = 1e-6;
    return q;
  }
};

inline bool is_nonpositive_integer(double x) { return x <= 0 && x == std::floor(x); }

/// Gamma function on the real line; throws at the poles 0, -1, -2, ...
inline double gamma_fn(double x) {
  if (std::isnan(x)) throw DomainError("gamma_fn: NaN argument");
  if (is_nonpositive_integer(x)) throw DomainError("gamma_fn: pole at " + std::to_string(x));
  return std::tgamma(x);
}

/// sigma_{m-1} = 2 pi^{m/2} / Gamma(m/2), the area of the unit sphere in R^m.
inline double sphere_area(int m) {
  if (m < 1) throw DomainError("sphere_area: dimension must be >= 1");
  const double h = 0.5 * m;
  return 2.0 * std::pow(std::numbers::pi, h) / gamma_fn(h);
}

/// Volume of the unit ball in R^m.
inline double ball_volume(int m) {
  if (m < 1) throw DomainError("ball_volume: dimension must be >= 1");
  return sphere_area(m) / m;
}

/// sigma_{k-1} sigma_{n-k-1} / sigma_{n-1}.
inline double c_kn(int n, int k) {
  if (k < 1 || k >= n) throw DomainError("c_kn: need 1 <= k < n");
  return sphere_area(k) * sphere_area(n - k) / sphere_area(n);
}

/// e^{-z} I_nu(z) for z >= 0, stable for large z.
inline double scaled_bessel_i(double nu, double z) {
  if (z < 0) throw DomainError("scaled_bessel_i: negative argument");
  if (z < 600.0) return std::exp(-z) * std::cyl_bessel_i(nu, z);
  // Large-argument expansion; at z >= 600 eight terms are far below double precision.
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int j = 1; j <= 8; ++j) {
    term *= -(mu - (2.0 * j - 1) * (2.0 * j - 1)) / (j * 8.0 * z);
    sum += term;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace ridgelet
