#pragma once

// Riemann-Liouville integrals, Abel-type quadrature and Riesz potentials.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "ridgelet/errors.hpp"
#include "ridgelet/grid.hpp"
#include "ridgelet/quadrature.hpp"
#include "ridgelet/sampled.hpp"
#include "ridgelet/special.hpp"

namespace ridgelet {

/// (1/Gamma(alpha)) * int_0^t g(r) (t-r)^{alpha-1} dr.
///
/// g is treated as negligible beyond q.truncation_radius. When t lies inside
/// that radius the substitution r = t(1 - u^{1/alpha}) turns the kernel into a
/// constant, leaving only a possible integrable singularity of g at r = 0.
template <class G>
double rl_fractional_integral(const G& g, double alpha, double t, const QuadratureSpec& q = QuadratureSpec::kernel()) {
  if (!(alpha > 0)) throw DomainError("rl_fractional_integral: alpha must be positive");
  if (!(t > 0)) throw DomainError("rl_fractional_integral: t must be positive");
  const double R = q.truncation_radius;
  const double tol = std::max(q.rel_tol * 1e-2, 1e-14);
  double err = 0.0, l1 = 0.0, val = 0.0;
  if (t <= R) {
    const double inv = 1.0 / alpha;
    auto f = [&](double u, double uc) {
      // uc > 0 is 1 - u; use it to keep r accurate near r = 0.
      const double one_minus = uc > 0 ? -std::expm1(std::log1p(-uc) * inv) : 1.0 - std::pow(u, inv);
      return static_cast<double>(g(t * one_minus));
    };
    val = quad::tanh_sinh(f, 0.0, 1.0, tol, &err, &l1) * std::pow(t, alpha) / gamma_fn(alpha + 1.0);
    l1 *= std::pow(t, alpha) / gamma_fn(alpha + 1.0);
    err *= std::pow(t, alpha) / gamma_fn(alpha + 1.0);
  } else {
    // The kernel is smooth on [0, R]; r = x^2 softens power singularities of g at 0.
    auto f = [&](double x) {
      const double r = x * x;
      return x == 0.0 ? 0.0 : 2.0 * x * static_cast<double>(g(r)) * std::pow(t - r, alpha - 1.0);
    };
    val = quad::gk(f, 0.0, std::sqrt(R), tol, 15, &err) / gamma_fn(alpha);
    l1 = 0.0;
  }
  if (!std::isfinite(val) || (l1 > 0 && err > 1e-4 * l1))
    throw DivergenceError("rl_fractional_integral: integrand not integrable near the origin");
  return val;
}

/// int_0^r s^{n-k-1} h(s) (r^2 - s^2)^{k/2-1} ds evaluated through s = r sin(theta).
/// Optional s_breaks mark points where h is not smooth.
template <class H>
double abel_quadrature(const H& h, double r, int n, int k, const QuadratureSpec& q = QuadratureSpec::kernel(),
                       const std::vector<double>& s_breaks = {}) {
  if (k < 1 || k >= n) throw DomainError("abel_quadrature: need 1 <= k < n");
  if (!(r > 0)) throw DomainError("abel_quadrature: r must be positive");
  const int m = n - k;
  auto f = [&](double th) {
    const double sn = std::sin(th), cs = std::cos(th);
    const double w = (m == 1 ? 1.0 : std::pow(sn, m - 1)) * (k == 1 ? 1.0 : std::pow(cs, k - 1));
    return w * static_cast<double>(h(r * sn));
  };
  std::vector<double> pts{0.0};
  auto add_break = [&](double s) {
    if (s > 0 && s < r) pts.push_back(std::asin(s / r));
  };
  add_break(q.truncation_radius);
  for (double s : s_breaks) add_break(s);
  pts.push_back(std::numbers::pi / 2);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const double v = quad::gk_panels(f, pts, std::min(q.rel_tol, 1e-10));
  return std::pow(r, n - 2) * v;
}

struct AsymptoticsReport {
  double slope_at_zero = 0.0;
  double slope_at_infinity = 0.0;
  double integral_identity_residual = 0.0;
  double integral_numeric = 0.0;
  double integral_closed_form = 0.0;
};

/// Log-log slopes of s -> I^{1+alpha} psi(s) on [1e-3, 1e-1] and [10, 1e3],
/// plus the residual of the integral identity
///   int_0^inf I^{1+alpha} psi(s) ds/s = Gamma(-alpha) int s^alpha psi        (alpha not integer)
///                                    = (-1)^{alpha+1}/alpha! int s^alpha psi log s   (alpha integer).
/// The 1/s weight is the one under which both sides are finite for every
/// admissible psi; the tail beyond 1e6 is closed with a fitted power law.
template <class P>
AsymptoticsReport rl_asymptotics_report(const P& psi, double alpha, double beta, const QuadratureSpec& q = QuadratureSpec::kernel()) {
  if (!(alpha > 0) || !(beta > alpha)) throw DomainError("rl_asymptotics_report: need beta > alpha > 0");
  AsymptoticsReport rep;
  auto I = [&](double s) { return rl_fractional_integral(psi, 1.0 + alpha, s, q); };
  auto slope_on = [&](double a, double b, std::vector<double>* ys = nullptr) {
    const auto xs = log_grid(a, b, 9);
    std::vector<double> y(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) y[i] = I(xs[i]);
    if (ys) *ys = y;
    bool all_zero = std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; });
    if (all_zero) return 0.0;
    auto sl = loglog_slope(xs, y);
    if (!sl) throw PreconditionError("rl_asymptotics_report: slope fit failed");
    return *sl;
  };
  rep.slope_at_zero = slope_on(1e-3, 1e-1);
  rep.slope_at_infinity = slope_on(10.0, 1e3);

  const double R = q.truncation_radius;
  const bool integer_alpha = alpha == std::floor(alpha);
  double closed = 0.0;
  if (!integer_alpha) {
    closed = gamma_fn(-alpha) * quad::gk(
                                     [&](double s) { return std::pow(s, alpha) * static_cast<double>(psi(s)); }, 0.0, R, 1e-12);
  } else {
    const double sign = (static_cast<long>(alpha) % 2 == 0) ? -1.0 : 1.0;  // (-1)^{alpha+1}
    closed = sign / gamma_fn(alpha + 1.0) *
             quad::tanh_sinh([&](double s) { return std::pow(s, alpha) * std::log(s) * static_cast<double>(psi(s)); }, 0.0, R,
                             1e-12);
  }
  rep.integral_closed_form = closed;

  auto J = [&](double s) { return I(s) / s; };
  const double S = 1e6;
  std::vector<double> panels{0.0};
  for (double p = 1e-3; p <= S * 1.0000001; p *= 10.0) panels.push_back(p);
  double num = quad::gk_panels(J, panels, 1e-10, 12);
  const auto xs = log_grid(S / 10.0, S, 7);
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = J(xs[i]);
  if (std::any_of(ys.begin(), ys.end(), [](double v) { return v != 0.0; })) {
    auto p = loglog_slope(xs, ys);
    if (!p) throw PreconditionError("rl_asymptotics_report: tail fit failed");
    if (*p >= -1.0) throw PreconditionError("rl_asymptotics_report: insufficient decay at infinity");
    // Amplitude from the endpoint value keeps the sign of the tail.
    num += -ys.back() * S / (*p + 1.0);
  }
  rep.integral_numeric = num;
  const double scale = std::max(std::abs(closed), std::abs(num));
  rep.integral_identity_residual = scale == 0.0 ? 0.0 : std::abs(num - closed) / std::abs(closed == 0.0 ? scale : closed);
  return rep;
}

/// Discrete Riesz potential sum_y f(y)|x-y|^{alpha-n} dV. The cell containing x
/// contributes f times the exact integral of |z|^{alpha-n} over the ball of equal volume.
inline double riesz_potential(const GridFunction& f, double alpha, const std::vector<double>& x) {
  const int n = f.n;
  if (!(alpha > 0 && alpha < n)) throw DomainError("riesz_potential: alpha must lie in (0, n)");
  if (static_cast<int>(x.size()) != n) throw DomainError("riesz_potential: dimension mismatch");
  const double dv = f.cell_volume();
  const double rho = std::pow(dv / ball_volume(n), 1.0 / n);
  const double self = sphere_area(n) * std::pow(rho, alpha) / alpha;
  std::array<int, 8> own{};
  bool inside = true;
  for (int a = 0; a < n; ++a) {
    const double u = (x[a] - (f.center[a] - f.half_width[a])) / f.spacing(a);
    own[a] = static_cast<int>(std::floor(u));
    if (own[a] < 0 || own[a] >= f.cells[a]) inside = false;
  }
  const std::size_t own_idx = inside ? f.flat_index(own.data()) : static_cast<std::size_t>(-1);
  std::array<double, 8> y{};
  double acc = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double v = f.values[i];
    if (v == 0.0) continue;
    if (i == own_idx) {
      acc += v * self;
      continue;
    }
    f.cell_center(i, y.data());
    double d2 = 0.0;
    for (int a = 0; a < n; ++a) d2 += (x[a] - y[a]) * (x[a] - y[a]);
    acc += v * std::pow(d2, 0.5 * (alpha - n)) * dv;
  }
  return acc;
}

}  // namespace ridgelet
