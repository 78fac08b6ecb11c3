#pragma once

// k-plane transform, its dual, and the smoothed operators W_t*, U_t, V_t*.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ridgelet/errors.hpp"
#include "ridgelet/fractional.hpp"
#include "ridgelet/grassmann.hpp"
#include "ridgelet/grid.hpp"
#include "ridgelet/quadrature.hpp"
#include "ridgelet/special.hpp"
#include "ridgelet/wavelet.hpp"

namespace ridgelet {

/// A radial function f(x) = f0(|x|) on R^n; the profile carries n as its dimension.
using RadialFunction = RadialProfile;

struct TransformValue {
  double value = 0.0;
  bool converged = true;
  int doublings = 0;
  double last_increment = 0.0;
};

/// sigma_{k-1} int_0^inf f0(sqrt(s^2 + v^2)) v^{k-1} dv, which equals
/// sigma_{k-1} int_s^inf f0(t)(t^2 - s^2)^{k/2-1} t dt with the endpoint singularity removed.
/// Infinite tails are integrated by radius doubling; `converged` is false when the
/// doubling budget runs out without two consecutive increments below q.rel_tol.
inline TransformValue kplane_radial_checked(const RadialFunction& f0, int k, double s,
                                            const QuadratureSpec& q = QuadratureSpec::transform(), int max_doublings = 300) {
  if (k < 1) throw DomainError("kplane_radial: k must be >= 1");
  if (!(s >= 0)) throw DomainError("kplane_radial: s must be nonnegative");
  TransformValue out;
  if (f0.is_zero()) return out;
  const double sig = sphere_area(k);
  auto g = [&](double v) {
    const double r = std::sqrt(s * s + v * v);
    return (k == 1 ? 1.0 : std::pow(v, k - 1)) * f0(r);
  };
  const double R = f0.support_radius();
  std::vector<double> pts{0.0};
  for (double b : f0.breakpoints())
    if (b > s && b < R) pts.push_back(std::sqrt(b * b - s * s));
  if (std::isfinite(R)) {
    if (s >= R) return out;
    pts.push_back(std::sqrt(R * R - s * s));
    std::sort(pts.begin(), pts.end());
    out.value = sig * quad::gk_panels(g, pts, 1e-13);
    return out;
  }
  std::sort(pts.begin(), pts.end());
  const double B = std::max(1.0, pts.back());
  if (pts.back() < B) pts.push_back(B);
  const double head = quad::gk_panels(g, pts, 1e-13);
  const auto tail = quad::integrate_to_infinity(g, B, 2.0 * B, q.rel_tol, 0.0, max_doublings, 1e-12);
  out.value = sig * (head + tail.value);
  out.converged = tail.converged;
  out.doublings = tail.doublings;
  out.last_increment = sig * tail.last_increment;
  return out;
}

/// k-plane transform of a radial function at |tau| = s. Throws DivergenceError
/// when the defining integral does not settle.
inline double kplane_radial(const RadialFunction& f0, int k, double s, const QuadratureSpec& q = QuadratureSpec::transform()) {
  const auto r = kplane_radial_checked(f0, k, s, q);
  if (!r.converged)
    throw DivergenceError("kplane_radial: integral of f0(t)(t^2-s^2)^{k/2-1} t over [s, inf) diverges (" +
                          std::to_string(r.doublings) + " doublings, last increment " + std::to_string(r.last_increment) + ")");
  return r.value;
}

/// Midpoint-lattice integral of the interpolated grid function over the plane
/// patch inside the box; lattice spacing equals the finest grid spacing.
inline double kplane_numeric(const GridFunction& f, const AffinePlane& tau, const QuadratureSpec& q = QuadratureSpec::transform()) {
  (void)q;
  const int n = f.n;
  if (tau.n() != n) throw DomainError("kplane_numeric: dimension mismatch");
  const int k = tau.k();
  const double h = f.min_spacing();
  double reach = 0.0, half_diag = 0.0;
  for (int a = 0; a < n; ++a) {
    reach += (tau.offset(a) - f.center[a]) * (tau.offset(a) - f.center[a]);
    half_diag += f.half_width[a] * f.half_width[a];
  }
  reach = std::sqrt(reach);
  half_diag = std::sqrt(half_diag);
  if (reach > half_diag + h) return 0.0;
  const int J = static_cast<int>(std::ceil((reach + half_diag) / h)) + 1;
  const int side = 2 * J;
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= static_cast<std::size_t>(side);
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<int> idx(static_cast<std::size_t>(k));
  double acc = 0.0;
  const auto& B = tau.subspace.basis;
  for (std::size_t lin = 0; lin < total; ++lin) {
    std::size_t rem = lin;
    for (int i = 0; i < k; ++i) {
      idx[i] = static_cast<int>(rem % static_cast<std::size_t>(side)) - J;
      rem /= static_cast<std::size_t>(side);
    }
    for (int a = 0; a < n; ++a) {
      double v = tau.offset(a);
      for (int i = 0; i < k; ++i) v += B(a, i) * (idx[i] + 0.5) * h;
      x[a] = v;
    }
    acc += f.interpolate(x.data());
  }
  return acc * std::pow(h, k);
}

/// c_kn r^{2-n} int_0^r phi0(t)(r^2-t^2)^{k/2-1} t^{n-k-1} dt: the dual transform of a
/// function of |tau| evaluated at |x| = r.
inline double dual_radial(const RadialProfile& phi0, int n, int k, double r, const QuadratureSpec& q = QuadratureSpec::kernel()) {
  if (!(r > 0)) throw DomainError("dual_radial: r must be positive");
  if (phi0.is_zero()) return 0.0;
  QuadratureSpec qq = q;
  qq.truncation_radius = std::isfinite(phi0.support_radius()) ? phi0.support_radius() : std::max(q.truncation_radius, r);
  return c_kn(n, k) * std::pow(r, 2 - n) * abel_quadrature(phi0, r, n, k, qq, phi0.breakpoints());
}

/// Haar average of phi(x + gamma tau_0) over gamma in SO(n), tau_0 = span(e_1..e_k).
template <class Phi>
McResult dual_numeric(const Phi& phi, const Eigen::VectorXd& x, int n, int k, const McSpec& mc) {
  if (k < 1 || k >= n) throw DomainError("dual_numeric: need 1 <= k < n");
  if (x.size() != n) throw DomainError("dual_numeric: dimension mismatch");
  return run_mc(mc, [&](Rng& rng) {
    const Eigen::MatrixXd g = haar_orthogonal(n, rng, true);
    LinearSubspace v(g.leftCols(k));
    Eigen::VectorXd off = v.project_complement(x);
    off -= v.basis * (v.basis.transpose() * off);
    return static_cast<double>(phi(AffinePlane(std::move(v), std::move(off))));
  });
}

/// prefactor * int phi(tau) prof(|x - tau|/t) dmu(tau), offsets sampled in the
/// ball of radius t * support(prof) around P_{V-perp} x.
template <class Phi>
McResult smoothed_backprojection(const Phi& phi, const RadialProfile& prof, double t, const Eigen::VectorXd& x, int n, int k,
                                 const McSpec& mc, double prefactor) {
  if (!(t > 0)) throw DomainError("backprojection: t must be positive");
  if (k < 1 || k >= n) throw DomainError("backprojection: need 1 <= k < n");
  if (x.size() != n) throw DomainError("backprojection: dimension mismatch");
  if (prof.is_zero()) return McResult{0.0, 0.0, mc.sample_count};
  const double Rw = prof.support_radius();
  if (!std::isfinite(Rw)) throw PreconditionError("backprojection: profile needs a finite truncation radius");
  const int m = n - k;
  const double rad = t * Rw;
  const double vol = ball_volume(m) * std::pow(rad, m);
  return run_mc(mc, [&](Rng& rng) {
    const Eigen::MatrixXd q = haar_orthogonal(n, rng);
    Eigen::MatrixXd vb = q.leftCols(k);
    const Eigen::MatrixXd perp = q.rightCols(m);
    const Eigen::VectorXd y = detail::uniform_in_ball(m, rad, rng);
    Eigen::VectorXd off = perp * (perp.transpose() * x + y);
    off -= vb * (vb.transpose() * off);
    const double wv = prof(y.norm() / t);
    if (wv == 0.0) return 0.0;
    const AffinePlane tau(LinearSubspace(std::move(vb)), std::move(off));
    return prefactor * vol * wv * static_cast<double>(phi(tau));
  });
}

/// W_t* phi(x) = t^{-n} int phi(tau) w(|x - tau|/t) dmu(tau).
template <class Phi>
McResult w_star(const Phi& phi, const RadialProfile& w, double t, const Eigen::VectorXd& x, int n, int k, const McSpec& mc) {
  if (!(t > 0)) throw DomainError("w_star: t must be positive");
  return smoothed_backprojection(phi, w, t, x, n, k, mc, std::pow(t, -n));
}

/// V_t* phi(x) = t^{k-n} int phi(tau) v(|x - tau|/t) dmu(tau).
template <class Phi>
McResult v_t_star(const Phi& phi, const RadialProfile& v, double t, const Eigen::VectorXd& x, int n, int k, const McSpec& mc) {
  if (!(t > 0)) throw DomainError("v_t_star: t must be positive");
  return smoothed_backprojection(phi, v, t, x, n, k, mc, std::pow(t, k - n));
}

/// Average of F(|a e + b theta|) over theta on the unit sphere of R^dim,
/// with e a fixed unit vector. `breaks` lists radii where F is not smooth.
template <class F>
double spherical_mean(const F& Fn, int dim, double a, double b, const std::vector<double>& breaks = {}) {
  if (dim < 1) throw DomainError("spherical_mean: dimension must be >= 1");
  a = std::abs(a);
  b = std::abs(b);
  if (dim == 1) return 0.5 * (Fn(std::abs(a - b)) + Fn(a + b));
  if (a == 0.0 || b == 0.0) return Fn(a + b);
  const double pi = std::numbers::pi;
  auto g = [&](double phi) {
    const double d2 = std::max(0.0, a * a + b * b - 2.0 * a * b * std::cos(phi));
    const double sn = std::sin(phi);
    return (dim == 2 ? 1.0 : std::pow(sn, dim - 2)) * Fn(std::sqrt(d2));
  };
  std::vector<double> pts{0.0};
  for (double R : breaks) {
    const double c = (a * a + b * b - R * R) / (2.0 * a * b);
    if (c > -1.0 && c < 1.0) pts.push_back(std::acos(c));
  }
  pts.push_back(pi);
  std::sort(pts.begin(), pts.end());
  const double norm = std::sqrt(pi) * gamma_fn(0.5 * (dim - 1)) / gamma_fn(0.5 * dim);
  return quad::gk_panels(g, pts, 1e-12) / norm;
}

/// Closed forms for f(x) = exp(-b|x|^2).
namespace gaussian {

/// k-plane transform at |tau| = s.
inline double kplane(double b, int k, double s) { return std::pow(std::numbers::pi / b, 0.5 * k) * std::exp(-b * s * s); }

/// Mean of exp(-b|y|^2) over the sphere |y - x| = a in R^n, |x| = rho.
inline double spherical_mean(double b, int n, double rho, double a) {
  const double z = 2.0 * b * rho * a;
  const double nu = 0.5 * n - 1.0;
  if (n == 1) return 0.5 * (std::exp(-b * (rho - a) * (rho - a)) + std::exp(-b * (rho + a) * (rho + a)));
  if (z < 1.0) {
    // Gamma(nu+1) (z/2)^{-nu} I_nu(z) as a power series.
    double term = 1.0, sum = 1.0;
    const double q = 0.25 * z * z;
    for (int j = 1; j < 40; ++j) {
      term *= q / (j * (nu + j));
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return std::exp(-b * (rho * rho + a * a)) * sum;
  }
  return std::exp(-b * (rho - a) * (rho - a)) * gamma_fn(nu + 1.0) * std::pow(0.5 * z, -nu) * scaled_bessel_i(nu, z);
}

/// U_t f(tau) for u(rho) = exp(-c rho^2) on R^{n-k}, |tau| = s.
inline double u_t(double b, double c, int n, int k, double t, double s) {
  const int m = n - k;
  const double pi = std::numbers::pi;
  const double cc = c / (t * t);
  return std::pow(t, -m) * std::pow(pi / b, 0.5 * k) * std::pow(pi / (b + cc), 0.5 * m) * std::exp(-(b * cc / (b + cc)) * s * s);
}

}  // namespace gaussian

/// U_t f(tau) for radial f, given its transform profile fhat(s) on V-perp:
/// sigma_{m-1} int_0^inf u(rho) rho^{m-1} M_fhat(|x''|, t rho) drho, where M is the
/// spherical mean in R^m. Equivalent to t^{k-n}(fhat_V * u(.|/t))(x'').
template <class Fhat>
double u_t_radial(const Fhat& fhat, const RadialProfile& u, double t, double s, int n, int k,
                  const std::vector<double>& fhat_breaks = {}) {
  if (!(t > 0)) throw DomainError("u_t: t must be positive");
  if (u.is_zero()) return 0.0;
  const int m = n - k;
  if (u.dim() != m) throw DomainError("u_t: profile dimension must equal n - k");
  return detail::profile_radial_integral(u, m, [&](double rho) {
           return sphere_area(m) * u(rho) * spherical_mean(fhat, m, s, t * rho, fhat_breaks);
         });
}

/// U_t f(tau) = t^{k-n} sum_cells f(x) u(|x - tau|/t) dV for a grid function.
inline double u_t_grid(const GridFunction& f, const RadialProfile& u, double t, const AffinePlane& tau) {
  if (!(t > 0)) throw DomainError("u_t: t must be positive");
  if (tau.n() != f.n) throw DomainError("u_t: dimension mismatch");
  const int n = f.n, k = tau.k();
  Eigen::VectorXd x(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (f.values[i] == 0.0) continue;
    f.cell_center(i, x.data());
    acc += f.values[i] * u(plane_distance(x, tau) / t);
  }
  return std::pow(t, k - n) * acc * f.cell_volume();
}

enum class AbelMode { psi, h };

/// psi mode: c_kn r^{2-n} int_0^r s^{n-k-1} g(s)(r^2-s^2)^{k/2-1} ds (g on R^{n-k}, result on R^n).
/// h mode: sigma_{k-1} int_s^inf g(r)(r^2-s^2)^{k/2-1} r dr (g on R^n, result on R^{n-k}).
/// The defining integral is probed once at construction; a divergent one raises DivergenceError.
inline RadialProfile abel_pair(const RadialProfile& g, int n, int k, AbelMode mode) {
  if (k < 1 || k >= n) throw DomainError("abel_pair: need 1 <= k < n");
  const int m = n - k;
  if (g.is_zero()) return RadialProfile::zero(mode == AbelMode::psi ? n : m);
  if (mode == AbelMode::h) {
    const auto probe = kplane_radial_checked(g, k, 0.0);
    if (!probe.converged)
      throw DivergenceError("abel_pair(h): int_0^inf |g(r)| r^{k-1} dr diverges (finiteness of the k-plane transform fails)");
    const double R = g.support_radius();
    std::vector<double> br;
    for (double b : g.breakpoints()) br.push_back(b);
    return RadialProfile::analytic(m, [g, k](double s) { return kplane_radial(g, k, s); }, "abel_h", R, br);
  }
  const double v = dual_radial(g, n, k, 1.0);
  if (!std::isfinite(v))
    throw DivergenceError("abel_pair(psi): int_0^r s^{n-k-1} g(s)(r^2-s^2)^{k/2-1} ds is not finite");
  const double c = c_kn(n, k);
  return RadialProfile::analytic(
      n,
      [g, n, k, c](double r) {
        if (r == 0.0) return g(0.0);
        QuadratureSpec q = QuadratureSpec::kernel();
        q.truncation_radius = std::isfinite(g.support_radius()) ? g.support_radius() : std::max(12.0, r);
        return c * std::pow(r, 2 - n) * abel_quadrature(g, r, n, k, q, g.breakpoints());
      },
      "abel_psi");
}

}  // namespace ridgelet
