#pragma once

// Reference values computed independently of the library: a different gamma
// approximation, plain Simpson quadrature, brute-force minimisation, and
// closed forms. None of these call into ridgelet numerics.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Lanczos approximation (g = 7, nine coefficients) with reflection.
inline double lanczos_gamma(double x) {
  static const double c[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059,   12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) return pi / (std::sin(pi * x) * lanczos_gamma(1.0 - x));
  x -= 1.0;
  double a = c[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += c[i] / (x + i);
  return std::sqrt(2.0 * pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

inline double sphere_area(int m) { return 2.0 * std::pow(pi, 0.5 * m) / lanczos_gamma(0.5 * m); }

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

namespace detail {
inline double adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
  const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson to absolute tolerance tol.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12, int depth = 40) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return detail::adaptive(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

/// Simpson on consecutive panels between the given break points.
inline double panels(const std::function<double(double)>& f, const std::vector<double>& pts, double tol = 1e-12) {
  double s = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) s += adaptive_simpson(f, pts[i - 1], pts[i], tol);
  return s;
}

/// Riemann-Liouville integral of r^mu: Gamma(mu+1)/Gamma(mu+1+alpha) t^{mu+alpha}.
inline double rl_monomial(double mu, double alpha, double t) {
  return lanczos_gamma(mu + 1.0) / lanczos_gamma(mu + 1.0 + alpha) * std::pow(t, mu + alpha);
}

/// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = cdf(xs[i]);
    d = std::max({d, F - i / n, (i + 1) / n - F});
  }
  return d;
}

/// inf over f1 of ||f1||_1 + ||f - f1||_p on a grid of equal cells, by cyclic
/// coordinate minimisation. Each f1_i lies between 0 and f_i, and the objective
/// is convex, so golden-section search per coordinate is sound.
inline double sum_space_bruteforce(const std::vector<double>& f, double dv, double p, int sweeps = 400) {
  const std::size_t n = f.size();
  std::vector<double> f1(n, 0.0);
  auto objective = [&](const std::vector<double>& g) {
    double l1 = 0.0, lp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      l1 += std::abs(g[i]) * dv;
      lp += std::pow(std::abs(f[i] - g[i]), p) * dv;
    }
    return l1 + std::pow(lp, 1.0 / p);
  };
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int s = 0; s < sweeps; ++s)
    for (std::size_t i = 0; i < n; ++i) {
      double lo = std::min(0.0, f[i]), hi = std::max(0.0, f[i]);
      for (int it = 0; it < 100; ++it) {
        const double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
        f1[i] = a;
        const double fa = objective(f1);
        f1[i] = b;
        const double fb = objective(f1);
        (fa <= fb ? hi : lo) = (fa <= fb ? b : a);
      }
      f1[i] = 0.5 * (lo + hi);
    }
  // Also compare with the two trivial splits.
  std::vector<double> all = f;
  return std::min({objective(f1), objective(all), objective(std::vector<double>(n, 0.0))});
}

/// ||chi_E||_{L^{p,q}} = (p/q)^{1/q} |E|^{1/p}, and |E|^{1/p} for q = infinity.
inline double lorentz_indicator(double measure, double p, double q) {
  if (std::isinf(q)) return std::pow(measure, 1.0 / p);
  return std::pow(p / q, 1.0 / q) * std::pow(measure, 1.0 / p);
}

/// Radial Laplacian of a profile g on R^m by central differences.
inline double radial_laplacian_fd(const std::function<double(double)>& g, int m, double r, double h = 1e-3) {
  const double d2 = (g(r + h) - 2.0 * g(r) + g(r - h)) / (h * h);
  const double d1 = (g(r + h) - g(r - h)) / (2.0 * h);
  return d2 + (m - 1) / r * d1;
}

/// (f * K)(x) in R^2 for f given on the plane and K radial, by polar quadrature
/// around x: int_0^R int_0^{2pi} f(x - r e_theta) K(r) r dtheta dr.
inline double convolution_2d(const std::function<double(double, double)>& f, const std::function<double(double)>& K, double x0,
                             double x1, const std::vector<double>& radial_breaks, int angles = 256) {
  auto ring = [&](double r) {
    if (r == 0.0) return 0.0;
    double s = 0.0;
    for (int j = 0; j < angles; ++j) {
      const double th = 2.0 * pi * (j + 0.5) / angles;
      s += f(x0 - r * std::cos(th), x1 - r * std::sin(th));
    }
    return s * (2.0 * pi / angles) * K(r) * r;
  };
  return panels(ring, radial_breaks, 1e-10);
}

/// k-plane transform of exp(-b|x|^2): (pi/b)^{k/2} exp(-b s^2).
inline double gaussian_kplane(double b, int k, double s) { return std::pow(pi / b, 0.5 * k) * std::exp(-b * s * s); }

/// Volume of the unit ball in R^m.
inline double ball_volume(int m) { return sphere_area(m) / m; }

}  // namespace oracle
