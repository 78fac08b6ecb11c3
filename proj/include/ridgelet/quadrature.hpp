#pragma once

// Thin wrappers over Boost.Math quadrature used throughout the library.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "ridgelet/errors.hpp"

namespace ridgelet::quad {

namespace detail {

template <class F>
double gk_recurse(F& f, double a, double b, double abs_tol, unsigned depth, double* err_acc) {
  double err = 0.0, l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err, &l1);
  if (err <= abs_tol || depth == 0 || !(err == err)) {
    *err_acc += err;
    return v;
  }
  const double mid = 0.5 * (a + b);
  return gk_recurse(f, a, mid, 0.5 * abs_tol, depth - 1, err_acc) + gk_recurse(f, mid, b, 0.5 * abs_tol, depth - 1, err_acc);
}

template <class F>
double gk_l1_estimate(F& f, double a, double b) {
  double err = 0.0, l1 = 0.0;
  boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err, &l1);
  return l1;
}

}  // namespace detail

/// Adaptive 31-point Gauss-Kronrod on [a,b] with a global error target
/// rel_tol * (L1 estimate) + abs_tol. Bisection stops once a piece meets its
/// share of that target, so round-off noise in the integrand cannot trigger
/// runaway refinement.
template <class F>
double gk(F&& f, double a, double b, double rel_tol = 1e-10, unsigned max_depth = 15, double* err = nullptr,
          double abs_tol = 0.0) {
  if (a == b) {
    if (err) *err = 0.0;
    return 0.0;
  }
  const double l1 = detail::gk_l1_estimate(f, a, b);
  double e = 0.0;
  const double v = detail::gk_recurse(f, a, b, rel_tol * l1 + abs_tol, max_depth, &e);
  if (err) *err = e;
  return v;
}

/// Adaptive Gauss-Kronrod over consecutive panels [p_i, p_{i+1}] sharing one
/// global error target.
template <class F>
double gk_panels(F&& f, const std::vector<double>& pts, double rel_tol = 1e-10, unsigned max_depth = 15, double abs_tol = 0.0) {
  if (pts.size() < 2) return 0.0;
  double l1 = 0.0;
  std::vector<double> l1s(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) l1 += l1s[i] = detail::gk_l1_estimate(f, pts[i], pts[i + 1]);
  const double target = rel_tol * l1 + abs_tol;
  const double len = pts.back() - pts.front();
  double s = 0.0, e = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    // Split the target between panel length and panel mass so that both
    // narrow features and long flat tails get a fair share.
    const double share = 0.5 * target * ((pts[i + 1] - pts[i]) / len + (l1 > 0 ? l1s[i] / l1 : 0.0));
    s += detail::gk_recurse(f, pts[i], pts[i + 1], share, max_depth, &e);
  }
  return s;
}

/// Fixed Gauss-Legendre rule with N nodes on [a,b].
template <unsigned N, class F>
double gauss(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, N>::integrate(f, a, b);
}

inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_instance() {
  // Abscissa tables are expensive to build, so every thread keeps one.
  thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
  return ts;
}

/// Double-exponential rule; tolerant of integrable endpoint singularities.
/// f may take (x) or (x, xc) where xc is the signed distance to the nearer endpoint.
template <class F>
double tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-10, double* err = nullptr, double* l1 = nullptr) {
  if (a == b) {
    if (err) *err = 0.0;
    if (l1) *l1 = 0.0;
    return 0.0;
  }
  return tanh_sinh_instance().integrate(f, a, b, rel_tol, err, l1);
}

struct TailResult {
  double value = 0.0;
  bool converged = false;
  int doublings = 0;
  double last_increment = 0.0;
  double radius = 0.0;
};

/// Integrates f over [a, inf) in chunks [R, 2R] starting from R = start.
/// Converged once two consecutive increments satisfy |d| <= rel_tol |I| + abs_tol.
/// Reported as not converged when the doubling budget runs out first.
template <class F>
TailResult integrate_to_infinity(F&& f, double a, double start, double rel_tol, double abs_tol, int max_doublings = 300,
                                 double chunk_rel_tol = 1e-11) {
  if (!(start > a)) throw DomainError("integrate_to_infinity: start must exceed the lower limit");
  TailResult res;
  res.value = gk(f, a, start, chunk_rel_tol);
  double R = start;
  int consecutive_small = 0;
  for (int i = 0; i < max_doublings; ++i) {
    const double d = gk(f, R, 2.0 * R, chunk_rel_tol);
    res.value += d;
    R *= 2.0;
    res.doublings = i + 1;
    res.last_increment = d;
    if (std::abs(d) <= rel_tol * std::abs(res.value) + abs_tol) {
      if (++consecutive_small >= 2) {
        res.converged = true;
        res.radius = R;
        return res;
      }
    } else {
      consecutive_small = 0;
    }
  }
  res.radius = R;
  return res;
}

}  // namespace ridgelet::quad
