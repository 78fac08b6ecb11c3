#pragma once

// The kernel chain psi, w~, lambda, psi~ built from an admissible w, and the
// reconstruction constant by three routes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ridgelet/errors.hpp"
#include "ridgelet/fractional.hpp"
#include "ridgelet/quadrature.hpp"
#include "ridgelet/sampled.hpp"
#include "ridgelet/special.hpp"
#include "ridgelet/wavelet.hpp"

namespace ridgelet {

struct KernelOptions {
  double r_min = 1e-4;
  double r_max = 50.0;
  std::size_t table_points = 1200;
  QuadratureSpec quad = QuadratureSpec::kernel();
};

/// Direct evaluation of psi(r) = c_kn r^{2-n} int_0^r s^{n-k-1} w(s) (r^2-s^2)^{k/2-1} ds.
struct PsiEvaluator {
  RadialProfile w;
  int n = 2, k = 1;
  double ckn = 1.0;
  QuadratureSpec q = QuadratureSpec::kernel();
  bool admissible = true;

  double operator()(double r) const {
    if (w.is_zero()) return 0.0;
    if (r == 0.0) return w(0.0);
    QuadratureSpec qq = q;
    qq.truncation_radius = w.support_radius();
    // For even k psi is a combination of moments of w once r passes the support,
    // and those moments vanish for admissible w.
    if (k % 2 == 0 && r >= qq.truncation_radius && admissible) return 0.0;
    return ckn * std::pow(r, 2 - n) * abel_quadrature(w, r, n, k, qq, w.breakpoints());
  }
};

struct PsiKernel {
  RadialProfile profile;  // tabulated psi, ambient dimension n
  int n = 2, k = 1;
  double c_kn = 1.0;
  PsiEvaluator exact;
  double tail_exponent = -std::numeric_limits<double>::infinity();

  double operator()(double r) const { return profile(r); }
};

namespace detail {

inline double fitted_tail_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  // Fit on the last decade of the table.
  const double xe = x.back();
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] >= xe / 10.0) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
    }
  auto s = loglog_slope(xs, ys);
  return s ? *s : 0.0;
}

}  // namespace detail

/// Tabulates psi on a log grid; requires w to pass the admissibility check.
inline PsiKernel psi_from_w(const RadialProfile& w, int n, int k, const KernelOptions& opt = {}) {
  if (k < 1 || k >= n) throw DomainError("psi_from_w: need 1 <= k < n");
  PsiKernel K;
  K.n = n;
  K.k = k;
  K.c_kn = c_kn(n, k);
  K.exact = PsiEvaluator{w, n, k, K.c_kn, opt.quad, true};
  if (w.is_zero()) {
    K.profile = RadialProfile::zero(n);
    return K;
  }
  if (!check_admissibility(w, n, k).passed) throw PreconditionError("psi_from_w: wavelet is not admissible");
  auto rs = log_grid(opt.r_min, opt.r_max, opt.table_points);
  std::vector<double> vals(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) vals[i] = K.exact(rs[i]);
  Extrapolation right = Extrapolation::zero();
  if (k % 2 == 1) {
    K.tail_exponent = detail::fitted_tail_exponent(rs, vals);
    right = Extrapolation::power_law(K.tail_exponent);
  }
  K.profile = RadialProfile(SampledFunction1D(rs, vals, Extrapolation::power_law(0.0), right), n);
  return K;
}

/// w~(s) = s^{(n-k)/2 - 1} w(sqrt(s)).
struct TildeWEvaluator {
  RadialProfile w;
  int m = 1;
  double operator()(double s) const {
    if (s <= 0.0) return 0.0;
    return std::pow(s, 0.5 * m - 1.0) * w(std::sqrt(s));
  }
};

inline SampledFunction1D tilde_w(const RadialProfile& w, int n, int k, std::size_t points = 2000) {
  if (k < 1 || k >= n) throw DomainError("tilde_w: need 1 <= k < n");
  const int m = n - k;
  TildeWEvaluator ev{w, m};
  const double R = std::isfinite(w.support_radius()) ? std::max(w.support_radius(), 1.0) : 60.0;
  auto ss = log_grid(1e-8, R * R, points);
  std::vector<double> vals(ss.size());
  for (std::size_t i = 0; i < ss.size(); ++i) vals[i] = ev(ss[i]);
  return SampledFunction1D(ss, vals, Extrapolation::power_law(0.5 * m - 1.0), Extrapolation::zero());
}

/// lambda(s) = I^{k/2+1}[w~](s^2) / s for any callable w~ whose support is [0, support].
template <class WT>
double lambda_value(const WT& wt, int k, double s, double support) {
  if (!(s > 0)) throw DomainError("lambda_value: s must be positive");
  QuadratureSpec q = QuadratureSpec::kernel();
  q.truncation_radius = support;
  return rl_fractional_integral(wt, 0.5 * k + 1.0, s * s, q) / s;
}

/// Direct evaluation of lambda(s) from the closed-form profile of w.
///
/// Once s^2 is well past the support of w~ the kernel (s^2 - r)^{k/2} is
/// expanded binomially, giving lambda as a series in the moments
/// M_j = int r^j w~(r) dr. The moments killed by admissibility are set to
/// exactly zero there, which removes the catastrophic cancellation that direct
/// quadrature suffers at large s.
struct LambdaEvaluator {
  TildeWEvaluator wt;
  int k = 1;
  double support = 1.0;
  std::vector<double> moments;  // M_0 .. M_J, low orders zeroed

  double operator()(double s) const {
    if (wt.w.is_zero()) return 0.0;
    if (s == 0.0) return 0.0;
    const double T = s * s;
    if (k % 2 == 0 && T >= support) return 0.0;
    if (!moments.empty() && T >= 4.0 * support) {
      const double a1 = 0.5 * k;  // alpha - 1
      double b = 1.0, acc = 0.0;
      for (std::size_t j = 0; j < moments.size(); ++j) {
        const double term = b * std::pow(T, a1 - static_cast<double>(j)) * moments[j];
        acc += (j % 2 == 0 ? term : -term);
        b *= (a1 - static_cast<double>(j)) / static_cast<double>(j + 1);
      }
      return acc / (gamma_fn(a1 + 1.0) * s);
    }
    return lambda_value(wt, k, s, support);
  }
};

inline LambdaEvaluator make_lambda_evaluator(const RadialProfile& w, int n, int k, bool admissible = true) {
  const double R = std::isfinite(w.support_radius()) ? w.support_radius() : 60.0;
  LambdaEvaluator ev{TildeWEvaluator{w, n - k}, k, R * R, {}};
  if (!w.is_zero() && std::isfinite(w.support_radius())) {
    const int m = n - k;
    const int J = 40;
    ev.moments.resize(J + 1);
    for (int j = 0; j <= J; ++j) {
      // M_j = 2 int_0^inf x^{2j+m-1} w(x) dx
      if (admissible && j <= k / 2) {
        ev.moments[j] = 0.0;
      } else if (auto g = w.gaussian_poly()) {
        ev.moments[j] = 2.0 * g->radial_integral(2.0 * j + m);
      } else {
        ev.moments[j] = 2.0 * detail::profile_radial_integral(w, 2.0 * j + m, [&](double x) { return w(x); });
      }
    }
  }
  return ev;
}

/// Tabulated lambda from a tabulated w~. Near 0 lambda ~ s^{n-1}; for even k it
/// vanishes beyond the support, for odd k it decays like a fitted power.
inline SampledFunction1D lambda_profile(const SampledFunction1D& wt, int k, int n = 0, double s_max = 0.0,
                                        std::size_t points = 800) {
  const bool zero = std::all_of(wt.values().begin(), wt.values().end(), [](double v) { return v == 0.0; });
  const double support = wt.abscissae().back();
  const double smax = s_max > 0 ? s_max : (k % 2 == 0 ? std::sqrt(support) : 400.0);
  auto ss = log_grid(1e-3, smax, points);
  std::vector<double> vals(ss.size(), 0.0);
  if (!zero)
    for (std::size_t i = 0; i < ss.size(); ++i) vals[i] = lambda_value(wt, k, ss[i], support);
  Extrapolation right = Extrapolation::zero();
  if (k % 2 == 1 && !zero) right = Extrapolation::power_law(detail::fitted_tail_exponent(ss, vals));
  return SampledFunction1D(ss, vals, Extrapolation::power_law(n > 0 ? n - 1.0 : 0.0), right);
}

struct TildePsi {
  SampledFunction1D lambda;
  std::function<double(double)> lambda_exact;
  double c1 = 0.0;
  int n = 2, k = 1;
  SampledFunction1D table;  // psi~ on a log grid
  double max_route_gap = 0.0;

  double operator()(double r) const { return table(r); }
  double exact(double r) const {
    if (r == 0.0) return table(0.0);
    return c1 * std::pow(r, 1 - n) * lambda_exact(r);
  }
  /// psi~_eps(x) = eps^{-n} psi~(x/eps).
  double scaled(double r, double eps) const { return std::pow(eps, -n) * (*this)(r / eps); }
};

/// Route I for psi~: |x|^{-n} int_0^{|x|} psi(u) u^{n-1} du.
inline double tilde_psi_route_one(const PsiKernel& psi, double r) {
  if (!(r > 0)) throw DomainError("tilde_psi_route_one: r must be positive");
  const int n = psi.n;
  auto f = [&](double u) { return psi.exact(u) * std::pow(u, n - 1); };
  std::vector<double> pts{0.0};
  for (double b : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0})
    if (b < r) pts.push_back(b);
  pts.push_back(r);
  return std::pow(r, -n) * quad::gk_panels(f, pts, 1e-12, 15);
}

/// Builds psi~ = c1 |x|^{1-n} lambda(|x|) and checks it against route I on [0.1, 5].
inline TildePsi tilde_psi(const PsiKernel& psi, const SampledFunction1D& lam, std::size_t points = 1000) {
  TildePsi T;
  T.n = psi.n;
  T.k = psi.k;
  T.c1 = std::pow(std::numbers::pi, 0.5 * psi.k) * sphere_area(psi.n - psi.k) / (2.0 * sphere_area(psi.n));
  T.lambda = lam;
  const auto& w = psi.exact.w;
  if (w.is_zero()) {
    T.lambda_exact = [](double) { return 0.0; };
  } else {
    T.lambda_exact = make_lambda_evaluator(w, psi.n, psi.k);
  }
  const int n = psi.n;
  auto rs = log_grid(1e-3, std::max(50.0, lam.abscissae().back()), points);
  std::vector<double> vals(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) vals[i] = T.c1 * std::pow(rs[i], 1 - n) * T.lambda_exact(rs[i]);
  Extrapolation right = Extrapolation::zero();
  if (psi.k % 2 == 1 && !w.is_zero()) right = Extrapolation::power_law(detail::fitted_tail_exponent(rs, vals));
  T.table = SampledFunction1D(rs, vals, Extrapolation::power_law(0.0), right);

  if (!w.is_zero()) {
    auto probe = log_grid(0.1, 5.0, 25);
    double scale = 0.0, gap = 0.0;
    std::vector<double> two(probe.size()), one(probe.size());
    for (std::size_t i = 0; i < probe.size(); ++i) {
      two[i] = T.exact(probe[i]);
      one[i] = tilde_psi_route_one(psi, probe[i]);
      scale = std::max(scale, std::abs(two[i]));
    }
    for (std::size_t i = 0; i < probe.size(); ++i) gap = std::max(gap, std::abs(two[i] - one[i]));
    T.max_route_gap = scale > 0 ? gap / scale : gap;
    if (T.max_route_gap > 1e-5) throw ConsistencyError("tilde_psi: route I and route II disagree (" + std::to_string(T.max_route_gap) + ")");
  }
  return T;
}

struct ConstantRoutes {
  double c_routeA = 0.0, c_routeB = 0.0, c_routeC = 0.0;
  double relative_gap = 0.0;
  std::string branch;  // "gamma" for odd k, "log-moment" for even k
  double lambda_tail = 0.0;
  double lambda_tail_exponent = 0.0;
  bool degenerate = false;
};

namespace detail {

/// int_0^S f plus a power-law tail fitted on the last decade (if nonzero).
template <class F>
double integral_with_fitted_tail(const F& f, const std::vector<double>& panels, double* tail_out = nullptr,
                                 double* exponent_out = nullptr, double rel_tol = 1e-11) {
  double acc = quad::gk_panels(f, panels, rel_tol, 15);
  const double S = panels.back();
  auto xs = log_grid(S / 10.0, S, 9);
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = f(xs[i]);
  double tail = 0.0, p = 0.0;
  if (std::any_of(ys.begin(), ys.end(), [](double v) { return v != 0.0; })) {
    auto sl = loglog_slope(xs, ys);
    if (!sl || *sl >= -1.0) throw DivergenceError("tail of the integrand decays too slowly to close the integral");
    p = *sl;
    tail = -ys.back() * S / (p + 1.0);
  }
  if (tail_out) *tail_out = tail;
  if (exponent_out) *exponent_out = p;
  return acc + tail;
}

}  // namespace detail

/// Three routes for the reconstruction constant, without the consistency throw.
inline ConstantRoutes constant_routes(const RadialProfile& w, int n, int k) {
  if (k < 1 || k >= n) throw DomainError("recon_constant: need 1 <= k < n");
  const int m = n - k;
  ConstantRoutes out;
  out.branch = k % 2 ? "gamma" : "log-moment";
  if (w.is_zero()) {
    out.degenerate = true;
    return out;
  }
  if (!check_admissibility(w, n, k).passed) throw PreconditionError("recon_constant: wavelet is not admissible");
  const double pre = std::pow(std::numbers::pi, 0.5 * n) / gamma_fn(0.5 * m);
  const double Rw = w.support_radius();

  // Route A: integral of lambda.
  auto lam = make_lambda_evaluator(w, n, k);
  {
    std::vector<double> panels{0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 4.5, 6.0, 8.0, 10.0, 13.0, 17.0};
    if (k % 2 == 0) {
      // lambda vanishes identically once s^2 exceeds the support of w~.
      while (!panels.empty() && panels.back() >= Rw) panels.pop_back();
      panels.push_back(Rw);
      out.c_routeA = pre * quad::gk_panels(lam, panels, 1e-11, 15);
    } else {
      for (double p : {25.0, 40.0, 70.0, 120.0, 200.0, 400.0, 700.0, 1200.0, 2000.0, 4000.0}) panels.push_back(p);
      out.c_routeA = pre * detail::integral_with_fitted_tail(lam, panels, &out.lambda_tail, &out.lambda_tail_exponent);
      out.lambda_tail *= pre;
    }
  }

  // Route B: explicit moment formula.
  if (k % 2 == 1) {
    const double mom = detail::profile_radial_integral(w, n, [&](double r) { return w(r); });
    out.c_routeB = pre * gamma_fn(-0.5 * k) * mom;
  } else {
    const double lm = detail::profile_radial_integral(w, n, [&](double r) { return r > 0 ? w(r) * std::log(r) : 0.0; });
    const double sign = ((k / 2) % 2 == 1) ? 1.0 : -1.0;  // (-1)^{1+k/2}
    out.c_routeB = pre * 2.0 * sign / gamma_fn(0.5 * k + 1.0) * lm;
  }

  // Route C: integral of psi over R^n.
  {
    PsiEvaluator psi{w, n, k, c_kn(n, k), QuadratureSpec::kernel(), true};
    auto f = [&](double r) { return psi(r) * std::pow(r, n - 1); };
    std::vector<double> panels{0.0, 0.5, 1.0, 2.0, 3.0, 4.5, 6.0, 8.0, 10.0, 13.0, 17.0, 25.0, 40.0};
    double c = 0.0;
    if (k % 2 == 0) {
      while (!panels.empty() && panels.back() >= Rw) panels.pop_back();
      panels.push_back(Rw);
      c = quad::gk_panels(f, panels, 1e-11, 15);
    } else {
      // Beyond a few hundred units psi itself drowns in round-off, so the tail
      // is closed from the fitted power law instead.
      for (double p : {70.0, 120.0, 200.0}) panels.push_back(p);
      try {
        c = detail::integral_with_fitted_tail(f, panels);
      } catch (const DivergenceError&) {
        c = quad::gk_panels(f, panels, 1e-11, 15);
      }
    }
    out.c_routeC = sphere_area(n) * c;
  }
  out.relative_gap = out.c_routeB != 0.0 ? std::abs(out.c_routeA - out.c_routeB) / std::abs(out.c_routeB)
                                         : std::abs(out.c_routeA - out.c_routeB);
  return out;
}

/// Routes A, B, C; throws ConsistencyError when A and B differ by more than 1e-5 relative.
inline ConstantRoutes recon_constant(const RadialProfile& w, int n, int k) {
  ConstantRoutes c = constant_routes(w, n, k);
  if (c.relative_gap > 1e-5) throw ConsistencyError("recon_constant: routes A and B disagree, gap " + std::to_string(c.relative_gap));
  return c;
}

struct MajorantResult {
  bool is_majorizable = true;
  double majorant_l1 = 0.0;
};

/// Decreasing envelope e(r) = sup_{rho >= r} |f(rho)| of a tabulated radial
/// function on R^n, integrated including the extrapolated ends.
inline MajorantResult majorant_check(const SampledFunction1D& f, int n) {
  MajorantResult res;
  const auto& x = f.abscissae();
  const auto& y = f.values();
  if (x.empty()) return res;
  const std::size_t N = x.size();
  std::vector<double> env(N);
  double tail_sup = 0.0;
  const auto& R = f.right();
  if (R.kind == Extrapolation::Kind::power_law) {
    if (R.exponent > 0 && y.back() != 0.0) {
      res.is_majorizable = false;
      res.majorant_l1 = std::numeric_limits<double>::infinity();
      return res;
    }
    tail_sup = std::abs(y.back());
  }
  double run = tail_sup;
  for (std::size_t i = N; i-- > 0;) {
    run = std::max(run, std::abs(y[i]));
    env[i] = run;
  }
  const double sig = sphere_area(n);
  double integral = 0.0;
  // Log-trapezoid between nodes: int e r^{n-1} dr = int e r^n d(log r).
  for (std::size_t i = 0; i + 1 < N; ++i) {
    if (x[i] > 0) {
      const double du = std::log(x[i + 1] / x[i]);
      integral += 0.5 * du * (env[i] * std::pow(x[i], n) + env[i + 1] * std::pow(x[i + 1], n));
    } else {
      integral += 0.5 * (x[i + 1] - x[i]) * (env[i] * std::pow(x[i], n - 1) + env[i + 1] * std::pow(x[i + 1], n - 1));
    }
  }
  // Left end.
  const auto& L = f.left();
  double left_exp = 0.0;
  if (x.front() > 0 && y.front() != 0.0) {
    if (L.kind == Extrapolation::Kind::power_law) {
      left_exp = std::min(0.0, L.exponent);
      // The envelope near 0 is at least max(env[0], |f|), bounded by a power with exponent min(0, p).
      if (left_exp <= -n) {
        res.is_majorizable = false;
        res.majorant_l1 = std::numeric_limits<double>::infinity();
        return res;
      }
      integral += env[0] * std::pow(x.front(), n) / (left_exp + n);
    }
  } else if (x.front() > 0) {
    integral += env[0] * std::pow(x.front(), n) / n;
  }
  // Right end.
  if (R.kind == Extrapolation::Kind::power_law && y.back() != 0.0) {
    if (R.exponent + n >= 0) {
      res.is_majorizable = false;
      res.majorant_l1 = std::numeric_limits<double>::infinity();
      return res;
    }
    integral += std::abs(y.back()) * std::pow(x.back(), n) / (-(R.exponent + n));
  }
  res.majorant_l1 = sig * integral;
  res.is_majorizable = std::isfinite(res.majorant_l1);
  return res;
}

inline MajorantResult majorant_check(const PsiKernel& psi) {
  if (auto t = psi.profile.tabulated()) return majorant_check(*t, psi.n);
  return {true, 0.0};
}

inline MajorantResult majorant_check(const TildePsi& tp) { return majorant_check(tp.table, tp.n); }

}  // namespace ridgelet
