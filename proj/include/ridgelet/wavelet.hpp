#pragma once

// Radial wavelet profiles: polynomial-times-Gaussian closed forms, tabulated
// profiles, convolution, moments and admissibility.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ridgelet/errors.hpp"
#include "ridgelet/quadrature.hpp"
#include "ridgelet/sampled.hpp"
#include "ridgelet/special.hpp"

namespace ridgelet {

/// P(r^2) exp(-a r^2) in ambient dimension m; coeffs[i] multiplies s^i with s = r^2.
struct GaussianPolyProfile {
  std::vector<double> coeffs;
  double a = 1.0;
  int m = 1;

  double poly(double s) const {
    double p = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) p = p * s + *it;
    return p;
  }
  double operator()(double r) const {
    const double s = r * r;
    return poly(s) * std::exp(-a * s);
  }
  bool is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; });
  }

  /// int_0^inf r^{q-1} P(r^2) e^{-a r^2} dr, each monomial in closed form.
  double radial_integral(double q) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i] == 0.0) continue;
      const double h = 0.5 * (q + 2.0 * static_cast<double>(i));
      acc += coeffs[i] * gamma_fn(h) / (2.0 * std::pow(a, h));
    }
    return acc;
  }

  /// Radius beyond which |profile| stays below 1e-17 of its peak.
  double support_radius() const {
    if (is_zero()) return 0.0;
    double peak = 0.0, last = 0.0;
    const double rmax = std::sqrt(800.0 / a);
    const int steps = 8000;
    std::vector<double> vals(steps + 1);
    for (int i = 0; i <= steps; ++i) {
      vals[i] = std::abs((*this)(rmax * i / steps));
      peak = std::max(peak, vals[i]);
    }
    for (int i = steps; i >= 0; --i)
      if (vals[i] > 1e-17 * peak) {
        last = rmax * (i + 1) / steps;
        break;
      }
    return std::min(rmax, last);
  }

  /// Radii where the profile changes sign (roots of P at positive s).
  std::vector<double> sign_changes() const {
    std::vector<double> out;
    if (coeffs.size() < 2) return out;
    const double R = support_radius();
    const int steps = 4000;
    double prev_r = 0.0, prev = poly(0.0);
    for (int i = 1; i <= steps; ++i) {
      const double r = R * i / steps;
      const double cur = poly(r * r);
      if ((prev < 0 && cur > 0) || (prev > 0 && cur < 0)) {
        double lo = prev_r, hi = r;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double pm = poly(mid * mid);
          if ((pm < 0) == (prev < 0)) lo = mid; else hi = mid;
        }
        out.push_back(0.5 * (lo + hi));
      }
      prev_r = r;
      prev = cur;
    }
    return out;
  }
};

/// A radial profile given by an arbitrary callable.
struct AnalyticProfile {
  std::function<double(double)> f;
  std::string name;
  double support = std::numeric_limits<double>::infinity();
  std::vector<double> breaks;
  double operator()(double r) const { return f(r); }
};

/// Radial function on [0, inf) tagged with its ambient dimension.
class RadialProfile {
 public:
  using Rep = std::variant<GaussianPolyProfile, SampledFunction1D, AnalyticProfile>;

  RadialProfile() : rep_(GaussianPolyProfile{}), dim_(1) {}
  RadialProfile(GaussianPolyProfile g) : rep_(std::move(g)) { dim_ = std::get<GaussianPolyProfile>(rep_).m; }
  RadialProfile(SampledFunction1D s, int dim) : rep_(std::move(s)), dim_(dim) {}
  RadialProfile(AnalyticProfile a, int dim) : rep_(std::move(a)), dim_(dim) {}

  static RadialProfile zero(int m) { return RadialProfile(GaussianPolyProfile{{}, 1.0, m}); }
  static RadialProfile gaussian(int m, double a = 1.0, double amplitude = 1.0) {
    return RadialProfile(GaussianPolyProfile{{amplitude}, a, m});
  }
  static RadialProfile analytic(int m, std::function<double(double)> f, std::string name,
                                double support = std::numeric_limits<double>::infinity(), std::vector<double> breaks = {}) {
    return RadialProfile(AnalyticProfile{std::move(f), std::move(name), support, std::move(breaks)}, m);
  }

  double operator()(double r) const {
    return std::visit([r](const auto& p) { return static_cast<double>(p(r)); }, rep_);
  }

  int dim() const { return dim_; }
  const Rep& rep() const { return rep_; }
  const GaussianPolyProfile* gaussian_poly() const { return std::get_if<GaussianPolyProfile>(&rep_); }
  const SampledFunction1D* tabulated() const { return std::get_if<SampledFunction1D>(&rep_); }
  const AnalyticProfile* analytic_rep() const { return std::get_if<AnalyticProfile>(&rep_); }

  bool is_zero() const {
    if (auto g = gaussian_poly()) return g->is_zero();
    if (auto t = tabulated()) {
      const auto& v = t->values();
      return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
    }
    return false;
  }

  /// Radius beyond which the profile is negligible; infinity when unknown.
  double support_radius() const {
    if (auto g = gaussian_poly()) return g->support_radius();
    if (auto t = tabulated())
      return t->right().kind == Extrapolation::Kind::zero ? t->abscissae().back() : std::numeric_limits<double>::infinity();
    return analytic_rep()->support;
  }

  /// Points where the profile (or its absolute value) is not smooth.
  std::vector<double> breakpoints() const {
    if (auto g = gaussian_poly()) return g->sign_changes();
    if (auto a = analytic_rep()) return a->breaks;
    return {};
  }

  std::string kind() const {
    if (gaussian_poly()) return "gaussian_poly";
    if (tabulated()) return "tabulated";
    return "analytic";
  }

 private:
  Rep rep_;
  int dim_ = 1;
};

/// Laplacian power Delta^N exp(-a|y|^2) in R^m as P(s) e^{-a s}.
inline GaussianPolyProfile laplacian_gaussian(int N, int m, double a) {
  if (N < 0) throw DomainError("laplacian_gaussian: N must be nonnegative");
  if (m < 1) throw DomainError("laplacian_gaussian: m must be positive");
  if (!(a > 0)) throw DomainError("laplacian_gaussian: scale must be positive");
  std::vector<double> P{1.0};
  for (int it = 0; it < N; ++it) {
    const std::size_t d = P.size();
    std::vector<double> dP(d, 0.0), d2P(d, 0.0), out(d + 1, 0.0);
    for (std::size_t i = 1; i < d; ++i) dP[i - 1] = static_cast<double>(i) * P[i];
    for (std::size_t i = 2; i < d; ++i) d2P[i - 2] = static_cast<double>(i * (i - 1)) * P[i];
    // 4s(P'' - 2aP' + a^2 P) + 2m(P' - aP)
    for (std::size_t i = 0; i < d; ++i) {
      const double inner = d2P[i] - 2.0 * a * dP[i] + a * a * P[i];
      out[i + 1] += 4.0 * inner;
      out[i] += 2.0 * m * (dP[i] - a * P[i]);
    }
    while (out.size() > 1 && out.back() == 0.0) out.pop_back();
    P = std::move(out);
  }
  return {P, a, m};
}

/// If g = c * Delta^N exp(-a r^2) (same m, a) returns (N, c).
inline std::optional<std::pair<int, double>> as_laplacian_power(const GaussianPolyProfile& g) {
  if (g.is_zero()) return std::nullopt;
  const int N = static_cast<int>(g.coeffs.size()) - 1;
  const GaussianPolyProfile L = laplacian_gaussian(N, g.m, g.a);
  if (L.coeffs.size() != g.coeffs.size()) return std::nullopt;
  const double c = g.coeffs.back() / L.coeffs.back();
  double scale = 0.0;
  for (double v : g.coeffs) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < g.coeffs.size(); ++i)
    if (std::abs(g.coeffs[i] - c * L.coeffs[i]) > 1e-12 * scale) return std::nullopt;
  return std::make_pair(N, c);
}

namespace detail {

/// Integral of r^{q-1} f(r) over [0, inf) for a profile, honouring its support,
/// breakpoints and tabulated power-law tail.
template <class F>
double profile_radial_integral(const RadialProfile& w, double q, F&& f, double lower = 0.0) {
  const double R = w.support_radius();
  auto g = [&](double r) { return r == 0.0 && q < 1.0 ? 0.0 : std::pow(r, q - 1.0) * f(r); };
  if (std::isfinite(R)) {
    if (R <= lower) return 0.0;
    std::vector<double> pts{lower};
    for (double b : w.breakpoints())
      if (b > lower && b < R) pts.push_back(b);
    if (lower < 1.0 && R > 1.0) pts.push_back(1.0);
    pts.push_back(R);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      acc += (pts[i] == 0.0 && q < 1.0) ? quad::tanh_sinh(g, pts[i], pts[i + 1], 1e-12) : quad::gk(g, pts[i], pts[i + 1], 1e-12);
    return acc;
  }
  if (auto t = w.tabulated()) {
    const double X = t->abscissae().back();
    double acc = X > lower ? profile_radial_integral(RadialProfile(SampledFunction1D(t->abscissae(), t->values(), t->left(),
                                                                                    Extrapolation::zero()),
                                                                  w.dim()),
                                                     q, f, lower)
                           : 0.0;
    const double e = t->right().exponent;
    if (e + q >= 0.0) throw DivergenceError("profile integral: power-law tail r^" + std::to_string(e) + " not integrable");
    const double a = std::max(X, lower);
    // Tail: f is applied to the extrapolated values; only the sign matters for |.|.
    const double yX = f(a);
    acc += yX * std::pow(a, q) / (-(e + q));
    return acc;
  }
  auto res = quad::integrate_to_infinity(g, lower, std::max(lower + 1.0, 1.0), 1e-12, 1e-300, 200, 1e-12);
  if (!res.converged) throw DivergenceError("profile integral: tail does not settle");
  return res.value;
}

}  // namespace detail

/// sigma_{m-1} int_0^inf r^{j+m-1} w(r) dr, or with |w| when signed_moment is false.
inline double moment(const RadialProfile& w, double j, bool signed_moment = true) {
  if (j < 0) throw DomainError("moment: order must be nonnegative");
  const int m = w.dim();
  if (w.is_zero()) return 0.0;
  if (signed_moment)
    if (auto g = w.gaussian_poly()) return sphere_area(m) * g->radial_integral(j + m);
  if (signed_moment) return sphere_area(m) * detail::profile_radial_integral(w, j + m, [&](double r) { return w(r); });
  return sphere_area(m) * detail::profile_radial_integral(w, j + m, [&](double r) { return std::abs(w(r)); });
}

/// Radial convolution u*v in R^m.
inline RadialProfile radial_convolve(const RadialProfile& u, const RadialProfile& v, int m) {
  if (u.dim() != m || v.dim() != m) throw DomainError("radial_convolve: profile dimension mismatch");
  if (u.is_zero() || v.is_zero()) return RadialProfile::zero(m);
  const double iu = moment(u, 0, false), iv = moment(v, 0, false);
  if (!std::isfinite(iu) || !std::isfinite(iv)) throw PreconditionError("radial_convolve: factor not integrable");

  const auto* gu = u.gaussian_poly();
  const auto* gv = v.gaussian_poly();
  if (gu && gv && gu->a == gv->a) {
    const auto lu = as_laplacian_power(*gu), lv = as_laplacian_power(*gv);
    if (lu && lv) {
      const double a = gu->a;
      GaussianPolyProfile out = laplacian_gaussian(lu->first + lv->first, m, 0.5 * a);
      const double c = lu->second * lv->second * std::pow(std::numbers::pi / (2.0 * a), 0.5 * m);
      for (double& x : out.coeffs) x *= c;
      return RadialProfile(out);
    }
  }

  // Bipolar coordinates: y = rho * omega, |x - y|^2 = r^2 + rho^2 - 2 r rho cos(phi).
  const double Ru = std::min(u.support_radius(), 60.0);
  const double Rv = std::min(v.support_radius(), 60.0);
  const double Rtab = std::min(Ru + Rv, 60.0);
  const int nodes = 601;
  std::vector<double> rs(nodes), vals(nodes);
  auto ubreaks = u.breakpoints();
  for (int i = 0; i < nodes; ++i) {
    const double r = Rtab * i / (nodes - 1);
    rs[i] = r;
    auto radial = [&](double rho) -> double {
      if (m == 1) return u(rho) * (v(std::abs(r - rho)) + v(r + rho));
      auto ang = [&](double phi) {
        const double d2 = std::max(0.0, r * r + rho * rho - 2.0 * r * rho * std::cos(phi));
        return v(std::sqrt(d2)) * (m == 2 ? 1.0 : std::pow(std::sin(phi), m - 2));
      };
      const double inner = r == 0.0 || rho == 0.0 ? v(std::max(r, rho)) * (m == 2 ? std::numbers::pi : std::sqrt(std::numbers::pi) * gamma_fn(0.5 * (m - 1)) / gamma_fn(0.5 * m))
                                                   : quad::gk(ang, 0.0, std::numbers::pi, 1e-12, 15);
      return u(rho) * std::pow(rho, m - 1) * inner;
    };
    std::vector<double> pts{0.0};
    for (double b : ubreaks)
      if (b < Ru) pts.push_back(b);
    if (r > 0 && r < Ru) pts.push_back(r);
    pts.push_back(Ru);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double pref = m == 1 ? 1.0 : sphere_area(m - 1);
    vals[i] = pref * quad::gk_panels(radial, pts, 1e-12, 15);
  }
  // u*v is even in r; mirrored nodes spare the spline a one-sided end condition at 0.
  std::vector<double> xr, yr;
  for (int i = 3; i >= 1; --i) {
    xr.push_back(-rs[static_cast<std::size_t>(i)]);
    yr.push_back(vals[static_cast<std::size_t>(i)]);
  }
  xr.insert(xr.end(), rs.begin(), rs.end());
  yr.insert(yr.end(), vals.begin(), vals.end());
  return RadialProfile(SampledFunction1D(xr, yr, Extrapolation::power_law(0.0), Extrapolation::zero(), Interpolation::uniform_spline), m);
}

struct AdmissibilityReport {
  int n = 0, k = 0;
  double beta = 0.0;
  std::map<int, double> signed_moments;
  std::map<int, double> abs_moments;
  double decay_integral = 0.0;
  double local_integral = 0.0;
  double i0 = 0.0;
  double moment_tol = 1e-9;
  bool degenerate = false;
  bool passed = false;
};

/// Moment, decay and local-integrability checks for w on R^{n-k}.
inline AdmissibilityReport check_admissibility(const RadialProfile& w, int n, int k, std::optional<double> beta = std::nullopt,
                                               double moment_tol = 1e-9) {
  if (k < 1 || k >= n) throw DomainError("check_admissibility: need 1 <= k < n");
  const int m = n - k;
  if (w.dim() != m) throw DomainError("check_admissibility: profile dimension must equal n - k");
  AdmissibilityReport rep;
  rep.n = n;
  rep.k = k;
  rep.beta = beta.value_or(k + 1.0);
  if (!(rep.beta > k)) throw DomainError("check_admissibility: beta must exceed k");
  rep.moment_tol = moment_tol;
  rep.degenerate = w.is_zero();
  bool finite = true;
  try {
    rep.local_integral = w.is_zero() ? 0.0 : quad::gk([&](double r) { return std::pow(r, m - 1) * std::abs(w(r)); }, 0.0, 1.0, 1e-12);
    rep.decay_integral =
        w.is_zero() ? 0.0
                    : sphere_area(m) * detail::profile_radial_integral(w, rep.beta + m, [&](double r) { return std::abs(w(r)); }, 1.0);
    rep.i0 = moment(w, 0, false);
  } catch (const DivergenceError&) {
    finite = false;
    rep.decay_integral = std::numeric_limits<double>::infinity();
  }
  bool moments_ok = true;
  for (int j = 0; j <= 2 * (k / 2); j += 2) {
    try {
      rep.signed_moments[j] = moment(w, j, true);
      rep.abs_moments[j] = moment(w, j, false);
    } catch (const DivergenceError&) {
      rep.signed_moments[j] = std::numeric_limits<double>::infinity();
      finite = false;
    }
    if (!(std::abs(rep.signed_moments[j]) <= moment_tol)) moments_ok = false;
  }
  finite = finite && std::isfinite(rep.decay_integral) && std::isfinite(rep.local_integral);
  rep.passed = moments_ok && finite;
  return rep;
}

/// Wavelet construction parameters. The "example" family is
/// w = Delta^{N1} e^{-a|y|^2} * Delta^{N2} e^{-a|y|^2} on R^m.
struct WaveletSpec {
  std::string kind = "example";
  int N1 = 0, N2 = 1;
  double scale = 1.0;
  int m = 1;
  std::optional<GaussianPolyProfile> profile;
};

struct WaveletParts {
  RadialProfile u, v, w;
};

inline WaveletParts build_wavelet(const WaveletSpec& spec) {
  if (spec.kind == "example") {
    RadialProfile u(laplacian_gaussian(spec.N1, spec.m, spec.scale));
    RadialProfile v(laplacian_gaussian(spec.N2, spec.m, spec.scale));
    return {u, v, radial_convolve(u, v, spec.m)};
  }
  if (spec.kind == "gaussian_poly" && spec.profile) {
    RadialProfile w(*spec.profile);
    return {w, RadialProfile::zero(w.dim()), w};
  }
  throw DomainError("build_wavelet: unknown wavelet kind '" + spec.kind + "'");
}

/// Smallest admissible Laplacian power for the example family: N1 + N2 = [k/2] + 1.
inline WaveletSpec example_wavelet(int n, int k) {
  WaveletSpec s;
  s.m = n - k;
  s.N1 = 0;
  s.N2 = k / 2 + 1;
  return s;
}

}  // namespace ridgelet
