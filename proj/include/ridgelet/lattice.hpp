#pragma once

// Banach-lattice norms on grid functions treated as piecewise constant on cells.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "ridgelet/errors.hpp"
#include "ridgelet/grid.hpp"
#include "ridgelet/wavelet.hpp"

namespace ridgelet {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Variable exponent p(x). The log-decay form is
///   p(x) = p_inf + (p0 - p_inf) / log(e + c_star |x|),
/// which is locally log-Hoelder and has log-Hoelder decay at infinity.
struct ExponentDescriptor {
  enum class Form { constant, log_decay };
  Form form = Form::constant;
  double p_const = 2.0;
  double p_inf = 2.0;
  double p0 = 2.0;
  double c_star = 1.0;

  static ExponentDescriptor constant(double p) {
    ExponentDescriptor e;
    e.p_const = e.p_inf = e.p0 = p;
    e.validate();
    return e;
  }
  static ExponentDescriptor log_decay(double p_inf, double p0, double c_star = 1.0) {
    ExponentDescriptor e;
    e.form = Form::log_decay;
    e.p_inf = p_inf;
    e.p0 = p0;
    e.c_star = c_star;
    e.validate();
    return e;
  }
  double p_minus() const { return form == Form::constant ? p_const : std::min(p0, p_inf); }
  double p_plus() const { return form == Form::constant ? p_const : std::max(p0, p_inf); }
  void validate() const {
    if (!(p_minus() >= 1.0) || !std::isfinite(p_plus())) throw DomainError("ExponentDescriptor: need 1 <= p- <= p+ < inf");
    if (form == Form::log_decay && !(c_star > 0)) throw DomainError("ExponentDescriptor: c_star must be positive");
  }
  double operator()(const double* x, int n) const {
    if (form == Form::constant) return p_const;
    return p_inf + (p0 - p_inf) / std::log(std::numbers::e + c_star * norm2(x, n));
  }
};

struct Lp {
  double p = 2.0;
};
struct Lorentz {
  double p = 2.0;
  double q = 2.0;  // may be infinite
};
struct VarExp {
  ExponentDescriptor exponent;
};
struct Morrey {
  double p = 2.0;
  double p0 = 2.0;
};
/// L^1 + L^p
struct Sum {
  double p = 2.0;
};

using LatticeSpace = std::variant<Lp, Lorentz, VarExp, Morrey, Sum>;

inline void validate_space(const LatticeSpace& X) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Lp>) {
          if (!(s.p >= 1.0)) throw DomainError("Lp: need p >= 1");
        } else if constexpr (std::is_same_v<T, Lorentz>) {
          if (!(s.p > 1.0) || std::isinf(s.p)) throw DomainError("Lorentz: need 1 < p < inf");
          if (!(s.q >= 1.0)) throw DomainError("Lorentz: need q >= 1");
        } else if constexpr (std::is_same_v<T, VarExp>) {
          s.exponent.validate();
        } else if constexpr (std::is_same_v<T, Morrey>) {
          if (!(s.p >= 1.0) || !(s.p0 >= s.p) || std::isinf(s.p0)) throw DomainError("Morrey: need 1 <= p <= p0 < inf");
        } else {
          if (!(s.p >= 1.0) || std::isinf(s.p)) throw DomainError("Sum: need 1 <= p < inf");
        }
      },
      X);
}

inline std::string format_number(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// Short label such as "lp:2", "lorentz:2,1", "varexp:1.2,1.8", "morrey:2,4", "sum:3".
inline std::string space_name(const LatticeSpace& X) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Lp>) return "lp:" + format_number(s.p);
        else if constexpr (std::is_same_v<T, Lorentz>) return "lorentz:" + format_number(s.p) + "," + format_number(s.q);
        else if constexpr (std::is_same_v<T, VarExp>) {
          if (s.exponent.form == ExponentDescriptor::Form::constant) return "varexp:" + format_number(s.exponent.p_const);
          return "varexp:" + format_number(s.exponent.p_inf) + "," + format_number(s.exponent.p0);
        } else if constexpr (std::is_same_v<T, Morrey>) return "morrey:" + format_number(s.p) + "," + format_number(s.p0);
        else return "sum:" + format_number(s.p);
      },
      X);
}

/// Non-increasing rearrangement: f*(t) = levels[i] on [breakpoints[i], breakpoints[i+1]).
struct RearrangementTable {
  std::vector<double> breakpoints;  // size levels.size() + 1, starting at 0
  std::vector<double> levels;

  double total_measure() const { return breakpoints.empty() ? 0.0 : breakpoints.back(); }
  double operator()(double t) const {
    if (levels.empty() || t < 0 || t >= breakpoints.back()) return 0.0;
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    return levels[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
  }
};

inline RearrangementTable rearrangement(const GridFunction& f) {
  std::vector<double> a;
  a.reserve(f.values.size());
  for (double v : f.values)
    if (v != 0.0) a.push_back(std::abs(v));
  std::sort(a.begin(), a.end(), std::greater<>());
  RearrangementTable R;
  const double dv = f.cell_volume();
  R.breakpoints.resize(a.size() + 1);
  R.breakpoints[0] = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) R.breakpoints[i + 1] = static_cast<double>(i + 1) * dv;
  R.levels = std::move(a);
  return R;
}

namespace detail {

inline double lp_norm(const GridFunction& f, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (double v : f.values)
    if (v != 0.0) s += std::pow(std::abs(v), p);
  return std::pow(s * f.cell_volume(), 1.0 / p);
}

inline double lorentz_norm(const RearrangementTable& R, double p, double q) {
  if (R.levels.empty()) return 0.0;
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t i = 0; i < R.levels.size(); ++i) m = std::max(m, R.levels[i] * std::pow(R.breakpoints[i + 1], 1.0 / p));
    return m;
  }
  const double e = q / p;
  double s = 0.0;
  for (std::size_t i = 0; i < R.levels.size(); ++i)
    s += std::pow(R.levels[i], q) * (std::pow(R.breakpoints[i + 1], e) - std::pow(R.breakpoints[i], e));
  return std::pow(s * p / q, 1.0 / q);
}

inline std::vector<double> exponent_field(const GridFunction& f, const ExponentDescriptor& e) {
  std::vector<double> p(f.values.size());
  std::array<double, 8> x{};
  for (std::size_t i = 0; i < p.size(); ++i) {
    f.cell_center(i, x.data());
    p[i] = e(x.data(), f.n);
  }
  return p;
}

inline double modular(const GridFunction& f, const std::vector<double>& p, double lambda) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (f.values[i] != 0.0) s += std::pow(std::abs(f.values[i]) / lambda, p[i]);
  return s * f.cell_volume();
}

inline double luxemburg_norm(const GridFunction& f, const ExponentDescriptor& e) {
  const auto p = exponent_field(f, e);
  const double a = lp_norm(f, e.p_minus()), b = lp_norm(f, e.p_plus());
  if (a == 0.0) return 0.0;
  // rho(f/lam) <= (a/lam)^{p-} + (b/lam)^{p+} <= 1 once lam >= 2 max(a, b).
  double hi = 2.0 * std::max(a, b);
  double lo = 0.5 * std::min(a, b);
  while (modular(f, p, lo) <= 1.0) lo *= 0.5;
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (modular(f, p, mid) > 1.0) lo = mid;
    else hi = mid;
  }
  return hi;
}

inline double morrey_norm(const GridFunction& f, double p, double p0, int max_centers_per_axis) {
  const int n = f.n;
  const double h = f.min_spacing();
  double diam = 0.0;
  for (int a = 0; a < n; ++a) diam += 4.0 * f.half_width[a] * f.half_width[a];
  diam = std::sqrt(diam);
  std::vector<double> radii;
  for (double r = h; r < 2.0 * diam; r *= 2.0) radii.push_back(r);
  radii.push_back(2.0 * diam);
  std::vector<int> stride(static_cast<std::size_t>(n));
  std::size_t centers = 1;
  for (int a = 0; a < n; ++a) {
    stride[a] = std::max(1, (f.cells[a] + max_centers_per_axis - 1) / max_centers_per_axis);
    centers *= static_cast<std::size_t>((f.cells[a] + stride[a] - 1) / stride[a]);
  }
  std::vector<double> pw(f.values.size());
  for (std::size_t i = 0; i < pw.size(); ++i) pw[i] = std::pow(std::abs(f.values[i]), p);
  const double dv = f.cell_volume();
  std::vector<double> bins(radii.size());
  std::array<int, 8> mi{};
  std::array<double, 8> c{}, y{};
  double best = 0.0;
  for (std::size_t ci = 0; ci < centers; ++ci) {
    std::size_t rem = ci;
    for (int a = n - 1; a >= 0; --a) {
      const int cnt = (f.cells[a] + stride[a] - 1) / stride[a];
      mi[a] = static_cast<int>(rem % static_cast<std::size_t>(cnt)) * stride[a];
      rem /= static_cast<std::size_t>(cnt);
      c[a] = f.coord(a, mi[a]);
    }
    std::fill(bins.begin(), bins.end(), 0.0);
    for (std::size_t i = 0; i < pw.size(); ++i) {
      if (pw[i] == 0.0) continue;
      f.cell_center(i, y.data());
      double d2 = 0.0;
      for (int a = 0; a < n; ++a) d2 += (y[a] - c[a]) * (y[a] - c[a]);
      const double d = std::sqrt(d2);
      const auto it = std::lower_bound(radii.begin(), radii.end(), d);
      if (it != radii.end()) bins[static_cast<std::size_t>(it - radii.begin())] += pw[i];
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < radii.size(); ++j) {
      acc += bins[j];
      const double vol = ball_volume(n) * std::pow(radii[j], n);
      best = std::max(best, std::pow(vol, 1.0 / p0 - 1.0 / p) * std::pow(acc * dv, 1.0 / p));
    }
  }
  return best;
}

/// inf over f = f1 + f2 of ||f1||_1 + ||f2||_p, attained at a truncation split
/// f2 = sign(f) min(|f|, tau). Between consecutive sorted |f| values the objective
/// is convex in tau, so a golden-section search on every interval finds the global minimum.
inline double sum_norm(const GridFunction& f, double p, double* best_tau = nullptr) {
  std::vector<double> a;
  for (double v : f.values)
    if (v != 0.0) a.push_back(std::abs(v));
  if (a.empty()) {
    if (best_tau) *best_tau = 0.0;
    return 0.0;
  }
  std::sort(a.begin(), a.end());
  const double dv = f.cell_volume();
  const std::size_t N = a.size();
  // suffix sums of |f| and prefix sums of |f|^p
  std::vector<double> suf(N + 1, 0.0), pre(N + 1, 0.0);
  for (std::size_t i = N; i-- > 0;) suf[i] = suf[i + 1] + a[i];
  for (std::size_t i = 0; i < N; ++i) pre[i + 1] = pre[i] + std::pow(a[i], p);
  // For tau in [a[i-1], a[i]] (a[-1] = 0): cells i.. are cut at tau.
  auto phi = [&](std::size_t i, double tau) {
    const double mu = static_cast<double>(N - i) * dv;
    const double l1 = suf[i] * dv - tau * mu;
    const double lp = std::pow(pre[i] * dv + std::pow(tau, p) * mu, 1.0 / p);
    return l1 + lp;
  };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double best = kInf, bt = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    double lo = i == 0 ? 0.0 : a[i - 1], hi = a[i];
    for (double t : {lo, hi}) {
      const double v = phi(i, t);
      if (v < best) best = v, bt = t;
    }
    if (hi <= lo) continue;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = phi(i, x1), f2 = phi(i, x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      if (f1 <= f2) {
        hi = x2, x2 = x1, f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = phi(i, x1);
      } else {
        lo = x1, x1 = x2, f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = phi(i, x2);
      }
    }
    const double tm = 0.5 * (lo + hi);
    const double v = phi(i, tm);
    if (v < best) best = v, bt = tm;
  }
  if (best_tau) *best_tau = bt;
  return best;
}

}  // namespace detail

struct NormOptions {
  /// Morrey: centres are taken on a sub-lattice with at most this many points per axis.
  int morrey_centers_per_axis = 32;
};

/// Norm of a grid function in X.
inline double norm(const GridFunction& f, const LatticeSpace& X, const NormOptions& opt = {}) {
  validate_space(X);
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Lp>) return detail::lp_norm(f, s.p);
        else if constexpr (std::is_same_v<T, Lorentz>) return detail::lorentz_norm(rearrangement(f), s.p, s.q);
        else if constexpr (std::is_same_v<T, VarExp>) return detail::luxemburg_norm(f, s.exponent);
        else if constexpr (std::is_same_v<T, Morrey>) return detail::morrey_norm(f, s.p, s.p0, opt.morrey_centers_per_axis);
        else return detail::sum_norm(f, s.p);
      },
      X);
}

/// Modular sum |f/lambda|^{p(x)} dV of the variable-exponent space.
inline double varexp_modular(const GridFunction& f, const ExponentDescriptor& e, double lambda) {
  return detail::modular(f, detail::exponent_field(f, e), lambda);
}

inline double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

/// Norm in the associate space: L^{p'} for L^p and L^{p',q'} for L^{p,q}.
/// Other spaces raise UnsupportedSpace.
inline double associate_norm(const GridFunction& f, const LatticeSpace& X) {
  validate_space(X);
  if (auto s = std::get_if<Lp>(&X)) return detail::lp_norm(f, conjugate_exponent(s->p));
  if (auto s = std::get_if<Lorentz>(&X)) return detail::lorentz_norm(rearrangement(f), conjugate_exponent(s->p), conjugate_exponent(s->q));
  throw UnsupportedSpace("associate_norm: no associate norm implemented for " + space_name(X));
}

/// max over dyadic cubes Q (aligned with the box, `scales` generations) of
/// ||chi_Q||_X ||chi_Q||_{X'} / |Q|.
inline double muckenhoupt_constant(const LatticeSpace& X, const GridFunction& geometry, int scales = 4) {
  if (scales < 1) throw DomainError("muckenhoupt_constant: need at least one scale");
  const int n = geometry.n;
  GridFunction chi = geometry;
  std::array<int, 8> mi{};
  double best = 0.0;
  for (int j = 0; j < scales; ++j) {
    const int per = 1 << j;
    for (int a = 0; a < n; ++a)
      if (geometry.cells[a] < per) throw DomainError("muckenhoupt_constant: grid too coarse for the requested scales");
    std::size_t cubes = 1;
    for (int a = 0; a < n; ++a) cubes *= static_cast<std::size_t>(per);
    for (std::size_t qi = 0; qi < cubes; ++qi) {
      std::array<int, 8> qidx{};
      std::size_t rem = qi;
      for (int a = n - 1; a >= 0; --a) {
        qidx[a] = static_cast<int>(rem % static_cast<std::size_t>(per));
        rem /= static_cast<std::size_t>(per);
      }
      std::size_t count = 0;
      for (std::size_t i = 0; i < chi.values.size(); ++i) {
        chi.multi_index(i, mi.data());
        bool in = true;
        for (int a = 0; a < n && in; ++a) {
          const long lo = static_cast<long>(qidx[a]) * geometry.cells[a] / per;
          const long hi = static_cast<long>(qidx[a] + 1) * geometry.cells[a] / per;
          in = mi[a] >= lo && mi[a] < hi;
        }
        chi.values[i] = in ? 1.0 : 0.0;
        count += in ? 1 : 0;
      }
      if (count == 0) continue;
      const double vol = static_cast<double>(count) * geometry.cell_volume();
      best = std::max(best, norm(chi, X) * associate_norm(chi, X) / vol);
    }
  }
  return best;
}

/// Term a * chi_{B(0, r)} of a layer-cake approximation.
struct LayerTerm {
  double a = 0.0;
  double r = 0.0;
};

/// K_N = 2^{-N} sum_{l >= 1} chi_{B(0, r(2^{-N} l))}, r(t) = sup{r : K(r) >= t};
/// terms with equal radius are merged.
inline std::vector<LayerTerm> layer_cake(const RadialProfile& K, int N) {
  if (N < 1 || N > 30) throw DomainError("layer_cake: N must lie in [1, 30]");
  const double k0 = K(0.0);
  if (!(k0 >= 0)) throw PreconditionError("layer_cake: K must be nonnegative");
  double R = K.support_radius();
  if (!std::isfinite(R)) {
    R = 1.0;
    while (K(R) > 1e-14 * k0 && R < 1e6) R *= 2.0;
  }
  // Monotonicity check on a fine sample.
  const int checks = 4096;
  double prev = k0;
  for (int i = 1; i <= checks; ++i) {
    const double v = K(R * i / checks);
    if (v < -1e-14 * k0 || v > prev + 1e-12 * std::max(k0, 1.0)) throw PreconditionError("layer_cake: K is not non-increasing");
    prev = v;
  }
  const double step = std::ldexp(1.0, -N);
  const long L = static_cast<long>(std::floor(k0 / step + 1e-12));
  std::vector<LayerTerm> out;
  for (long l = 1; l <= L; ++l) {
    const double t = step * static_cast<double>(l);
    double r;
    if (K(R) >= t) {
      r = R;
    } else {
      double lo = 0.0, hi = R;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * R; ++it) {
        const double mid = 0.5 * (lo + hi);
        (K(mid) >= t ? lo : hi) = mid;
      }
      r = lo;
    }
    if (r <= 0.0) continue;
    if (!out.empty() && out.back().r == r) out.back().a += step;
    else out.push_back({step, r});
  }
  return out;
}

/// Value of sum a_l chi_{B(0, r_l)} at radius r (closed balls).
inline double layer_cake_value(const std::vector<LayerTerm>& terms, double r) {
  double s = 0.0;
  for (const auto& t : terms)
    if (r <= t.r) s += t.a;
  return s;
}

namespace detail {

/// Integer offsets of cells whose centres lie within distance r of a cell centre.
inline std::vector<std::vector<int>> ball_stencil(const GridFunction& f, double r) {
  const int n = f.n;
  std::vector<int> ext(static_cast<std::size_t>(n));
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) {
    ext[a] = static_cast<int>(std::floor(r / f.spacing(a)));
    total *= static_cast<std::size_t>(2 * ext[a] + 1);
  }
  std::vector<std::vector<int>> out;
  std::vector<int> off(static_cast<std::size_t>(n));
  for (std::size_t lin = 0; lin < total; ++lin) {
    std::size_t rem = lin;
    double d2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const int w = 2 * ext[a] + 1;
      off[a] = static_cast<int>(rem % static_cast<std::size_t>(w)) - ext[a];
      rem /= static_cast<std::size_t>(w);
      const double d = off[a] * f.spacing(a);
      d2 += d * d;
    }
    if (d2 <= r * r * (1.0 + 1e-12)) out.push_back(off);
  }
  return out;
}

/// out(x) = sum over stencil offsets z of weight(z) f(x + z); cells outside the box are zero.
template <class Weight>
GridFunction stencil_apply(const GridFunction& f, const std::vector<std::vector<int>>& st, Weight&& weight) {
  GridFunction out = f;
  const int n = f.n;
  std::vector<double> wts(st.size());
  for (std::size_t s = 0; s < st.size(); ++s) wts[s] = weight(st[s]);
  std::array<int, 8> mi{}, nb{};
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    f.multi_index(i, mi.data());
    double acc = 0.0;
    for (std::size_t s = 0; s < st.size(); ++s) {
      bool in = true;
      for (int a = 0; a < n; ++a) {
        nb[a] = mi[a] + st[s][a];
        if (nb[a] < 0 || nb[a] >= f.cells[a]) {
          in = false;
          break;
        }
      }
      if (in) acc += wts[s] * f.values[f.flat_index(nb.data())];
    }
    out.values[i] = acc;
  }
  return out;
}

}  // namespace detail

/// Mean of f over the discrete ball of radius r around each cell centre
/// (zero extension outside the box, so the operator has unit mass).
inline GridFunction ball_average(const GridFunction& f, double r) {
  if (!(r >= f.min_spacing())) throw DomainError("ball_average: radius below one cell");
  const auto st = detail::ball_stencil(f, r);
  const double w = 1.0 / static_cast<double>(st.size());
  return detail::stencil_apply(f, st, [w](const std::vector<int>&) { return w; });
}

enum class MollifyRoute { layer_cake, direct };

/// K_eps * f with K_eps = eps^{-n} K(./eps), as a discrete convolution on the grid.
/// The layer-cake route sums weighted ball sums using the N-th layer-cake approximation.
inline GridFunction mollify(const GridFunction& f, const RadialProfile& K, double eps, MollifyRoute route = MollifyRoute::layer_cake,
                            int N = 10) {
  if (!(eps > 0)) throw DomainError("mollify: eps must be positive");
  const int n = f.n;
  const double dv = f.cell_volume();
  const double scale = std::pow(eps, -n);
  if (route == MollifyRoute::direct) {
    double R = K.support_radius();
    if (!std::isfinite(R)) throw PreconditionError("mollify: kernel needs a finite truncation radius");
    const auto st = detail::ball_stencil(f, eps * R);
    return detail::stencil_apply(f, st, [&](const std::vector<int>& z) {
      double d2 = 0.0;
      for (int a = 0; a < n; ++a) d2 += (z[a] * f.spacing(a)) * (z[a] * f.spacing(a));
      return scale * K(std::sqrt(d2) / eps) * dv;
    });
  }
  const auto terms = layer_cake(K, N);
  const auto st = detail::ball_stencil(f, eps * (terms.empty() ? 0.0 : terms.front().r));
  // Each stencil offset collects the layers whose ball contains it.
  return detail::stencil_apply(f, st, [&](const std::vector<int>& z) {
    double d2 = 0.0;
    for (int a = 0; a < n; ++a) d2 += (z[a] * f.spacing(a)) * (z[a] * f.spacing(a));
    return scale * layer_cake_value(terms, std::sqrt(d2) / eps) * dv;
  });
}

}  // namespace ridgelet
