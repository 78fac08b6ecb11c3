#pragma once

#include <boost/math/special_functions/fpclassify.hpp>  // the interpolators below call isnan unqualified
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ridgelet/errors.hpp"

namespace ridgelet {

/// Behaviour of a tabulated function outside its abscissa range.
struct Extrapolation {
  enum class Kind { zero, power_law };
  Kind kind = Kind::zero;
  double exponent = 0.0;

  static Extrapolation zero() { return {}; }
  static Extrapolation power_law(double e) {
    if (!std::isfinite(e)) throw DomainError("Extrapolation: power-law exponent must be finite");
    return {Kind::power_law, e};
  }
};

/// Cubic interpolant between samples. pchip preserves monotonicity but is only
/// third-order accurate and flattens local extrema; uniform_spline is a
/// fourth-order cubic B-spline that needs equally spaced abscissae.
enum class Interpolation { pchip, uniform_spline };

/// Tabulated function of one variable with piecewise cubic interpolation.
/// When every abscissa is positive the interpolation runs in log(x), which
/// suits the log-spaced grids used for kernels.
class SampledFunction1D {
 public:
  SampledFunction1D() = default;

  SampledFunction1D(std::vector<double> x, std::vector<double> y, Extrapolation left = Extrapolation::power_law(0.0),
                    Extrapolation right = Extrapolation::zero(), Interpolation method = Interpolation::pchip)
      : x_(std::move(x)), y_(std::move(y)), left_(left), right_(right) {
    if (x_.size() != y_.size()) throw DomainError("SampledFunction1D: length mismatch");
    if (x_.size() < 2) throw DomainError("SampledFunction1D: need at least two samples");
    for (std::size_t i = 1; i < x_.size(); ++i)
      if (!(x_[i] > x_[i - 1])) throw DomainError("SampledFunction1D: abscissae must be strictly increasing");
    log_x_ = x_.front() > 0.0;
    if (x_.size() >= 4) {
      std::vector<double> u(x_.size());
      for (std::size_t i = 0; i < x_.size(); ++i) u[i] = log_x_ ? std::log(x_[i]) : x_[i];
      std::vector<double> v = y_;
      if (method == Interpolation::uniform_spline) {
        const double h = (u.back() - u.front()) / static_cast<double>(u.size() - 1);
        for (std::size_t i = 1; i < u.size(); ++i)
          if (std::abs(u[i] - u[i - 1] - h) > 1e-9 * h) throw DomainError("SampledFunction1D: uniform_spline needs equally spaced abscissae");
        auto sp = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(v.begin(), v.end(), u.front(), h);
        interp_ = [sp](double t) { return (*sp)(t); };
      } else {
        auto pc = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(u), std::move(v));
        interp_ = [pc](double t) { return (*pc)(t); };
      }
    }
  }

  double operator()(double x) const {
    if (x_.empty()) return 0.0;
    if (x < x_.front()) return extrapolate(left_, x_.front(), y_.front(), x);
    if (x > x_.back()) return extrapolate(right_, x_.back(), y_.back(), x);
    if (interp_) return interp_(log_x_ ? std::log(x) : x);
    // Two or three points: piecewise linear.
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    if (it == x_.end()) return y_.back();
    const std::size_t i = static_cast<std::size_t>(it - x_.begin());
    const double w = (x - x_[i - 1]) / (x_[i] - x_[i - 1]);
    return (1 - w) * y_[i - 1] + w * y_[i];
  }

  const std::vector<double>& abscissae() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  const Extrapolation& left() const { return left_; }
  const Extrapolation& right() const { return right_; }
  bool empty() const { return x_.empty(); }

 private:
  static double extrapolate(const Extrapolation& e, double x0, double y0, double x) {
    if (e.kind == Extrapolation::Kind::zero) return 0.0;
    if (x0 == 0.0) return y0;
    return y0 * std::pow(x / x0, e.exponent);
  }

  std::vector<double> x_, y_;
  Extrapolation left_, right_;
  bool log_x_ = false;
  std::function<double(double)> interp_;
};

/// n points log-spaced on [a, b].
inline std::vector<double> log_grid(double a, double b, std::size_t n) {
  if (!(a > 0 && b > a) || n < 2) throw DomainError("log_grid: need 0 < a < b and n >= 2");
  std::vector<double> g(n);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
  g.front() = a;
  g.back() = b;
  return g;
}

/// Least-squares slope of log|y| against log x.
inline std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(std::abs(y[i]) > 0) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt < 3) return std::nullopt;
  const double den = cnt * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  return (cnt * sxy - sx * sy) / den;
}

}  // namespace ridgelet
