#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "ridgelet/errors.hpp"

namespace ridgelet {

/// Scalar field on a uniform cell-centred Cartesian grid over a box in R^n.
/// Values are stored row-major (last axis fastest).
struct GridFunction {
  int n = 0;
  std::vector<double> center;
  std::vector<double> half_width;
  std::vector<int> cells;
  std::vector<double> values;

  static GridFunction zeros(std::vector<double> c, std::vector<double> hw, std::vector<int> nc) {
    GridFunction g;
    g.n = static_cast<int>(c.size());
    if (g.n < 1 || g.n > 8) throw DomainError("GridFunction: dimension must lie in [1, 8]");
    if (hw.size() != c.size() || nc.size() != c.size()) throw DomainError("GridFunction: inconsistent geometry");
    for (int i = 0; i < g.n; ++i)
      if (!(hw[i] > 0) || nc[i] < 1) throw DomainError("GridFunction: half-widths and cell counts must be positive");
    g.center = std::move(c);
    g.half_width = std::move(hw);
    g.cells = std::move(nc);
    g.values.assign(g.cell_count(), 0.0);
    return g;
  }

  /// Cube [-L, L]^n with N cells per axis.
  static GridFunction cube(int dim, double L, int N) {
    return zeros(std::vector<double>(dim, 0.0), std::vector<double>(dim, L), std::vector<int>(dim, N));
  }

  std::size_t cell_count() const {
    std::size_t c = 1;
    for (int v : cells) c *= static_cast<std::size_t>(v);
    return c;
  }
  double spacing(int axis) const { return 2.0 * half_width[axis] / cells[axis]; }
  double min_spacing() const {
    double h = spacing(0);
    for (int i = 1; i < n; ++i) h = std::min(h, spacing(i));
    return h;
  }
  double cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= spacing(i);
    return v;
  }

  void multi_index(std::size_t idx, int* mi) const {
    for (int a = n - 1; a >= 0; --a) {
      mi[a] = static_cast<int>(idx % static_cast<std::size_t>(cells[a]));
      idx /= static_cast<std::size_t>(cells[a]);
    }
  }
  std::size_t flat_index(const int* mi) const {
    std::size_t idx = 0;
    for (int a = 0; a < n; ++a) idx = idx * static_cast<std::size_t>(cells[a]) + static_cast<std::size_t>(mi[a]);
    return idx;
  }
  double coord(int axis, int i) const { return center[axis] - half_width[axis] + (i + 0.5) * spacing(axis); }
  void cell_center(std::size_t idx, double* x) const {
    std::array<int, 8> mi{};
    multi_index(idx, mi.data());
    for (int a = 0; a < n; ++a) x[a] = coord(a, mi[a]);
  }

  /// Multilinear interpolation between cell centres; cells outside the box count as zero.
  double interpolate(const double* x) const {
    std::array<int, 8> base{};
    std::array<double, 8> frac{};
    for (int a = 0; a < n; ++a) {
      const double u = (x[a] - (center[a] - half_width[a])) / spacing(a) - 0.5;
      if (u < -1.0 || u > cells[a]) return 0.0;
      const double fl = std::floor(u);
      base[a] = static_cast<int>(fl);
      frac[a] = u - fl;
    }
    double acc = 0.0;
    std::array<int, 8> mi{};
    for (int corner = 0; corner < (1 << n); ++corner) {
      double w = 1.0;
      bool inside = true;
      for (int a = 0; a < n; ++a) {
        const int bit = (corner >> a) & 1;
        mi[a] = base[a] + bit;
        if (mi[a] < 0 || mi[a] >= cells[a]) {
          inside = false;
          break;
        }
        w *= bit ? frac[a] : 1.0 - frac[a];
      }
      if (inside && w != 0.0) acc += w * values[flat_index(mi.data())];
    }
    return acc;
  }

  /// Fills values from f(x) evaluated at each cell centre.
  template <class F>
  void fill(F&& f) {
    std::array<double, 8> x{};
    for (std::size_t i = 0; i < values.size(); ++i) {
      cell_center(i, x.data());
      values[i] = f(x.data());
    }
  }

  bool same_geometry(const GridFunction& o) const {
    return n == o.n && center == o.center && half_width == o.half_width && cells == o.cells;
  }
};

inline double norm2(const double* x, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

}  // namespace ridgelet
