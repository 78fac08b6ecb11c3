#pragma once

// Linear and affine Grassmannians: Haar sampling and integration over the
// invariant measure dmu_G(V) x dx'' restricted to a ball of offsets.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ridgelet/errors.hpp"
#include "ridgelet/quadrature.hpp"
#include "ridgelet/rng.hpp"
#include "ridgelet/special.hpp"

namespace ridgelet {

/// k-dimensional subspace of R^n given by an n x k matrix with orthonormal columns.
struct LinearSubspace {
  Eigen::MatrixXd basis;

  LinearSubspace() = default;
  explicit LinearSubspace(Eigen::MatrixXd b) : basis(std::move(b)) {
    if (basis.cols() < 1 || basis.cols() >= basis.rows()) throw DomainError("LinearSubspace: need 1 <= k < n");
    const double dev = (basis.transpose() * basis - Eigen::MatrixXd::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-12) throw DomainError("LinearSubspace: basis columns are not orthonormal");
  }
  int n() const { return static_cast<int>(basis.rows()); }
  int k() const { return static_cast<int>(basis.cols()); }
  Eigen::MatrixXd projector() const { return basis * basis.transpose(); }
  /// x - P_V x
  Eigen::VectorXd project_complement(const Eigen::VectorXd& x) const { return x - basis * (basis.transpose() * x); }
};

/// tau = V + x'' with x'' orthogonal to V.
struct AffinePlane {
  LinearSubspace subspace;
  Eigen::VectorXd offset;

  AffinePlane() = default;
  AffinePlane(LinearSubspace v, Eigen::VectorXd x) : subspace(std::move(v)), offset(std::move(x)) {
    if (offset.size() != subspace.n()) throw DomainError("AffinePlane: offset dimension mismatch");
    if ((subspace.basis.transpose() * offset).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, offset.norm()))
      throw DomainError("AffinePlane: offset must be orthogonal to the subspace");
  }
  int n() const { return subspace.n(); }
  int k() const { return subspace.k(); }
  /// |tau| = dist(0, tau)
  double distance_to_origin() const { return offset.norm(); }
};

/// Haar-distributed element of O(n) (or SO(n) when special is set).
inline Eigen::MatrixXd haar_orthogonal(int n, Rng& rng, bool special = false) {
  if (n < 1) throw DomainError("haar_orthogonal: n must be >= 1");
  std::normal_distribution<double> nd;
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = nd(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  if (special && q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

namespace detail {

inline Eigen::VectorXd uniform_in_ball(int dim, double radius, Rng& rng) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  Eigen::VectorXd d(dim);
  for (int i = 0; i < dim; ++i) d(i) = nd(rng);
  double nrm = d.norm();
  while (nrm == 0.0) {
    for (int i = 0; i < dim; ++i) d(i) = nd(rng);
    nrm = d.norm();
  }
  return d * (radius * std::pow(ud(rng), 1.0 / dim) / nrm);
}

}  // namespace detail

/// A sampled plane together with the importance weight (ball volume in V-perp).
struct PlaneSample {
  AffinePlane plane;
  double weight = 0.0;
};

/// V from the first k columns of a Haar matrix; x'' uniform in the ball of
/// radius offset_box_radius in V-perp centred at `center` (projected onto V-perp).
inline PlaneSample sample_plane(int n, int k, double offset_box_radius, Rng& rng,
                                const Eigen::VectorXd* center = nullptr) {
  if (k < 1 || k >= n) throw DomainError("sample_plane: need 1 <= k < n");
  if (!(offset_box_radius > 0)) throw DomainError("sample_plane: offset_box_radius must be positive");
  const int m = n - k;
  const Eigen::MatrixXd q = haar_orthogonal(n, rng);
  Eigen::MatrixXd vb = q.leftCols(k);
  const Eigen::MatrixXd perp = q.rightCols(m);
  Eigen::VectorXd x = perp * detail::uniform_in_ball(m, offset_box_radius, rng);
  if (center) x += perp * (perp.transpose() * *center);
  // Remove round-off leakage into V so the AffinePlane invariant holds to 1e-12.
  x -= vb * (vb.transpose() * x);
  PlaneSample s;
  s.plane = AffinePlane(LinearSubspace(std::move(vb)), std::move(x));
  s.weight = ball_volume(m) * std::pow(offset_box_radius, m);
  return s;
}

/// |x - tau| = |P_{V-perp} x - x''|
inline double plane_distance(const Eigen::VectorXd& x, const AffinePlane& tau) {
  if (x.size() != tau.n()) throw DomainError("plane_distance: dimension mismatch");
  return (tau.subspace.project_complement(x) - tau.offset).norm();
}

/// Monte Carlo estimate of the integral of phi over the affine Grassmannian,
/// offsets restricted to |tau| <= offset_box_radius.
template <class Phi>
McResult integrate_affine_mc(const Phi& phi, int n, int k, double offset_box_radius, const McSpec& mc) {
  return run_mc(mc, [&](Rng& rng) {
    const PlaneSample s = sample_plane(n, k, offset_box_radius, rng);
    return static_cast<double>(phi(s.plane)) * s.weight;
  });
}

/// Deterministic product rule on G(2,1): theta in [0, pi) with weight 1/pi,
/// offset p in [-R, R] along the unit normal.
template <class Phi>
double integrate_affine_21(const Phi& phi, double offset_box_radius, int panels = 32) {
  if (!(offset_box_radius > 0)) throw DomainError("integrate_affine: offset_box_radius must be positive");
  const double pi = std::numbers::pi;
  auto over_p = [&](double th) {
    Eigen::MatrixXd b(2, 1);
    b << std::cos(th), std::sin(th);
    const LinearSubspace v(b);
    Eigen::VectorXd nrm(2);
    nrm << -std::sin(th), std::cos(th);
    double acc = 0.0;
    const double h = 2.0 * offset_box_radius / panels;
    for (int i = 0; i < panels; ++i) {
      const double a = -offset_box_radius + i * h;
      acc += quad::gauss<20>(
          [&](double p) {
            Eigen::VectorXd off = p * nrm;
            return static_cast<double>(phi(AffinePlane(v, off)));
          },
          a, a + h);
    }
    return acc;
  };
  double acc = 0.0;
  const double h = pi / panels;
  for (int i = 0; i < panels; ++i) acc += quad::gauss<20>(over_p, i * h, (i + 1) * h);
  return acc / pi;
}

/// Integral over the affine Grassmannian. For (n, k) = (2, 1) the deterministic
/// rule is used unless force_mc is set; its std_error is reported as 0.
template <class Phi>
McResult integrate_affine(const Phi& phi, int n, int k, double offset_box_radius, const McSpec& mc, bool force_mc = false) {
  if (k < 1 || k >= n) throw DomainError("integrate_affine: need 1 <= k < n");
  if (n == 2 && k == 1 && !force_mc) {
    McResult r;
    r.estimate = integrate_affine_21(phi, offset_box_radius);
    r.samples = 0;
    return r;
  }
  return integrate_affine_mc(phi, n, k, offset_box_radius, mc);
}

}  // namespace ridgelet
