#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ridgelet/kernels.hpp"
#include "ridgelet/radon.hpp"
#include "ridgelet/recon.hpp"

using namespace ridgelet;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

AffinePlane line_at(double theta, double p) {
  Eigen::MatrixXd b(2, 1);
  b << std::cos(theta), std::sin(theta);
  return AffinePlane(LinearSubspace(b), vec({-p * std::sin(theta), p * std::cos(theta)}));
}

RadialProfile solmon(int n, double p) {
  const double e = n / p;
  return RadialProfile::analytic(n, [e](double t) { return std::pow(2.0 + t, -e) / std::log(2.0 + t); }, "solmon");
}

}  // namespace

TEST(KPlaneRadial, GaussianClosedForm) {
  for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}, {4, 3}}) {
    const auto f = RadialProfile::gaussian(n);
    for (double s = 0.0; s <= 3.0; s += 0.25) {
      const double ref = oracle::gaussian_kplane(1.0, k, s);
      EXPECT_NEAR(kplane_radial(f, k, s) / ref, 1.0, 1e-8) << n << "," << k << " s=" << s;
    }
  }
}

TEST(KPlaneRadial, BallChordAndDisk) {
  const auto ball = RadialProfile::analytic(3, [](double r) { return r <= 1.5 ? 1.0 : 0.0; }, "ball", 1.5, {1.5});
  for (double s : {0.0, 0.5, 1.0, 1.4}) {
    EXPECT_NEAR(kplane_radial(ball, 1, s), 2.0 * std::sqrt(2.25 - s * s), 1e-10);
    EXPECT_NEAR(kplane_radial(ball, 2, s), oracle::pi * (2.25 - s * s), 1e-10);
  }
  EXPECT_EQ(kplane_radial(ball, 1, 2.0), 0.0);
}

TEST(KPlaneRadial, DilationLaw) {
  // f(./a) has transform a^k fhat(s/a).
  auto ball = [](double R) { return RadialProfile::analytic(3, [R](double r) { return r <= R ? 1.0 : 0.0; }, "ball", R, {R}); };
  for (int k : {1, 2})
    for (double s : {0.1, 0.7, 1.3}) EXPECT_NEAR(kplane_radial(ball(2.0), k, s), std::pow(2.0, k) * kplane_radial(ball(1.0), k, s / 2.0), 1e-10);
}

TEST(KPlaneRadial, ZeroFunction) { EXPECT_EQ(kplane_radial(RadialProfile::zero(3), 2, 0.5), 0.0); }

TEST(KPlaneRadial, SolmonDivergenceThreshold) {
  for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}}) {
    const double crit = static_cast<double>(n) / k;
    for (double p : {crit, crit + 0.5, 2.0 * crit}) {
      EXPECT_FALSE(kplane_radial_checked(solmon(n, p), k, 0.0).converged) << n << "," << k << " p=" << p;
      EXPECT_THROW(kplane_radial(solmon(n, p), k, 0.0), DivergenceError);
    }
    for (double p : {1.0, 0.5 * (1.0 + crit)}) {
      if (!(p < crit)) continue;
      EXPECT_TRUE(kplane_radial_checked(solmon(n, p), k, 0.0).converged) << n << "," << k << " p=" << p;
    }
  }
}

TEST(KPlaneNumeric, GaussianOnGrid) {
  auto g = GridFunction::cube(2, 6.0, 256);
  g.fill([](const double* x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); });
  for (double th : {0.0, 0.4, 1.1, 2.5})
    for (double p : {0.0, 0.5, 1.3}) EXPECT_NEAR(kplane_numeric(g, line_at(th, p)), oracle::gaussian_kplane(1.0, 1, p), 1e-3) << th << " " << p;
}

TEST(DualRadial, ConstantIsFixed) {
  const auto one = RadialProfile::analytic(1, [](double) { return 1.0; }, "one");
  for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}, {4, 2}})
    for (double r : {0.5, 2.0}) EXPECT_NEAR(dual_radial(one, n, k, r), 1.0, 1e-9) << n << "," << k;
}

TEST(DualNumeric, AgreesWithRadialFormula) {
  McSpec mc;
  mc.sample_count = 40000;
  const auto phi0 = RadialProfile::gaussian(2);
  auto phi = [&](const AffinePlane& t) { return phi0(t.distance_to_origin()); };
  const auto x = vec({0.6, -0.3, 0.4});
  const auto r = dual_numeric(phi, x, 3, 1, mc);
  EXPECT_NEAR(r.estimate, dual_radial(phi0, 3, 1, x.norm()), 3.0 * r.std_error);
}

TEST(Duality, DeterministicInTwoDimensions) {
  // (fhat, phi) over G(2,1) against (f, phi-check) over R^2.
  const auto f = RadialProfile::gaussian(2);
  const auto phi0 = RadialProfile::gaussian(1, 0.5);
  McSpec mc;
  const double lhs = integrate_affine([&](const AffinePlane& t) { return oracle::gaussian_kplane(1.0, 1, t.distance_to_origin()) * phi0(t.distance_to_origin()); }, 2, 1, 10.0, mc).estimate;
  const double rhs = 2.0 * oracle::pi * oracle::panels([&](double r) { return r == 0.0 ? 0.0 : f(r) * dual_radial(phi0, 2, 1, r) * r; }, {0.0, 1.0, 2.0, 4.0, 8.0}, 1e-11);
  EXPECT_NEAR(lhs / rhs, 1.0, 1e-6);
}

TEST(Duality, MonteCarloInThreeDimensions) {
  const auto f = RadialProfile::gaussian(3);
  const auto phi0 = RadialProfile::gaussian(2, 0.5);
  McSpec mc;
  mc.sample_count = 40000;
  const auto lhs = integrate_affine([&](const AffinePlane& t) { return oracle::gaussian_kplane(1.0, 1, t.distance_to_origin()) * phi0(t.distance_to_origin()); }, 3, 1, 7.0, mc);
  const double rhs = 4.0 * oracle::pi * oracle::panels([&](double r) { return r == 0.0 ? 0.0 : f(r) * dual_radial(phi0, 3, 1, r) * r * r; }, {0.0, 1.0, 2.0, 4.0, 8.0}, 1e-11);
  EXPECT_NEAR(lhs.estimate, rhs, 3.0 * lhs.std_error);
}

TEST(WStar, ConvolutionIdentity) {
  const int n = 2, k = 1;
  const auto w = build_wavelet(example_wavelet(n, k)).w;
  const auto psi = psi_from_w(w, n, k);
  McSpec mc;
  mc.sample_count = 40000;
  for (double t : {0.5, 1.0}) {
    const auto x = vec({0.4, -0.2});
    const auto est = w_star([&](const AffinePlane& tau) { return oracle::gaussian_kplane(1.0, 1, tau.distance_to_origin()); }, w, t, x, n, k, mc);
    const double ref = oracle::convolution_2d([](double a, double b) { return std::exp(-(a * a + b * b)); },
                                              [&](double r) { return std::pow(t, -n) * psi(r / t); }, x(0), x(1),
                                              {0.0, 0.25 * t, t, 2.0 * t, 4.0, 8.0});
    EXPECT_NEAR(est.estimate, ref, 3.0 * est.std_error + 1e-9) << t;
  }
}

TEST(UT, GaussianClosedForm) {
  // Independent derivation: fhat = (pi/b)^{k/2} e^{-b s^2}, U_t = t^{k-n} fhat_V * e^{-c|.|^2/t^2}.
  const double b = 0.5, c = 1.0;
  for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}})
    for (double t : {0.5, 1.0})
      for (double s : {0.0, 0.7, 1.5}) {
        const int m = n - k;
        const double cc = c / (t * t);
        const double ref = std::pow(t, k - n) * std::pow(oracle::pi / b, 0.5 * k) * std::pow(oracle::pi / (b + cc), 0.5 * m) *
                           std::exp(-b * cc / (b + cc) * s * s);
        const auto u = RadialProfile::gaussian(m, c);
        const double v = u_t_radial([&](double r) { return oracle::gaussian_kplane(b, k, r); }, u, t, s, n, k);
        EXPECT_NEAR(v / ref, 1.0, 1e-8) << n << "," << k << " t=" << t << " s=" << s;
        EXPECT_NEAR(gaussian::u_t(b, c, n, k, t, s) / ref, 1.0, 1e-12);
      }
}

TEST(UT, GridAgreesWithClosedForm) {
  auto g = GridFunction::cube(2, 5.0, 128);
  g.fill([](const double* x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); });
  const auto u = RadialProfile::gaussian(1);
  for (double s : {0.0, 0.8}) EXPECT_NEAR(u_t_grid(g, u, 0.5, line_at(0.3, s)), gaussian::u_t(1.0, 1.0, 2, 1, 0.5, s), 1e-4);
}

TEST(SphericalMean, GenericMatchesGaussianSeries) {
  for (int n : {1, 2, 3})
    for (double rho : {0.0, 0.3, 1.2})
      for (double a : {0.2, 1.0}) {
        const double gen = spherical_mean([](double r) { return std::exp(-r * r); }, n, rho, a);
        EXPECT_NEAR(gen, gaussian::spherical_mean(1.0, n, rho, a), 1e-10) << n << " " << rho << " " << a;
      }
}

TEST(Factorization, RidgeletMatchesBackprojection) {
  const int n = 2, k = 1;
  WaveletSpec spec;
  spec.m = 1;
  spec.N1 = 0;
  spec.N2 = 1;
  const auto parts = build_wavelet(spec);
  McSpec mc;
  mc.sample_count = 40000;
  const double t = 0.5;
  const auto x = vec({0.3, 0.2});
  const auto lhs = v_t_star([&](const AffinePlane& tau) { return gaussian::u_t(1.0, 1.0, n, k, t, tau.distance_to_origin()); }, parts.v, t, x, n, k, mc);
  const auto rhs = w_star([&](const AffinePlane& tau) { return oracle::gaussian_kplane(1.0, k, tau.distance_to_origin()); }, parts.w, t, x, n, k, mc.derived(1));
  const double sigma = std::hypot(lhs.std_error, std::pow(t, k) * rhs.std_error);
  EXPECT_NEAR(lhs.estimate, std::pow(t, k) * rhs.estimate, 3.0 * sigma);
}

TEST(AbelPair, HModeIsKPlaneTransform) {
  const auto g = RadialProfile::gaussian(3);
  const auto h = abel_pair(g, 3, 1, AbelMode::h);
  EXPECT_EQ(h.dim(), 2);
  for (double s : {0.0, 0.5, 2.0}) EXPECT_NEAR(h(s), oracle::gaussian_kplane(1.0, 1, s), 1e-10);
}

TEST(AbelPair, PsiModeMatchesKernel) {
  const int n = 3, k = 2;
  const auto w = build_wavelet(example_wavelet(n, k)).w;
  const auto p = abel_pair(w, n, k, AbelMode::psi);
  const auto K = psi_from_w(w, n, k);
  for (double r : {0.3, 1.0, 2.2}) EXPECT_NEAR(p(r), K.exact(r), 1e-10 * std::max(1.0, std::abs(K.exact(r))));
}

TEST(AbelPair, DivergentHMode) { EXPECT_THROW(abel_pair(solmon(2, 2.0), 2, 1, AbelMode::h), DivergenceError); }
