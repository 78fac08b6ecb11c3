#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ridgelet/lattice.hpp"

using namespace ridgelet;

namespace {

GridFunction random_grid(int dim, int cells, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  auto g = GridFunction::cube(dim, 1.0, cells);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  for (double& v : g.values) v = u(rng);
  return g;
}

GridFunction gaussian_grid(int dim, int cells, double L = 4.0) {
  auto g = GridFunction::cube(dim, L, cells);
  g.fill([dim](const double* x) { return std::exp(-norm2(x, dim) * norm2(x, dim)); });
  return g;
}

double plain_lp(const GridFunction& f, double p) {
  double s = 0.0;
  for (double v : f.values) s += std::pow(std::abs(v), p);
  return std::pow(s * f.cell_volume(), 1.0 / p);
}

}  // namespace

TEST(Lorentz, DiagonalEqualsLp) {
  for (double p : {1.5, 2.0, 3.0}) {
    const auto f = random_grid(2, 24, 3);
    EXPECT_NEAR(norm(f, Lorentz{p, p}), norm(f, Lp{p}), 1e-10 * norm(f, Lp{p})) << p;
    EXPECT_NEAR(norm(f, Lp{p}), plain_lp(f, p), 1e-12 * plain_lp(f, p));
  }
}

TEST(Lorentz, IndicatorClosedForm) {
  auto chi = GridFunction::cube(2, 1.0, 20);
  chi.fill([](const double* x) { return x[0] < 0.3 ? 1.0 : 0.0; });
  double measure = 0.0;
  for (double v : chi.values) measure += v * chi.cell_volume();
  for (auto [p, q] : std::vector<std::pair<double, double>>{{2.0, 1.0}, {3.0, 2.0}, {1.5, 4.0}, {2.0, kInf}})
    EXPECT_NEAR(norm(chi, Lorentz{p, q}), oracle::lorentz_indicator(measure, p, q), 1e-12) << p << "," << q;
}

TEST(VarExp, ConstantExponentIsLp) {
  const auto f = random_grid(2, 20, 5);
  for (double p : {1.0, 1.7, 3.0})
    EXPECT_NEAR(norm(f, VarExp{ExponentDescriptor::constant(p)}), plain_lp(f, p), 1e-8 * plain_lp(f, p)) << p;
}

TEST(VarExp, UnitModularAtNorm) {
  const auto f = gaussian_grid(2, 40);
  const auto e = ExponentDescriptor::log_decay(1.5, 1.8);
  const double nv = norm(f, VarExp{e});
  EXPECT_NEAR(varexp_modular(f, e, nv), 1.0, 1e-8);
}

TEST(VarExp, RejectsBadExponent) {
  EXPECT_THROW(ExponentDescriptor::constant(0.5), DomainError);
  EXPECT_THROW(ExponentDescriptor::log_decay(2.0, 0.9), DomainError);
}

TEST(Morrey, EqualExponentsIsLp) {
  const auto f = random_grid(2, 16, 7);
  EXPECT_NEAR(norm(f, Morrey{2.0, 2.0}), plain_lp(f, 2.0), 1e-12);
}

TEST(Morrey, DominatesEveryCandidateBall) {
  // The sup runs over balls centred at cell centres with radii h 2^j, so any one
  // of them gives a lower bound |B|^{1/p0 - 1/p} ||f||_{L^p(B)}.
  const auto f = gaussian_grid(2, 32, 3.0);
  const double p = 1.5, p0 = 3.0, h = 6.0 / 32;
  const int mid[2] = {16, 15};
  std::array<double, 2> c{}, x{};
  f.cell_center(f.flat_index(mid), c.data());
  for (int j : {0, 2, 4}) {
    const double r = h * std::pow(2.0, j);
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      f.cell_center(i, x.data());
      if (std::hypot(x[0] - c[0], x[1] - c[1]) <= r) s += std::pow(std::abs(f.values[i]), p) * f.cell_volume();
    }
    const double lower = std::pow(oracle::pi * r * r, 1.0 / p0 - 1.0 / p) * std::pow(s, 1.0 / p);
    EXPECT_GE(norm(f, Morrey{p, p0}), lower * (1.0 - 1e-12)) << r;
  }
}

TEST(Associate, HolderInequalityLp) {
  const auto f = random_grid(2, 16, 11), g = random_grid(2, 16, 12);
  double fg = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) fg += std::abs(f.values[i] * g.values[i]) * f.cell_volume();
  for (double p : {1.0, 1.5, 2.0, 4.0}) EXPECT_LE(fg, norm(f, Lp{p}) * associate_norm(g, Lp{p}) * (1.0 + 1e-12)) << p;
}

TEST(Associate, UnsupportedSpaces) {
  const auto f = random_grid(1, 8, 1);
  EXPECT_THROW(associate_norm(f, Morrey{2.0, 3.0}), UnsupportedSpace);
  EXPECT_THROW(associate_norm(f, Sum{2.0}), UnsupportedSpace);
}

TEST(Muckenhoupt, LpConstantIsOne) {
  const auto geom = GridFunction::cube(2, 1.0, 16);
  for (double p : {1.0, 2.0, 3.5}) EXPECT_NEAR(muckenhoupt_constant(Lp{p}, geom), 1.0, 1e-10) << p;
}

TEST(Muckenhoupt, LorentzIsBoundedBelowByOne) {
  const auto geom = GridFunction::cube(2, 1.0, 16);
  const double c = muckenhoupt_constant(Lorentz{2.0, 1.0}, geom);
  EXPECT_GE(c, 1.0 - 1e-12);
  EXPECT_TRUE(std::isfinite(c));
}

TEST(LatticeProperty, DominationIsMonotone) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto f = random_grid(2, 12, 13);
  auto g = f;
  for (double& v : g.values) v *= u(rng);
  const std::vector<LatticeSpace> spaces{Lp{2.0}, Lorentz{2.0, 1.0}, VarExp{ExponentDescriptor::log_decay(1.5, 1.8)}, Morrey{1.5, 3.0},
                                         Sum{2.0}};
  for (const auto& X : spaces) EXPECT_LE(norm(g, X), norm(f, X) * (1.0 + 1e-9)) << space_name(X);
}

TEST(SumSpace, MatchesBruteForceOnFourCells) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto f = random_grid(seed % 2 ? 1 : 2, seed % 2 ? 4 : 2, seed, -3.0, 3.0);
    ASSERT_EQ(f.values.size(), 4u);
    for (double p : {1.5, 2.0, 3.0}) {
      const double ref = oracle::sum_space_bruteforce(f.values, f.cell_volume(), p);
      EXPECT_NEAR(norm(f, Sum{p}), ref, 1e-9) << seed << " p=" << p;
    }
  }
}

TEST(SumSpace, BoundedByBothSummands) {
  const auto f = random_grid(2, 10, 31);
  EXPECT_LE(norm(f, Sum{2.0}), std::min(norm(f, Lp{1.0}), norm(f, Lp{2.0})) * (1.0 + 1e-12));
}

TEST(LayerCake, MonotoneApproximation) {
  const int n = 2;
  const auto K = RadialProfile::gaussian(n);
  std::vector<double> err;
  std::vector<std::vector<LayerTerm>> all;
  for (int N = 1; N <= 8; ++N) {
    const auto terms = layer_cake(K, N);
    all.push_back(terms);
    std::vector<double> pts{0.0};
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) pts.push_back(it->r);
    pts.push_back(8.0);
    err.push_back(2.0 * oracle::pi * oracle::panels([&](double r) { return (K(r) - layer_cake_value(terms, r)) * r; }, pts, 1e-12));
  }
  for (std::size_t i = 1; i < err.size(); ++i) EXPECT_LT(err[i], err[i - 1]) << i;
  EXPECT_LE(err[5], 1e-2);  // N = 6
  for (double r = 0.0; r <= 4.0; r += 0.01)
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
      EXPECT_LE(layer_cake_value(all[i], r), layer_cake_value(all[i + 1], r) + 1e-15);
      EXPECT_LE(layer_cake_value(all[i + 1], r), K(r) + 1e-15);
    }
}

TEST(LayerCake, RejectsIncreasingKernel) {
  const auto K = RadialProfile::analytic(2, [](double r) { return r < 1.0 ? r : 0.0; }, "ramp", 1.0);
  EXPECT_THROW(layer_cake(K, 4), PreconditionError);
}

TEST(BallAverage, ConstantInteriorAndZeroExtension) {
  auto f = GridFunction::cube(2, 1.0, 20);
  f.fill([](const double*) { return 1.0; });
  const auto a = ball_average(f, 0.25);
  const int mid[2] = {10, 10}, corner[2] = {0, 0};
  EXPECT_NEAR(a.values[a.flat_index(mid)], 1.0, 1e-15);
  EXPECT_LT(a.values[a.flat_index(corner)], 0.5);
  EXPECT_THROW(ball_average(f, 0.01), DomainError);
}

TEST(BallAverage, ContractsEveryNormHere) {
  const auto f = random_grid(2, 20, 17);
  const auto a = ball_average(f, 0.2);
  for (double p : {1.0, 2.0, 4.0}) EXPECT_LE(norm(a, Lp{p}), norm(f, Lp{p}) * (1.0 + 1e-12));
}

TEST(Mollify, YoungInequality) {
  const auto f = random_grid(2, 32, 19);
  const auto K = RadialProfile::gaussian(2);
  const double K1 = oracle::pi;  // int e^{-|x|^2} over R^2
  for (double eps : {0.1, 0.2}) {
    const auto g = mollify(f, K, eps, MollifyRoute::direct);
    for (double p : {1.0, 2.0}) EXPECT_LE(norm(g, Lp{p}), 1.01 * K1 * norm(f, Lp{p})) << eps << " " << p;
  }
}

TEST(Mollify, ApproximateIdentity) {
  const auto f = gaussian_grid(2, 64, 3.0);
  const auto K = RadialProfile::gaussian(2);
  double prev = kInf;
  for (double eps : {0.4, 0.2, 0.1}) {
    auto g = mollify(f, K, eps, MollifyRoute::direct);
    for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = g.values[i] / oracle::pi - f.values[i];
    const double e = norm(g, Lp{2.0});
    EXPECT_LT(e, prev) << eps;
    prev = e;
  }
  EXPECT_LT(prev, 0.05 * norm(f, Lp{2.0}));
}

TEST(Mollify, RoutesAgree) {
  const auto f = gaussian_grid(2, 48, 3.0);
  const auto K = RadialProfile::gaussian(2);
  const auto a = mollify(f, K, 0.3, MollifyRoute::direct);
  const auto b = mollify(f, K, 0.3, MollifyRoute::layer_cake, 12);
  double d = 0.0, m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    d = std::max(d, std::abs(a.values[i] - b.values[i]));
    m = std::max(m, std::abs(a.values[i]));
  }
  EXPECT_LE(d, 2e-3 * m);
}

TEST(Mollify, RejectsBadScale) {
  const auto f = random_grid(1, 8, 2);
  EXPECT_THROW(mollify(f, RadialProfile::gaussian(1), 0.0), DomainError);
}
