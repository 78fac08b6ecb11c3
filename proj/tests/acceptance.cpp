// Acceptance runner: one PASS/FAIL line per criterion, tolerances pinned below.
//
//   acceptance            run every criterion
//   acceptance 3 7        run a subset
//
// Exit status is 0 when every selected criterion passes, 1 otherwise.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "config_io.hpp"
#include "oracles.hpp"
#include "ridgelet/ridgelet.hpp"

using namespace ridgelet;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Eigen::VectorXd random_point(int n, double R, Rng& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u;
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = g(rng);
  return x * (R * std::pow(u(rng), 1.0 / n) / x.norm());
}

// ---------------------------------------------------------------- 1
constexpr double kConstantGap = 1e-5;
constexpr double kConstantSeconds = 10.0;

Outcome constant_cross_route() {
  Outcome o{true, ""};
  for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {4, 2}, {4, 3}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto w = build_wavelet(example_wavelet(n, k)).w;
    const auto c = constant_routes(w, n, k);
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = !c.degenerate && c.relative_gap <= kConstantGap && sec < kConstantSeconds;
    o.pass = o.pass && ok;
    o.detail += "(" + std::to_string(n) + "," + std::to_string(k) + ") gap " + fmt("%.2e", c.relative_gap) + fmt(" %.1fs; ", sec);
  }
  return o;
}

// ---------------------------------------------------------------- 2
constexpr double kKplaneRel = 1e-8;
constexpr double kKplaneGridAbs = 1e-3;

Outcome gaussian_kplane() {
  double worst = 0.0;
  for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}, {4, 2}, {4, 3}}) {
    const auto f = RadialProfile::gaussian(n);
    for (int i = 0; i <= 30; ++i) {
      const double s = 0.1 * i;
      const double ref = std::pow(oracle::pi, 0.5 * k) * std::exp(-s * s);
      worst = std::max(worst, std::abs(kplane_radial(f, k, s) / ref - 1.0));
    }
  }
  auto g = GridFunction::cube(2, 6.0, 256);
  g.fill([](const double* x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); });
  double grid_worst = 0.0;
  for (double th : {0.0, 0.3, 0.8, 1.4, 2.2, 2.9})
    for (double p : {0.0, 0.4, 1.0, 1.7, 2.5}) {
      Eigen::MatrixXd b(2, 1);
      b << std::cos(th), std::sin(th);
      Eigen::VectorXd off(2);
      off << -p * std::sin(th), p * std::cos(th);
      const AffinePlane line(LinearSubspace(b), off);
      grid_worst = std::max(grid_worst, std::abs(kplane_numeric(g, line) - std::sqrt(oracle::pi) * std::exp(-p * p)));
    }
  return {worst <= kKplaneRel && grid_worst <= kKplaneGridAbs,
          "radial max rel " + fmt("%.2e", worst) + ", 256^2 grid max abs " + fmt("%.2e", grid_worst)};
}

// ---------------------------------------------------------------- 3
constexpr std::size_t kDualitySamples = 100000;
constexpr double kDualitySigmas = 3.0;

Outcome duality() {
  struct Pair {
    int n, k;
    double a, b;  // f = e^{-a r^2}, phi = e^{-b |tau|^2}
  };
  const std::vector<Pair> pairs{{2, 1, 1.0, 0.5}, {3, 1, 1.0, 0.5}, {3, 2, 0.5, 1.0}, {4, 2, 1.0, 1.0}, {4, 3, 2.0, 0.5}};
  Outcome o{true, ""};
  std::uint64_t label = 1;
  for (const auto& P : pairs) {
    McSpec mc;
    mc.sample_count = kDualitySamples;
    const double R = 7.0 / std::sqrt(std::min(P.a, P.b));
    // (fhat, phi) over the affine Grassmannian.
    const auto lhs = integrate_affine(
        [&](const AffinePlane& t) {
          const double s = t.distance_to_origin();
          return oracle::gaussian_kplane(P.a, P.k, s) * std::exp(-P.b * s * s);
        },
        P.n, P.k, R, mc.derived(label++));
    // (f, phi-check) over R^n, with phi-check tabulated from its radial formula.
    const auto phi = RadialProfile::gaussian(P.n - P.k, P.b);
    std::vector<double> rs(401), vs(401);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      rs[i] = R * std::max(static_cast<double>(i), 1e-6) / 400.0;
      vs[i] = dual_radial(phi, P.n, P.k, rs[i]);
    }
    const SampledFunction1D check(rs, vs, Extrapolation::power_law(0.0), Extrapolation::zero());
    const double vol = oracle::ball_volume(P.n) * std::pow(R, P.n);
    const auto rhs = run_mc(mc.derived(label++), [&](Rng& rng) {
      const Eigen::VectorXd x = random_point(P.n, R, rng);
      return vol * std::exp(-P.a * x.squaredNorm()) * check(x.norm());
    });
    const double sigma = std::hypot(lhs.std_error, rhs.std_error);
    const double z = sigma > 0 ? std::abs(lhs.estimate - rhs.estimate) / sigma : kInf;
    o.pass = o.pass && z <= kDualitySigmas;
    o.detail += "(" + std::to_string(P.n) + "," + std::to_string(P.k) + ") z=" + fmt("%.2f", z) + "; ";
  }
  return o;
}

// ---------------------------------------------------------------- 4
constexpr std::size_t kConvSamples = 100000;
constexpr double kConvSigmas = 3.0;

Outcome convolution_identity() {
  const int n = 2, k = 1;
  const auto w = build_wavelet(example_wavelet(n, k)).w;
  const auto psi = psi_from_w(w, n, k);
  Rng rng = make_stream(4, 0);
  std::vector<Eigen::VectorXd> xs;
  for (int i = 0; i < 10; ++i) xs.push_back(random_point(n, 1.5, rng));
  McSpec mc;
  mc.sample_count = kConvSamples;
  double zmax = 0.0;
  std::uint64_t label = 1;
  for (double t : {0.25, 0.5, 1.0})
    for (const auto& x : xs) {
      const auto est = w_star([](const AffinePlane& tau) { return oracle::gaussian_kplane(1.0, 1, tau.distance_to_origin()); }, w, t, x, n, k,
                              mc.derived(label++));
      const double ref = oracle::convolution_2d([](double a, double b) { return std::exp(-(a * a + b * b)); },
                                                [&](double r) { return std::pow(t, -n) * psi(r / t); }, x(0), x(1),
                                                {0.0, 0.25 * t, t, 2.0 * t, 4.0, 8.0});
      zmax = std::max(zmax, std::abs(est.estimate - ref) / est.std_error);
    }
  return {zmax <= kConvSigmas, "30 probes, max |z| = " + fmt("%.2f", zmax)};
}

// ---------------------------------------------------------------- 5
Outcome ridgelet_factorization() {
  ReconConfig c;
  c.mode = ReconConfig::Mode::ridgelet;
  c.wavelet = example_wavelet(2, 1);
  c.wavelet.N1 = 1;
  c.wavelet.N2 = 1;
  c.eps_schedule = {0.1};
  c.grid.cells = 32;
  c.probe_count = 5;
  c.factorization_scales = {0.25, 0.5, 1.0};
  c.mc.sample_count = 40000;
  const auto rep = reconstruct(c);
  double zmax = 0.0;
  int count = 0;
  for (const auto& p : rep.probes)
    if (p.quantity == "factorization") {
      zmax = std::max(zmax, std::abs(p.value - p.reference) / p.combined_error);
      ++count;
    }
  return {rep.factorization_ok && count > 0, std::to_string(count) + " probes, max |z| = " + fmt("%.2f", zmax)};
}

// ---------------------------------------------------------------- 6
constexpr double kLimitLinf = 0.01;

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

Outcome reconstruction_limit() {
  ReconConfig c;
  c.mode = ReconConfig::Mode::limit;
  c.wavelet = example_wavelet(2, 1);
  c.grid.cells = 256;
  c.t_schedule = {0.8, 0.4, 0.2, 0.1, 0.05};
  c.spaces = {Lp{2.0}, Lorentz{2.0, 1.0}, VarExp{ExponentDescriptor::log_decay(1.5, 1.8)}};
  const auto rep = reconstruct(c);
  bool mono = true;
  std::string d;
  for (const auto& X : c.spaces) {
    std::vector<double> e;
    for (const auto& r : rep.rows)
      if (r.space == space_name(X) && r.scale >= 0.1) e.push_back(r.error);
    const bool m = strictly_decreasing(e);
    mono = mono && m;
    d += space_name(X) + (m ? " decreasing" : " not decreasing") + " (" + fmt("%.3g", e.front()) + " -> " + fmt("%.3g", e.back()) + "); ";
  }
  const double linf = rep.relative_pointwise_max.back();
  return {mono && linf <= kLimitLinf, d + "rel Linf at t=0.05: " + fmt("%.3g", linf) + ", c = " + fmt("%.4g", rep.constant_used)};
}

// ---------------------------------------------------------------- 7
constexpr double kScaleFinal = 0.02;
constexpr double kTildePsiGap = 1e-5;

Outcome reconstruction_scale_integral() {
  ReconConfig c;
  c.mode = ReconConfig::Mode::scale_integral;
  c.n = 3;
  c.k = 2;
  c.wavelet = example_wavelet(3, 2);
  c.grid.cells = 64;
  c.eps_schedule = {0.4, 0.2, 0.1, 0.05};
  c.probe_count = 0;
  const auto rep = reconstruct(c);
  std::vector<double> e;
  for (const auto& r : rep.rows) e.push_back(r.error);
  const double ref = rep.reference_norms.front().second;
  const double final_rel = e.back() / ref;
  return {strictly_decreasing(e) && final_rel <= kScaleFinal && rep.tilde_psi_route_gap <= kTildePsiGap,
          "(3,2) 64^3 L2 rel " + fmt("%.3g", e.front() / ref) + " -> " + fmt("%.3g", final_rel) + ", route gap " +
              fmt("%.2e", rep.tilde_psi_route_gap)};
}

// ---------------------------------------------------------------- 8
constexpr double kSlopeTol = 0.1;
constexpr double kIdentityResidual = 1e-4;

Outcome fractional_asymptotics() {
  const double alpha = 0.5, beta = 2.0;
  const auto rep = rl_asymptotics_report([](double s) { return (4.0 * s * s - 2.0) * std::exp(-s * s); }, alpha, beta);
  const double gamma = alpha - std::min(1.0 + alpha, beta);
  const bool ok = std::abs(rep.slope_at_zero - alpha) <= kSlopeTol && std::abs(rep.slope_at_infinity - gamma) <= kSlopeTol &&
                  rep.integral_identity_residual <= kIdentityResidual;
  return {ok, "slope at 0 " + fmt("%.3f", rep.slope_at_zero) + " (want " + fmt("%.2f", alpha) + "), at inf " +
                  fmt("%.3f", rep.slope_at_infinity) + " (want " + fmt("%.2f", gamma) + "), identity residual " +
                  fmt("%.2e", rep.integral_identity_residual)};
}

// ---------------------------------------------------------------- 9
Outcome lattice_suite() {
  Rng rng = make_stream(9, 0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_grid = [&](int dim, int cells) {
    auto g = GridFunction::cube(dim, 1.0, cells);
    for (double& v : g.values) v = u(rng);
    return g;
  };
  std::string d;
  bool ok = true;

  const auto f = random_grid(2, 24);
  double lorentz = 0.0, luxemburg = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    lorentz = std::max(lorentz, std::abs(norm(f, Lorentz{p, p}) - norm(f, Lp{p})) / norm(f, Lp{p}));
    luxemburg = std::max(luxemburg, std::abs(norm(f, VarExp{ExponentDescriptor::constant(p)}) - norm(f, Lp{p})) / norm(f, Lp{p}));
  }
  ok = ok && lorentz <= 1e-10 && luxemburg <= 1e-8;
  d += "Lorentz(p,p) " + fmt("%.1e", lorentz) + ", Luxemburg " + fmt("%.1e", luxemburg);

  const auto geom = GridFunction::cube(2, 1.0, 16);
  double muck = 0.0;
  for (double p : {1.0, 2.0, 3.5}) muck = std::max(muck, std::abs(muckenhoupt_constant(Lp{p}, geom) - 1.0));
  ok = ok && muck <= 1e-10;
  d += ", Muckenhoupt |C-1| " + fmt("%.1e", muck);

  const auto K = RadialProfile::gaussian(2);
  std::vector<std::vector<LayerTerm>> terms;
  std::vector<double> err;
  for (int N = 1; N <= 8; ++N) {
    terms.push_back(layer_cake(K, N));
    std::vector<double> pts{0.0};
    for (auto it = terms.back().rbegin(); it != terms.back().rend(); ++it) pts.push_back(it->r);
    pts.push_back(8.0);
    err.push_back(2.0 * oracle::pi * oracle::panels([&](double r) { return (K(r) - layer_cake_value(terms.back(), r)) * r; }, pts, 1e-12));
  }
  bool layer = strictly_decreasing(err);
  for (double r = 0.0; r <= 4.0; r += 0.01)
    for (std::size_t i = 0; i + 1 < terms.size(); ++i)
      layer = layer && layer_cake_value(terms[i], r) <= layer_cake_value(terms[i + 1], r) + 1e-15 &&
              layer_cake_value(terms[i + 1], r) <= K(r) + 1e-15;
  ok = ok && layer;
  d += layer ? ", layer cake monotone" : ", layer cake NOT monotone";

  double sum_gap = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    auto g = trial % 2 ? GridFunction::cube(1, 1.0, 4) : GridFunction::cube(2, 1.0, 2);
    for (double& v : g.values) v = 3.0 * u(rng);
    for (double p : {1.5, 2.0, 3.0})
      sum_gap = std::max(sum_gap, std::abs(norm(g, Sum{p}) - oracle::sum_space_bruteforce(g.values, g.cell_volume(), p)));
  }
  ok = ok && sum_gap <= 1e-9;
  d += ", sum space " + fmt("%.1e", sum_gap);
  return {ok, d};
}

// ---------------------------------------------------------------- 10
constexpr double kSolmonSeconds = 5.0;

Outcome solmon_divergence() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  int cases = 0;
  for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 3}}) {
    const double crit = static_cast<double>(n) / k;
    auto profile = [n](double p) {
      const double e = n / p;
      return RadialProfile::analytic(n, [e](double t) { return std::pow(2.0 + t, -e) / std::log(2.0 + t); }, "solmon");
    };
    for (double p : {crit, 1.25 * crit, 2.0 * crit}) {
      ok = ok && !kplane_radial_checked(profile(p), k, 0.0).converged;
      ++cases;
    }
    for (double p : {0.5 * (1.0 + crit), 0.9 * crit}) {
      if (!(p >= 1.0 && p < crit)) continue;
      ok = ok && kplane_radial_checked(profile(p), k, 0.0).converged;
      ++cases;
    }
  }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {ok && sec < kSolmonSeconds, std::to_string(cases) + " cases" + fmt(", %.2fs", sec)};
}

// ---------------------------------------------------------------- 11
Outcome determinism() {
  const std::string root = RIDGELET_SOURCE_DIR;
  ReconConfig c = cli::parse_recon_config(cli::read_json(root + "/configs/golden.json"));
  std::vector<std::string> conv, probes;
  for (int threads : {1, 2, 4}) {
    c.mc.threads = threads;
    const auto rep = reconstruct(c);
    conv.push_back(convergence_report_csv(rep));
    probes.push_back(probe_report_csv(rep));
  }
  bool same = true;
  for (std::size_t i = 1; i < conv.size(); ++i) same = same && conv[i] == conv[0] && probes[i] == probes[0];
  const bool golden = conv[0] == cli::read_text(root + "/tests/golden/convergence.csv") &&
                      probes[0] == cli::read_text(root + "/tests/golden/probes.csv");
  return {same && golden, std::string(same ? "threads 1/2/4 identical" : "threads differ") + (golden ? ", matches golden CSV" : ", golden CSV mismatch")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"constant cross-route", constant_cross_route},
      {"Gaussian k-plane transform", gaussian_kplane},
      {"duality", duality},
      {"convolution identity", convolution_identity},
      {"ridgelet factorization", ridgelet_factorization},
      {"reconstruction limit", reconstruction_limit},
      {"scale-integral reconstruction", reconstruction_scale_integral},
      {"fractional-integral asymptotics", fractional_asymptotics},
      {"lattice norm suite", lattice_suite},
      {"Solmon divergence", solmon_divergence},
      {"determinism", determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: acceptance [criterion 1..%zu ...]\n", criteria.size());
      return 2;
    }
    selected.push_back(id);
  }
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);

  bool all = true;
  for (int id : selected) {
    const auto& [name, run] = criteria[static_cast<std::size_t>(id - 1)];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s  %s: %s [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), sec);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
