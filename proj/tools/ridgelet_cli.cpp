// ridgelet-cli: reproducible experiments on top of the header-only library.
//
// Exit codes: 0 success, 1 property failure, 2 usage or config error,
// 3 numeric divergence.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config_io.hpp"

namespace fs = std::filesystem;
using namespace ridgelet;
using namespace ridgelet::cli;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Globals {
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string out_dir = "out";
  std::string config;
  std::optional<std::size_t> samples;
  std::optional<int> streams;
};

/// Output directory bookkeeping; the manifest is written once, at the end.
class Run {
 public:
  Run(std::string command, const Globals& g, std::vector<std::string> args)
      : command_(std::move(command)), globals_(g), args_(std::move(args)), start_(std::chrono::steady_clock::now()) {}

  void open(const std::string& dir) {
    dir_ = dir;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  }
  bool is_open() const { return !dir_.empty(); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + (dir_ / name).string() + "'");
    out << content;
    outputs_.push_back(name);
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  json config_echo;
  std::optional<std::uint64_t> seed_used;

  void finish(int code, const std::string& error) {
    if (!is_open()) return;
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m{{"command", command_},
           {"version", kVersion},
           {"arguments", args_},
           {"config", config_echo},
           {"seed", seed_used ? json(*seed_used) : json(nullptr)},
           {"threads", globals_.threads},
           {"wall_time_s", wall},
           {"exit_code", code},
           {"outputs", outputs_}};
    if (!error.empty()) m["error"] = error;
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << m.dump(2) << "\n";
  }

 private:
  std::string command_;
  Globals globals_;
  std::vector<std::string> args_;
  std::chrono::steady_clock::time_point start_;
  fs::path dir_;
  std::vector<std::string> outputs_;
};

void apply_globals(const Globals& g, McSpec& mc) {
  if (g.seed) mc.seed = *g.seed;
  if (g.samples) mc.sample_count = *g.samples;
  if (g.streams) mc.stream_count = *g.streams;
  mc.threads = g.threads;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ------------------------------------------------------------------ wavelet commands

struct WaveletArgs {
  std::string file;
  int n = 0, k = 0;
  double beta = 0.0;
};

WaveletFile load_wavelet(const WaveletArgs& a, const Globals& g) {
  const std::string path = a.file.empty() ? g.config : a.file;
  if (path.empty()) throw ConfigError("no wavelet given (use --wavelet FILE or --config FILE)");
  return parse_wavelet_file(read_json(path), a.n, a.k);
}

json wavelet_echo(const WaveletFile& wf) {
  json j = wavelet_json(wf.spec);
  j["n"] = wf.n;
  j["k"] = wf.k;
  return j;
}

json admissibility_json(const AdmissibilityReport& r) {
  json sm = json::object(), am = json::object();
  for (const auto& [j, v] : r.signed_moments) sm[std::to_string(j)] = finite_or_null(v);
  for (const auto& [j, v] : r.abs_moments) am[std::to_string(j)] = finite_or_null(v);
  return {{"n", r.n},
          {"k", r.k},
          {"beta", r.beta},
          {"signed_moments", sm},
          {"abs_moments", am},
          {"decay_integral", finite_or_null(r.decay_integral)},
          {"local_integral", finite_or_null(r.local_integral)},
          {"i0", finite_or_null(r.i0)},
          {"moment_tol", r.moment_tol},
          {"degenerate", r.degenerate},
          {"passed", r.passed}};
}

AdmissibilityReport admissibility_of(const WaveletFile& wf, const RadialProfile& w, double beta) {
  return check_admissibility(w, wf.n, wf.k, beta > 0 ? std::optional<double>(beta) : std::nullopt);
}

int cmd_admissibility(const WaveletArgs& a, const Globals& g, Run& run) {
  const WaveletFile wf = load_wavelet(a, g);
  run.config_echo = wavelet_echo(wf);
  const auto parts = build_wavelet(wf.spec);
  const auto rep = admissibility_of(wf, parts.w, a.beta);
  const json out = admissibility_json(rep);
  run.write_json("admissibility.json", out);
  std::cout << out.dump(2) << "\n";
  return rep.passed ? 0 : 1;
}

json routes_json(const ConstantRoutes& c) {
  return {{"c_routeA", c.c_routeA},       {"c_routeB", c.c_routeB},
          {"c_routeC", c.c_routeC},       {"relative_gap", c.relative_gap},
          {"branch", c.branch},           {"degenerate", c.degenerate},
          {"lambda_tail", c.lambda_tail}, {"lambda_tail_exponent", c.lambda_tail_exponent}};
}

int cmd_constant(const WaveletArgs& a, const Globals& g, Run& run) {
  const WaveletFile wf = load_wavelet(a, g);
  run.config_echo = wavelet_echo(wf);
  const auto parts = build_wavelet(wf.spec);
  const auto adm = admissibility_of(wf, parts.w, a.beta);
  if (!adm.passed && !adm.degenerate) {
    const json out{{"error", "wavelet is not admissible"}, {"admissibility", admissibility_json(adm)}};
    run.write_json("constant.json", out);
    std::cout << out.dump(2) << "\n";
    return 1;
  }
  const auto c = constant_routes(parts.w, wf.n, wf.k);
  const json out = routes_json(c);
  run.write_json("constant.json", out);
  std::cout << out.dump(2) << "\n";
  return c.relative_gap <= 1e-5 ? 0 : 1;
}

struct KernelArgs {
  WaveletArgs w;
  int points = 200;
  double r_min = 1e-3, r_max = 20.0;
};

int cmd_kernels(const KernelArgs& a, const Globals& g, Run& run) {
  const WaveletFile wf = load_wavelet(a.w, g);
  json echo = wavelet_echo(wf);
  echo["points"] = a.points;
  echo["r_min"] = a.r_min;
  echo["r_max"] = a.r_max;
  run.config_echo = echo;
  if (!(a.r_min > 0 && a.r_max > a.r_min) || a.points < 2) throw ConfigError("kernels: need 0 < r_min < r_max and points >= 2");
  const auto parts = build_wavelet(wf.spec);
  const auto adm = admissibility_of(wf, parts.w, a.w.beta);
  if (!adm.passed && !adm.degenerate) {
    const json out{{"error", "wavelet is not admissible"}, {"admissibility", admissibility_json(adm)}};
    run.write_json("kernels.json", out);
    std::cout << out.dump(2) << "\n";
    return 1;
  }
  const PsiKernel psi = psi_from_w(parts.w, wf.n, wf.k);
  const auto rs = log_grid(a.r_min, a.r_max, static_cast<std::size_t>(a.points));
  std::string csv = "r,psi,lambda,tilde_psi\n";
  json out;
  if (adm.degenerate) {
    for (double r : rs) csv += format_double(r) + ",0.0000000000e+00,0.0000000000e+00,0.0000000000e+00\n";
    out = routes_json(constant_routes(parts.w, wf.n, wf.k));
    out["majorant_l1"] = 0.0;
  } else {
    const auto c = recon_constant(parts.w, wf.n, wf.k);
    const TildePsi tp = detail::build_tilde_psi(psi);
    for (double r : rs)
      csv += format_double(r) + "," + format_double(psi(r)) + "," + format_double(tp.lambda(r)) + "," + format_double(tp(r)) + "\n";
    out = routes_json(c);
    const auto maj = majorant_check(psi);
    out["majorant_l1"] = maj.majorant_l1;
    out["is_majorizable"] = maj.is_majorizable;
    out["tilde_psi_majorant_l1"] = majorant_check(tp).majorant_l1;
    out["tilde_psi_route_gap"] = tp.max_route_gap;
    out["psi_tail_exponent"] = finite_or_null(psi.tail_exponent);
  }
  run.write("kernels.csv", csv);
  run.write_json("kernels.json", out);
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ------------------------------------------------------------------ radon

struct RadonArgs {
  std::string phantom = "gaussian";
  double width = 1.0, radius = 1.0, amplitude = 1.0;
  int n = 2, k = 1;
  std::vector<double> t;
  double s_max = 3.0;
  int points = 61;
  int probes = 5;
  std::string wavelet;
};

PhantomSpec radon_phantom(const RadonArgs& a) {
  PhantomSpec p;
  p.amplitude = a.amplitude;
  if (a.phantom == "gaussian") {
    p.kind = PhantomSpec::Kind::gaussian;
    p.width = a.width;
  } else if (a.phantom == "ball") {
    p.kind = PhantomSpec::Kind::ball;
    p.radius = a.radius;
  } else {
    p = parse_phantom(read_json(a.phantom), a.n);
  }
  return p;
}

/// Adds the phantom's decay condition to a divergence message.
[[noreturn]] void rethrow_divergence(const DivergenceError& e, const PhantomSpec& p, int n, int k) {
  if (p.kind == PhantomSpec::Kind::solmon) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "slowly decaying phantom with p = %g >= n/k = %g: ", p.solmon_p, static_cast<double>(n) / k);
    throw DivergenceError(buf + std::string(e.what()));
  }
  throw e;
}

int cmd_radon(const RadonArgs& a, const Globals& g, Run& run) {
  if (a.k < 1 || a.k >= a.n) throw ConfigError("radon: need 1 <= k < n");
  if (a.points < 2 || !(a.s_max > 0) || a.probes < 1) throw ConfigError("radon: need points >= 2, s_max > 0, probes >= 1");
  const PhantomSpec ps = radon_phantom(a);
  ReconConfig cfg;
  cfg.n = a.n;
  cfg.k = a.k;
  cfg.phantom = ps;
  cfg.probe_count = a.probes;
  cfg.wavelet = a.wavelet.empty() ? example_wavelet(a.n, a.k) : parse_wavelet_file(read_json(a.wavelet), a.n, a.k).spec;
  apply_globals(g, cfg.mc);
  run.seed_used = cfg.mc.seed;
  run.config_echo = {{"n", a.n},      {"k", a.k},       {"phantom", phantom_json(ps)}, {"t", a.t},
                     {"s_max", a.s_max}, {"points", a.points}, {"probes", a.probes},    {"mc", mc_json(cfg.mc)},
                     {"wavelet", wavelet_json(cfg.wavelet)}};
  const Phantom ph(ps, a.n);

  std::string sino = "s,fhat\n";
  std::vector<double> fh;
  try {
    for (int i = 0; i < a.points; ++i) {
      const double s = a.s_max * i / (a.points - 1);
      double v;
      if (ph.radial()) {
        v = ph.kplane(a.k, s);
      } else {
        // Planes parallel to span(e_1..e_k) at offset s along e_n.
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(a.n, a.k);
        for (int j = 0; j < a.k; ++j) b(j, j) = 1.0;
        Eigen::VectorXd off = Eigen::VectorXd::Zero(a.n);
        off(a.n - 1) = s;
        v = kplane_numeric(*ps.grid, AffinePlane(LinearSubspace(b), off));
      }
      fh.push_back(v);
      sino += format_double(s) + "," + format_double(v) + "\n";
    }
  } catch (const DivergenceError& e) {
    rethrow_divergence(e, ps, a.n, a.k);
  }
  run.write("sinogram.csv", sino);
  json summary{{"fhat_at_0", fh.front()}, {"fhat_at_s_max", fh.back()}, {"points", a.points}};

  int code = 0;
  if (!a.t.empty()) {
    if (!ph.radial()) throw ConfigError("radon: --t needs a radial phantom");
    for (double t : a.t)
      if (!(t > 0)) throw ConfigError("radon: scales must be positive");
    const auto K = detail::build_kernels(cfg);
    const auto probes = detail::probe_points(cfg, 1.5 * (ps.kind == PhantomSpec::Kind::ball ? ps.radius : ps.width));
    std::string csv = "t,x_norm,w_star,stderr,convolution,within\n";
    std::uint64_t label = 1;
    double worst = 0.0;
    bool ok = true;
    for (double t : a.t)
      for (const auto& x : probes) {
        const auto est = w_star([&](const AffinePlane& tau) { return ph.kplane(a.k, tau.distance_to_origin()); }, K.parts.w, t, x,
                                a.n, a.k, cfg.mc.derived(label++));
        const double ref = detail::radial_smoothing(K.psi, kInf, ph, x.norm(), t);
        const double z = est.std_error > 0 ? std::abs(est.estimate - ref) / est.std_error : 0.0;
        const bool within = std::abs(est.estimate - ref) <= 3.0 * est.std_error;
        worst = std::max(worst, z);
        ok = ok && within;
        csv += format_double(t) + "," + format_double(x.norm()) + "," + format_double(est.estimate) + "," +
               format_double(est.std_error) + "," + format_double(ref) + "," + (within ? "1" : "0") + "\n";
      }
    run.write("backprojection.csv", csv);
    summary["backprojection_ok"] = ok;
    summary["max_z_score"] = worst;
    code = ok ? 0 : 1;
  }
  run.write_json("radon.json", summary);
  std::cout << summary.dump(2) << "\n";
  return code;
}

// ------------------------------------------------------------------ norms

struct NormArgs {
  std::string space;
  std::string input;
  int morrey_centers = 32;
};

int cmd_norms(const NormArgs& a, const Globals& g, Run& run) {
  const std::string path = a.input.empty() ? g.config : a.input;
  if (path.empty()) throw ConfigError("norms: no input grid (use --input FILE)");
  const LatticeSpace X = parse_space(a.space);
  const GridFunction f = read_grid(path);
  run.config_echo = {{"space", space_name(X)}, {"input", path}, {"morrey_centers", a.morrey_centers}};
  NormOptions opt;
  opt.morrey_centers_per_axis = a.morrey_centers;
  const double value = norm(f, X, opt);
  json diag{{"dim", f.n},
            {"cells", f.values.size()},
            {"cell_volume", f.cell_volume()},
            {"l1", norm(f, Lp{1.0})},
            {"linf", norm(f, Lp{kInf})}};
  if (const auto* s = std::get_if<Sum>(&X)) {
    double tau = 0.0;
    detail::sum_norm(f, s->p, &tau);
    diag["truncation_level"] = tau;
  } else if (const auto* v = std::get_if<VarExp>(&X)) {
    diag["p_minus"] = v->exponent.p_minus();
    diag["p_plus"] = v->exponent.p_plus();
    diag["exponent"] = exponent_json(v->exponent);
    if (value > 0) diag["modular_at_norm"] = varexp_modular(f, v->exponent, value);
  } else if (std::holds_alternative<Morrey>(X)) {
    diag["centers_per_axis"] = a.morrey_centers;
  }
  if (std::holds_alternative<Lp>(X) || std::holds_alternative<Lorentz>(X)) diag["associate_norm"] = finite_or_null(associate_norm(f, X));
  const json out{{"space", space_name(X)}, {"norm", finite_or_null(value)}, {"diagnostics", diag}};
  run.write_json("norms.json", out);
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ------------------------------------------------------------------ reconstruct / report

json report_json(const ConvergenceReport& r) {
  json spaces = json::object();
  for (const auto& row : r.rows) {
    auto& s = spaces[row.space];
    if (s.is_null()) s = json::array();
    s.push_back(row.error);
  }
  json decreasing = json::object();
  for (auto& [name, errs] : spaces.items()) {
    bool dec = true;
    for (std::size_t i = 1; i < errs.size(); ++i) dec = dec && errs[i].get<double>() < errs[i - 1].get<double>();
    decreasing[name] = dec;
  }
  json refs = json::object();
  for (const auto& [name, v] : r.reference_norms) refs[name] = v;
  return {{"mode", r.mode},
          {"scales", r.scales},
          {"errors", spaces},
          {"strictly_decreasing", decreasing},
          {"reference_norms", refs},
          {"pointwise_max", r.pointwise_max},
          {"relative_pointwise_max", r.relative_pointwise_max},
          {"calibration", r.calibration},
          {"constant_used", r.constant_used},
          {"routes", routes_json(r.routes)},
          {"restrict_fraction", r.restrict_fraction},
          {"tilde_psi_route_gap", r.tilde_psi_route_gap},
          {"tail_bound", r.tail_bound},
          {"factorization_ok", r.factorization_ok},
          {"probes_ok", r.probes_ok}};
}

int cmd_reconstruct(const Globals& g, Run& run) {
  if (g.config.empty()) throw ConfigError("reconstruct: --config FILE is required");
  ReconConfig cfg = parse_recon_config(read_json(g.config));
  apply_globals(g, cfg.mc);
  run.seed_used = cfg.mc.seed;
  run.config_echo = recon_config_json(cfg);
  ConvergenceReport rep;
  try {
    rep = reconstruct(cfg);
  } catch (const DivergenceError& e) {
    rethrow_divergence(e, cfg.phantom, cfg.n, cfg.k);
  }
  run.write("convergence.csv", convergence_report_csv(rep));
  run.write("probes.csv", probe_report_csv(rep));
  const json out = report_json(rep);
  run.write_json("report.json", out);
  std::cout << out.dump(2) << "\n";
  return rep.factorization_ok && rep.probes_ok ? 0 : 1;
}

/// Splits a CSV line, honouring double quotes.
std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    else if (c == ',' && !quoted) out.emplace_back();
    else out.back() += c;
  }
  return out;
}

int cmd_report(const std::string& input, Run& run) {
  const std::string text = read_text((fs::path(input) / "convergence.csv").string());
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line != "scale,space,error,stderr") throw ConfigError("report: unexpected convergence.csv header");
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv_fields(line);
    if (f.size() != 4) throw ConfigError("report: malformed row '" + line + "'");
    if (!series.count(f[1])) order.push_back(f[1]);
    series[f[1]].push_back({parse_number(f[0], "report"), parse_number(f[2], "report")});
  }
  json refs = json::object();
  const fs::path rj = fs::path(input) / "report.json";
  if (fs::exists(rj)) {
    const json r = read_json(rj.string());
    if (r.contains("reference_norms")) refs = r.at("reference_norms");
  }
  run.config_echo = {{"input", input}};
  std::string csv = "space,scales,first_error,last_error,relative_last_error,strictly_decreasing,loglog_slope\n";
  json out = json::array();
  bool all = true;
  for (const auto& name : order) {
    const auto& s = series[name];
    bool dec = true;
    for (std::size_t i = 1; i < s.size(); ++i) dec = dec && s[i].second < s[i - 1].second;
    all = all && dec;
    std::vector<double> xs, ys;
    for (const auto& [sc, e] : s) {
      xs.push_back(sc);
      ys.push_back(e);
    }
    const double slope = s.size() > 1 ? loglog_slope(xs, ys).value_or(std::numeric_limits<double>::quiet_NaN())
                                      : std::numeric_limits<double>::quiet_NaN();
    const double ref = refs.contains(name) ? refs.at(name).get<double>() : 0.0;
    const double rel = ref > 0 ? s.back().second / ref : std::numeric_limits<double>::quiet_NaN();
    csv += "\"" + name + "\"," + std::to_string(s.size()) + "," + format_double(s.front().second) + "," + format_double(s.back().second) +
           "," + (std::isfinite(rel) ? format_double(rel) : std::string("nan")) + "," + (dec ? "1" : "0") + "," +
           (std::isfinite(slope) ? format_double(slope) : std::string("nan")) + "\n";
    out.push_back({{"space", name},
                   {"first_error", s.front().second},
                   {"last_error", s.back().second},
                   {"relative_last_error", finite_or_null(rel)},
                   {"strictly_decreasing", dec},
                   {"loglog_slope", finite_or_null(slope)}});
  }
  run.write("summary.csv", csv);
  run.write_json("summary.json", out);
  std::cout << out.dump(2) << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radon transform, ridgelet reconstruction and lattice-norm experiments"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Monte Carlo seed");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "Directory for CSV/JSON outputs and the manifest");
  app.add_option("--config", g.config, "JSON config (wavelet file or reconstruction config)");
  app.add_option("--samples", g.samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
  app.add_option("--streams", g.streams, "Monte Carlo stream count")->check(CLI::PositiveNumber);

  WaveletArgs wa;
  auto add_wavelet_opts = [](CLI::App* sc, WaveletArgs& w) {
    sc->add_option("--wavelet", w.file, "Wavelet JSON file");
    sc->add_option("--n", w.n, "Ambient dimension (overrides the file)");
    sc->add_option("--k", w.k, "Plane dimension (overrides the file)");
    sc->add_option("--beta", w.beta, "Decay exponent for the admissibility check (default k + 1)");
  };
  auto* adm = app.add_subcommand("admissibility", "Check a wavelet for admissibility");
  add_wavelet_opts(adm, wa);
  auto* cst = app.add_subcommand("constant", "Reconstruction constant by three routes");
  add_wavelet_opts(cst, wa);

  KernelArgs ka;
  auto* ker = app.add_subcommand("kernels", "Tabulate psi, lambda and psi~");
  add_wavelet_opts(ker, ka.w);
  ker->add_option("--points", ka.points, "Number of radii");
  ker->add_option("--r-min", ka.r_min, "Smallest radius");
  ker->add_option("--r-max", ka.r_max, "Largest radius");

  RadonArgs ra;
  auto* rad = app.add_subcommand("radon", "Sinogram of a phantom and optional backprojection check");
  rad->add_option("--phantom", ra.phantom, "gaussian, ball, or a phantom JSON file");
  rad->add_option("--width", ra.width, "Gaussian width");
  rad->add_option("--radius", ra.radius, "Ball radius");
  rad->add_option("--amplitude", ra.amplitude, "Phantom amplitude");
  rad->add_option("--n", ra.n, "Ambient dimension");
  rad->add_option("--k", ra.k, "Plane dimension");
  rad->add_option("--t", ra.t, "Scales for the W_t* backprojection check");
  rad->add_option("--s-max", ra.s_max, "Largest plane distance in the sinogram");
  rad->add_option("--points", ra.points, "Sinogram samples");
  rad->add_option("--probes", ra.probes, "Probe points for the backprojection check");
  rad->add_option("--wavelet", ra.wavelet, "Wavelet JSON file (default: the minimal example wavelet)");

  NormArgs na;
  auto* nrm = app.add_subcommand("norms", "Norm of a grid function in a lattice space");
  nrm->add_option("--space", na.space, "lp:2 | lorentz:2,1 | varexp:1.5,1.8 | varexp:file.json | morrey:2,4 | sum:3")->required();
  nrm->add_option("--input", na.input, "Grid as JSON or CSV");
  nrm->add_option("--morrey-centers", na.morrey_centers, "Morrey ball centres per axis")->check(CLI::PositiveNumber);

  auto* rec = app.add_subcommand("reconstruct", "Run a reconstruction config");

  std::string report_input;
  auto* rpt = app.add_subcommand("report", "Summarise a reconstruct output directory");
  rpt->add_option("--input", report_input, "Output directory of a reconstruct run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  const auto* sub = app.get_subcommands().front();
  Run run(sub->get_name(), g, args);
  int code = 0;
  std::string error;
  try {
    std::string dir = g.out_dir;
    if (sub == rpt && app.get_option("--out-dir")->count() == 0) dir = (fs::path(report_input) / "report").string();
    run.open(dir);
    if (sub == adm) code = cmd_admissibility(wa, g, run);
    else if (sub == cst) code = cmd_constant(wa, g, run);
    else if (sub == ker) code = cmd_kernels(ka, g, run);
    else if (sub == rad) code = cmd_radon(ra, g, run);
    else if (sub == nrm) code = cmd_norms(na, g, run);
    else if (sub == rec) code = cmd_reconstruct(g, run);
    else code = cmd_report(report_input, run);
  } catch (const DivergenceError& e) {
    error = std::string("numeric divergence: ") + e.what();
    code = 3;
  } catch (const ConfigError& e) {
    error = e.what();
    code = 2;
  } catch (const UnsupportedSpace& e) {
    error = e.what();
    code = 2;
  } catch (const DomainError& e) {
    error = e.what();
    code = 2;
  } catch (const nlohmann::json::exception& e) {
    error = std::string("config: ") + e.what();
    code = 2;
  } catch (const PreconditionError& e) {
    error = e.what();
    code = 1;
  } catch (const ConsistencyError& e) {
    error = e.what();
    code = 1;
  } catch (const std::exception& e) {
    error = e.what();
    code = 1;
  }
  if (!error.empty()) std::cerr << "error: " << error << "\n";
  run.finish(code, error);
  return code;
}
