#pragma once

// JSON and CSV readers for the command-line tool. Every object is checked
// against its list of known keys; anything unexpected is a ConfigError.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ridgelet/ridgelet.hpp"

namespace ridgelet::cli {

using nlohmann::json;

/// Malformed input: bad JSON, unknown keys, wrong types, unreadable files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void require_object(const json& j, const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + ": expected a JSON object");
}

inline void check_keys(const json& j, const std::vector<std::string>& allowed, const std::string& what) {
  require_object(j, what);
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) throw ConfigError(what + ": unknown key '" + key + "'");
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& what) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(what + ": key '" + key + "' has the wrong type");
  }
}

inline double parse_number(const std::string& s, const std::string& what) {
  if (s == "inf" || s == "infinity") return kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ConfigError(what + ": cannot read number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(what + ": cannot read number '" + s + "'");
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

// ---------------------------------------------------------------- exponents

inline ExponentDescriptor parse_exponent(const json& j) {
  check_keys(j, {"form", "p", "p_inf", "p0", "c_star"}, "exponent");
  const auto form = get_or<std::string>(j, "form", "log_decay", "exponent");
  if (form == "constant") {
    if (!j.contains("p")) throw ConfigError("exponent: constant form needs 'p'");
    return ExponentDescriptor::constant(get_or<double>(j, "p", 2.0, "exponent"));
  }
  if (form == "log_decay") {
    if (!j.contains("p_inf") || !j.contains("p0")) throw ConfigError("exponent: log_decay form needs 'p_inf' and 'p0'");
    return ExponentDescriptor::log_decay(get_or<double>(j, "p_inf", 2.0, "exponent"), get_or<double>(j, "p0", 2.0, "exponent"),
                                         get_or<double>(j, "c_star", 1.0, "exponent"));
  }
  throw ConfigError("exponent: unknown form '" + form + "'");
}

inline json exponent_json(const ExponentDescriptor& e) {
  if (e.form == ExponentDescriptor::Form::constant) return {{"form", "constant"}, {"p", e.p_const}};
  return {{"form", "log_decay"}, {"p_inf", e.p_inf}, {"p0", e.p0}, {"c_star", e.c_star}};
}

/// "lp:2", "lp:inf", "lorentz:2,1", "varexp:1.5,1.8[,c]", "varexp:file.json", "morrey:2,4", "sum:3".
inline LatticeSpace parse_space(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("space '" + text + "': expected name:parameters");
  const std::string name = text.substr(0, colon), rest = text.substr(colon + 1);
  const std::string what = "space '" + text + "'";
  auto nums = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> v;
    for (const auto& p : split(rest, ',')) v.push_back(parse_number(p, what));
    if (v.size() < lo || v.size() > hi) throw ConfigError(what + ": wrong number of parameters");
    return v;
  };
  LatticeSpace X;
  if (name == "lp") {
    X = Lp{nums(1, 1)[0]};
  } else if (name == "lorentz") {
    const auto v = nums(2, 2);
    X = Lorentz{v[0], v[1]};
  } else if (name == "varexp") {
    const bool is_file = rest.size() > 5 && rest.substr(rest.size() - 5) == ".json";
    if (is_file) {
      X = VarExp{parse_exponent(read_json(rest))};
    } else {
      const auto v = nums(1, 3);
      X = v.size() == 1 ? VarExp{ExponentDescriptor::constant(v[0])}
                        : VarExp{ExponentDescriptor::log_decay(v[0], v[1], v.size() == 3 ? v[2] : 1.0)};
    }
  } else if (name == "morrey") {
    const auto v = nums(2, 2);
    X = Morrey{v[0], v[1]};
  } else if (name == "sum") {
    X = Sum{nums(1, 1)[0]};
  } else {
    throw ConfigError(what + ": unknown space '" + name + "'");
  }
  validate_space(X);
  return X;
}

// ---------------------------------------------------------------- wavelets

/// Wavelet object. Kinds: example {N1, N2, scale}, gaussian_poly {coeffs, scale, dim},
/// gaussian {scale}, zero. The wavelet lives on R^{n-k}; the example kind defaults
/// to N1 = 0, N2 = [k/2] + 1.
inline WaveletSpec parse_wavelet(const json& j, int n, int k, const std::vector<std::string>& extra_keys = {}) {
  const int m = n - k;
  std::vector<std::string> keys{"kind", "N1", "N2", "scale", "coeffs", "dim"};
  keys.insert(keys.end(), extra_keys.begin(), extra_keys.end());
  check_keys(j, keys, "wavelet");
  const std::string what = "wavelet";
  const auto kind = get_or<std::string>(j, "kind", "example", what);
  WaveletSpec s;
  s.m = m;
  s.scale = get_or<double>(j, "scale", 1.0, what);
  if (!(s.scale > 0)) throw ConfigError("wavelet: scale must be positive");
  const int dim = get_or<int>(j, "dim", m, what);
  if (dim != m) throw ConfigError("wavelet: dim " + std::to_string(dim) + " does not match n - k = " + std::to_string(m));
  if (kind == "example") {
    s.kind = "example";
    s.N1 = get_or<int>(j, "N1", 0, what);
    s.N2 = get_or<int>(j, "N2", k / 2 + 1, what);
    if (s.N1 < 0 || s.N2 < 0) throw ConfigError("wavelet: N1 and N2 must be non-negative");
    if (j.contains("coeffs")) throw ConfigError("wavelet: 'coeffs' is not used by the example kind");
    return s;
  }
  if (j.contains("N1") || j.contains("N2")) throw ConfigError("wavelet: N1/N2 only apply to the example kind");
  s.kind = "gaussian_poly";
  if (kind == "gaussian_poly") {
    if (!j.contains("coeffs")) throw ConfigError("wavelet: gaussian_poly needs 'coeffs'");
    s.profile = GaussianPolyProfile{get_or<std::vector<double>>(j, "coeffs", {}, what), s.scale, m};
  } else if (kind == "gaussian") {
    s.profile = GaussianPolyProfile{{1.0}, s.scale, m};
  } else if (kind == "zero") {
    s.profile = GaussianPolyProfile{{}, s.scale, m};
  } else {
    throw ConfigError("wavelet: unknown kind '" + kind + "'");
  }
  return s;
}

inline json wavelet_json(const WaveletSpec& s) {
  if (s.kind == "example") return {{"kind", "example"}, {"N1", s.N1}, {"N2", s.N2}, {"scale", s.scale}, {"dim", s.m}};
  return {{"kind", "gaussian_poly"}, {"coeffs", s.profile ? s.profile->coeffs : std::vector<double>{}}, {"scale", s.scale}, {"dim", s.m}};
}

/// Stand-alone wavelet file: the wavelet keys plus the ambient pair n, k.
/// Values given on the command line take precedence.
struct WaveletFile {
  int n = 0, k = 0;
  WaveletSpec spec;
};

inline WaveletFile parse_wavelet_file(const json& j, int n_override, int k_override) {
  require_object(j, "wavelet");
  WaveletFile w;
  w.n = n_override > 0 ? n_override : get_or<int>(j, "n", 0, "wavelet");
  w.k = k_override > 0 ? k_override : get_or<int>(j, "k", 0, "wavelet");
  if (w.n <= 0 || w.k <= 0) throw ConfigError("wavelet: n and k must be given (in the file or with --n/--k)");
  if (w.k >= w.n) throw ConfigError("wavelet: need 1 <= k < n");
  w.spec = parse_wavelet(j, w.n, w.k, {"n", "k"});
  return w;
}

// ---------------------------------------------------------------- grids

/// {"center": [...], "half_width": [...], "cells": [...], "values": [...]}, values in row-major order.
inline GridFunction parse_grid(const json& j) {
  check_keys(j, {"center", "half_width", "cells", "values"}, "grid");
  for (const char* key : {"half_width", "cells", "values"})
    if (!j.contains(key)) throw ConfigError(std::string("grid: missing '") + key + "'");
  const auto hw = get_or<std::vector<double>>(j, "half_width", {}, "grid");
  const auto cells = get_or<std::vector<int>>(j, "cells", {}, "grid");
  const auto center = get_or<std::vector<double>>(j, "center", std::vector<double>(hw.size(), 0.0), "grid");
  GridFunction g = GridFunction::zeros(center, hw, cells);
  auto vals = get_or<std::vector<double>>(j, "values", {}, "grid");
  if (vals.size() != g.values.size())
    throw ConfigError("grid: expected " + std::to_string(g.values.size()) + " values, got " + std::to_string(vals.size()));
  g.values = std::move(vals);
  return g;
}

inline json grid_json(const GridFunction& g) {
  return {{"center", g.center}, {"half_width", g.half_width}, {"cells", g.cells}, {"values", g.values}};
}

/// CSV with a header; the last column is the value and the others are the
/// coordinates of cell centres on a uniform tensor grid.
inline GridFunction parse_grid_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("grid csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::size_t cols = split(line, ',').size();
  if (cols < 2) throw ConfigError("grid csv: need at least one coordinate column and a value column");
  const int n = static_cast<int>(cols) - 1;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != cols) throw ConfigError("grid csv: row with " + std::to_string(parts.size()) + " fields");
    std::vector<double> r;
    for (const auto& p : parts) r.push_back(parse_number(p, "grid csv"));
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ConfigError("grid csv: no data rows");
  std::vector<double> center(n), hw(n);
  std::vector<int> cells(n);
  std::vector<std::vector<double>> axes(n);
  for (int a = 0; a < n; ++a) {
    auto& ax = axes[a];
    for (const auto& r : rows) ax.push_back(r[a]);
    std::sort(ax.begin(), ax.end());
    ax.erase(std::unique(ax.begin(), ax.end(), [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x)); }),
             ax.end());
    cells[a] = static_cast<int>(ax.size());
    const double h = ax.size() > 1 ? (ax.back() - ax.front()) / (ax.size() - 1) : 1.0;
    for (std::size_t i = 1; i < ax.size(); ++i)
      if (std::abs(ax[i] - ax[i - 1] - h) > 1e-6 * h) throw ConfigError("grid csv: coordinates are not uniformly spaced");
    center[a] = 0.5 * (ax.front() + ax.back());
    hw[a] = 0.5 * (ax.back() - ax.front()) + 0.5 * h;
  }
  GridFunction g = GridFunction::zeros(center, hw, cells);
  if (rows.size() != g.values.size()) throw ConfigError("grid csv: rows do not cover a full tensor grid");
  std::vector<char> seen(g.values.size(), 0);
  std::array<int, 8> mi{};
  for (const auto& r : rows) {
    for (int a = 0; a < n; ++a) mi[a] = static_cast<int>(std::lround((r[a] - axes[a].front()) / g.spacing(a)));
    const std::size_t idx = g.flat_index(mi.data());
    if (seen[idx]) throw ConfigError("grid csv: duplicate cell");
    seen[idx] = 1;
    g.values[idx] = r[n];
  }
  return g;
}

inline GridFunction read_grid(const std::string& path) {
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") return parse_grid_csv(read_text(path));
  return parse_grid(read_json(path));
}

// ---------------------------------------------------------------- phantoms

inline PhantomSpec parse_phantom(const json& j, int n) {
  check_keys(j, {"kind", "width", "radius", "amplitude", "p", "grid"}, "phantom");
  const std::string what = "phantom";
  PhantomSpec p;
  const auto kind = get_or<std::string>(j, "kind", "gaussian", what);
  p.amplitude = get_or<double>(j, "amplitude", 1.0, what);
  if (kind == "gaussian") {
    p.kind = PhantomSpec::Kind::gaussian;
    p.width = get_or<double>(j, "width", 1.0, what);
  } else if (kind == "ball") {
    p.kind = PhantomSpec::Kind::ball;
    p.radius = get_or<double>(j, "radius", 1.0, what);
  } else if (kind == "solmon") {
    p.kind = PhantomSpec::Kind::solmon;
    if (!j.contains("p")) throw ConfigError("phantom: solmon kind needs 'p'");
    p.solmon_p = get_or<double>(j, "p", 1.0, what);
  } else if (kind == "grid") {
    p.kind = PhantomSpec::Kind::grid;
    if (!j.contains("grid")) throw ConfigError("phantom: grid kind needs 'grid'");
    const json& g = j.at("grid");
    p.grid = g.is_string() ? read_grid(g.get<std::string>()) : parse_grid(g);
    if (p.grid->n != n) throw ConfigError("phantom: grid dimension does not match n");
  } else {
    throw ConfigError("phantom: unknown kind '" + kind + "'");
  }
  return p;
}

inline json phantom_json(const PhantomSpec& p) {
  json j{{"kind", phantom_kind_name(p.kind)}, {"amplitude", p.amplitude}};
  switch (p.kind) {
    case PhantomSpec::Kind::gaussian: j["width"] = p.width; break;
    case PhantomSpec::Kind::ball: j["radius"] = p.radius; break;
    case PhantomSpec::Kind::solmon: j["p"] = p.solmon_p; break;
    case PhantomSpec::Kind::grid: j["grid"] = grid_json(*p.grid); break;
  }
  return j;
}

// ---------------------------------------------------------------- Monte Carlo

inline void apply_mc(const json& j, McSpec& mc) {
  check_keys(j, {"samples", "seed", "streams"}, "mc");
  mc.sample_count = get_or<std::size_t>(j, "samples", mc.sample_count, "mc");
  mc.seed = get_or<std::uint64_t>(j, "seed", mc.seed, "mc");
  mc.stream_count = get_or<int>(j, "streams", mc.stream_count, "mc");
}

inline json mc_json(const McSpec& mc) { return {{"samples", mc.sample_count}, {"seed", mc.seed}, {"streams", mc.stream_count}}; }

// ---------------------------------------------------------------- reconstruction

inline ReconConfig::Mode parse_mode(const std::string& s) {
  if (s == "limit") return ReconConfig::Mode::limit;
  if (s == "scale_integral") return ReconConfig::Mode::scale_integral;
  if (s == "ridgelet") return ReconConfig::Mode::ridgelet;
  throw ConfigError("config: unknown mode '" + s + "'");
}

inline std::string mode_name(ReconConfig::Mode m) {
  switch (m) {
    case ReconConfig::Mode::limit: return "limit";
    case ReconConfig::Mode::scale_integral: return "scale_integral";
    default: return "ridgelet";
  }
}

inline ReconConfig parse_recon_config(const json& j) {
  check_keys(j,
             {"mode", "n", "k", "wavelet", "phantom", "t_schedule", "eps_schedule", "T", "log_points", "spaces", "mc", "grid",
              "probe_count", "factorization_scales", "restrict_fraction", "radial_nodes"},
             "config");
  const std::string what = "config";
  ReconConfig c;
  c.mode = parse_mode(get_or<std::string>(j, "mode", "limit", what));
  c.n = get_or<int>(j, "n", c.n, what);
  c.k = get_or<int>(j, "k", c.k, what);
  if (c.k < 1 || c.k >= c.n) throw ConfigError("config: need 1 <= k < n");
  c.wavelet = j.contains("wavelet") ? parse_wavelet(j.at("wavelet"), c.n, c.k) : example_wavelet(c.n, c.k);
  c.phantom = j.contains("phantom") ? parse_phantom(j.at("phantom"), c.n) : PhantomSpec{};
  c.t_schedule = get_or(j, "t_schedule", c.t_schedule, what);
  c.eps_schedule = get_or(j, "eps_schedule", c.eps_schedule, what);
  c.T = get_or(j, "T", c.T, what);
  c.log_points = get_or(j, "log_points", c.log_points, what);
  if (j.contains("spaces")) {
    c.spaces.clear();
    for (const auto& s : get_or<std::vector<std::string>>(j, "spaces", {}, what)) c.spaces.push_back(parse_space(s));
  }
  if (j.contains("mc")) apply_mc(j.at("mc"), c.mc);
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, {"half_width", "cells"}, "config.grid");
    c.grid.half_width = get_or(g, "half_width", c.grid.half_width, "config.grid");
    c.grid.cells = get_or(g, "cells", c.grid.cells, "config.grid");
  }
  c.probe_count = get_or(j, "probe_count", c.probe_count, what);
  c.factorization_scales = get_or(j, "factorization_scales", c.factorization_scales, what);
  c.restrict_fraction = get_or(j, "restrict_fraction", c.restrict_fraction, what);
  c.radial_nodes = get_or(j, "radial_nodes", c.radial_nodes, what);
  return c;
}

inline json recon_config_json(const ReconConfig& c) {
  json spaces = json::array();
  for (const auto& X : c.spaces) spaces.push_back(space_name(X));
  return {{"mode", mode_name(c.mode)},
          {"n", c.n},
          {"k", c.k},
          {"wavelet", wavelet_json(c.wavelet)},
          {"phantom", phantom_json(c.phantom)},
          {"t_schedule", c.t_schedule},
          {"eps_schedule", c.eps_schedule},
          {"T", c.T},
          {"log_points", c.log_points},
          {"spaces", spaces},
          {"mc", mc_json(c.mc)},
          {"grid", {{"half_width", c.grid.half_width}, {"cells", c.grid.cells}}},
          {"probe_count", c.probe_count},
          {"factorization_scales", c.factorization_scales},
          {"restrict_fraction", c.restrict_fraction},
          {"radial_nodes", c.radial_nodes}};
}

}  // namespace ridgelet::cli
