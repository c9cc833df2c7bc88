#include "eulerpeps/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>

#include "eulerpeps/bloch.hpp"
#include "eulerpeps/circuit.hpp"
#include "eulerpeps/entanglement.hpp"
#include "eulerpeps/error.hpp"
#include "eulerpeps/fock.hpp"
#include "eulerpeps/geometry.hpp"
#include "eulerpeps/peps.hpp"

namespace eulerpeps {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"bands",  "topology", "state",     "entanglement",
                                                 "circuit", "metric",  "verify-all"};
  return names;
}

// ---------------------------------------------------------------- config

namespace {

const char* mutation_name(Mutation m) {
  switch (m) {
    case Mutation::MapTensorSign: return "map_tensor_sign";
    case Mutation::GateSigma: return "gate_sigma";
    default: return "none";
  }
}

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  fail(ErrorCode::Config, path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) config_error(path, "expected an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) config_error(path + "." + k, "unknown key");
}

int get_int(const json& v, const std::string& path, int lo, int hi) {
  if (!v.is_number_integer()) config_error(path, "expected an integer");
  const auto x = v.get<long long>();
  if (x < lo || x > hi) config_error(path, "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(x);
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) config_error(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) config_error(path, "must be finite");
  return x;
}

double get_positive(const json& v, const std::string& path) {
  const double x = get_number(v, path);
  if (!(x > 0.0)) config_error(path, "must be positive");
  return x;
}

std::string get_enum(const json& v, const std::string& path, const std::vector<std::string>& options) {
  if (!v.is_string()) config_error(path, "expected a string");
  const auto s = v.get<std::string>();
  if (std::find(options.begin(), options.end(), s) == options.end()) config_error(path, "unsupported value '" + s + "'");
  return s;
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig c;
  reject_unknown(j, "config", {"command", "lattice", "model", "numerics", "output", "testing"});
  if (j.contains("command")) c.command = get_enum(j["command"], "config.command", command_names());
  if (j.contains("lattice")) {
    const json& l = j["lattice"];
    reject_unknown(l, "lattice", {"L1", "L2", "boundary"});
    if (l.contains("L1")) c.L1 = get_int(l["L1"], "lattice.L1", 2, 4096);
    if (l.contains("L2")) c.L2 = get_int(l["L2"], "lattice.L2", 2, 4096);
    if (l.contains("boundary"))
      c.boundary = parse_boundary(get_enum(l["boundary"], "lattice.boundary", {"torus", "cylinder", "cylinder-open-a1"}));
  }
  if (j.contains("model")) {
    const json& m = j["model"];
    reject_unknown(m, "model", {"mu", "alpha", "beta"});
    if (m.contains("mu")) c.mu = get_number(m["mu"], "model.mu");
    if (m.contains("alpha")) {
      c.alpha = get_number(m["alpha"], "model.alpha");
      if (c.alpha < 0.0 || c.alpha >= 2.0 * std::numbers::pi) config_error("model.alpha", "must lie in [0, 2π)");
    }
    if (m.contains("beta") && !m["beta"].is_null()) {
      const json& b = m["beta"];
      if (!b.is_array() || b.size() != 6) config_error("model.beta", "expected six [re, im] pairs");
      Beta beta;
      for (int p = 0; p < 6; ++p) {
        const std::string path = "model.beta[" + std::to_string(p) + "]";
        if (!b[p].is_array() || b[p].size() != 2) config_error(path, "expected [re, im]");
        beta[p] = {get_number(b[p][0], path), get_number(b[p][1], path)};
      }
      c.beta = beta;
    }
  }
  if (j.contains("numerics")) {
    const json& n = j["numerics"];
    reject_unknown(n, "numerics",
                   {"grid", "fd_step", "tolerance", "eps_max", "cut", "schmidt_L1", "schmidt_L2", "orientation"});
    if (n.contains("grid")) c.grid = get_int(n["grid"], "numerics.grid", 1, 4001);
    if (n.contains("fd_step")) c.fd_step = get_positive(n["fd_step"], "numerics.fd_step");
    if (n.contains("tolerance")) c.tolerance = get_positive(n["tolerance"], "numerics.tolerance");
    if (n.contains("eps_max")) c.eps_max = get_positive(n["eps_max"], "numerics.eps_max");
    if (n.contains("cut")) c.cut = get_int(n["cut"], "numerics.cut", 1, 4095);
    if (n.contains("schmidt_L1")) c.schmidt_L1 = get_int(n["schmidt_L1"], "numerics.schmidt_L1", 2, 8);
    if (n.contains("schmidt_L2")) c.schmidt_L2 = get_int(n["schmidt_L2"], "numerics.schmidt_L2", 2, 8);
    if (n.contains("orientation")) c.orientation = get_enum(n["orientation"], "numerics.orientation", {"k2xk1", "k1xk2"});
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    reject_unknown(o, "output", {"directory", "format"});
    if (o.contains("directory")) {
      if (!o["directory"].is_string() || o["directory"].get<std::string>().empty())
        config_error("output.directory", "expected a non-empty string");
      c.directory = o["directory"].get<std::string>();
    }
    if (o.contains("format")) c.format = get_enum(o["format"], "output.format", {"csv", "json"});
  }
  if (j.contains("testing")) {
    const json& t = j["testing"];
    reject_unknown(t, "testing", {"mutation"});
    if (t.contains("mutation")) {
      const auto s = get_enum(t["mutation"], "testing.mutation", {"none", "map_tensor_sign", "gate_sigma"});
      c.mutation = s == "map_tensor_sign" ? Mutation::MapTensorSign
                   : s == "gate_sigma"    ? Mutation::GateSigma
                                          : Mutation::None;
    }
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json lattice = {{"boundary", c.boundary == Boundary::Torus ? "torus" : "cylinder"}};
  if (c.L1) lattice["L1"] = *c.L1;
  if (c.L2) lattice["L2"] = *c.L2;
  json model = {{"mu", c.mu}, {"alpha", c.alpha}};
  if (c.beta) {
    json b = json::array();
    for (const auto& x : *c.beta) b.push_back({x.real(), x.imag()});
    model["beta"] = b;
  }
  json numerics = {{"tolerance", c.tolerance},   {"eps_max", c.eps_max},       {"schmidt_L1", c.schmidt_L1},
                   {"schmidt_L2", c.schmidt_L2}, {"orientation", c.orientation}};
  if (c.grid) numerics["grid"] = *c.grid;
  if (c.fd_step) numerics["fd_step"] = *c.fd_step;
  if (c.cut) numerics["cut"] = *c.cut;
  json out = {{"command", c.command},
              {"lattice", lattice},
              {"model", model},
              {"numerics", numerics},
              {"output", {{"directory", c.directory}, {"format", c.format}}}};
  if (c.mutation != Mutation::None) out["testing"] = {{"mutation", mutation_name(c.mutation)}};
  return out;
}

json config_schema() {
  const json number = {{"type", "number"}};
  auto obj = [](json props) {
    return json{{"type", "object"}, {"additionalProperties", false}, {"properties", std::move(props)}};
  };
  json pair = {{"type", "array"}, {"items", number}, {"minItems", 2}, {"maxItems", 2}};
  return {
      {"$schema", "https://json-schema.org/draft/2020-12/schema"},
      {"title", "RunConfig"},
      {"type", "object"},
      {"additionalProperties", false},
      {"properties",
       {{"command", {{"enum", command_names()}}},
        {"lattice", obj({{"L1", {{"type", "integer"}, {"minimum", 2}, {"maximum", 4096}}},
                         {"L2", {{"type", "integer"}, {"minimum", 2}, {"maximum", 4096}}},
                         {"boundary", {{"enum", {"torus", "cylinder", "cylinder-open-a1"}}}}})},
        {"model", obj({{"mu", number},
                       {"alpha", {{"type", "number"}, {"minimum", 0}, {"exclusiveMaximum", 2.0 * std::numbers::pi}}},
                       {"beta", {{"type", {"array", "null"}}, {"items", pair}, {"minItems", 6}, {"maxItems", 6}}}})},
        {"numerics", obj({{"grid", {{"type", "integer"}, {"minimum", 1}, {"maximum", 4001}}},
                          {"fd_step", {{"type", "number"}, {"exclusiveMinimum", 0}}},
                          {"tolerance", {{"type", "number"}, {"exclusiveMinimum", 0}}},
                          {"eps_max", {{"type", "number"}, {"exclusiveMinimum", 0}}},
                          {"cut", {{"type", "integer"}, {"minimum", 1}}},
                          {"schmidt_L1", {{"type", "integer"}, {"minimum", 2}, {"maximum", 8}}},
                          {"schmidt_L2", {{"type", "integer"}, {"minimum", 2}, {"maximum", 8}}},
                          {"orientation", {{"enum", {"k2xk1", "k1xk2"}}}}})},
        {"output", obj({{"directory", {{"type", "string"}, {"minLength", 1}}}, {"format", {{"enum", {"csv", "json"}}}}})},
        {"testing", obj({{"mutation", {{"enum", {"none", "map_tensor_sign", "gate_sigma"}}}}})}}}};
}

// ---------------------------------------------------------------- reports

json check_to_json(const Check& c) {
  json j = {{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"target", c.target}, {"margin", c.margin}};
  if (!c.detail.empty()) j["detail"] = c.detail;
  if (c.informational) j["informational"] = true;
  return j;
}

bool RunReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.informational || c.pass; });
}

json RunReport::to_json(const RunConfig& cfg) const {
  json cs = json::array();
  for (const auto& c : checks) cs.push_back(check_to_json(c));
  json failed = json::array();
  for (const auto& c : checks)
    if (!c.informational && !c.pass) failed.push_back(c.name);
  return {{"command", command},   {"pass", pass()},         {"failed", failed}, {"checks", cs},
          {"data", data},         {"artifacts", artifacts}, {"config", config_to_json(cfg)}};
}

Check check_near(const std::string& name, double value, double target, double tol) {
  Check c{name, false, value, target, tol - std::abs(value - target), {}, false};
  c.pass = c.margin >= 0.0;
  return c;
}

Check check_at_most(const std::string& name, double value, double bound) {
  Check c{name, false, value, bound, bound - value, {}, false};
  c.pass = c.margin >= 0.0;
  return c;
}

Check check_at_least(const std::string& name, double value, double bound, bool strict) {
  Check c{name, false, value, bound, value - bound, {}, false};
  c.pass = strict ? c.margin > 0.0 : c.margin >= 0.0;
  return c;
}

Check check_flag(const std::string& name, bool ok, const std::string& detail) {
  return {name, ok, ok ? 1.0 : 0.0, 1.0, ok ? 0.0 : -1.0, detail, false};
}

bool Criterion::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.informational || c.pass; });
}

namespace {

Check info(Check c) {
  c.informational = true;
  return c;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<bool> integer;
  std::vector<std::vector<double>> rows;
};

std::string write_table(const RunConfig& cfg, const std::string& stem, const Table& t) {
  const fs::path dir(cfg.directory);
  if (cfg.format == "json") {
    json rows = json::array();
    for (const auto& r : t.rows) {
      json row = json::array();
      for (size_t c = 0; c < r.size(); ++c)
        row.push_back(t.integer[c] ? json(static_cast<long long>(std::llround(r[c]))) : json(r[c]));
      rows.push_back(row);
    }
    const std::string name = stem + ".json";
    std::ofstream f(dir / name);
    if (!f) fail(ErrorCode::Io, "cannot write " + (dir / name).string());
    f << json{{"columns", t.columns}, {"rows", rows}}.dump() << "\n";
    return name;
  }
  const std::string name = stem + ".csv";
  std::ofstream f(dir / name);
  if (!f) fail(ErrorCode::Io, "cannot write " + (dir / name).string());
  for (size_t c = 0; c < t.columns.size(); ++c) f << (c ? "," : "") << t.columns[c];
  f << "\n";
  for (const auto& r : t.rows) {
    for (size_t c = 0; c < r.size(); ++c) {
      if (c) f << ',';
      if (t.integer[c])
        f << std::llround(r[c]);
      else
        f << format_double(r[c]);
    }
    f << "\n";
  }
  return name;
}

std::string write_text(const RunConfig& cfg, const std::string& name, const std::string& text) {
  std::ofstream f(fs::path(cfg.directory) / name);
  if (!f) fail(ErrorCode::Io, "cannot write " + (fs::path(cfg.directory) / name).string());
  f << text;
  return name;
}

Orientation orientation_of(const RunConfig& cfg) {
  return cfg.orientation == "k1xk2" ? Orientation::K1xK2 : Orientation::K2xK1;
}

Lattice lattice_of(const RunConfig& cfg, int L1, int L2) {
  return build_lattice(cfg.L1.value_or(L1), cfg.L2.value_or(L2), cfg.boundary);
}

void require_torus(const Lattice& lat, const char* what) {
  if (lat.boundary() != Boundary::Torus) fail(ErrorCode::InvalidArgument, std::string(what) + " requires a torus");
}

int signed_k(int m, int L) { return 2 * m > L ? m - L : m; }

MapTensor map_tensor_for(Mutation m) {
  MapTensor M = default_map_tensor();
  if (m == Mutation::MapTensorSign) M.m[0][0][1] = -M.m[0][0][1];
  return M;
}

GateLayout layout_for(const Lattice& lat, Mutation m) {
  GateLayout g = gate_layout(lat);
  if (m == Mutation::GateSigma && !g.bonds.empty()) g.bonds.front().sigma = -g.bonds.front().sigma;
  return g;
}

double max_hexagon_residual(const Lattice& lat, const SparseState& psi, const std::optional<Beta>& beta) {
  const double n = psi.norm();
  double r = 0.0;
  for (int h = 0; h < lat.num_hexagons(); ++h)
    r = std::max(r, hex_annihilate(psi, hex_operator(lat, h, beta.value_or(default_beta()))).norm() / n);
  return r;
}

// ---------------------------------------------------------------- commands

void cmd_bands(const RunConfig& cfg, RunReport& rep) {
  const int grid = cfg.grid.value_or(301);
  if (grid < 3) fail(ErrorCode::InvalidArgument, "bands needs grid >= 3");
  const auto ks = bz_lattice_points(grid);
  const double flat = -2.0 - cfg.mu;
  Table t{{"k1", "k2", "E1", "E2", "E3", "n1", "n2", "n3"}, std::vector<bool>(8, false), {}};
  t.rows.reserve(ks.size() * ks.size());
  double dev = 0, gap = 1e300;
  KPoint at{};
  for (double k1 : ks)
    for (double k2 : ks) {
      const BandSolution b = band_solution({k1, k2}, cfg.mu);
      const Eigen::Vector3d e = b.energies;
      const Eigen::Vector3d n = b.vectors.col(2);
      t.rows.push_back({k1, k2, e(0), e(1), e(2), n(0), n(1), n(2)});
      dev = std::max({dev, std::abs(e(0) - flat), std::abs(e(1) - flat)});
      if (e(2) - e(0) < gap) gap = e(2) - e(0), at = {k1, k2};
    }
  // Two passes; the one-pass E[x²] − E[x]² form loses everything below ~1e-8.
  auto stdev = [&](int col) {
    double mean = 0.0, var = 0.0;
    for (const auto& r : t.rows) mean += r[col];
    mean /= double(t.rows.size());
    for (const auto& r : t.rows) var += (r[col] - mean) * (r[col] - mean);
    return std::sqrt(var / double(t.rows.size()));
  };
  const double tol = std::max(cfg.tolerance, 1e-12);
  rep.checks.push_back(check_at_most("flat_band_std_E1", stdev(2), tol));
  rep.checks.push_back(check_at_most("flat_band_std_E2", stdev(3), tol));
  rep.checks.push_back(check_at_most("flat_band_energy_deviation", dev, tol));
  Check g = check_near("spectral_gap", gap, 3.0, 1e-3);
  g.detail = grid % 3 == 0 ? "grid contains k = ∓2π/3" : "grid misses k = ∓2π/3 (discretisation error O(1/grid²))";
  rep.checks.push_back(g);
  rep.artifacts.push_back(write_table(cfg, "bands", t));
  rep.data = {{"grid", grid}, {"mu", cfg.mu}, {"flat_energy", flat}, {"gap", gap}, {"gap_at", {at.k1, at.k2}}};
}

void cmd_topology(const RunConfig& cfg, RunReport& rep) {
  const int grid = cfg.grid.value_or(401);
  if (grid < 3) fail(ErrorCode::InvalidArgument, "topology needs grid >= 3");
  const double h = cfg.fd_step.value_or(kDefaultFdStep);
  if (h < 1e-6 || h > 1e-3) fail(ErrorCode::InvalidArgument, "fd_step must lie in [1e-6, 1e-3]");
  const Orientation o = orientation_of(cfg);
  const auto ks = bz_midpoints(grid);
  Table t{{"k1", "k2", "Eu", "g11", "g12", "g22", "det_g", "tr_g"}, std::vector<bool>(8, false), {}};
  t.rows.reserve(ks.size() * ks.size());
  double fd_dev = 0.0;
  for (double k1 : ks)
    for (double k2 : ks) {
      const GeometryPoint p = geometry_point({k1, k2}, GeoMethod::ClosedForm, o);
      t.rows.push_back({k1, k2, p.eu, p.g.g11, p.g.g12, p.g.g22, p.det_g, p.tr_g});
      fd_dev = std::max(fd_dev, std::abs(euler_curvature({k1, k2}, GeoMethod::FiniteDifference, h, o) - p.eu));
    }
  const GeometrySummary cf = bounds_report(grid, GeoMethod::ClosedForm, o);
  const GeometrySummary an = bounds_report(grid, GeoMethod::AnalyticN, o);
  rep.checks.push_back(check_near("euler_class_magnitude", std::abs(cf.chi), 1.0, 1e-4));
  rep.checks.push_back(check_near("quantum_volume", cf.quantum_volume, 2.0 * std::numbers::pi, 1e-3));
  rep.checks.push_back(check_at_most("ideal_condition_closed_form", cf.max_ideal_violation, 1e-10));
  rep.checks.push_back(check_at_most("ideal_condition_analytic", an.max_ideal_violation, 1e-6));
  rep.checks.push_back(check_at_least("trace_bound", cf.min_trace_margin, -1e-12));
  rep.checks.push_back(check_at_most("finite_difference_consistency", fd_dev, 10.0 * h * h + 1e-9));
  rep.artifacts.push_back(write_table(cfg, "geometry", t));
  rep.data = {{"grid", grid},
              {"orientation", cfg.orientation},
              {"chi", cf.chi},
              {"chi_analytic", an.chi},
              {"quantum_volume", cf.quantum_volume},
              {"min_trace_margin", cf.min_trace_margin},
              {"max_ideal_violation", cf.max_ideal_violation}};
}

void cmd_state(const RunConfig& cfg, RunReport& rep) {
  const Lattice lat = lattice_of(cfg, 2, 2);
  require_torus(lat, "state");
  const SparseState psi = build_ground_state(lat, cfg.beta);
  const std::vector<Beta> per_hex(lat.num_hexagons(), cfg.beta.value_or(default_beta()));
  const SparseState peps = evaluate_peps_state(lat, per_hex, map_tensor_for(cfg.mutation));
  const double fid = peps.empty() ? 0.0 : fidelity(psi, peps);
  const int n = lat.num_sites();
  rep.checks.push_back(check_at_least("peps_fidelity", fid, 1.0 - 1e-10));
  rep.checks.push_back(check_at_most("hexagon_annihilation_residual", max_hexagon_residual(lat, psi, cfg.beta), 1e-12));
  rep.checks.push_back(check_near("filling", psi.particle_number(), 2.0 * n / 3.0, 0.0));
  SparseState out = psi.normalized();
  if (cfg.alpha != 0.0) {
    SparseState dressed = apply_circuit(out, lat, cfg.alpha);
    rep.checks.push_back(check_near("circuit_norm", dressed.norm(), 1.0, 1e-14));
    out = std::move(dressed);
  }
  rep.artifacts.push_back(write_text(cfg, "state.txt", serialize_state(out)));
  rep.data = {{"L1", lat.L1()},          {"L2", lat.L2()},     {"num_sites", n},
              {"terms", psi.size()},     {"fidelity", fid},    {"particles", psi.particle_number()},
              {"alpha", cfg.alpha}};
}

void cmd_entanglement(const RunConfig& cfg, RunReport& rep) {
  const int L1 = cfg.L1.value_or(120), L2 = cfg.L2.value_or(6);
  if (cfg.boundary != Boundary::Torus) fail(ErrorCode::InvalidArgument, "entanglement requires a torus");
  const int cut = cfg.cut.value_or(L1 / 2);
  const CorrelationModes cm = correlation_spectrum(L1, L2, cut);

  Table one{{"k2", "index", "Lambda"}, {false, true, false}, {}};
  double lo = 1e300, hi = -1e300, closest_half = 1e300;
  int near0 = 0, near1 = 0, in_gap = 0;
  for (size_t s = 0; s < cm.lambda.size(); ++s) {
    const double k2 = 2.0 * std::numbers::pi * signed_k(cm.k2_index[s], L2) / L2;
    for (int i = 0; i < cm.lambda[s].size(); ++i) {
      const double l = cm.lambda[s](i);
      one.rows.push_back({k2, double(i), l});
      lo = std::min(lo, l), hi = std::max(hi, l);
      closest_half = std::min(closest_half, std::abs(l - 0.5));
      if (l < 1e-3)
        ++near0;
      else if (l > 1.0 - 1e-3)
        ++near1;
      else
        ++in_gap;
    }
  }
  rep.checks.push_back(check_at_least("lambda_lower_bound", lo, -1e-10));
  rep.checks.push_back(check_at_most("lambda_upper_bound", hi, 1.0 + 1e-10));
  Check gap_modes = check_at_most("in_gap_mode_near_half", closest_half, 0.05);
  gap_modes.detail = std::to_string(in_gap) + " modes with 1e-3 < Lambda < 1 - 1e-3";
  rep.checks.push_back(gap_modes);
  rep.checks.push_back(check_near("near_one_to_near_zero_ratio", near0 ? double(near1) / near0 : 0.0, 2.0, 0.1));

  FreeESOptions fo;
  fo.eps_max = cfg.eps_max;
  const auto free = free_many_body_es(cm, fo);
  Table many{{"alpha", "K", "channel", "epsilon"}, {false, true, true, false}, {}};
  bool ref = false, zero_pi = false;
  for (const auto& l : free) {
    many.rows.push_back({0.0, double(signed_k(l.K, L2)), double(l.channel), l.eps});
    ref = ref || (l.K == 0 && l.channel == 0 && std::abs(l.eps) <= 1e-12);
    zero_pi = zero_pi || (2 * l.K == L2 && std::abs(l.channel) == 1 && std::abs(l.eps) <= 1e-6);
  }
  rep.checks.push_back(check_flag("reference_level_at_K0", ref));
  if (L2 % 2 == 0)
    rep.checks.push_back(check_flag("zero_level_at_K_pi_pm1_channel", zero_pi));
  else
    rep.checks.push_back(info(check_flag("zero_level_at_K_pi_pm1_channel", false, "odd L2 has no K = π sector")));
  const CuspReport fc = cusp_report(free, L2);
  Check free_cusp = check_at_least("free_es_cusp", fc.margin, 0.0, true);
  free_cusp.informational = true;
  rep.checks.push_back(free_cusp);
  rep.artifacts.push_back(write_table(cfg, "one_body_es", one));
  rep.artifacts.push_back(write_table(cfg, "many_body_es", many));

  // Exact Schmidt spectrum of the (dressed) state on a small torus.
  const Lattice small = build_lattice(cfg.schmidt_L1, cfg.schmidt_L2, Boundary::Torus);
  const int scut = cfg.schmidt_L1 / 2;
  const SparseState psi = apply_circuit(build_ground_state(small, cfg.beta), small, cfg.alpha);
  const SchmidtSpectrum ss = schmidt_es(psi, small, scut, true);
  Table sch{{"alpha", "K", "channel", "epsilon"}, {false, true, true, false}, {}};
  for (const auto& l : ss.levels)
    sch.rows.push_back({cfg.alpha, double(signed_k(l.K, small.L2())), double(l.channel), l.eps});
  rep.checks.push_back(check_near("schmidt_normalisation", ss.total(), 1.0, 1e-10));
  const CuspReport cr = cusp_report(ss);
  Check cusp = check_at_least("schmidt_cusp_at_K0", cr.margin, 0.0, true);
  cusp.detail = "K=0 minimum vs |K|=" + std::to_string(cr.neighbour_K) + " minimum";
  rep.checks.push_back(cusp);
  rep.artifacts.push_back(write_table(cfg, "schmidt_es", sch));
  rep.data = {{"L1", L1},
              {"L2", L2},
              {"cut", cut},
              {"in_gap_modes", in_gap},
              {"near_zero", near0},
              {"near_one", near1},
              {"entropy", correlation_entropy(cm)},
              {"free_levels", free.size()},
              {"schmidt_lattice", {small.L1(), small.L2()}},
              {"schmidt_cut", scut},
              {"schmidt_entropy", ss.entropy()},
              {"cusp", {{"present", cr.present}, {"k0_min", cr.k0_min}, {"neighbour_min", cr.neighbour_min},
                        {"neighbour_K", cr.neighbour_K}, {"margin", cr.margin}}}};
}

void cmd_circuit(const RunConfig& cfg, RunReport& rep) {
  const Lattice lat = lattice_of(cfg, 2, 2);
  require_torus(lat, "circuit");
  if (lat.num_sites() > 14) fail(ErrorCode::SizeLimit, "full spectrum comparison limited to N <= 14");
  const Eigen::VectorXd e0 = full_many_body_spectrum(lat, cfg.mu, 0.0);
  const Eigen::VectorXd e1 = full_many_body_spectrum(lat, cfg.mu, cfg.alpha);
  Table t{{"index", "E_H", "E_Hprime"}, {true, false, false}, {}};
  for (int i = 0; i < e0.size(); ++i) t.rows.push_back({double(i), e0(i), e1(i)});
  rep.checks.push_back(check_at_most("isospectral", (e0 - e1).cwiseAbs().maxCoeff(), 1e-9));

  const GateLayout layout = layout_for(lat, cfg.mutation);
  const LayoutReport lr = c2t_layout_check(lat, layout);
  rep.checks.push_back(check_flag("c2t_layout", lr.c2t_ok, std::to_string(lr.conjugation_violations) + " violations"));
  rep.checks.push_back(check_flag("bond_uniqueness", lr.unique_ok,
                            std::to_string(lr.uncovered_bonds) + " uncovered, " +
                                std::to_string(lr.multiply_covered_bonds) + " multiply covered"));
  double dressed = 0.0;
  if (lat.num_sites() <= 12)
    for (int i = 0; i < lat.num_sites(); ++i) {
      const SpMat d = dressed_creation(lat, i, cfg.alpha) - conjugated_creation(lat, i, cfg.alpha);
      for (int k = 0; k < d.outerSize(); ++k)
        for (SpMat::InnerIterator it(d, k); it; ++it) dressed = std::max(dressed, std::abs(it.value()));
    }
  rep.checks.push_back(check_at_most("dressed_operator_identity", dressed, 1e-12));
  if (cfg.mu > -2.0 && cfg.mu < 1.0) {
    const UniqueGroundReport u = verify_unique_ground_state(lat, cfg.mu, cfg.alpha);
    rep.checks.push_back(check_at_least("ground_state_fidelity", u.fidelity, 1.0 - 1e-10));
    rep.data["ground_energy"] = u.ground_energy;
    rep.data["gap"] = u.gap;
  }
  rep.artifacts.push_back(write_table(cfg, "spectra", t));
  rep.artifacts.push_back(write_text(cfg, "layout.json", layout_to_json(layout).dump(2) + "\n"));
  rep.data["alpha"] = cfg.alpha;
  rep.data["mu"] = cfg.mu;
  rep.data["levels"] = e0.size();
}

void cmd_metric(const RunConfig& cfg, RunReport& rep) {
  const Lattice lat = lattice_of(cfg, 6, 6);
  require_torus(lat, "metric");
  const double step = cfg.fd_step.value_or(1e-3);
  const ManyBodyMetricResult m = many_body_metric(lat, cfg.mu, step);
  rep.checks.push_back(check_near("trace_identity", m.trace, m.rhs, 1e-4));
  rep.checks.push_back(check_at_least("many_body_bound", m.trace, m.bound, true));
  rep.data = {{"L1", lat.L1()},   {"L2", lat.L2()},        {"mu", cfg.mu},
              {"step", step},     {"g11", m.g(0, 0)},      {"g12", m.g(0, 1)},
              {"g22", m.g(1, 1)}, {"trace", m.trace},      {"bloch_average", m.rhs},
              {"bound", m.bound}, {"min_gap", m.min_gap}};
}

void cmd_verify_all(const RunConfig& cfg, RunReport& rep) {
  AcceptanceOptions opts;
  opts.mutation = cfg.mutation;
  json crit = json::array();
  for (const auto& c : acceptance_criteria(opts)) {
    json cs = json::array();
    for (Check ch : c.checks) {
      cs.push_back(check_to_json(ch));
      ch.name = "criterion_" + std::to_string(c.id) + "." + ch.name;
      rep.checks.push_back(ch);
    }
    crit.push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass()}, {"checks", cs}});
  }
  rep.data = {{"criteria", crit}};
}

}  // namespace

RunReport run_command(const RunConfig& cfg) {
  RunReport rep;
  rep.command = cfg.command;
  std::error_code ec;
  fs::create_directories(cfg.directory, ec);
  if (ec) fail(ErrorCode::Io, "cannot create output directory " + cfg.directory + ": " + ec.message());
  if (cfg.command == "bands")
    cmd_bands(cfg, rep);
  else if (cfg.command == "topology")
    cmd_topology(cfg, rep);
  else if (cfg.command == "state")
    cmd_state(cfg, rep);
  else if (cfg.command == "entanglement")
    cmd_entanglement(cfg, rep);
  else if (cfg.command == "circuit")
    cmd_circuit(cfg, rep);
  else if (cfg.command == "metric")
    cmd_metric(cfg, rep);
  else if (cfg.command == "verify-all")
    cmd_verify_all(cfg, rep);
  else
    fail(ErrorCode::Config, "unknown command '" + cfg.command + "'");
  rep.artifacts.push_back("summary.json");
  write_text(cfg, "summary.json", rep.to_json(cfg).dump(2) + "\n");
  return rep;
}

}  // namespace eulerpeps
