#include "magstrip/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "magstrip/errors.hpp"
#include "magstrip/hash.hpp"

namespace magstrip {

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

double get_number(const json& j, const std::string& key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + "." + key + ": not finite");
  return v;
}

int get_int(const json& j, const std::string& key, int fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return j.at(key).get<int>();
}

bool get_bool(const json& j, const std::string& key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError(where + "." + key + ": expected a boolean");
  return j.at(key).get<bool>();
}

std::string get_string(const json& j, const std::string& key, const std::string& fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return j.at(key).get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& key, const std::vector<double>& fallback,
                                const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& a = j.at(key);
  if (!a.is_array()) throw ConfigError(where + "." + key + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : a) {
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Point point_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(where + ": expected [x1, x2]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Ball ball_from_json(const json& j, const std::string& where) {
  check_keys(j, {"p", "R"}, where);
  if (!j.contains("p") || !j.contains("R")) throw ConfigError(where + ": needs p and R");
  Ball b;
  b.center = point_from_json(j.at("p"), where + ".p");
  b.radius = get_number(j, "R", 0.0, where);
  if (!(b.radius > 0.0)) throw ConfigError(where + ".R must be positive");
  return b;
}

json ball_to_json(const Ball& b) { return {{"p", to_json(b.center)}, {"R", b.radius}}; }

json side_to_json(const SideReport& s) {
  return {{"ball", ball_to_json(s.ball)},
          {"hardy", to_json(s.hardy)},
          {"kappa", s.kappa.value},
          {"kappa_branch", to_string(s.kappa.branch)},
          {"flux_nontrivial", s.flux_nontrivial}};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const Point& p) { return json::array({p.x1, p.x2}); }

json to_json(const FieldSpec& f) {
  json j = {{"kind", to_string(f.kind)}, {"p", to_json(f.center)}};
  if (f.is_compact()) {
    j["amplitude"] = f.amplitude;
    j["support_radius"] = f.support_radius;
    j["flux"] = f.total_flux();
  } else {
    j["flux"] = f.flux;
  }
  return j;
}

json to_json(const MagneticField& f) {
  json a = json::array();
  for (const auto& c : f.components) a.push_back(to_json(c));
  return a;
}

json to_json(const HardyConstantSet& h) {
  return {{"variant", h.variant == HardyVariant::compact ? "compact" : "aharonov_bohm"},
          {"R", h.radius},
          {"c1", h.c1},
          {"c2", h.c2},
          {"c3", h.c3},
          {"c4", h.c4},
          {"c5_diagnostic", optional_number(h.c5_diagnostic)},
          {"c6_diagnostic", optional_number(h.c6_diagnostic)},
          {"nu0", h.nu0},
          {"mu", h.mu},
          {"c", h.c},
          {"degenerate", h.degenerate}};
}

json to_json(const BoundReport& r) {
  json j = {{"variant", r.variant == HardyVariant::compact ? "compact" : "aharonov_bohm"},
            {"window_l", r.window_l},
            {"critical_length", r.critical_length},
            {"strict_inequality", r.strict_inequality},
            {"verdict_absence", to_string(r.verdict_absence)}};
  if (r.minus) {
    j["minus"] = side_to_json(*r.minus);
    j["kappa_minus"] = r.minus->kappa.value;
  }
  if (r.plus) {
    j["plus"] = side_to_json(*r.plus);
    j["kappa_plus"] = r.plus->kappa.value;
  }
  if (r.ab) {
    j["ab"] = side_to_json(*r.ab);
    j["kappa"] = r.ab->kappa.value;
  }
  if (r.presence_check)
    j["presence_check"] = {{"lambda_l", r.presence_check->lambda_l},
                           {"max_A_sq", r.presence_check->max_A_sq},
                           {"satisfied", r.presence_check->satisfied}};
  else
    j["presence_check"] = nullptr;
  return j;
}

json to_json(const SpectrumResult& r) {
  const Grid2D& g = r.grid;
  return {{"eigenvalues", r.eigenvalues},
          {"residuals", r.residuals},
          {"L", g.geom.truncation_L},
          {"l", g.geom.window_l},
          {"hx", g.hx},
          {"hy", g.hy},
          {"nx", g.nx()},
          {"ny", g.ny},
          {"unknowns", g.unknowns},
          {"window_nodes", g.window_nodes},
          {"window_edge_on_node", g.window_edge_on_node},
          {"corner_points", "dirichlet"},
          {"field", to_json(r.field)},
          {"gauge", r.gauge_id},
          {"gauge_spec", r.gauge},
          {"complex_arithmetic", r.complex_arithmetic},
          {"threshold_margin", r.threshold_margin},
          {"below_threshold", r.below_threshold},
          {"shift", r.shift},
          {"iterations", r.iterations}};
}

json to_json(const ProbeResult& r) {
  json rungs = json::array();
  for (const auto& x : r.rungs)
    rungs.push_back({{"L", x.L},
                     {"h", x.h},
                     {"hx", x.hx},
                     {"hy", x.hy},
                     {"unknowns", x.unknowns},
                     {"window_nodes", x.window_nodes},
                     {"lowest", x.lowest},
                     {"residual", x.residual},
                     {"eps_num", x.eps_num},
                     {"below", x.below}});
  return {{"verdict", to_string(r.verdict)},
          {"certifying", r.verdict == ProbeVerdict::present},
          {"min_eigenvalue", r.min_eigenvalue},
          {"monotone_in_L", r.monotone_in_L},
          {"rungs", rungs}};
}

json to_json(const LambdaWindowEstimate& e) {
  return {{"value", e.value}, {"error", e.error},   {"L", e.L},
          {"h", e.h},         {"levels", e.levels}, {"observed_order", e.observed_order}};
}

json to_json(const WindowInequalityReport& r) {
  return {{"l", r.l},
          {"h", r.h},
          {"L1", r.L1},
          {"min_eigenvalue", r.min_eigenvalue},
          {"certified_sign", r.certified_sign},
          {"residual", r.residual}};
}

json to_json(const Ladder& l) { return {{"L", l.L}, {"h", l.h}, {"growth", l.growth}, {"h_max", l.h_max}}; }

json to_json(const RunConfig& c) {
  json gauge = {{"kind", c.gauge.kind},
                {"alpha", c.gauge.alpha},
                {"b", optional_number(c.gauge.cutoff_b)},
                {"width", c.gauge.width},
                {"c_minus", c.gauge.c_minus},
                {"c_plus", c.gauge.c_plus}};
  if (c.gauge.shift)
    gauge["shift"] = {{"amplitude", c.gauge.shift->amplitude},
                      {"k1", c.gauge.shift->k1},
                      {"k2", c.gauge.shift->k2},
                      {"phase", c.gauge.shift->phase}};
  json bounds = {{"ab_radius", optional_number(c.bounds.ab_radius)},
                 {"profile_intervals", c.bounds.profile_intervals},
                 {"presence", c.bounds.presence}};
  if (c.bounds.minus) bounds["minus"] = ball_to_json(*c.bounds.minus);
  if (c.bounds.plus) bounds["plus"] = ball_to_json(*c.bounds.plus);
  const GridOptions& g = c.spectrum.grid;
  const Onedim1DOptions& o = c.onedim.options;
  json solver = {{"tol", c.tol}};
  solver["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  return {{"geometry", {{"l", c.geometry.window_l}, {"L", c.geometry.truncation_L}}},
          {"field", to_json(c.field)},
          {"gauge", gauge},
          {"ladder", to_json(c.ladder)},
          {"solver", solver},
          {"bounds", bounds},
          {"spectrum",
           {{"k", c.spectrum.k},
            {"h", g.h},
            {"growth", g.growth},
            {"h_max", g.h_max},
            {"core_half_width", g.core_half_width},
            {"eigenvector_csv", c.spectrum.eigenvector_csv}}},
          {"onedim",
           {{"h", o.h},
            {"L1", o.L1},
            {"growth", o.growth},
            {"h_max", o.h_max},
            {"check_resolution", o.check_resolution},
            {"rho", c.onedim.rho},
            {"c_minus", c.onedim.c_minus},
            {"c_plus", c.onedim.c_plus},
            {"p1_minus", c.onedim.p1_minus},
            {"p1_plus", c.onedim.p1_plus},
            {"richardson_levels", c.onedim.richardson_levels}}},
          {"sweep",
           {{"l", c.sweep.l},
            {"component", c.sweep.component},
            {"parameter", c.sweep.parameter},
            {"values", c.sweep.values}}},
          {"output", {{"dir", c.out_dir}}}};
}

FieldSpec field_spec_from_json(const json& j) {
  const std::string where = "field";
  check_keys(j, {"kind", "p", "amplitude", "support_radius", "flux"}, where);
  if (!j.contains("kind") || !j.contains("p")) throw ConfigError("field: needs kind and p");
  FieldKind kind;
  try {
    kind = field_kind_from_string(j.at("kind").get<std::string>());
  } catch (const std::exception&) {
    throw ConfigError("field.kind: unknown kind");
  }
  const Point p = point_from_json(j.at("p"), "field.p");
  FieldSpec f;
  switch (kind) {
    case FieldKind::aharonov_bohm:
      f = FieldSpec::aharonov_bohm(p, get_number(j, "flux", 0.0, where));
      break;
    case FieldKind::uniform_disk:
      f = FieldSpec::disk(p, get_number(j, "support_radius", 0.0, where), get_number(j, "amplitude", 0.0, where));
      break;
    case FieldKind::compact_bump: {
      const double s = get_number(j, "support_radius", 0.0, where);
      if (j.contains("amplitude"))
        f = FieldSpec::bump(p, s, get_number(j, "amplitude", 0.0, where));
      else
        f = FieldSpec::bump_with_flux(p, s, get_number(j, "flux", 0.0, where));
      break;
    }
  }
  if (f.is_compact() && !(f.support_radius > 0.0)) throw ConfigError("field.support_radius must be positive");
  f.validate();
  return f;
}

MagneticField field_from_json(const json& j) {
  if (j.is_null()) return {};
  if (j.is_object()) return MagneticField(field_spec_from_json(j));
  if (!j.is_array()) throw ConfigError("field: expected an object or an array");
  std::vector<FieldSpec> parts;
  for (const auto& c : j) parts.push_back(field_spec_from_json(c));
  return MagneticField(std::move(parts));
}

Ladder parse_ladder_spec(const std::string& spec) {
  Ladder out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ';')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("ladder: expected key=values in '" + part + "'");
    const std::string key = part.substr(0, eq);
    std::vector<double> values;
    std::stringstream vs(part.substr(eq + 1));
    std::string item;
    while (std::getline(vs, item, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(item, &used));
        if (used != item.size()) throw ConfigError("");
      } catch (const std::exception&) {
        throw ConfigError("ladder: bad number '" + item + "'");
      }
    }
    if (values.empty()) throw ConfigError("ladder: no values for " + key);
    if (key == "L") {
      out.L = values;
    } else if (key == "h") {
      out.h = values;
    } else if (key == "growth" && values.size() == 1) {
      out.growth = values[0];
    } else if ((key == "hmax" || key == "h_max") && values.size() == 1) {
      out.h_max = values[0];
    } else {
      throw ConfigError("ladder: unknown key '" + key + "'");
    }
  }
  for (double v : out.L)
    if (!(v > 0.0)) throw ConfigError("ladder: L values must be positive");
  for (double v : out.h)
    if (!(v > 0.0)) throw ConfigError("ladder: h values must be positive");
  if (out.L.empty() || out.h.empty()) throw ConfigError("ladder: L and h must be non-empty");
  if (!(out.growth >= 1.0)) throw ConfigError("ladder: growth must be >= 1");
  return out;
}

RunConfig parse_run_config(const json& j) {
  check_keys(j, {"geometry", "field", "gauge", "ladder", "solver", "bounds", "spectrum", "onedim", "sweep", "output"},
             "config");
  RunConfig c;
  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    check_keys(g, {"l", "L"}, "geometry");
    c.geometry.window_l = get_number(g, "l", 0.0, "geometry");
    c.geometry.truncation_L = get_number(g, "L", 20.0, "geometry");
  }
  try {
    c.geometry.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("geometry: ") + e.what());
  }
  if (j.contains("field")) c.field = field_from_json(j.at("field"));

  if (j.contains("gauge")) {
    const json& g = j.at("gauge");
    check_keys(g, {"kind", "alpha", "b", "width", "c_minus", "c_plus", "shift"}, "gauge");
    c.gauge.kind = get_string(g, "kind", "default", "gauge");
    static const std::set<std::string> kinds{"default", "zero", "line_integral", "compactified", "minimize"};
    if (!kinds.count(c.gauge.kind)) throw ConfigError("gauge.kind: unknown kind '" + c.gauge.kind + "'");
    c.gauge.alpha = get_number(g, "alpha", 0.0, "gauge");
    if (g.contains("b") && !g.at("b").is_null()) c.gauge.cutoff_b = get_number(g, "b", 0.0, "gauge");
    c.gauge.width = get_number(g, "width", 0.0, "gauge");
    c.gauge.c_minus = get_number(g, "c_minus", 0.0, "gauge");
    c.gauge.c_plus = get_number(g, "c_plus", 0.0, "gauge");
    if (g.contains("shift")) {
      const json& s = g.at("shift");
      check_keys(s, {"amplitude", "k1", "k2", "phase"}, "gauge.shift");
      GaugeSelection::Shift sh;
      sh.amplitude = get_number(s, "amplitude", 0.0, "gauge.shift");
      sh.k1 = get_number(s, "k1", 1.0, "gauge.shift");
      sh.k2 = get_number(s, "k2", 1.0, "gauge.shift");
      sh.phase = get_number(s, "phase", 0.3, "gauge.shift");
      c.gauge.shift = sh;
    }
  }

  if (j.contains("ladder")) {
    const json& l = j.at("ladder");
    if (l.is_string()) {
      c.ladder = parse_ladder_spec(l.get<std::string>());
    } else {
      check_keys(l, {"L", "h", "growth", "h_max"}, "ladder");
      c.ladder.L = get_numbers(l, "L", c.ladder.L, "ladder");
      c.ladder.h = get_numbers(l, "h", c.ladder.h, "ladder");
      c.ladder.growth = get_number(l, "growth", c.ladder.growth, "ladder");
      c.ladder.h_max = get_number(l, "h_max", c.ladder.h_max, "ladder");
      if (!(c.ladder.growth >= 1.0)) throw ConfigError("ladder: growth must be >= 1");
      if (!(c.ladder.h_max > 0.0)) throw ConfigError("ladder: h_max must be positive");
      if (c.ladder.L.empty() || c.ladder.h.empty()) throw ConfigError("ladder: L and h must be non-empty");
      for (double v : c.ladder.L)
        if (!(v > c.geometry.window_l)) throw ConfigError("ladder: every L must exceed l");
      for (double v : c.ladder.h)
        if (!(v > 0.0)) throw ConfigError("ladder: h values must be positive");
    }
  }

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    check_keys(s, {"tol", "seed"}, "solver");
    c.tol = get_number(s, "tol", c.tol, "solver");
    if (s.contains("seed") && !s.at("seed").is_null()) {
      const json& v = s.at("seed");
      if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw ConfigError("solver.seed: expected a non-negative integer");
      c.seed = s.at("seed").get<std::uint64_t>();
    }
  }
  if (!(c.tol > 0.0)) throw ConfigError("solver.tol must be positive");

  if (j.contains("bounds")) {
    const json& b = j.at("bounds");
    check_keys(b, {"minus", "plus", "ab_radius", "profile_intervals", "presence"}, "bounds");
    if (b.contains("minus")) c.bounds.minus = ball_from_json(b.at("minus"), "bounds.minus");
    if (b.contains("plus")) c.bounds.plus = ball_from_json(b.at("plus"), "bounds.plus");
    if (b.contains("ab_radius") && !b.at("ab_radius").is_null())
      c.bounds.ab_radius = get_number(b, "ab_radius", 0.0, "bounds");
    c.bounds.profile_intervals = get_int(b, "profile_intervals", 64, "bounds");
    if (c.bounds.profile_intervals < 16) throw ConfigError("bounds.profile_intervals must be >= 16");
    c.bounds.presence = get_bool(b, "presence", false, "bounds");
  }

  if (j.contains("spectrum")) {
    const json& s = j.at("spectrum");
    check_keys(s, {"k", "h", "growth", "h_max", "core_half_width", "eigenvector_csv"}, "spectrum");
    c.spectrum.k = get_int(s, "k", 4, "spectrum");
    c.spectrum.grid.h = get_number(s, "h", 0.05, "spectrum");
    c.spectrum.grid.growth = get_number(s, "growth", 1.05, "spectrum");
    c.spectrum.grid.h_max = get_number(s, "h_max", 0.5, "spectrum");
    c.spectrum.grid.core_half_width = get_number(s, "core_half_width", -1.0, "spectrum");
    c.spectrum.eigenvector_csv = get_bool(s, "eigenvector_csv", false, "spectrum");
  } else {
    c.spectrum.grid.growth = 1.05;
  }
  if (c.spectrum.k < 1) throw ConfigError("spectrum.k must be >= 1");
  if (!(c.spectrum.grid.h > 0.0)) throw ConfigError("spectrum.h must be positive");
  if (!(c.spectrum.grid.growth >= 1.0)) throw ConfigError("spectrum.growth must be >= 1");

  if (j.contains("onedim")) {
    const json& o = j.at("onedim");
    check_keys(o, {"h", "L1", "growth", "h_max", "check_resolution", "rho", "c_minus", "c_plus", "p1_minus", "p1_plus",
                   "richardson_levels"},
               "onedim");
    Onedim1DOptions& op = c.onedim.options;
    op.h = get_number(o, "h", 0.0, "onedim");
    op.L1 = get_number(o, "L1", 40.0, "onedim");
    op.growth = get_number(o, "growth", 0.05, "onedim");
    op.h_max = get_number(o, "h_max", 0.0, "onedim");
    op.check_resolution = get_bool(o, "check_resolution", true, "onedim");
    c.onedim.rho = get_string(o, "rho", "bounds", "onedim");
    if (c.onedim.rho != "bounds" && c.onedim.rho != "zero" && c.onedim.rho != "explicit")
      throw ConfigError("onedim.rho must be bounds, zero or explicit");
    c.onedim.c_minus = get_number(o, "c_minus", 0.0, "onedim");
    c.onedim.c_plus = get_number(o, "c_plus", 0.0, "onedim");
    c.onedim.p1_minus = get_number(o, "p1_minus", 0.0, "onedim");
    c.onedim.p1_plus = get_number(o, "p1_plus", 0.0, "onedim");
    c.onedim.richardson_levels = get_int(o, "richardson_levels", 0, "onedim");
    if (c.onedim.richardson_levels < 0 || c.onedim.richardson_levels > 8)
      throw ConfigError("onedim.richardson_levels must be in [0, 8]");
  }

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, {"l", "component", "parameter", "values"}, "sweep");
    c.sweep.l = get_numbers(s, "l", {}, "sweep");
    c.sweep.component = get_int(s, "component", 0, "sweep");
    c.sweep.parameter = get_string(s, "parameter", "amplitude", "sweep");
    if (c.sweep.parameter != "amplitude" && c.sweep.parameter != "flux")
      throw ConfigError("sweep.parameter must be amplitude or flux");
    c.sweep.values = get_numbers(s, "values", {}, "sweep");
    for (double l : c.sweep.l)
      if (!(l >= 0.0)) throw ConfigError("sweep.l values must be non-negative");
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, {"dir"}, "output");
    c.out_dir = get_string(o, "dir", "out", "output");
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_run_config(j);
}

std::string config_hash(const RunConfig& c) { return hex64(fnv1a64(to_json(c).dump())); }

std::uint64_t resolved_seed(const RunConfig& c) {
  if (c.seed) return *c.seed;
  RunConfig copy = c;
  copy.out_dir.clear();
  return fnv1a64(to_json(copy).dump());
}

GaugeSpec build_gauge(const GaugeSelection& sel, const MagneticField& field) {
  GaugeSpec g;
  if (sel.kind == "default") {
    g = default_gauge(field);
  } else if (sel.kind == "zero") {
    if (!field.empty()) throw ConfigError("gauge.kind zero requires an empty field");
    g = make_zero_gauge();
  } else if (sel.kind == "line_integral") {
    if (!field.all_compact()) throw ConfigError("line_integral gauge requires a compact field");
    g = make_line_integral_gauge(field, sel.alpha);
  } else if (sel.kind == "compactified") {
    if (!field.all_compact()) throw ConfigError("compactified gauge requires a compact field");
    const double b = sel.cutoff_b ? *sel.cutoff_b : field.support_half_extent();
    CompactifyOptions opt;
    opt.width = sel.width;
    opt.c_minus = sel.c_minus;
    opt.c_plus = sel.c_plus;
    g = compactify_gauge(make_line_integral_gauge(field, sel.alpha), field, b, opt);
  } else if (sel.kind == "minimize") {
    if (!field.all_compact()) throw ConfigError("minimize gauge requires a compact field");
    g = minimize_sup_A2(field).gauge;
  } else {
    throw ConfigError("unknown gauge kind " + sel.kind);
  }
  if (sel.shift) g = make_shifted_gauge(g, sel.shift->amplitude, sel.shift->k1, sel.shift->k2, sel.shift->phase);
  return g;
}

Ball auto_ball(const MagneticField& field, double l, int side) {
  for (const auto& f : field.components) {
    if (!f.is_compact()) continue;
    const Point p = f.center;
    if (side * p.x1 <= l) continue;
    const double r = 0.95 * std::min({p.x2, kPi - p.x2, std::abs(p.x1) - l});
    if (r > 0.0) return {p, r};
  }
  return {{side * (l + 1.5), kPi / 2.0}, 1.0};
}

BoundReport bound_report(const RunConfig& c, double l) {
  const MagneticField& f = c.field;
  if (f.has_aharonov_bohm()) {
    if (f.components.size() != 1)
      throw PreconditionError("bounds cover a single Aharonov-Bohm point without further field components");
    AbBoundInputs in;
    in.p = f.components.front().center;
    in.flux = f.components.front().flux;
    in.window_l = l;
    in.radius = c.bounds.ab_radius;
    return critical_length(in);
  }
  CompactBoundInputs in;
  in.field = f;
  in.window_l = l;
  in.minus = c.bounds.minus ? *c.bounds.minus : auto_ball(f, l, -1);
  in.plus = c.bounds.plus ? *c.bounds.plus : auto_ball(f, l, +1);
  in.profile_intervals = c.bounds.profile_intervals;
  return critical_length(in);
}

RhoProfile rho_from_report(const BoundReport& r) {
  if (r.variant == HardyVariant::aharonov_bohm) {
    if (!r.ab) return RhoProfile::zero();
    return RhoProfile::aharonov_bohm(r.ab->hardy.c, r.ab->ball.center.x1);
  }
  const double cm = r.minus ? r.minus->hardy.c : 0.0;
  const double cp = r.plus ? r.plus->hardy.c : 0.0;
  const double pm = r.minus ? r.minus->ball.center.x1 : -1.0;
  const double pp = r.plus ? r.plus->ball.center.x1 : 1.0;
  return RhoProfile::compact(cm, pm, cp, pp);
}

}  // namespace magstrip
