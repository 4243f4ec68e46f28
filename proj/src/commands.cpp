#include "magstrip/commands.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "magstrip/errors.hpp"
#include "magstrip/hash.hpp"
#include "magstrip/onedim.hpp"
#include "magstrip/spectral.hpp"

namespace magstrip {

namespace fs = std::filesystem;

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

std::string csv_number(double v) {
  std::ostringstream s;
  s.precision(15);
  s << v;
  return s.str();
}

std::string csv_text(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string q = "\"";
  for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const SolverError*>(&e)) return kExitSolver;
  if (dynamic_cast<const Error*>(&e)) return kExitConfig;
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return kExitConfig;
  return kExitSolver;
}

nlohmann::json make_envelope(const std::string& command, const RunConfig& cfg, const nlohmann::json& result) {
  return {{"command", command},
          {"config", to_json(cfg)},
          {"config_hash", config_hash(cfg)},
          {"seed", resolved_seed(cfg)},
          {"result", result},
          {"content_hash", hex64(fnv1a64(result.dump()))}};
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_csv_with_header(const std::string& path, const RunConfig& cfg, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "# config: " << to_json(cfg).dump() << '\n';
  out << "# config_hash: " << config_hash(cfg) << '\n';
  out << "# content_hash: " << hex64(fnv1a64(body)) << '\n';
  out << body;
}

int worker_count() {
  if (const char* env = std::getenv("MAGSTRIP_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_bounds(const RunConfig& cfg, std::ostream& log) {
  const double l = cfg.geometry.window_l;
  BoundReport report = bound_report(cfg, l);
  if (cfg.bounds.presence) {
    if (!(l > 0.0)) throw PreconditionError("presence check needs l > 0");
    if (!cfg.field.all_compact()) throw PreconditionError("presence check needs a compact field");
    const GaugeSearchResult gs = minimize_sup_A2(cfg.field);
    const LambdaWindowEstimate lam = lambda_window(l, cfg.ladder, cfg.tol, resolved_seed(cfg));
    // Dirichlet truncation bounds lambda(l) from above; add the error bar
    const double lam_upper = lam.value + lam.error;
    report.presence_check = PresenceCheck{lam_upper, gs.sup_A2, presence_condition(lam_upper, gs.sup_A2)};
  }
  nlohmann::json result = to_json(report);
  const std::string path = out_path(cfg, "bounds.json");
  write_json(path, make_envelope("bounds", cfg, result));
  log << "critical_length " << report.critical_length << " verdict " << to_string(report.verdict_absence) << " -> "
      << path << '\n';
  return kExitOk;
}

int cmd_spectrum(const RunConfig& cfg, bool probe, std::ostream& log) {
  const std::uint64_t seed = resolved_seed(cfg);
  const GaugeSpec gauge = build_gauge(cfg.gauge, cfg.field);
  std::vector<Point> sing = cfg.field.singular_points();
  for (const Point& p : gauge->singular_points()) sing.push_back(p);
  const Grid2D grid = make_grid(cfg.geometry, cfg.spectrum.grid, sing, cfg.field.support_half_extent());
  const auto op = assemble_operator(cfg.geometry, cfg.field, gauge, grid);
  const SpectrumResult spec = lowest_eigenpairs(op, cfg.spectrum.k, cfg.tol, seed);
  nlohmann::json result = to_json(spec);
  result["hermiticity_error"] = op.hermiticity_error;
  result["plaquette_mismatch"] = op.plaquette.max_mismatch;
  if (cfg.spectrum.eigenvector_csv) {
    nlohmann::json files = nlohmann::json::array();
    for (int k = 0; k < static_cast<int>(spec.eigenvectors.size()); ++k) {
      std::ostringstream body;
      write_eigenvector_csv(spec, k, body);
      const std::string name = "eigenvector_" + std::to_string(k) + ".csv";
      write_csv_with_header(out_path(cfg, name), cfg, body.str());
      files.push_back(name);
    }
    result["eigenvector_csv"] = files;
  }
  if (probe) {
    ProbeConfig pc;
    pc.window_l = cfg.geometry.window_l;
    pc.field = cfg.field;
    pc.gauge = gauge;
    pc.ladder = cfg.ladder;
    pc.tol = cfg.tol;
    pc.seed = seed;
    const ProbeResult pr = discrete_spectrum_probe(pc);
    result["probe"] = to_json(pr);
    log << "probe verdict " << to_string(pr.verdict) << " (min " << pr.min_eigenvalue << ")\n";
  }
  const std::string path = out_path(cfg, "spectrum.json");
  write_json(path, make_envelope("spectrum", cfg, result));
  log << "lowest eigenvalue " << spec.eigenvalues.front() << ", " << spec.below_threshold.size()
      << " below 1 - eps_num -> " << path << '\n';
  return kExitOk;
}

int cmd_onedim(const RunConfig& cfg, std::ostream& log) {
  const double l = cfg.geometry.window_l;
  RhoProfile rho = RhoProfile::zero();
  nlohmann::json rho_json;
  if (cfg.onedim.rho == "bounds") {
    const BoundReport r = bound_report(cfg, l);
    rho = rho_from_report(r);
    rho_json["bounds"] = to_json(r);
  } else if (cfg.onedim.rho == "explicit") {
    rho = RhoProfile::compact(cfg.onedim.c_minus, cfg.onedim.p1_minus, cfg.onedim.c_plus, cfg.onedim.p1_plus);
  }
  rho_json["variant"] = rho.variant == RhoVariant::compact ? "compact" : "aharonov_bohm";
  rho_json["c_minus"] = rho.c_minus;
  rho_json["c_plus"] = rho.c_plus;
  rho_json["p1_minus"] = rho.p1_minus;
  rho_json["p1_plus"] = rho.p1_plus;

  const WindowInequalityReport rep = verify_window_inequality(rho, l, cfg.onedim.options, 1e-9);
  nlohmann::json result = to_json(rep);
  result["rho"] = rho_json;

  std::ostringstream body;
  body.precision(15);
  body << "x,v\n";
  for (std::size_t i = 0; i < rep.x.size(); ++i) body << rep.x[i] << ',' << rep.minimizer[i] << '\n';
  const std::string csv = out_path(cfg, "onedim_minimizer.csv");
  write_csv_with_header(csv, cfg, body.str());
  result["minimizer_csv"] = "onedim_minimizer.csv";

  if (cfg.onedim.richardson_levels >= 2) {
    Operator1D op = build_operator_1d(rho, l, cfg.onedim.options);
    std::vector<double> levels{lowest_eigenvalue_1d(op)};
    for (int k = 1; k < cfg.onedim.richardson_levels; ++k) {
      op = refine_operator_1d(op, rho);
      levels.push_back(lowest_eigenvalue_1d(op));
    }
    const RichardsonEstimate est = richardson(levels, 2.0);
    result["richardson"] = {
        {"levels", levels}, {"value", est.value}, {"error", est.error}, {"observed_order", est.observed_order}};
  }
  const std::string path = out_path(cfg, "onedim.json");
  write_json(path, make_envelope("onedim", cfg, result));
  log << "min eigenvalue " << rep.min_eigenvalue << " (" << rep.certified_sign << ") -> " << path << '\n';
  return kExitOk;
}

MagneticField scaled_field(const RunConfig& cfg, double value) {
  MagneticField f = cfg.field;
  if (cfg.sweep.component < 0 || cfg.sweep.component >= static_cast<int>(f.components.size()))
    throw ConfigError("sweep.component out of range");
  FieldSpec& c = f.components[cfg.sweep.component];
  if (cfg.sweep.parameter == "amplitude") {
    if (!c.is_compact()) throw ConfigError("sweep over amplitude needs a compact component");
    c.amplitude = value;
  } else if (c.kind == FieldKind::aharonov_bohm) {
    c.flux = value;
  } else if (c.kind == FieldKind::compact_bump) {
    c = FieldSpec::bump_with_flux(c.center, c.support_radius, value);
  } else {
    // uniform disk: (1/2pi) B0 pi s^2 = value
    c.amplitude = 2.0 * value / (c.support_radius * c.support_radius);
  }
  return f;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg, int workers) {
  if (cfg.sweep.l.empty()) throw ConfigError("sweep.l must list at least one window length");
  std::vector<double> values = cfg.sweep.values;
  const bool scaled = !values.empty();
  if (!scaled) values.push_back(0.0);
  std::vector<SweepRow> rows;
  for (double l : cfg.sweep.l)
    for (double v : values) {
      SweepRow r;
      r.index = static_cast<int>(rows.size());
      r.l = l;
      r.value = v;
      rows.push_back(r);
    }
  if (scaled) (void)scaled_field(cfg, values.front());  // config errors surface before the pool starts

  const std::uint64_t seed = resolved_seed(cfg);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& r = rows[i];
      try {
        RunConfig c = cfg;
        c.geometry.window_l = r.l;
        if (scaled) c.field = scaled_field(cfg, r.value);
        bool certified = false;
        try {
          const BoundReport b = bound_report(c, r.l);
          r.critical_length = b.critical_length;
          certified = b.verdict_absence == AbsenceVerdict::certified_empty;
          r.certified = certified ? "certified_empty" : "not_certified";
        } catch (const PreconditionError& e) {
          r.critical_length = 0.0;
          r.certified = "not_applicable";
        }
        ProbeConfig pc;
        pc.window_l = r.l;
        pc.field = c.field;
        pc.gauge = build_gauge(c.gauge, c.field);
        pc.ladder = c.ladder;
        pc.tol = c.tol;
        pc.seed = seed;
        const ProbeResult pr = discrete_spectrum_probe(pc);
        r.verdict = to_string(pr.verdict);
        r.lowest = pr.min_eigenvalue;
        r.consistency = (certified && pr.verdict == ProbeVerdict::present) ? "violation" : "ok";
      } catch (const std::exception& e) {
        r.verdict = "ERROR";
        r.consistency = "error";
        r.error = e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(rows.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  const std::vector<SweepRow> rows = run_sweep(cfg, worker_count());
  std::ostringstream body;
  body << "index,l," << cfg.sweep.parameter
       << ",verdict,lowest_eigenvalue,critical_length,certified,consistency,error\n";
  int violations = 0, errors = 0;
  for (const auto& r : rows) {
    body << r.index << ',' << csv_number(r.l) << ',' << csv_number(r.value) << ',' << r.verdict << ','
         << csv_number(r.lowest) << ',' << csv_number(r.critical_length) << ',' << r.certified << ','
         << r.consistency << ',' << csv_text(r.error) << '\n';
    violations += r.consistency == "violation";
    errors += r.consistency == "error";
  }
  const std::string csv = out_path(cfg, "sweep.csv");
  write_csv_with_header(csv, cfg, body.str());
  const nlohmann::json summary = {{"rows", rows.size()},
                                  {"violations", violations},
                                  {"errors", errors},
                                  {"csv", "sweep.csv"},
                                  {"csv_content_hash", hex64(fnv1a64(body.str()))}};
  write_json(out_path(cfg, "sweep.json"), make_envelope("sweep", cfg, summary));
  log << rows.size() << " rows, " << violations << " violations, " << errors << " errors -> " << csv << '\n';
  return kExitOk;
}

int cmd_verify(const VerifyOptions& opt_in, const std::string& out_dir, std::ostream& log) {
  VerifyOptions opt = opt_in;
  opt.on_result = [&](const CriterionResult& r) {
    log << "criterion " << r.id << " [" << r.name << "]: " << (r.passed ? "PASS" : "FAIL") << " (" << r.seconds
        << " s) " << r.detail << std::endl;
  };
  const VerifyReport rep = run_verification(opt);
  fs::create_directories(out_dir);
  const nlohmann::json result = to_json(rep);
  write_json((fs::path(out_dir) / "verify.json").string(),
             {{"command", "verify"},
              {"level", to_string(opt.level)},
              {"tol", opt.tol},
              {"seed", opt.seed},
              {"result", result},
              {"content_hash", hex64(fnv1a64(result.dump()))}});
  log << (rep.all_passed() ? "all criteria passed" : "some criteria FAILED") << '\n';
  return rep.all_passed() ? kExitOk : kExitFailure;
}

}  // namespace magstrip
