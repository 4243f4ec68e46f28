#include "magstrip/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "magstrip/eigensolver.hpp"
#include "magstrip/errors.hpp"

namespace magstrip {

namespace {

using cd = std::complex<double>;

// The discrete operator is bounded below by 1/4 (transverse bound on the
// window columns), so this shift is below the spectrum.
constexpr double kInitialShift = 0.2;

std::vector<double> y_nodes(const Grid2D& g) {
  std::vector<double> ys(static_cast<std::size_t>(g.ny) + 1);
  for (int j = 0; j <= g.ny; ++j) ys[j] = g.y(j);
  return ys;
}

template <typename Scalar>
SpectrumResult solve(const DiscreteMagneticOperator& op, const Eigen::SparseMatrix<Scalar>& H, int k, double tol,
                     std::uint64_t seed) {
  EigensolverOptions eo;
  eo.tol = tol;
  eo.seed = seed;
  eo.initial_shift = kInitialShift;
  const auto res = smallest_eigenpairs<Scalar>(H, k, eo);
  SpectrumResult out;
  out.eigenvalues = res.values;
  out.residuals = res.residuals;
  out.shift = res.shift;
  out.iterations = res.iterations;
  for (const auto& v : res.vectors) {
    Eigen::VectorXcd u(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) u[i] = cd(v[i]) / std::sqrt(op.mass[i]);
    if constexpr (std::is_same_v<Scalar, double>) {
      if (u.real().sum() < 0.0) u = -u;
    }
    out.eigenvectors.push_back(std::move(u));
  }
  return out;
}

}  // namespace

double eps_num(double L) {
  const double t = kPi / (2.0 * L);
  return 3.0 * t * t;
}

DiscreteMagneticOperator assemble_operator(const StripGeometry& geom, const MagneticField& field,
                                           const GaugeSpec& gauge_in, const Grid2D& grid,
                                           const AssemblyOptions& opt) {
  geom.validate();
  field.validate();
  if (grid.geom.window_l != geom.window_l || grid.geom.truncation_L != geom.truncation_L)
    throw PreconditionError("grid was built for a different geometry");
  const GaugeSpec gauge = gauge_in ? gauge_in : default_gauge(field);

  DiscreteMagneticOperator op;
  op.grid = grid;
  op.field = field;
  op.gauge = gauge;
  const int nx = grid.nx();
  const int ny = grid.ny;
  const auto ys = y_nodes(grid);
  op.phases = compute_edge_phases(*gauge, grid.x, ys);

  const bool needs_check = !field.empty() || gauge->kind() != GaugeKind::zero;
  if (opt.check_gauge && needs_check) {
    op.plaquette = plaquette_mismatch(op.phases, field, grid.x, ys);
    if (op.plaquette.max_mismatch > opt.gauge_tol)
      throw GaugeError("gauge does not reproduce the field: plaquette mismatch " +
                       std::to_string(op.plaquette.max_mismatch) + " near (" +
                       std::to_string(op.plaquette.worst_cell.x1) + ", " +
                       std::to_string(op.plaquette.worst_cell.x2) + ")");
  }

  const int n = grid.unknowns;
  op.mass.resize(n);
  op.node_i.assign(n, 0);
  op.node_j.assign(n, 0);
  for (int i = 1; i + 1 < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const int a = grid.idx(i, j);
      if (a < 0) continue;
      op.mass[a] = grid.mass(i, j);
      op.node_i[a] = i;
      op.node_j[a] = j;
    }

  const double wy = 1.0 / (4.0 * std::sin(0.5 * grid.hy) * std::sin(0.5 * grid.hy));
  for (int i = 0; i + 1 < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const int a = grid.idx(i, j), b = grid.idx(i + 1, j);
      if (a < 0 && b < 0) continue;
      op.edges.push_back({a, b, grid.dual_y(j) / (grid.x[i + 1] - grid.x[i]), op.phases.h(i, j)});
    }
  for (int i = 1; i + 1 < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const int a = grid.idx(i, j), b = grid.idx(i, j + 1);
      if (a < 0 && b < 0) continue;
      op.edges.push_back({a, b, grid.dual_x(i) * grid.hy * wy, op.phases.v(i, j)});
    }
  op.complex_arithmetic =
      std::any_of(op.edges.begin(), op.edges.end(), [](const LatticeEdge& e) { return e.theta != 0.0; });

  std::vector<Eigen::Triplet<cd>> tc;
  std::vector<Eigen::Triplet<double>> tr;
  auto scale = [&](int a, int b) { return 1.0 / std::sqrt(op.mass[a] * op.mass[b]); };
  for (const LatticeEdge& e : op.edges) {
    if (op.complex_arithmetic) {
      if (e.a >= 0) tc.emplace_back(e.a, e.a, e.weight * scale(e.a, e.a));
      if (e.b >= 0) tc.emplace_back(e.b, e.b, e.weight * scale(e.b, e.b));
      if (e.a >= 0 && e.b >= 0) {
        const cd ph = std::polar(1.0, e.theta);
        tc.emplace_back(e.a, e.b, -e.weight * ph * scale(e.a, e.b));
        tc.emplace_back(e.b, e.a, -e.weight * std::conj(ph) * scale(e.a, e.b));
      }
    } else {
      if (e.a >= 0) tr.emplace_back(e.a, e.a, e.weight * scale(e.a, e.a));
      if (e.b >= 0) tr.emplace_back(e.b, e.b, e.weight * scale(e.b, e.b));
      if (e.a >= 0 && e.b >= 0) {
        tr.emplace_back(e.a, e.b, -e.weight * scale(e.a, e.b));
        tr.emplace_back(e.b, e.a, -e.weight * scale(e.a, e.b));
      }
    }
  }
  if (op.complex_arithmetic) {
    op.H_complex.resize(n, n);
    op.H_complex.setFromTriplets(tc.begin(), tc.end());
    const Eigen::SparseMatrix<cd> adj = op.H_complex.adjoint();
    const Eigen::SparseMatrix<cd> diff = op.H_complex - adj;
    op.hermiticity_error = diff.nonZeros() ? diff.coeffs().abs().maxCoeff() : 0.0;
  } else {
    op.H_real.resize(n, n);
    op.H_real.setFromTriplets(tr.begin(), tr.end());
    const Eigen::SparseMatrix<double> tr_m = op.H_real.transpose();
    const Eigen::SparseMatrix<double> diff = op.H_real - tr_m;
    op.hermiticity_error = diff.nonZeros() ? diff.coeffs().abs().maxCoeff() : 0.0;
  }
  return op;
}

SpectrumResult lowest_eigenpairs(const DiscreteMagneticOperator& op, int k, double tol, std::uint64_t seed,
                                 double margin) {
  SpectrumResult out = op.complex_arithmetic ? solve(op, op.H_complex, k, tol, seed) : solve(op, op.H_real, k, tol, seed);
  out.grid = op.grid;
  out.field = op.field;
  out.gauge = op.gauge->to_json();
  out.gauge_id = op.gauge->id();
  out.complex_arithmetic = op.complex_arithmetic;
  out.threshold_margin = margin >= 0.0 ? margin : eps_num(op.grid.geom.truncation_L);
  for (double v : out.eigenvalues)
    if (v < 1.0 - out.threshold_margin) out.below_threshold.push_back(v);
  return out;
}

void write_eigenvector_csv(const SpectrumResult& result, int which, const std::string& path) {
  if (which < 0 || which >= static_cast<int>(result.eigenvectors.size())) throw DomainError("no such eigenvector");
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  write_eigenvector_csv(result, which, out);
}

void write_eigenvector_csv(const SpectrumResult& result, int which, std::ostream& out) {
  if (which < 0 || which >= static_cast<int>(result.eigenvectors.size())) throw DomainError("no such eigenvector");
  out.precision(12);
  out << "x1,x2,re,im,abs\n";
  const Grid2D& g = result.grid;
  const Eigen::VectorXcd& u = result.eigenvectors[which];
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j <= g.ny; ++j) {
      const int a = g.idx(i, j);
      const cd v = a >= 0 ? u[a] : cd(0.0);
      out << g.x[i] << ',' << g.y(j) << ',' << v.real() << ',' << v.imag() << ',' << std::abs(v) << '\n';
    }
}

GridOptions Ladder::grid_options(double h_value) const {
  GridOptions o;
  o.h = h_value;
  o.growth = growth;
  o.h_max = h_max;
  return o;
}

std::string to_string(ProbeVerdict v) { return v == ProbeVerdict::present ? "PRESENT" : "NOT_FOUND"; }

ProbeResult discrete_spectrum_probe(const ProbeConfig& cfg) {
  if (cfg.ladder.L.empty() || cfg.ladder.h.empty()) throw ConfigError("empty grid ladder");
  const GaugeSpec gauge = cfg.gauge ? cfg.gauge : default_gauge(cfg.field);
  ProbeResult r;
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  std::vector<double> Ls = cfg.ladder.L;
  std::sort(Ls.begin(), Ls.end());
  for (double h : cfg.ladder.h) {
    double prev = std::numeric_limits<double>::infinity();
    for (double L : Ls) {
      const StripGeometry geom{cfg.window_l, L};
      std::vector<Point> sing = cfg.field.singular_points();
      for (const Point& p : gauge->singular_points()) sing.push_back(p);
      const Grid2D grid = make_grid(geom, cfg.ladder.grid_options(h), sing, cfg.field.support_half_extent());
      const auto op = assemble_operator(geom, cfg.field, gauge, grid);
      const auto spec = lowest_eigenpairs(op, 1, cfg.tol, cfg.seed);
      ProbeRung rung;
      rung.L = L;
      rung.h = h;
      rung.hx = grid.hx;
      rung.hy = grid.hy;
      rung.unknowns = grid.unknowns;
      rung.window_nodes = grid.window_nodes;
      rung.lowest = spec.eigenvalues.front();
      rung.residual = spec.residuals.front();
      rung.eps_num = eps_num(L);
      rung.below = rung.lowest < 1.0 - rung.eps_num;
      if (rung.lowest > prev + 1e-9) r.monotone_in_L = false;
      prev = rung.lowest;
      r.min_eigenvalue = std::min(r.min_eigenvalue, rung.lowest);
      if (rung.below) r.verdict = ProbeVerdict::present;
      r.rungs.push_back(rung);
    }
  }
  return r;
}

LambdaWindowEstimate lambda_window(double l, const Ladder& ladder, double tol, std::uint64_t seed) {
  if (!(l > 0.0)) throw DomainError("lambda(l) requires l > 0");
  if (ladder.L.empty() || ladder.h.empty()) throw ConfigError("empty grid ladder");
  LambdaWindowEstimate est;
  est.L = *std::max_element(ladder.L.begin(), ladder.L.end());
  est.h = ladder.h;
  std::sort(est.h.begin(), est.h.end(), std::greater<>());
  const StripGeometry geom{l, est.L};
  for (double h : est.h) {
    const Grid2D grid = make_grid(geom, ladder.grid_options(h));
    const auto op = assemble_operator(geom, MagneticField{}, make_zero_gauge(), grid);
    est.levels.push_back(lowest_eigenpairs(op, 1, tol, seed).eigenvalues.front());
  }
  bool halving = true;
  for (std::size_t i = 0; i + 1 < est.h.size(); ++i)
    halving = halving && std::abs(est.h[i] / est.h[i + 1] - 2.0) < 1e-9;
  if (halving) {
    const RichardsonEstimate r = richardson(est.levels, 2.0);
    est.value = r.value;
    est.error = r.error;
    est.observed_order = r.observed_order;
  } else {
    est.value = est.levels.back();
    est.error = est.levels.size() > 1 ? std::abs(est.levels.back() - est.levels[est.levels.size() - 2]) : 0.0;
  }
  return est;
}

std::vector<Eigen::VectorXcd> random_trial_functions(const DiscreteMagneticOperator& op, int count,
                                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double L = op.grid.geom.truncation_L;
  const double reach = std::min(6.0, 0.6 * L);
  std::vector<Eigen::VectorXcd> out;
  for (int t = 0; t < count; ++t) {
    const double c = reach * (2.0 * uni(rng) - 1.0);
    const double s = 0.3 + 2.7 * uni(rng);
    cd a[3];
    for (auto& v : a) v = cd(nd(rng), nd(rng));
    const cd b(nd(rng), nd(rng));
    const double k1 = 4.0 * uni(rng) - 2.0, k2 = 4.0 * uni(rng) - 2.0, k3 = 2.0 * uni(rng) - 1.0;
    Eigen::VectorXcd u(op.dimension());
    for (int n = 0; n < op.dimension(); ++n) {
      const double x1 = op.grid.x[op.node_i[n]];
      const double x2 = op.grid.y(op.node_j[n]);
      const double env = std::exp(-std::pow((x1 - c) / s, 2));
      cd tr = b * std::cos(0.5 * x2);
      for (int k = 0; k < 3; ++k) tr += a[k] * std::sin((k + 1) * x2);
      u[n] = env * tr * std::polar(1.0, k1 * x1 + k2 * x2 + k3 * x1 * x2);
    }
    out.push_back(std::move(u));
  }
  return out;
}

FormCheckReport form_inequality_check(const DiscreteMagneticOperator& op, const RhoProfile& rho,
                                      const std::vector<Eigen::VectorXcd>& trials, double tol) {
  FormCheckReport rep;
  rep.tolerance = tol;
  rep.min_normalized_margin = std::numeric_limits<double>::infinity();
  const double l = op.grid.geom.window_l;
  for (const auto& u : trials) {
    if (u.size() != op.dimension()) throw DomainError("trial function has the wrong size");
    TrialOutcome t;
    for (const LatticeEdge& e : op.edges) {
      const cd ua = e.a >= 0 ? u[e.a] : cd(0.0);
      const cd ub = e.b >= 0 ? u[e.b] : cd(0.0);
      t.form += e.weight * std::norm(std::polar(1.0, e.theta) * ub - ua);
    }
    for (int n = 0; n < op.dimension(); ++n) {
      const double x1 = op.grid.x[op.node_i[n]];
      const double m2 = op.mass[n] * std::norm(u[n]);
      t.norm_sq += m2;
      t.g_term += (std::abs(x1) <= l ? 0.25 : 1.0) * m2;
      t.hardy_lhs += rho(x1) * m2;
    }
    t.margin = t.form - t.g_term - t.hardy_lhs;
    const double normalized = t.margin / t.norm_sq;
    rep.min_normalized_margin = std::min(rep.min_normalized_margin, normalized);
    if (normalized < -tol) ++rep.violations;
    rep.trials.push_back(t);
  }
  return rep;
}

DiamagneticReport diamagnetic_check(const DiscreteMagneticOperator& op, const Eigen::VectorXcd& u) {
  DiamagneticReport rep;
  const Grid2D& g = op.grid;
  auto value = [&](int i, int j) { return g.idx(i, j) >= 0 ? u[g.idx(i, j)] : cd(0.0); };
  for (int n = 0; n < op.dimension(); ++n) {
    const int i = op.node_i[n], j = op.node_j[n];
    const cd ua = u[n];
    const cd ux = value(i + 1, j), uy = value(i, j + 1);
    const double dx = g.x[i + 1] - g.x[i];
    const double mod_x = (std::abs(ux) - std::abs(ua)) / dx;
    const double mod_y = (std::abs(uy) - std::abs(ua)) / g.hy;
    const double mag_x = std::abs(std::polar(1.0, op.phases.h(i, j)) * ux - ua) / dx;
    const double mag_y = std::abs(std::polar(1.0, op.phases.v(i, j)) * uy - ua) / g.hy;
    const double lhs = std::hypot(mod_x, mod_y);
    const double rhs = std::hypot(mag_x, mag_y);
    rep.max_violation = std::max(rep.max_violation, lhs - rhs);
    rep.max_gradient = std::max(rep.max_gradient, rhs);
    ++rep.nodes;
  }
  return rep;
}

}  // namespace magstrip
