#include "magstrip/onedim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magstrip/errors.hpp"

namespace magstrip {

RhoProfile RhoProfile::zero() { return {}; }

RhoProfile RhoProfile::compact(double c_minus, double p1_minus, double c_plus, double p1_plus) {
  if (c_minus < 0.0 || c_plus < 0.0) throw DomainError("rho weights must be non-negative");
  if ((c_minus > 0.0 || c_plus > 0.0) && !(p1_minus < p1_plus)) throw DomainError("rho requires p1- < p1+");
  return {RhoVariant::compact, c_minus, c_plus, p1_minus, p1_plus};
}

RhoProfile RhoProfile::aharonov_bohm(double c, double p1) {
  if (c < 0.0) throw DomainError("rho weight must be non-negative");
  if (!std::isfinite(p1)) throw DomainError("rho requires a finite p1");
  return {RhoVariant::aharonov_bohm, c, 0.0, p1, 0.0};
}

double RhoProfile::operator()(double x1) const {
  auto tail = [](double c, double t) { return c / (1.0 + t * t); };
  if (x1 < p1_minus) return tail(c_minus, x1 - p1_minus);
  if (variant == RhoVariant::compact && x1 > p1_plus) return tail(c_plus, x1 - p1_plus);
  return 0.0;
}

std::vector<double> RhoProfile::breakpoints() const {
  std::vector<double> b;
  if (c_minus > 0.0) b.push_back(p1_minus);
  if (variant == RhoVariant::compact && c_plus > 0.0) b.push_back(p1_plus);
  return b;
}

namespace {

void assemble(Operator1D& op, const RhoProfile& rho) {
  const Grid1D& g = op.grid;
  const std::size_t n = g.size();
  op.potential.resize(n);
  Eigen::VectorXd k_diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd k_off(static_cast<Eigen::Index>(n > 0 ? n - 1 : 0));
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.centers[i];
    op.potential[i] = rho(x) - (std::abs(x) <= op.l ? 1.5 : 0.0);
    k_diag[i] += op.potential[i] * g.width(i);
  }
  // Dirichlet faces at both ends: half-cell distance to the boundary
  k_diag[0] += 1.0 / (g.centers.front() - g.faces.front());
  k_diag[n - 1] += 1.0 / (g.faces.back() - g.centers.back());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double w = 1.0 / (g.centers[i + 1] - g.centers[i]);
    k_diag[i] += w;
    k_diag[i + 1] += w;
    k_off[i] = -w;
  }
  op.diag.resize(static_cast<Eigen::Index>(n));
  op.offdiag.resize(k_off.size());
  for (std::size_t i = 0; i < n; ++i) op.diag[i] = k_diag[i] / g.width(i);
  for (std::size_t i = 0; i + 1 < n; ++i) op.offdiag[i] = k_off[i] / std::sqrt(g.width(i) * g.width(i + 1));
}

// Solves (T - sigma) x = b for a symmetric tridiagonal T (Thomas algorithm).
Eigen::VectorXd tridiagonal_solve(const Eigen::VectorXd& d, const Eigen::VectorXd& e, double sigma,
                                  Eigen::VectorXd b) {
  const Eigen::Index n = d.size();
  Eigen::VectorXd c(n);
  double piv = d[0] - sigma;
  c[0] = piv;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double m = e[i - 1] / c[i - 1];
    c[i] = d[i] - sigma - m * e[i - 1];
    b[i] -= m * b[i - 1];
  }
  b[n - 1] /= c[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i) b[i] = (b[i] - e[i] * b[i + 1]) / c[i];
  return b;
}

Eigen::VectorXd tridiagonal_apply(const Eigen::VectorXd& d, const Eigen::VectorXd& e, const Eigen::VectorXd& v) {
  Eigen::VectorXd r = d.cwiseProduct(v);
  const Eigen::Index n = d.size();
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    r[i] += e[i] * v[i + 1];
    r[i + 1] += e[i] * v[i];
  }
  return r;
}

}  // namespace

Operator1D build_operator_1d(const RhoProfile& rho, double l, const Onedim1DOptions& opt) {
  if (!(l >= 0.0)) throw DomainError("window half-length must be non-negative");
  Operator1D op;
  op.l = l;
  op.L1 = opt.L1;
  op.h = opt.h > 0.0 ? opt.h : (l > 0.0 ? std::min(l, 1.0) : 1.0) / 40.0;
  if (!(op.L1 > l)) throw DomainError("L1 must exceed the window half-length");
  if (opt.check_resolution && l > 0.0) {
    if (op.h > l / 20.0 * (1.0 + 1e-12)) throw PreconditionError("1-D grid does not resolve the window (h > l/20)");
    double reach = std::max(l, 1.0);
    for (double b : rho.breakpoints()) reach = std::max(reach, std::abs(b));
    if (op.L1 < 10.0 * reach * (1.0 - 1e-12)) throw PreconditionError("1-D truncation too short (L1 < 10 max(|p1|, l, 1))");
  }
  const double h = op.h;
  const double h_max = opt.h_max > 0.0 ? std::max(opt.h_max, h) : std::max(h, 0.05);
  const double gamma = opt.growth;
  auto spacing = [=](double x) {
    const double d = std::max(0.0, std::abs(x) - l);
    return std::min(h_max, h + gamma * d);
  };
  std::vector<double> breaks = rho.breakpoints();
  if (l > 0.0) {
    breaks.push_back(-l);
    breaks.push_back(l);
  }
  op.grid = make_cell_grid(-op.L1, op.L1, breaks, spacing);
  assemble(op, rho);
  return op;
}

Operator1D refine_operator_1d(const Operator1D& op, const RhoProfile& rho) {
  Operator1D r;
  r.l = op.l;
  r.L1 = op.L1;
  r.h = op.h / 2.0;
  r.grid = refine(op.grid);
  assemble(r, rho);
  return r;
}

int sturm_count(const Eigen::VectorXd& d, const Eigen::VectorXd& e, double sigma) {
  int count = 0;
  double q = d[0] - sigma;
  if (q < 0.0) ++count;
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  for (Eigen::Index i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = tiny;
    q = d[i] - sigma - e[i - 1] * e[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

Eigenpair1D lowest_eigenpair_1d(const Operator1D& op, double tol) {
  const Eigen::VectorXd& d = op.diag;
  const Eigen::VectorXd& e = op.offdiag;
  const Eigen::Index n = d.size();
  if (n == 0) throw DomainError("empty operator");

  double lo = std::numeric_limits<double>::infinity();
  double hi = d.minCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i + 1 < n ? std::abs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - r);
  }
  int it = 0;
  while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max({1.0, std::abs(lo), std::abs(hi)}) &&
         it < 300) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (sturm_count(d, e, mid) >= 1 ? hi : lo) = mid;
    ++it;
  }
  Eigenpair1D out;
  out.value = 0.5 * (lo + hi);

  const double delta = 1e-9 * std::max(1.0, std::abs(out.value));
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  double residual = std::numeric_limits<double>::infinity();
  int inv_it = 0;
  // residuals are measured relative to the operator scale max|diag|, which
  // bounds the round-off floor of any eigenvector computation
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  for (; inv_it < 20 && residual > tol; ++inv_it) {
    v = tridiagonal_solve(d, e, out.value - delta, v);
    v.normalize();
    residual = (tridiagonal_apply(d, e, v) - out.value * v).norm() / scale;
  }
  out.iterations = it + inv_it;
  out.residual = residual;
  if (!(residual <= tol)) throw SolverError("1-D inverse iteration did not converge", residual, out.iterations);

  if (v.sum() < 0.0) v = -v;
  out.profile.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.profile[i] = v[i] / std::sqrt(op.grid.width(i));
  return out;
}

double lowest_eigenvalue_1d(const Operator1D& op, double tol) { return lowest_eigenpair_1d(op, tol).value; }

RichardsonEstimate richardson(const std::vector<double>& levels, double order) {
  if (levels.empty()) throw DomainError("Richardson needs at least one level");
  RichardsonEstimate r;
  r.levels = levels;
  if (levels.size() == 1) {
    r.value = levels[0];
    return r;
  }
  std::vector<double> t = levels;
  double p = order;
  double prev_best = t[t.size() - 2];
  for (std::size_t sweep = 1; sweep < levels.size(); ++sweep) {
    const double f = std::pow(2.0, p);
    prev_best = t.back();
    std::vector<double> next;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) next.push_back((f * t[i + 1] - t[i]) / (f - 1.0));
    t = next;
    p += 1.0;
  }
  r.value = t.back();
  r.error = std::abs(r.value - prev_best);
  if (levels.size() >= 3) {
    const std::size_t k = levels.size();
    const double a = levels[k - 3] - levels[k - 2];
    const double b = levels[k - 2] - levels[k - 1];
    if (a != 0.0 && b != 0.0 && a / b > 0.0) r.observed_order = std::log2(a / b);
  }
  return r;
}

WindowInequalityReport verify_window_inequality(const RhoProfile& rho, double l, const Onedim1DOptions& opt,
                                                double tol) {
  const Operator1D op = build_operator_1d(rho, l, opt);
  const Eigenpair1D ep = lowest_eigenpair_1d(op, tol);
  WindowInequalityReport r;
  r.l = l;
  r.h = op.h;
  r.L1 = op.L1;
  r.min_eigenvalue = ep.value;
  r.certified_sign = ep.value < -10.0 * op.h * op.h ? "negative" : "nonnegative";
  r.x = op.grid.centers;
  r.minimizer = ep.profile;
  r.residual = ep.residual;
  return r;
}

}  // namespace magstrip
