#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "magstrip/grid.hpp"

namespace magstrip {

enum class RhoVariant { compact, aharonov_bohm };

/// Hardy weight rho(x1) = c / (1 + (x1 - p1)^2) on the outer side of each
/// ball centre, zero between them (compact) or right of p1 (AB).
struct RhoProfile {
  RhoVariant variant = RhoVariant::compact;
  double c_minus = 0.0;
  double c_plus = 0.0;
  double p1_minus = 0.0;
  double p1_plus = 0.0;

  static RhoProfile zero();
  static RhoProfile compact(double c_minus, double p1_minus, double c_plus, double p1_plus);
  /// AB variant: `c` and `p1` are stored in the minus slots.
  static RhoProfile aharonov_bohm(double c, double p1);

  double operator()(double x1) const;
  bool identically_zero() const { return c_minus == 0.0 && c_plus == 0.0; }
  /// Jump locations of rho (only where a weight is present).
  std::vector<double> breakpoints() const;
};

struct Onedim1DOptions {
  /// Cell width on the window; <= 0 selects min(l, 1)/40 (1/40 when l = 0).
  double h = 0.0;
  double L1 = 40.0;
  /// Spacing grows like h + growth * dist(x, window), capped at h_max
  /// (<= 0 selects max(h, 0.05)). growth = 0 gives a uniform grid.
  double growth = 0.05;
  double h_max = 0.0;
  /// Enforce the resolution preconditions h <= l/20 and
  /// L1 >= 10 max(|p1|, l, 1).
  bool check_resolution = true;
};

/// Finite-volume realisation of -d^2/dx^2 + rho + 2(g - 1) with Dirichlet
/// ends at +-L1. The window edges +-l and the jumps of rho sit on cell faces,
/// so the potential sampled at the cell centres integrates the indicator of
/// the closed window exactly.
struct Operator1D {
  Grid1D grid;
  double l = 0.0;
  double h = 0.0;
  double L1 = 0.0;
  std::vector<double> potential;  // rho - (3/2) 1{|x| <= l} at the centres
  /// Symmetrised tridiagonal matrix M^{-1/2} K M^{-1/2}.
  Eigen::VectorXd diag;
  Eigen::VectorXd offdiag;
};

Operator1D build_operator_1d(const RhoProfile& rho, double l, const Onedim1DOptions& opt = {});
/// Same operator on the grid with every cell split in two.
Operator1D refine_operator_1d(const Operator1D& op, const RhoProfile& rho);

struct Eigenpair1D {
  double value = 0.0;
  /// Nodal values u(x_i), normalised in the discrete L2 norm.
  std::vector<double> profile;
  double residual = 0.0;
  int iterations = 0;
};

/// Lowest eigenpair: Sturm bisection for the value, inverse iteration for the
/// vector. Throws SolverError when the residual, relative to max|diag|,
/// exceeds `tol`.
Eigenpair1D lowest_eigenpair_1d(const Operator1D& op, double tol = 1e-9);
double lowest_eigenvalue_1d(const Operator1D& op, double tol = 1e-9);

/// Number of eigenvalues strictly below sigma (Sturm count).
int sturm_count(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double sigma);

struct RichardsonEstimate {
  double value = 0.0;
  double error = 0.0;
  double observed_order = 0.0;
  std::vector<double> levels;
};

/// Extrapolation of values computed on grids refined by 2 each level,
/// assuming an error expansion in powers h^order, h^(order+1), ...
RichardsonEstimate richardson(const std::vector<double>& levels, double order = 2.0);

struct WindowInequalityReport {
  double l = 0.0;
  double h = 0.0;
  double L1 = 0.0;
  double min_eigenvalue = 0.0;
  /// "negative" when the minimum lies below -10 h^2, else "nonnegative".
  std::string certified_sign;
  std::vector<double> x;
  std::vector<double> minimizer;
  double residual = 0.0;
};

/// min over the discrete space of int |v'|^2 + rho |v|^2 - (3/2) int_{-l}^{l} |v|^2.
WindowInequalityReport verify_window_inequality(const RhoProfile& rho, double l, const Onedim1DOptions& opt = {},
                                                double tol = 1e-9);

}  // namespace magstrip
