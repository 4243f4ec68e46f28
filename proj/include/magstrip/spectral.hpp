#pragma once

#include <complex>
#include <iosfwd>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "magstrip/field.hpp"
#include "magstrip/gauge.hpp"
#include "magstrip/grid.hpp"
#include "magstrip/onedim.hpp"

namespace magstrip {

/// Threshold margin 3 (pi / 2L)^2 separating bound states from truncation
/// artefacts of the box [-L, L].
double eps_num(double L);

/// One lattice edge; a or b is -1 for a Dirichlet end. theta is the Peierls
/// phase from a to b.
struct LatticeEdge {
  int a = -1;
  int b = -1;
  double weight = 0.0;
  double theta = 0.0;
};

struct AssemblyOptions {
  /// Maximal plaquette flux mismatch (mod 2 pi) tolerated before the
  /// gauge is rejected.
  double gauge_tol = 1e-8;
  bool check_gauge = true;
};

/// Finite-volume magnetic operator H = M^{-1/2} K M^{-1/2}, where
/// K is the Hermitian matrix of Q(u) = sum_e w_e |e^{i theta_e} u_b - u_a|^2
/// and M the lumped mass. Bottom nodes of the window carry half a cell, so
/// the natural boundary condition there is the magnetic Neumann condition.
/// Transverse weights are scaled by (h_y/2)^2 / sin^2(h_y/2), which makes
/// the discrete Dirichlet transverse ground state exactly 1.
struct DiscreteMagneticOperator {
  Grid2D grid;
  MagneticField field;
  GaugeSpec gauge;
  bool complex_arithmetic = false;
  Eigen::SparseMatrix<double> H_real;
  Eigen::SparseMatrix<std::complex<double>> H_complex;
  Eigen::VectorXd mass;
  std::vector<LatticeEdge> edges;
  EdgePhases phases;
  std::vector<int> node_i;
  std::vector<int> node_j;
  double hermiticity_error = 0.0;
  PlaquetteReport plaquette;

  int dimension() const { return grid.unknowns; }
};

DiscreteMagneticOperator assemble_operator(const StripGeometry& geom, const MagneticField& field, const GaugeSpec& gauge,
                                           const Grid2D& grid, const AssemblyOptions& opt = {});

struct SpectrumResult {
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  /// Nodal values on the unknowns, normalised so that sum m |u|^2 = 1.
  std::vector<Eigen::VectorXcd> eigenvectors;
  Grid2D grid;
  double threshold_margin = 0.0;
  std::vector<double> below_threshold;
  MagneticField field;
  nlohmann::json gauge;
  std::string gauge_id;
  bool complex_arithmetic = false;
  double shift = 0.0;
  int iterations = 0;
};

/// k lowest eigenpairs; below_threshold lists eigenvalues < 1 - margin
/// (margin < 0 selects eps_num(L)).
SpectrumResult lowest_eigenpairs(const DiscreteMagneticOperator& op, int k, double tol = 1e-8,
                                 std::uint64_t seed = 0, double margin = -1.0);

/// Eigenvector as CSV rows x1,x2,re,im,abs (Dirichlet nodes included as 0).
void write_eigenvector_csv(const SpectrumResult& result, int which, const std::string& path);
void write_eigenvector_csv(const SpectrumResult& result, int which, std::ostream& out);

/// Grid ladder: every (L, h) pair is a rung.
struct Ladder {
  std::vector<double> L{10.0, 20.0, 40.0};
  std::vector<double> h{0.05, 0.025};
  double growth = 1.05;
  double h_max = 0.5;

  GridOptions grid_options(double h_value) const;
};

struct ProbeRung {
  double L = 0.0;
  double h = 0.0;
  double hx = 0.0;
  double hy = 0.0;
  int unknowns = 0;
  int window_nodes = 0;
  double lowest = 0.0;
  double residual = 0.0;
  double eps_num = 0.0;
  bool below = false;
};

enum class ProbeVerdict { present, not_found };
std::string to_string(ProbeVerdict v);

struct ProbeConfig {
  double window_l = 0.0;
  MagneticField field;
  GaugeSpec gauge;  // null selects default_gauge(field)
  Ladder ladder;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

struct ProbeResult {
  ProbeVerdict verdict = ProbeVerdict::not_found;
  std::vector<ProbeRung> rungs;
  double min_eigenvalue = 0.0;
  /// Lowest eigenvalue never increases with L at fixed h (within 1e-9).
  bool monotone_in_L = true;
};

/// PRESENT when some rung has an eigenvalue below 1 - eps_num(L): the
/// truncated eigenfunction is an admissible trial function, so this
/// certifies discrete spectrum below 1 (up to discretisation error).
/// NOT_FOUND does not certify absence.
ProbeResult discrete_spectrum_probe(const ProbeConfig& cfg);

struct LambdaWindowEstimate {
  double value = 0.0;
  double error = 0.0;
  double L = 0.0;
  std::vector<double> h;
  std::vector<double> levels;
  double observed_order = 0.0;
};

/// Lowest eigenvalue of the non-magnetic window problem at the largest L of
/// the ladder, Richardson-extrapolated over the h values (halving ladder).
LambdaWindowEstimate lambda_window(double l, const Ladder& ladder, double tol = 1e-8, std::uint64_t seed = 0);

struct TrialOutcome {
  double hardy_lhs = 0.0;   // int rho |u|^2
  double form = 0.0;        // ||(-i grad + A) u||^2
  double g_term = 0.0;      // int g |u|^2
  double norm_sq = 0.0;
  double margin = 0.0;      // form - g_term - hardy_lhs
};

struct FormCheckReport {
  std::vector<TrialOutcome> trials;
  double min_normalized_margin = 0.0;
  int violations = 0;
  double tolerance = 1e-6;
};

/// Smooth pseudo-random trial functions on the unknowns: Gaussian envelopes
/// in x1 times a few transverse modes, with random smooth phases.
std::vector<Eigen::VectorXcd> random_trial_functions(const DiscreteMagneticOperator& op, int count,
                                                     std::uint64_t seed);

/// Evaluates both sides of int rho |u|^2 <= int |(-i grad + A)u|^2 - g |u|^2
/// with the lattice quadrature; margins below -tol ||u||^2 count as
/// violations.
FormCheckReport form_inequality_check(const DiscreteMagneticOperator& op, const RhoProfile& rho,
                                      const std::vector<Eigen::VectorXcd>& trials, double tol = 1e-6);

struct DiamagneticReport {
  /// max over nodes of |grad|u|| - |(-i grad + A) u|, forward differences
  double max_violation = 0.0;
  double max_gradient = 0.0;
  long nodes = 0;
};

DiamagneticReport diamagnetic_check(const DiscreteMagneticOperator& op, const Eigen::VectorXcd& u);

}  // namespace magstrip
