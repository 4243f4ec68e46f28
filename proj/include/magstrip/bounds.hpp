#pragma once

#include <optional>
#include <string>

#include "magstrip/field.hpp"
#include "magstrip/geometry.hpp"

namespace magstrip {

/// First positive zero of J0, found once by bisection on the ascending
/// power series and cached.
double bessel_j0_first_zero();

/// J0 from its ascending series (accurate for |x| <= 10).
double bessel_j0_series(double x);

/// pi^2 min{p2^-2, (pi - p2)^-2} - 1.
double c3_transverse(double p2);

/// int_{-inf}^{0} (pi/2 + arctan s)^2 ds, evaluated numerically.
/// Closed form: pi ln 2.
double arctan_profile_integral();

enum class HardyVariant { compact, aharonov_bohm };

struct HardyConstantSet {
  HardyVariant variant = HardyVariant::compact;
  double radius = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  /// Reported only; they do not enter `c`. c5 uses c4 where the printed
  /// recursion refers to c5 itself.
  std::optional<double> c5_diagnostic;
  std::optional<double> c6_diagnostic;
  double nu0 = 0.0;
  /// mu used by the AB formula (dist(Phi, Z)); unused for compact fields.
  double mu = 0.0;
  /// The Hardy weight constant c(p, R) or c(p, Phi).
  double c = 0.0;
  bool degenerate = false;
};

/// c(p, R) = 1 / (16 + c1 c2) from a mu-profile sampled on [0, R]; c = 0 when
/// mu vanishes identically.
HardyConstantSet hardy_constant_compact(Point p, double R, const MuProfile& mp);

/// Builds the profile itself, refined 10x over `n` intervals.
HardyConstantSet hardy_constant_for_field(const MagneticField& field, Point p, double R, int n = 64);

/// c(p, Phi) for the Aharonov-Bohm field.
HardyConstantSet hardy_constant_ab(Point p, double R, double flux);

/// Best c(p, Phi) over a 64-point grid of R in (0, r_max).
HardyConstantSet hardy_constant_ab_scan(Point p, double r_max, double flux);

enum class KappaBranch { hardy, distance };

struct KappaValue {
  double value = 0.0;
  KappaBranch branch = KappaBranch::hardy;
};

/// min{pi c, pi / (4 ln 2 + pi |p1|)}.
double kappa(double c, double p1_abs);
KappaValue kappa_with_branch(double c, double p1_abs);

enum class AbsenceVerdict { certified_empty, not_certified };

std::string to_string(AbsenceVerdict v);
std::string to_string(KappaBranch b);

struct PresenceCheck {
  double lambda_l = 0.0;
  double max_A_sq = 0.0;
  bool satisfied = false;
};

struct SideReport {
  Ball ball;
  HardyConstantSet hardy;
  KappaValue kappa;
  bool flux_nontrivial = false;
};

struct BoundReport {
  HardyVariant variant = HardyVariant::compact;
  double window_l = 0.0;
  std::optional<SideReport> minus;  // compact: ball left of the window
  std::optional<SideReport> plus;   // compact: ball right of the window
  std::optional<SideReport> ab;     // Aharonov-Bohm point with the chosen R
  double critical_length = 0.0;
  /// true for the AB criterion l < kappa/6, false for l <= (k- + k+)/12.
  bool strict_inequality = false;
  AbsenceVerdict verdict_absence = AbsenceVerdict::not_certified;
  std::optional<PresenceCheck> presence_check;
};

struct CompactBoundInputs {
  MagneticField field;
  Ball minus;
  Ball plus;
  double window_l = 0.0;
  int profile_intervals = 64;
};

struct AbBoundInputs {
  Point p;
  double flux = 0.0;
  double window_l = 0.0;
  /// Fixed radius; when empty c(p, Phi) is maximised over R.
  std::optional<double> radius;
};

BoundReport critical_length(const CompactBoundInputs& in);
BoundReport critical_length(const AbBoundInputs& in);

/// lambda(l) + max|A|^2 < 1.
bool presence_condition(double lambda_l, double max_A_sq);

}  // namespace magstrip
