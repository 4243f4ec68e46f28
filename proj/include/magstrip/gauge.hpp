#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "magstrip/field.hpp"
#include "magstrip/geometry.hpp"

namespace magstrip {

enum class GaugeKind { zero, line_integral, compactified, aharonov_bohm, shifted, sum };

std::string to_string(GaugeKind kind);

/// A magnetic vector potential A = (a1, a2) together with its edge
/// integrals, which drive the Peierls phases of the lattice operator.
class Gauge {
 public:
  virtual ~Gauge() = default;
  virtual GaugeKind kind() const = 0;
  virtual Vec2 potential(Point x) const = 0;
  /// int_a^b A . dl along the straight segment from a to b.
  virtual double edge_integral(Point a, Point b) const = 0;
  virtual nlohmann::json to_json() const = 0;
  /// Points where A is singular (Aharonov-Bohm fluxes).
  virtual std::vector<Point> singular_points() const { return {}; }
  /// Half-width beyond which A vanishes identically; infinity if it does not.
  virtual double support_half_extent() const;
  std::string id() const;
};

using GaugeSpec = std::shared_ptr<const Gauge>;

/// a1 = -Phi (x2 - p2) / |x - p|^2, a2 = Phi (x1 - p1) / |x - p|^2.
Vec2 ab_potential(double flux, Point p, Point x);

/// a1 = 0, a2 = int_{-inf}^{x1} B(s, x2) ds - alpha int_R B(s, x2) ds.
/// alpha = 0 anchors A to vanish left of the support, alpha = 1 right of it.
Vec2 line_integral_gauge(const MagneticField& field, Point x, double alpha = 0.0);

GaugeSpec make_zero_gauge();
GaugeSpec make_line_integral_gauge(const MagneticField& field, double alpha = 0.0);
GaugeSpec make_ab_gauge(double flux, Point p);
/// A + grad h with the smooth gauge function
/// h(x) = amplitude sin(k1 x1 + phase) cos(k2 x2).
GaugeSpec make_shifted_gauge(GaugeSpec base, double amplitude, double k1, double k2, double phase = 0.3);
GaugeSpec make_sum_gauge(std::vector<GaugeSpec> parts);
/// Line-integral gauge for the compact part plus AB potentials.
GaugeSpec default_gauge(const MagneticField& field);

struct CompactifyOptions {
  /// Transition width of the cutoff; <= 0 uses w = b (cutoff on (b, 2b)).
  double width = 0.0;
  /// Constant shifts added to h- and h+ before blending.
  double c_minus = 0.0;
  double c_plus = 0.0;
};

/// A~ = A - grad(zeta (h +- C+-)), where h+- are path integrals of A from the
/// anchors (+-(b + w), pi/2) (horizontal, then vertical) and zeta is a C1
/// cubic smoothstep equal to 0 for |x1| <= b and 1 for |x1| >= b + w.
/// Throws PreconditionError when B does not vanish for |x1| > b.
GaugeSpec compactify_gauge(GaugeSpec base, const MagneticField& field, double b, const CompactifyOptions& opt = {});

/// h+ (sign > 0) or h- (sign < 0) of a compactified gauge at x, evaluated
/// along the declared path. Used to check path independence.
double compactified_tail_potential(const Gauge& compactified, int sign, Point x);

/// Horizontal-then-vertical versus vertical-then-horizontal path integral
/// of the base potential from a to b.
double path_integral_hv(const Gauge& g, Point a, Point b);
double path_integral_vh(const Gauge& g, Point a, Point b);

struct SupOptions {
  int samples_x1 = 160;
  int samples_x2 = 48;
  /// Radius of the ball excluded around every singular point.
  double exclusion_radius = 0.0;
};

struct SupResult {
  double value = 0.0;
  Point argmax;
};

/// max |A|^2 over a dense sample grid of `region`, refined around the
/// argmax. Throws DomainError when the region contains a singular point
/// that is not excluded.
SupResult sup_A2(const Gauge& gauge, const Box& region, const SupOptions& opt = {});

struct GaugeFamily {
  std::vector<double> cutoff_factors{1.0, 1.5};
  /// Transition widths in units of max(b, 1).
  std::vector<double> width_factors{0.5, 1.0, 2.0, 4.0, 8.0};
  std::vector<double> alphas{0.0, 0.5, 1.0};
  bool try_centered_shifts = true;
  SupOptions sup{96, 40, 0.0};
};

struct GaugeSearchResult {
  GaugeSpec gauge;
  double sup_A2 = 0.0;
  double baseline_sup_A2 = 0.0;
  int candidates = 0;
};

/// Coarse search over the declared family. The baseline line-integral gauge
/// is part of the family, so the result never exceeds its sup |A|^2; the
/// returned value is only an upper bound for the infimum over all gauges.
GaugeSearchResult minimize_sup_A2(const MagneticField& field, const GaugeFamily& family = {});

/// Edge integrals of a gauge on a tensor grid: horizontal (i,j)->(i+1,j) and
/// vertical (i,j)->(i,j+1).
struct EdgePhases {
  int nx = 0;
  int ny = 0;  // number of y intervals; nodes j = 0..ny
  std::vector<double> horizontal;
  std::vector<double> vertical;

  double h(int i, int j) const { return horizontal[static_cast<std::size_t>(i) * (ny + 1) + j]; }
  double v(int i, int j) const { return vertical[static_cast<std::size_t>(i) * ny + j]; }
};

EdgePhases compute_edge_phases(const Gauge& gauge, const std::vector<double>& xs, const std::vector<double>& ys);

struct PlaquetteReport {
  double max_mismatch = 0.0;
  Point worst_cell;
  long cells = 0;
};

/// Compares each plaquette circulation with the cell flux of B, modulo 2 pi.
PlaquetteReport plaquette_mismatch(const EdgePhases& phases, const MagneticField& field, const std::vector<double>& xs,
                                   const std::vector<double>& ys);

}  // namespace magstrip
