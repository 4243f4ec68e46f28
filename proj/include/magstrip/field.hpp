#pragma once

#include <optional>
#include <string>
#include <vector>

#include "magstrip/geometry.hpp"

namespace magstrip {

enum class FieldKind { compact_bump, uniform_disk, aharonov_bohm };

std::string to_string(FieldKind kind);
FieldKind field_kind_from_string(const std::string& name);

/// One radially symmetric component of a magnetic field.
///
/// compact_bump:  B(x) = amplitude * (1 - |x-p|^2 / s^2)^2 on |x-p| <= s
/// uniform_disk:  B(x) = amplitude on |x-p| <= s
/// aharonov_bohm: point flux 2*pi*flux located at p
struct FieldSpec {
  FieldKind kind = FieldKind::compact_bump;
  Point center;
  double amplitude = 0.0;
  double support_radius = 0.0;
  double flux = 0.0;

  static FieldSpec bump(Point c, double support_radius, double amplitude);
  /// Bump scaled so that its total flux (1/2pi) int B equals `total_flux`.
  static FieldSpec bump_with_flux(Point c, double support_radius, double total_flux);
  static FieldSpec disk(Point c, double support_radius, double amplitude);
  static FieldSpec aharonov_bohm(Point p, double flux);

  bool is_compact() const { return kind != FieldKind::aharonov_bohm; }

  /// Total flux (1/2pi) int B over the plane.
  double total_flux() const;

  /// Throws GeometryError when the support (or the AB point) is not strictly
  /// inside the strip.
  void validate() const;

  /// Radial profile b(t) for compact kinds, t = |x - center|.
  double radial(double t) const;

  /// int_{-inf}^{x1} B(s, x2) ds for compact kinds (closed form).
  double x1_primitive(double x1, double x2) const;

  /// int_{-inf}^{x2} int_R B(s, y) ds dy for compact kinds (closed form).
  double chord_primitive(double x2) const;

  /// int_{y0}^{y1} x1_primitive(x1, y) dy; closed form when x1 lies outside
  /// the support's x1-range, adaptive quadrature otherwise.
  double x1_primitive_vertical(double x1, double y0, double y1) const;
};

/// Superposition of field components. An empty field is B = 0.
struct MagneticField {
  std::vector<FieldSpec> components;

  MagneticField() = default;
  explicit MagneticField(std::vector<FieldSpec> parts) : components(std::move(parts)) {}
  MagneticField(const FieldSpec& single) : components{single} {}  // NOLINT: implicit by intent

  bool empty() const { return components.empty(); }
  bool has_aharonov_bohm() const;
  bool all_compact() const;
  void validate() const;

  /// Smallest b such that every compact component vanishes for |x1| > b.
  double support_half_extent() const;
  std::vector<Point> singular_points() const;
};

/// B(x) for a single component. Points outside the closed strip raise
/// DomainError; the AB point itself raises SingularityError.
double evaluate_field(const FieldSpec& spec, Point x);
double evaluate_field(const MagneticField& field, Point x);

/// int B over the axis-aligned cell [x0,x1]x[y0,y1], computed in x-outer /
/// y-inner order. AB components contribute 2*pi*flux when the point lies in
/// the open cell.
double cell_flux(const MagneticField& field, double x0, double x1, double y0, double y1);

/// Sampled r -> Phi_p(r) = (1/2pi) int_{B(p,r)} B on r_i = R i / n.
struct FluxProfile {
  Point center;
  std::vector<double> radii;
  std::vector<double> values;
  /// Field that produced the samples, kept so that maximisers can be refined
  /// between grid points.
  std::optional<MagneticField> source;
};

/// mu(r) = dist(Phi_p(r), Z) on the same radius grid.
struct MuProfile {
  Point center;
  std::vector<double> radii;
  std::vector<double> values;
  /// Maximiser of mu(r)/r (smallest one on ties) and mu_0 = r0 / mu(r0).
  /// Both are empty when mu vanishes identically.
  std::optional<double> r0_star;
  std::optional<double> mu0;
};

inline constexpr double kFluxQuadratureTol = 1e-8;

/// Flux through B(p, r) for a single radius, polar quadrature around p.
double ball_flux(const MagneticField& field, Point p, double r);

FluxProfile flux_profile(const MagneticField& field, Point p, double R, int n);
MuProfile mu_profile(const FluxProfile& fp);
bool flux_nontrivial(const MuProfile& mp);

/// dist(value, Z).
double distance_to_integers(double value);

}  // namespace magstrip
