#include "magstrip/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magstrip/errors.hpp"
#include "magstrip/quadrature.hpp"

namespace magstrip {

namespace {

// int (rho^2 - t^2)^2 dt
double bump_chord_primitive(double rho, double t) {
  const double r2 = rho * rho;
  return r2 * r2 * t - 2.0 / 3.0 * r2 * t * t * t + std::pow(t, 5) / 5.0;
}

bool in_closed_strip(Point x) { return x.x2 >= 0.0 && x.x2 <= kStripHeight; }

// Angular integral int_0^{2pi} b(|p + rho e_theta - c|) dtheta for a compact
// component at distance d from p.
double angular_integral(const FieldSpec& spec, double d, double rho) {
  const double s = spec.support_radius;
  if (rho == 0.0) return 2.0 * kPi * spec.radial(d);
  if (d < 1e-14) return 2.0 * kPi * spec.radial(rho);
  const double q = (rho * rho + d * d - s * s) / (2.0 * rho * d);
  if (q >= 1.0) return 0.0;
  const double half = q <= -1.0 ? kPi : std::acos(q);
  if (spec.kind == FieldKind::uniform_disk) return 2.0 * half * spec.amplitude;
  auto f = [&](double phi) {
    const double t2 = rho * rho + d * d - 2.0 * rho * d * std::cos(phi);
    return spec.radial(std::sqrt(std::max(t2, 0.0)));
  };
  return 2.0 * integrate_smooth_pieces(f, 0.0, half, {});
}

// (1/2pi) int_{r_lo < |x-p| < r_hi} B for one component.
double annulus_flux(const FieldSpec& spec, Point p, double r_lo, double r_hi) {
  const double d = distance(spec.center, p);
  if (spec.kind == FieldKind::aharonov_bohm) {
    return (d >= r_lo && d < r_hi) ? spec.flux : 0.0;
  }
  const double s = spec.support_radius;
  const double lo = std::max(r_lo, d - s);
  const double hi = std::min(r_hi, d + s);
  if (!(hi > lo)) return 0.0;
  auto f = [&](double rho) { return rho * angular_integral(spec, d, rho); };
  return integrate_split(f, lo, hi, {std::abs(d - s), d + s}, 1e-12) / (2.0 * kPi);
}

}  // namespace

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::compact_bump: return "compact_bump";
    case FieldKind::uniform_disk: return "uniform_disk";
    case FieldKind::aharonov_bohm: return "aharonov_bohm";
  }
  return "unknown";
}

FieldKind field_kind_from_string(const std::string& name) {
  if (name == "compact_bump") return FieldKind::compact_bump;
  if (name == "uniform_disk") return FieldKind::uniform_disk;
  if (name == "aharonov_bohm") return FieldKind::aharonov_bohm;
  throw DomainError("unknown field kind '" + name + "'");
}

FieldSpec FieldSpec::bump(Point c, double support_radius, double amplitude) {
  return {FieldKind::compact_bump, c, amplitude, support_radius, amplitude * support_radius * support_radius / 6.0};
}

FieldSpec FieldSpec::bump_with_flux(Point c, double support_radius, double total_flux) {
  return bump(c, support_radius, 6.0 * total_flux / (support_radius * support_radius));
}

FieldSpec FieldSpec::disk(Point c, double support_radius, double amplitude) {
  return {FieldKind::uniform_disk, c, amplitude, support_radius, amplitude * support_radius * support_radius / 2.0};
}

FieldSpec FieldSpec::aharonov_bohm(Point p, double flux) {
  return {FieldKind::aharonov_bohm, p, 0.0, 0.0, flux};
}

double FieldSpec::total_flux() const {
  switch (kind) {
    case FieldKind::compact_bump: return amplitude * support_radius * support_radius / 6.0;
    case FieldKind::uniform_disk: return amplitude * support_radius * support_radius / 2.0;
    case FieldKind::aharonov_bohm: return flux;
  }
  return 0.0;
}

void FieldSpec::validate() const {
  if (!std::isfinite(center.x1) || !std::isfinite(center.x2)) throw DomainError("field center is not finite");
  if (kind == FieldKind::aharonov_bohm) {
    if (!(center.x2 > 0.0 && center.x2 < kStripHeight))
      throw GeometryError("Aharonov-Bohm point must lie strictly inside the strip");
    if (!std::isfinite(flux)) throw DomainError("flux is not finite");
    return;
  }
  if (!(support_radius > 0.0)) throw DomainError("support radius must be positive");
  if (!std::isfinite(amplitude)) throw DomainError("amplitude is not finite");
  if (!(center.x2 - support_radius > 0.0 && center.x2 + support_radius < kStripHeight))
    throw GeometryError("field support must lie strictly inside the strip");
}

double FieldSpec::radial(double t) const {
  if (kind == FieldKind::aharonov_bohm || t > support_radius) return 0.0;
  if (kind == FieldKind::uniform_disk) return amplitude;
  const double u = 1.0 - t * t / (support_radius * support_radius);
  return amplitude * u * u;
}

double FieldSpec::x1_primitive(double x1, double x2) const {
  if (kind == FieldKind::aharonov_bohm) return 0.0;
  const double s = support_radius;
  const double dy = x2 - center.x2;
  if (std::abs(dy) >= s) return 0.0;
  const double rho = std::sqrt(s * s - dy * dy);
  const double t = std::clamp(x1 - center.x1, -rho, rho);
  if (kind == FieldKind::uniform_disk) return amplitude * (t + rho);
  const double s4 = s * s * s * s;
  return amplitude / s4 * (bump_chord_primitive(rho, t) - bump_chord_primitive(rho, -rho));
}

double FieldSpec::chord_primitive(double x2) const {
  if (kind == FieldKind::aharonov_bohm) return 0.0;
  const double s = support_radius;
  const double u = std::clamp((x2 - center.x2) / s, -1.0, 1.0);
  const double phi = std::asin(u) + kPi / 2.0;  // substitution y = s sin(phi - pi/2)
  if (kind == FieldKind::uniform_disk) {
    // int 2 sqrt(s^2 - y^2) dy
    return amplitude * s * s * (phi - 0.5 * std::sin(2.0 * phi));
  }
  // full chord of the bump: (16/15) B0 / s^4 (s^2 - y^2)^{5/2}; int cos^6
  const double t = phi - kPi / 2.0;
  const double c6 = 5.0 / 16.0 * phi + 15.0 / 64.0 * std::sin(2.0 * t) + 3.0 / 64.0 * std::sin(4.0 * t) +
                    1.0 / 192.0 * std::sin(6.0 * t);
  return 16.0 / 15.0 * amplitude * s * s * c6;
}

double FieldSpec::x1_primitive_vertical(double x1, double y0, double y1) const {
  if (kind == FieldKind::aharonov_bohm) return 0.0;
  const double s = support_radius;
  if (x1 <= center.x1 - s) return 0.0;
  if (x1 >= center.x1 + s) return chord_primitive(y1) - chord_primitive(y0);
  const double lo = std::min(y0, y1), hi = std::max(y0, y1);
  const double dx = x1 - center.x1;
  const double w = std::sqrt(s * s - dx * dx);
  // y = c2 + s sin(t), as in cell_flux
  auto angle = [&](double y) { return std::asin(std::clamp((y - center.x2) / s, -1.0, 1.0)); };
  auto f = [&](double t) { return x1_primitive(x1, center.x2 + s * std::sin(t)) * s * std::cos(t); };
  const double v = integrate_smooth_pieces(f, angle(lo), angle(hi), {angle(center.x2 - w), angle(center.x2 + w)});
  return y1 >= y0 ? v : -v;
}

bool MagneticField::has_aharonov_bohm() const {
  return std::any_of(components.begin(), components.end(),
                     [](const FieldSpec& c) { return c.kind == FieldKind::aharonov_bohm; });
}

bool MagneticField::all_compact() const { return !has_aharonov_bohm(); }

void MagneticField::validate() const {
  for (const auto& c : components) c.validate();
}

double MagneticField::support_half_extent() const {
  double b = 0.0;
  for (const auto& c : components)
    if (c.is_compact() && c.amplitude != 0.0) b = std::max(b, std::abs(c.center.x1) + c.support_radius);
  return b;
}

std::vector<Point> MagneticField::singular_points() const {
  std::vector<Point> pts;
  for (const auto& c : components)
    if (c.kind == FieldKind::aharonov_bohm) pts.push_back(c.center);
  return pts;
}

double evaluate_field(const FieldSpec& spec, Point x) {
  if (!in_closed_strip(x)) throw DomainError("point outside the strip");
  if (spec.kind == FieldKind::aharonov_bohm) {
    if (x == spec.center) throw SingularityError("field evaluated at the Aharonov-Bohm point");
    return 0.0;
  }
  return spec.radial(distance(x, spec.center));
}

double evaluate_field(const MagneticField& field, Point x) {
  double b = 0.0;
  for (const auto& c : field.components) b += evaluate_field(c, x);
  return b;
}

double cell_flux(const MagneticField& field, double x0, double x1, double y0, double y1) {
  double total = 0.0;
  for (const auto& c : field.components) {
    if (c.kind == FieldKind::aharonov_bohm) {
      if (c.center.x1 > x0 && c.center.x1 < x1 && c.center.x2 > y0 && c.center.x2 < y1) total += 2.0 * kPi * c.flux;
      continue;
    }
    const double s = c.support_radius;
    const double lo = std::max(x0, c.center.x1 - s);
    const double hi = std::min(x1, c.center.x1 + s);
    if (!(hi > lo) || y0 >= c.center.x2 + s || y1 <= c.center.x2 - s) continue;
    auto column = [&](double x) {
      const double dx = x - c.center.x1;
      const double r2 = s * s - dx * dx;
      if (r2 <= 0.0) return 0.0;
      const double rho = std::sqrt(r2);
      const double ylo = std::max(y0, c.center.x2 - rho) - c.center.x2;
      const double yhi = std::min(y1, c.center.x2 + rho) - c.center.x2;
      if (yhi <= ylo) return 0.0;
      if (c.kind == FieldKind::uniform_disk) return c.amplitude * (yhi - ylo);
      return c.amplitude / (s * s * s * s) * (bump_chord_primitive(rho, yhi) - bump_chord_primitive(rho, ylo));
    };
    // x = c1 + s sin(t) removes the square-root behaviour at the rim
    auto angle = [&](double x) { return std::asin(std::clamp((x - c.center.x1) / s, -1.0, 1.0)); };
    std::vector<double> breaks;
    for (double y : {y0, y1}) {
      const double dy = y - c.center.x2;
      if (std::abs(dy) < s) {
        const double w = std::sqrt(s * s - dy * dy);
        breaks.push_back(angle(c.center.x1 - w));
        breaks.push_back(angle(c.center.x1 + w));
      }
    }
    auto integrand = [&](double t) { return column(c.center.x1 + s * std::sin(t)) * s * std::cos(t); };
    total += integrate_smooth_pieces(integrand, angle(lo), angle(hi), breaks);
  }
  return total;
}

double distance_to_integers(double value) { return std::abs(value - std::round(value)); }

double ball_flux(const MagneticField& field, Point p, double r) {
  double total = 0.0;
  for (const auto& c : field.components) total += annulus_flux(c, p, 0.0, r);
  return total;
}

FluxProfile flux_profile(const MagneticField& field, Point p, double R, int n) {
  field.validate();
  if (n < 16) throw DomainError("flux profile needs at least 16 radius intervals");
  if (!(R > 0.0)) throw DomainError("profile radius must be positive");
  if (!ball_in_strip({p, R})) throw GeometryError("ball B(p, R) is not contained in the strip");

  FluxProfile fp;
  fp.center = p;
  fp.source = field;
  fp.radii.resize(n + 1);
  fp.values.resize(n + 1);
  double acc = 0.0;
  fp.radii[0] = 0.0;
  fp.values[0] = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double lo = R * (i - 1) / n;
    const double hi = i == n ? R : R * i / n;
    for (const auto& c : field.components) acc += annulus_flux(c, p, lo, hi);
    fp.radii[i] = hi;
    fp.values[i] = acc;
  }
  return fp;
}

MuProfile mu_profile(const FluxProfile& fp) {
  MuProfile mp;
  mp.center = fp.center;
  mp.radii = fp.radii;
  mp.values.resize(fp.values.size());
  std::transform(fp.values.begin(), fp.values.end(), mp.values.begin(), distance_to_integers);

  double best = 0.0;
  std::size_t best_i = 0;
  for (std::size_t i = 1; i < mp.values.size(); ++i) {
    const double ratio = mp.values[i] / mp.radii[i];
    if (ratio > best * (1.0 + 1e-12)) {
      best = ratio;
      best_i = i;
    }
  }
  if (!(*std::max_element(mp.values.begin(), mp.values.end()) > 1e-12)) return mp;

  double r_star = mp.radii[best_i];
  double mu_star = mp.values[best_i];
  if (fp.source && best_i + 1 < mp.radii.size()) {
    // golden-section refinement of mu(r)/r between the neighbouring samples
    const auto& field = *fp.source;
    auto ratio = [&](double r) { return distance_to_integers(ball_flux(field, fp.center, r)) / r; };
    double a = mp.radii[best_i - 1];
    double b = mp.radii[best_i + 1];
    if (a == 0.0) a = 1e-3 * b;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = ratio(c);
    double fd = ratio(d);
    for (int it = 0; it < 60 && (b - a) > 1e-12 * b; ++it) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = ratio(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = ratio(d);
      }
    }
    const double r_ref = 0.5 * (a + b);
    const double mu_ref = distance_to_integers(ball_flux(field, fp.center, r_ref));
    if (mu_ref / r_ref > best) {
      r_star = r_ref;
      mu_star = mu_ref;
    }
  }
  mp.r0_star = r_star;
  mp.mu0 = r_star / mu_star;
  return mp;
}

bool flux_nontrivial(const MuProfile& mp) {
  return !mp.values.empty() && *std::max_element(mp.values.begin(), mp.values.end()) > 1e-12;
}

}  // namespace magstrip
