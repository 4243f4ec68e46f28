#include "magstrip/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "magstrip/errors.hpp"
#include "magstrip/quadrature.hpp"

namespace magstrip {

namespace {

double cos_sq_margin(Point p, double R) {
  const double arg = std::abs(p.x2 - kPi / 2.0) + R;
  if (!(arg < kPi / 2.0)) throw GeometryError("ball B(p, R) touches the strip boundary");
  const double c = std::cos(arg);
  return c * c;
}

// max over consecutive samples of |Delta(mu/r)| / Delta r, with mu/r -> 0 at r = 0
double max_slope_of_mu_over_r(const MuProfile& mp) {
  double worst = 0.0;
  double prev_r = mp.radii.front();
  double prev_q = prev_r > 0.0 ? mp.values.front() / prev_r : 0.0;
  for (std::size_t i = 1; i < mp.radii.size(); ++i) {
    const double r = mp.radii[i];
    const double q = mp.values[i] / r;
    worst = std::max(worst, std::abs(q - prev_q) / (r - prev_r));
    prev_r = r;
    prev_q = q;
  }
  return worst;
}

}  // namespace

double bessel_j0_series(double x) {
  const double q = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 80; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double bessel_j0_first_zero() {
  static const double zero = [] {
    double lo = 2.0;  // J0(2) > 0
    double hi = 3.0;  // J0(3) < 0
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (bessel_j0_series(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }();
  return zero;
}

double c3_transverse(double p2) {
  if (!(p2 > 0.0 && p2 < kPi)) throw DomainError("c3 requires 0 < p2 < pi");
  const double near = std::min(p2, kPi - p2);
  return kPi * kPi / (near * near) - 1.0;
}

double arctan_profile_integral() {
  auto f = [](double s) {
    // pi/2 + arctan s, written without cancellation for s << 0
    const double v = s < 0.0 ? std::atan(-1.0 / s) : kPi / 2.0 + std::atan(s);
    return v * v;
  };
  return integrate_to_minus_infinity(f, 0.0, 1e-14);
}

HardyConstantSet hardy_constant_compact(Point p, double R, const MuProfile& mp) {
  if (!(R > 0.0)) throw DomainError("Hardy constant needs R > 0");
  if (mp.radii.size() < 2 || std::abs(mp.radii.back() - R) > 1e-12 * R || mp.radii.front() != 0.0)
    throw PreconditionError("mu-profile must be sampled on [0, R]");
  const double cos2 = cos_sq_margin(p, R);

  HardyConstantSet h;
  h.variant = HardyVariant::compact;
  h.radius = R;
  h.nu0 = bessel_j0_first_zero();
  h.c3 = c3_transverse(p.x2);
  h.c1 = (64.0 + 4.0 * R * R) / (R * R * R * R);
  if (!flux_nontrivial(mp)) {
    h.degenerate = true;
    h.c = 0.0;
    return h;
  }
  h.c4 = max_slope_of_mu_over_r(mp);
  h.c2 = (2.0 * R * R * h.c3 * h.c4 + 4.0 * h.c4 + 4.0 * R * R) / (h.c3 * cos2);
  h.c = 1.0 / (16.0 + h.c1 * h.c2);

  if (mp.r0_star && mp.mu0) {
    const double r0 = *mp.r0_star;
    const double mu0 = *mp.mu0;
    const double c6 =
        4.0 * std::max(r0 * r0 / (h.nu0 * h.nu0), (2.0 * R * R * R - 3.0 * R * R * r0 + r0 * r0 * r0) / (6.0 * r0));
    h.c6_diagnostic = c6;
    h.c5_diagnostic = std::max(2.0 * mu0 * mu0 + 4.0 * h.c4 * h.c4 * c6 * std::pow(mu0, 4), c6);
  }
  return h;
}

HardyConstantSet hardy_constant_for_field(const MagneticField& field, Point p, double R, int n) {
  const FluxProfile fp = flux_profile(field, p, R, 10 * n);
  return hardy_constant_compact(p, R, mu_profile(fp));
}

HardyConstantSet hardy_constant_ab(Point p, double R, double flux) {
  if (!(R > 0.0)) throw DomainError("Hardy constant needs R > 0");
  const double cos2 = cos_sq_margin(p, R);
  HardyConstantSet h;
  h.variant = HardyVariant::aharonov_bohm;
  h.radius = R;
  h.nu0 = bessel_j0_first_zero();
  h.c3 = c3_transverse(p.x2);
  h.mu = distance_to_integers(flux);
  const double mu2 = h.mu * h.mu;
  const double num = R * R * mu2 * h.c3 * cos2;
  const double den =
      8.0 * (2.0 * mu2 * R * R * h.c3 + (8.0 * mu2 + 8.0 + h.c3) * (9.0 * R * R + 16.0 * kPi * kPi));
  h.c = num / den;
  h.degenerate = h.mu == 0.0;
  return h;
}

HardyConstantSet hardy_constant_ab_scan(Point p, double r_max, double flux) {
  if (!(r_max > 0.0)) throw GeometryError("no admissible radius for the Aharonov-Bohm point");
  constexpr int kSamples = 64;
  HardyConstantSet best = hardy_constant_ab(p, r_max / (kSamples + 1), flux);
  for (int k = 2; k <= kSamples; ++k) {
    const double R = r_max * k / (kSamples + 1);
    HardyConstantSet h = hardy_constant_ab(p, R, flux);
    if (h.c > best.c) best = h;
  }
  return best;
}

KappaValue kappa_with_branch(double c, double p1_abs) {
  if (c < 0.0 || p1_abs < 0.0) throw DomainError("kappa requires c >= 0 and |p1| >= 0");
  const double hardy = kPi * c;
  const double dist = kPi / (4.0 * std::numbers::ln2 + kPi * p1_abs);
  return hardy <= dist ? KappaValue{hardy, KappaBranch::hardy} : KappaValue{dist, KappaBranch::distance};
}

double kappa(double c, double p1_abs) { return kappa_with_branch(c, p1_abs).value; }

std::string to_string(AbsenceVerdict v) {
  return v == AbsenceVerdict::certified_empty ? "certified_empty" : "not_certified";
}

std::string to_string(KappaBranch b) { return b == KappaBranch::hardy ? "pi_c" : "distance"; }

BoundReport critical_length(const CompactBoundInputs& in) {
  in.field.validate();
  if (!in.field.all_compact()) throw PreconditionError("compact bound requested for an Aharonov-Bohm field");
  const double l = in.window_l;
  if (!(l >= 0.0)) throw DomainError("window half-length must be non-negative");
  if (in.minus.center.x1 + in.minus.radius > -l)
    throw PreconditionError("left ball overlaps the window strip |x1| < l");
  if (in.plus.center.x1 - in.plus.radius < l)
    throw PreconditionError("right ball overlaps the window strip |x1| < l");

  auto side = [&](const Ball& ball) {
    SideReport s;
    s.ball = ball;
    const FluxProfile fp = flux_profile(in.field, ball.center, ball.radius, 10 * in.profile_intervals);
    const MuProfile mp = mu_profile(fp);
    s.flux_nontrivial = flux_nontrivial(mp);
    s.hardy = hardy_constant_compact(ball.center, ball.radius, mp);
    s.kappa = kappa_with_branch(s.hardy.c, std::abs(ball.center.x1));
    return s;
  };

  BoundReport r;
  r.variant = HardyVariant::compact;
  r.window_l = l;
  r.minus = side(in.minus);
  r.plus = side(in.plus);
  r.critical_length = (r.minus->kappa.value + r.plus->kappa.value) / 12.0;
  r.strict_inequality = false;
  const bool flux_ok = r.minus->flux_nontrivial || r.plus->flux_nontrivial;
  r.verdict_absence =
      (flux_ok && l <= r.critical_length) ? AbsenceVerdict::certified_empty : AbsenceVerdict::not_certified;
  return r;
}

BoundReport critical_length(const AbBoundInputs& in) {
  const double l = in.window_l;
  if (!(l >= 0.0)) throw DomainError("window half-length must be non-negative");
  if (!(in.p.x2 > 0.0 && in.p.x2 < kPi)) throw GeometryError("Aharonov-Bohm point must lie inside the strip");
  if (!(in.p.x1 < -l)) throw PreconditionError("Aharonov-Bohm point must satisfy p1 < -l");

  SideReport s;
  if (in.radius) {
    s.hardy = hardy_constant_ab(in.p, *in.radius, in.flux);
  } else {
    const double r_max = std::min({in.p.x2, kPi - in.p.x2, std::abs(in.p.x1) - l});
    s.hardy = hardy_constant_ab_scan(in.p, r_max, in.flux);
  }
  s.ball = {in.p, s.hardy.radius};
  s.flux_nontrivial = s.hardy.mu > 0.0;
  s.kappa = kappa_with_branch(s.hardy.c, std::abs(in.p.x1));

  BoundReport r;
  r.variant = HardyVariant::aharonov_bohm;
  r.window_l = l;
  r.ab = s;
  r.critical_length = s.kappa.value / 6.0;
  r.strict_inequality = true;
  r.verdict_absence = l < r.critical_length ? AbsenceVerdict::certified_empty : AbsenceVerdict::not_certified;
  return r;
}

bool presence_condition(double lambda_l, double max_A_sq) { return lambda_l + max_A_sq < 1.0; }

}  // namespace magstrip
