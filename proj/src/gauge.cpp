#include "magstrip/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magstrip/errors.hpp"
#include "magstrip/hash.hpp"
#include "magstrip/quadrature.hpp"

namespace magstrip {

namespace {

constexpr double kEdgeTol = 1e-13;

double compact_a2(const MagneticField& field, double alpha, double x1, double x2) {
  double a2 = 0.0;
  for (const auto& c : field.components) {
    if (!c.is_compact() || c.amplitude == 0.0) continue;
    a2 += c.x1_primitive(x1, x2);
    if (alpha != 0.0) a2 -= alpha * c.x1_primitive(c.center.x1 + c.support_radius + 1.0, x2);
  }
  return a2;
}

class ZeroGauge final : public Gauge {
 public:
  GaugeKind kind() const override { return GaugeKind::zero; }
  Vec2 potential(Point) const override { return {}; }
  double edge_integral(Point, Point) const override { return 0.0; }
  nlohmann::json to_json() const override { return {{"kind", "zero"}}; }
  double support_half_extent() const override { return 0.0; }
};

class LineIntegralGauge final : public Gauge {
 public:
  LineIntegralGauge(MagneticField field, double alpha) : field_(std::move(field)), alpha_(alpha) {}

  GaugeKind kind() const override { return GaugeKind::line_integral; }
  Vec2 potential(Point x) const override { return {0.0, compact_a2(field_, alpha_, x.x1, x.x2)}; }

  double edge_integral(Point a, Point b) const override {
    if (a.x2 == b.x2) return 0.0;
    if (a.x1 == b.x1) {
      double v = 0.0;
      for (const auto& c : field_.components) {
        if (!c.is_compact() || c.amplitude == 0.0) continue;
        v += c.x1_primitive_vertical(a.x1, a.x2, b.x2);
        if (alpha_ != 0.0) v -= alpha_ * (c.chord_primitive(b.x2) - c.chord_primitive(a.x2));
      }
      return v;
    }
    const double d2 = b.x2 - a.x2;
    auto f = [&](double t) { return compact_a2(field_, alpha_, a.x1 + t * (b.x1 - a.x1), a.x2 + t * d2) * d2; };
    return integrate(f, 0.0, 1.0, kEdgeTol);
  }

  nlohmann::json to_json() const override { return {{"kind", "line_integral"}, {"alpha", alpha_}}; }
  double support_half_extent() const override {
    return field_.support_half_extent() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }

 private:
  MagneticField field_;
  double alpha_;
};

class AbGauge final : public Gauge {
 public:
  AbGauge(double flux, Point p) : flux_(flux), p_(p) {}

  GaugeKind kind() const override { return GaugeKind::aharonov_bohm; }
  Vec2 potential(Point x) const override { return ab_potential(flux_, p_, x); }

  double edge_integral(Point a, Point b) const override {
    const double ax = a.x1 - p_.x1, ay = a.x2 - p_.x2;
    const double bx = b.x1 - p_.x1, by = b.x2 - p_.x2;
    const double cross = ax * by - ay * bx;
    const double dot = ax * bx + ay * by;
    if ((ax == 0.0 && ay == 0.0) || (bx == 0.0 && by == 0.0) || (cross == 0.0 && dot < 0.0))
      throw SingularityError("edge passes through the Aharonov-Bohm point");
    return flux_ * std::atan2(cross, dot);
  }

  nlohmann::json to_json() const override {
    return {{"kind", "aharonov_bohm"}, {"flux", flux_}, {"p", {p_.x1, p_.x2}}};
  }
  std::vector<Point> singular_points() const override { return {p_}; }
  double support_half_extent() const override {
    return flux_ == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }

 private:
  double flux_;
  Point p_;
};

class ShiftedGauge final : public Gauge {
 public:
  ShiftedGauge(GaugeSpec base, double amp, double k1, double k2, double phase)
      : base_(std::move(base)), amp_(amp), k1_(k1), k2_(k2), phase_(phase) {}

  GaugeKind kind() const override { return GaugeKind::shifted; }
  Vec2 potential(Point x) const override {
    Vec2 a = base_->potential(x);
    const double s = std::sin(k1_ * x.x1 + phase_), c = std::cos(k1_ * x.x1 + phase_);
    a.a1 += amp_ * k1_ * c * std::cos(k2_ * x.x2);
    a.a2 -= amp_ * k2_ * s * std::sin(k2_ * x.x2);
    return a;
  }
  double edge_integral(Point a, Point b) const override { return base_->edge_integral(a, b) + h(b) - h(a); }
  nlohmann::json to_json() const override {
    return {{"kind", "shifted"},
            {"h", "amplitude*sin(k1*x1+phase)*cos(k2*x2)"},
            {"amplitude", amp_},
            {"k1", k1_},
            {"k2", k2_},
            {"phase", phase_},
            {"base", base_->to_json()}};
  }
  std::vector<Point> singular_points() const override { return base_->singular_points(); }
  double support_half_extent() const override {
    return amp_ == 0.0 ? base_->support_half_extent() : std::numeric_limits<double>::infinity();
  }

 private:
  double h(Point x) const { return amp_ * std::sin(k1_ * x.x1 + phase_) * std::cos(k2_ * x.x2); }

  GaugeSpec base_;
  double amp_, k1_, k2_, phase_;
};

class SumGauge final : public Gauge {
 public:
  explicit SumGauge(std::vector<GaugeSpec> parts) : parts_(std::move(parts)) {}

  GaugeKind kind() const override { return GaugeKind::sum; }
  Vec2 potential(Point x) const override {
    Vec2 a;
    for (const auto& p : parts_) {
      const Vec2 v = p->potential(x);
      a.a1 += v.a1;
      a.a2 += v.a2;
    }
    return a;
  }
  double edge_integral(Point a, Point b) const override {
    double t = 0.0;
    for (const auto& p : parts_) t += p->edge_integral(a, b);
    return t;
  }
  nlohmann::json to_json() const override {
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : parts_) parts.push_back(p->to_json());
    return {{"kind", "sum"}, {"parts", parts}};
  }
  std::vector<Point> singular_points() const override {
    std::vector<Point> pts;
    for (const auto& p : parts_) {
      const auto s = p->singular_points();
      pts.insert(pts.end(), s.begin(), s.end());
    }
    return pts;
  }
  double support_half_extent() const override {
    double e = 0.0;
    for (const auto& p : parts_) e = std::max(e, p->support_half_extent());
    return e;
  }

 private:
  std::vector<GaugeSpec> parts_;
};

class CompactifiedGauge final : public Gauge {
 public:
  CompactifiedGauge(GaugeSpec base, double b, double w, double c_minus, double c_plus)
      : base_(std::move(base)), b_(b), w_(w), c_minus_(c_minus), c_plus_(c_plus) {}

  GaugeKind kind() const override { return GaugeKind::compactified; }

  Vec2 potential(Point x) const override {
    const Vec2 a = base_->potential(x);
    const double t = std::abs(x.x1);
    if (t <= b_) return a;
    const int s = x.x1 > 0.0 ? 1 : -1;
    const double z = zeta(t);
    const double hz = tail(s, x) + (s > 0 ? c_plus_ : c_minus_);
    return {(1.0 - z) * a.a1 - hz * s * zeta_prime(t), (1.0 - z) * a.a2};
  }

  double edge_integral(Point a, Point b) const override { return base_->edge_integral(a, b) - blend(b) + blend(a); }

  nlohmann::json to_json() const override {
    const double anchor = b_ + w_;
    return {{"kind", "compactified"},
            {"b", b_},
            {"width", w_},
            {"c_minus", c_minus_},
            {"c_plus", c_plus_},
            {"cutoff", "cubic smoothstep on (b, b+width)"},
            {"anchors", {{-anchor, kPi / 2.0}, {anchor, kPi / 2.0}}},
            {"base", base_->to_json()}};
  }
  std::vector<Point> singular_points() const override { return base_->singular_points(); }
  double support_half_extent() const override { return b_ + w_; }

  double tail(int sign, Point x) const {
    const Point anchor{sign * (b_ + w_), kPi / 2.0};
    return path_integral_hv(*base_, anchor, x);
  }

 private:
  double zeta(double t) const {
    const double u = std::clamp((t - b_) / w_, 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
  }
  double zeta_prime(double t) const {
    const double u = (t - b_) / w_;
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return 6.0 * u * (1.0 - u) / w_;
  }
  double blend(Point x) const {
    const double t = std::abs(x.x1);
    if (t <= b_) return 0.0;
    const int s = x.x1 > 0.0 ? 1 : -1;
    return zeta(t) * (tail(s, x) + (s > 0 ? c_plus_ : c_minus_));
  }

  GaugeSpec base_;
  double b_, w_, c_minus_, c_plus_;
};

bool excluded(const std::vector<Point>& sing, double r, Point x) {
  return std::any_of(sing.begin(), sing.end(), [&](const Point& p) { return distance(p, x) < r; });
}

// Centred constant shifts: the midpoint of the range of h+- over the band.
std::pair<double, double> centered_shifts(const Gauge& g, double b, double w) {
  const auto& cg = dynamic_cast<const CompactifiedGauge&>(g);
  std::pair<double, double> out;
  for (int sign : {-1, 1}) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i <= 16; ++i) {
      const double x1 = sign * (b + w * i / 16.0);
      for (int j = 0; j <= 16; ++j) {
        const double v = cg.tail(sign, {x1, kPi * j / 16.0});
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    (sign < 0 ? out.first : out.second) = -0.5 * (lo + hi);
  }
  return out;
}

}  // namespace

std::string to_string(GaugeKind kind) {
  switch (kind) {
    case GaugeKind::zero: return "zero";
    case GaugeKind::line_integral: return "line_integral";
    case GaugeKind::compactified: return "compactified";
    case GaugeKind::aharonov_bohm: return "aharonov_bohm";
    case GaugeKind::shifted: return "shifted";
    case GaugeKind::sum: return "sum";
  }
  return "unknown";
}

double Gauge::support_half_extent() const { return std::numeric_limits<double>::infinity(); }

std::string Gauge::id() const { return to_string(kind()) + ":" + hex64(fnv1a64(to_json().dump())).substr(0, 12); }

Vec2 ab_potential(double flux, Point p, Point x) {
  const double dx = x.x1 - p.x1, dy = x.x2 - p.x2;
  const double r2 = dx * dx + dy * dy;
  if (r2 == 0.0) throw SingularityError("Aharonov-Bohm potential evaluated at its singular point");
  return {-flux * dy / r2, flux * dx / r2};
}

Vec2 line_integral_gauge(const MagneticField& field, Point x, double alpha) {
  if (field.has_aharonov_bohm()) throw DomainError("line-integral gauge is not defined for Aharonov-Bohm fields");
  return {0.0, compact_a2(field, alpha, x.x1, x.x2)};
}

GaugeSpec make_zero_gauge() { return std::make_shared<ZeroGauge>(); }

GaugeSpec make_line_integral_gauge(const MagneticField& field, double alpha) {
  if (field.has_aharonov_bohm()) throw DomainError("line-integral gauge is not defined for Aharonov-Bohm fields");
  return std::make_shared<LineIntegralGauge>(field, alpha);
}

GaugeSpec make_ab_gauge(double flux, Point p) { return std::make_shared<AbGauge>(flux, p); }

GaugeSpec make_shifted_gauge(GaugeSpec base, double amplitude, double k1, double k2, double phase) {
  return std::make_shared<ShiftedGauge>(std::move(base), amplitude, k1, k2, phase);
}

GaugeSpec make_sum_gauge(std::vector<GaugeSpec> parts) {
  if (parts.empty()) return make_zero_gauge();
  if (parts.size() == 1) return parts.front();
  return std::make_shared<SumGauge>(std::move(parts));
}

GaugeSpec default_gauge(const MagneticField& field) {
  std::vector<GaugeSpec> parts;
  MagneticField compact;
  for (const auto& c : field.components) {
    if (c.kind == FieldKind::aharonov_bohm) {
      parts.push_back(make_ab_gauge(c.flux, c.center));
    } else if (c.amplitude != 0.0) {
      compact.components.push_back(c);
    }
  }
  if (!compact.empty()) parts.insert(parts.begin(), make_line_integral_gauge(compact, 0.0));
  return make_sum_gauge(std::move(parts));
}

GaugeSpec compactify_gauge(GaugeSpec base, const MagneticField& field, double b, const CompactifyOptions& opt) {
  if (!(b > 0.0)) throw DomainError("compactification radius b must be positive");
  if (field.support_half_extent() > b) throw PreconditionError("field does not vanish for |x1| > b");
  for (const Point& p : field.singular_points())
    if (!(std::abs(p.x1) < b)) throw PreconditionError("singular point lies in the compactification tail");
  for (const Point& p : base->singular_points())
    if (!(std::abs(p.x1) < b)) throw PreconditionError("gauge singularity lies in the compactification tail");
  const double w = opt.width > 0.0 ? opt.width : b;
  return std::make_shared<CompactifiedGauge>(std::move(base), b, w, opt.c_minus, opt.c_plus);
}

double compactified_tail_potential(const Gauge& compactified, int sign, Point x) {
  const auto* cg = dynamic_cast<const CompactifiedGauge*>(&compactified);
  if (!cg) throw DomainError("not a compactified gauge");
  return cg->tail(sign >= 0 ? 1 : -1, x);
}

double path_integral_hv(const Gauge& g, Point a, Point b) {
  const Point corner{b.x1, a.x2};
  return g.edge_integral(a, corner) + g.edge_integral(corner, b);
}

double path_integral_vh(const Gauge& g, Point a, Point b) {
  const Point corner{a.x1, b.x2};
  return g.edge_integral(a, corner) + g.edge_integral(corner, b);
}

SupResult sup_A2(const Gauge& gauge, const Box& region, const SupOptions& opt) {
  const auto sing = gauge.singular_points();
  const double r = opt.exclusion_radius;
  for (const Point& p : sing)
    if (region.contains(p) && !(r > 0.0)) throw DomainError("sup |A|^2 is unbounded: region contains a singular point");

  SupResult best{-1.0, {}};
  auto consider = [&](Point x) {
    if (!region.contains(x) || excluded(sing, r * (1.0 - 1e-12), x)) return;
    const double v = gauge.potential(x).norm_sq();
    if (v > best.value) best = {v, x};
  };
  const int nx = std::max(2, opt.samples_x1);
  const int ny = std::max(2, opt.samples_x2);
  const double dx = (region.x1_max - region.x1_min) / (nx - 1);
  const double dy = (region.x2_max - region.x2_min) / (ny - 1);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) consider({region.x1_min + i * dx, region.x2_min + j * dy});
  if (r > 0.0)
    for (const Point& p : sing)
      for (int k = 0; k < 128; ++k) {
        const double t = 2.0 * kPi * k / 128.0;
        consider({p.x1 + r * std::cos(t), p.x2 + r * std::sin(t)});
      }
  if (best.value < 0.0) throw DomainError("sup |A|^2 region has no admissible sample");

  // compass search around the sampled maximiser
  double step = std::max(dx, dy);
  for (int it = 0; it < 60 && step > 1e-10; ++it) {
    const SupResult before = best;
    for (int k = 0; k < 8; ++k) {
      const double t = kPi * k / 4.0;
      consider({before.argmax.x1 + step * std::cos(t), before.argmax.x2 + step * std::sin(t)});
    }
    if (best.value <= before.value) step *= 0.5;
  }
  return best;
}

GaugeSearchResult minimize_sup_A2(const MagneticField& field, const GaugeFamily& family) {
  field.validate();
  if (!field.all_compact()) throw PreconditionError("gauge search requires a compact field");
  GaugeSearchResult out;
  const double b0 = field.support_half_extent();
  if (b0 == 0.0) {
    out.gauge = make_zero_gauge();
    out.candidates = 1;
    return out;
  }
  auto region_for = [](double extent) { return Box{-extent, extent, 0.0, kPi}; };

  bool have = false;
  auto offer = [&](const GaugeSpec& g, double extent) {
    const double v = sup_A2(*g, region_for(extent), family.sup).value;
    ++out.candidates;
    if (!have || v < out.sup_A2) {
      out.gauge = g;
      out.sup_A2 = v;
      have = true;
    }
    return v;
  };

  // baselines: the line-integral gauges, constant in x1 outside the support
  for (std::size_t k = 0; k < family.alphas.size(); ++k) {
    const double v = offer(make_line_integral_gauge(field, family.alphas[k]), b0 + 1.0);
    if (k == 0) out.baseline_sup_A2 = v;
  }
  if (family.alphas.empty()) out.baseline_sup_A2 = offer(make_line_integral_gauge(field, 0.0), b0 + 1.0);

  for (double bf : family.cutoff_factors) {
    const double b = std::max(bf, 1.0) * b0;
    for (double wf : family.width_factors) {
      const double w = wf * std::max(b, 1.0);
      for (double alpha : family.alphas) {
        GaugeSpec base = make_line_integral_gauge(field, alpha);
        GaugeSpec plain = compactify_gauge(base, field, b, {w, 0.0, 0.0});
        offer(plain, b + w);
        if (family.try_centered_shifts) {
          const auto [cm, cp] = centered_shifts(*plain, b, w);
          offer(compactify_gauge(base, field, b, {w, cm, cp}), b + w);
        }
      }
    }
  }
  return out;
}

EdgePhases compute_edge_phases(const Gauge& gauge, const std::vector<double>& xs, const std::vector<double>& ys) {
  EdgePhases e;
  e.nx = static_cast<int>(xs.size());
  e.ny = static_cast<int>(ys.size()) - 1;
  e.horizontal.assign(static_cast<std::size_t>(e.nx) * (e.ny + 1), 0.0);
  e.vertical.assign(static_cast<std::size_t>(e.nx) * e.ny, 0.0);
  if (gauge.kind() == GaugeKind::zero) return e;
  const double extent = gauge.support_half_extent();
  for (int i = 0; i < e.nx; ++i) {
    for (int j = 0; j <= e.ny; ++j) {
      if (i + 1 < e.nx && !(xs[i] >= extent || xs[i + 1] <= -extent))
        e.horizontal[static_cast<std::size_t>(i) * (e.ny + 1) + j] =
            gauge.edge_integral({xs[i], ys[j]}, {xs[i + 1], ys[j]});
      if (j < e.ny && std::abs(xs[i]) < extent)
        e.vertical[static_cast<std::size_t>(i) * e.ny + j] = gauge.edge_integral({xs[i], ys[j]}, {xs[i], ys[j + 1]});
    }
  }
  return e;
}

PlaquetteReport plaquette_mismatch(const EdgePhases& ph, const MagneticField& field, const std::vector<double>& xs,
                                   const std::vector<double>& ys) {
  PlaquetteReport r;
  for (int i = 0; i + 1 < ph.nx; ++i) {
    for (int j = 0; j < ph.ny; ++j) {
      const double circ = ph.h(i, j) + ph.v(i + 1, j) - ph.h(i, j + 1) - ph.v(i, j);
      const double flux = cell_flux(field, xs[i], xs[i + 1], ys[j], ys[j + 1]);
      const double m = std::abs(std::remainder(circ - flux, 2.0 * kPi));
      ++r.cells;
      if (m > r.max_mismatch) {
        r.max_mismatch = m;
        r.worst_cell = {0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])};
      }
    }
  }
  return r;
}

}  // namespace magstrip
