#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "magstrip/errors.hpp"
#include "magstrip/gauge.hpp"

using namespace magstrip;

namespace {

// Counter-clockwise circulation of A around the rectangle [x0,x1]x[y0,y1].
double circulation(const Gauge& g, double x0, double x1, double y0, double y1) {
  return g.edge_integral({x0, y0}, {x1, y0}) + g.edge_integral({x1, y0}, {x1, y1}) +
         g.edge_integral({x1, y1}, {x0, y1}) + g.edge_integral({x0, y1}, {x0, y0});
}

const MagneticField kBump(FieldSpec::bump_with_flux({0.3, 1.4}, 0.8, 0.35));
const MagneticField kTwo({FieldSpec::bump({-0.8, 1.2}, 0.6, 1.1), FieldSpec::disk({0.9, 2.0}, 0.5, -0.7)});

}  // namespace

TEST_CASE("Aharonov-Bohm potential") {
  const Point p{-2.0, kPi / 2};
  const Vec2 z = ab_potential(0.0, p, {0.0, 1.0});
  CHECK(z.a1 == 0.0);
  CHECK(z.a2 == 0.0);
  const Vec2 a = ab_potential(0.3, p, {-1.0, kPi / 2});
  CHECK(a.a1 == doctest::Approx(0.0));
  CHECK(a.a2 == doctest::Approx(0.3));
  CHECK_THROWS_AS(ab_potential(0.3, p, p), SingularityError);

  const auto g = make_ab_gauge(0.3, p);
  CHECK(circulation(*g, -2.3, -1.6, 1.2, 2.0) == doctest::Approx(2 * kPi * 0.3).epsilon(1e-12));
  CHECK(std::abs(circulation(*g, -1.5, -0.5, 1.2, 2.0)) < 1e-12);
  CHECK(std::abs(circulation(*g, -2.5, -1.5, 0.2, 1.0)) < 1e-12);
  // straight edge integral equals the subtended angle times flux
  const double ei = g->edge_integral({-1.0, 0.5}, {-1.0, 2.5});
  const double angle = std::atan2(2.5 - kPi / 2, 1.0) - std::atan2(0.5 - kPi / 2, 1.0);
  CHECK(ei == doctest::Approx(0.3 * angle).epsilon(1e-12));
}

TEST_CASE("zero field gives a zero line-integral gauge") {
  const auto g = make_line_integral_gauge(MagneticField{}, 0.0);
  for (Point x : {Point{0.0, 1.0}, Point{-5.0, 3.0}}) {
    CHECK(g->potential(x).norm_sq() == 0.0);
  }
  CHECK(g->edge_integral({0.0, 0.2}, {1.0, 0.2}) == 0.0);
  CHECK_THROWS_AS(make_line_integral_gauge(FieldSpec::aharonov_bohm({0.0, 1.0}, 0.5)), DomainError);
}

TEST_CASE("curl of every gauge equals the field") {
  std::vector<GaugeSpec> gauges{make_line_integral_gauge(kTwo, 0.0), make_line_integral_gauge(kTwo, 1.0),
                                make_line_integral_gauge(kTwo, 0.5),
                                compactify_gauge(make_line_integral_gauge(kTwo, 0.0), kTwo, 1.5),
                                compactify_gauge(make_line_integral_gauge(kTwo, 1.0), kTwo, 2.0, {3.0, 0.4, -0.2}),
                                make_shifted_gauge(make_line_integral_gauge(kTwo, 0.0), 0.7, 1.3, 0.8)};
  for (const auto& g : gauges) {
    for (auto [x0, x1, y0, y1] : {std::array{-1.0, 1.0, 0.8, 2.2}, {0.5, 1.2, 1.7, 2.6}, {-1.6, -0.4, 0.5, 1.0},
                                  {1.4, 3.5, 0.3, 2.9}, {-5.0, 5.0, 0.0, kPi}}) {
      CHECK(circulation(*g, x0, x1, y0, y1) == doctest::Approx(cell_flux(kTwo, x0, x1, y0, y1)).epsilon(1e-9));
    }
  }
  const std::vector<double> xs{-4, -2, -1, -0.5, 0, 0.7, 1.3, 2, 3.1, 4};
  const std::vector<double> ys{0.0, 0.4, 0.9, 1.3, 1.8, 2.2, 2.7, kPi};
  const auto ph = compute_edge_phases(*gauges[3], xs, ys);
  CHECK(ph.nx == 10);
  CHECK(ph.ny == 7);
  CHECK(ph.h(3, 2) == gauges[3]->edge_integral({xs[3], ys[2]}, {xs[4], ys[2]}));
  CHECK(ph.v(5, 4) == gauges[3]->edge_integral({xs[5], ys[4]}, {xs[5], ys[5]}));
}

TEST_CASE("plaquette report") {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 60; ++i) xs.push_back(-3.0 + 0.1 * i);
  for (int j = 0; j <= 30; ++j) ys.push_back(kPi * j / 30);
  const auto g = compactify_gauge(make_line_integral_gauge(kTwo, 0.0), kTwo, 1.5);
  const auto rep = plaquette_mismatch(compute_edge_phases(*g, xs, ys), kTwo, xs, ys);
  CHECK(rep.max_mismatch < 1e-8);
  CHECK(rep.cells == 60 * 30);

  // AB: the only non-trivial plaquette is the one containing p
  const Point p{0.03, 1.62};
  const MagneticField ab(FieldSpec::aharonov_bohm(p, 0.3));
  const auto ga = make_ab_gauge(0.3, p);
  CHECK(plaquette_mismatch(compute_edge_phases(*ga, xs, ys), ab, xs, ys).max_mismatch < 1e-8);
  // the zero gauge does not produce the AB flux
  CHECK(plaquette_mismatch(compute_edge_phases(*make_zero_gauge(), xs, ys), ab, xs, ys).max_mismatch > 1.0);
}

TEST_CASE("compactified gauge vanishes beyond the cutoff") {
  const double b = kBump.support_half_extent();
  for (double alpha : {0.0, 1.0}) {
    const auto g = compactify_gauge(make_line_integral_gauge(kBump, alpha), kBump, b);
    CHECK(g->support_half_extent() == doctest::Approx(2 * b));
    for (double x1 : {-2.0 * b - 1e-9, -3.0 * b, 2.0 * b, 2.5 * b, 10.0})
      for (double x2 : {0.0, 0.7, 2.0, kPi}) CHECK(g->potential({x1, x2}).norm_sq() == 0.0);
    CHECK(std::abs(g->edge_integral({2.0 * b, 0.3}, {9.0, 0.3})) < 1e-10);
    CHECK(std::abs(g->edge_integral({-7.0, 0.3}, {-7.0, 3.0})) < 1e-10);
    CHECK(std::abs(g->edge_integral({-2.0 * b, 0.1}, {-2.0 * b - 1.0, 2.9})) < 1e-10);
    // unchanged inside |x1| <= b
    const auto base = make_line_integral_gauge(kBump, alpha);
    const Vec2 u = g->potential({0.2, 1.1}), v = base->potential({0.2, 1.1});
    CHECK(u.a1 == v.a1);
    CHECK(u.a2 == v.a2);
  }
  CHECK_THROWS_AS(compactify_gauge(make_line_integral_gauge(kBump), kBump, 0.5 * b), PreconditionError);
  CHECK_THROWS_AS(compactify_gauge(make_line_integral_gauge(kBump), kBump, 0.0), DomainError);
  CHECK_THROWS_AS(compactified_tail_potential(*make_zero_gauge(), 1, {0.0, 1.0}), DomainError);
}

TEST_CASE("tail potentials are path independent") {
  const double b = kTwo.support_half_extent();
  const auto base = make_line_integral_gauge(kTwo, 0.3);
  const auto g = compactify_gauge(base, kTwo, b);
  for (int sign : {-1, 1}) {
    const Point anchor{sign * 2.0 * b, kPi / 2};
    for (Point x : {Point{sign * (b + 0.2), 0.1}, Point{sign * 1.7 * b, 3.0}, Point{sign * 4.0 * b, 1.0}}) {
      const double h = compactified_tail_potential(*g, sign, x);
      CHECK(h == doctest::Approx(path_integral_hv(*base, anchor, x)).epsilon(1e-12));
      CHECK(h == doctest::Approx(path_integral_vh(*base, anchor, x)).scale(1.0).epsilon(1e-10));
    }
  }
  // inside the support the two paths differ by the enclosed flux
  const Point a{-1.5, 0.4}, c{1.5, 2.7};
  CHECK(path_integral_hv(*base, a, c) - path_integral_vh(*base, a, c) ==
        doctest::Approx(cell_flux(kTwo, a.x1, c.x1, a.x2, c.x2)).epsilon(1e-9));
}

TEST_CASE("sup |A|^2") {
  const Box box{-1.0, 1.0, 0.5, 2.5};
  CHECK(sup_A2(*make_zero_gauge(), box).value == 0.0);
  const auto ab = make_ab_gauge(0.4, {-2.0, kPi / 2});
  const auto s = sup_A2(*ab, box);
  CHECK(s.value == doctest::Approx(0.16).epsilon(1e-6));
  CHECK(s.argmax.x1 == doctest::Approx(-1.0));
  CHECK_THROWS_AS(sup_A2(*ab, Box{-3.0, 0.0, 0.0, kPi}), DomainError);
  SupOptions ex;
  ex.exclusion_radius = 0.5;
  CHECK(sup_A2(*ab, Box{-3.0, 0.0, 0.0, kPi}, ex).value <= 0.16 / 0.25 * (1 + 1e-9));

  // the gauge is linear in B, so sup |A~|^2 scales with amplitude^2
  auto value = [](double amp) {
    const MagneticField f(FieldSpec::bump({0.0, kPi / 2}, 0.5, amp));
    const auto g = compactify_gauge(make_line_integral_gauge(f, 0.0), f, 0.5);
    return sup_A2(*g, Box{-1.0, 1.0, 0.0, kPi}).value;
  };
  const double v1 = value(0.2), v2 = value(0.4), v3 = value(0.05);
  CHECK(v1 > 0.0);
  CHECK(v2 == doctest::Approx(4.0 * v1).epsilon(1e-9));
  CHECK(v3 == doctest::Approx(v1 / 16.0).epsilon(1e-9));
}

TEST_CASE("gauge search") {
  const auto zero = minimize_sup_A2(MagneticField{});
  CHECK(zero.sup_A2 == 0.0);
  CHECK(zero.gauge->kind() == GaugeKind::zero);

  const auto r = minimize_sup_A2(kBump);
  CHECK(r.sup_A2 <= r.baseline_sup_A2);
  CHECK(r.candidates > 1);
  CHECK(r.sup_A2 == doctest::Approx(sup_A2(*r.gauge, Box{-20.0, 20.0, 0.0, kPi}).value).epsilon(1e-2));
  CHECK_THROWS_AS(minimize_sup_A2(FieldSpec::aharonov_bohm({0.0, 1.0}, 0.5)), PreconditionError);
}

TEST_CASE("gauge JSON and ids") {
  const auto g = compactify_gauge(make_line_integral_gauge(kBump, 1.0), kBump, 1.2, {0.5, 0.1, 0.2});
  const auto j = g->to_json();
  CHECK(j["kind"] == "compactified");
  CHECK(j["b"] == 1.2);
  CHECK(j["anchors"].size() == 2);
  CHECK(g->id() == compactify_gauge(make_line_integral_gauge(kBump, 1.0), kBump, 1.2, {0.5, 0.1, 0.2})->id());
  CHECK(g->id() != compactify_gauge(make_line_integral_gauge(kBump, 0.0), kBump, 1.2, {0.5, 0.1, 0.2})->id());
}
