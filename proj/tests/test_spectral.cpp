#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "magstrip/eigensolver.hpp"
#include "magstrip/errors.hpp"
#include "magstrip/spectral.hpp"

using namespace magstrip;

namespace {

DiscreteMagneticOperator assemble(const MagneticField& field, double l, double L, double h, GaugeSpec gauge = nullptr,
                                  double growth = 1.0) {
  if (!gauge) gauge = default_gauge(field);
  const StripGeometry geom{l, L};
  GridOptions go;
  go.h = h;
  go.growth = growth;
  go.h_max = 0.5;
  std::vector<Point> sing = field.singular_points();
  const Grid2D grid = make_grid(geom, go, sing, field.support_half_extent());
  return assemble_operator(geom, field, gauge, grid);
}

Eigen::SparseMatrix<double> path_laplacian(int n) {
  Eigen::SparseMatrix<double> A(n, n);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0);
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1.0);
      t.emplace_back(i + 1, i, -1.0);
    }
  }
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

}  // namespace

TEST_CASE("eigensolver on known matrices") {
  SUBCASE("diagonal") {
    const int n = 900;
    Eigen::SparseMatrix<double> D(n, n);
    for (int i = 0; i < n; ++i) D.insert(i, i) = 3.0 * (n - i);
    const auto r = smallest_eigenpairs(D, 4);
    for (int i = 0; i < 4; ++i) CHECK(r.values[i] == doctest::Approx(3.0 * (i + 1)).epsilon(1e-12));
  }
  SUBCASE("path Laplacian, Lanczos vs closed form") {
    const int n = 1500;
    const auto r = smallest_eigenpairs(path_laplacian(n), 3, {1e-10});
    for (int k = 1; k <= 3; ++k)
      CHECK(r.values[k - 1] == doctest::Approx(2.0 - 2.0 * std::cos(k * kPi / (n + 1))).epsilon(1e-8));
    for (double res : r.residuals) CHECK(res < 1e-10);
  }
  SUBCASE("dense and Lanczos agree; complex phases on a chain are a gauge") {
    const int n = 300;
    Eigen::SparseMatrix<std::complex<double>> C(n, n);
    std::vector<Eigen::Triplet<std::complex<double>>> t;
    for (int i = 0; i < n; ++i) {
      t.emplace_back(i, i, 2.0 + 0.01 * i);
      if (i + 1 < n) {
        const auto ph = std::polar(1.0, 0.37 * i);
        t.emplace_back(i, i + 1, -ph);
        t.emplace_back(i + 1, i, -std::conj(ph));
      }
    }
    C.setFromTriplets(t.begin(), t.end());
    EigensolverOptions dense_opt, lanczos_opt;
    lanczos_opt.dense_limit = 0;
    lanczos_opt.tol = 1e-10;
    const auto d = smallest_eigenpairs(C, 3, dense_opt);
    const auto l = smallest_eigenpairs(C, 3, lanczos_opt);
    Eigen::SparseMatrix<double> R(n, n);
    std::vector<Eigen::Triplet<double>> tr;
    for (int i = 0; i < n; ++i) {
      tr.emplace_back(i, i, 2.0 + 0.01 * i);
      if (i + 1 < n) {
        tr.emplace_back(i, i + 1, -1.0);
        tr.emplace_back(i + 1, i, -1.0);
      }
    }
    R.setFromTriplets(tr.begin(), tr.end());
    const auto real = smallest_eigenpairs(R, 3, dense_opt);
    for (int i = 0; i < 3; ++i) {
      CHECK(l.values[i] == doctest::Approx(d.values[i]).epsilon(1e-9));
      CHECK(real.values[i] == doctest::Approx(d.values[i]).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(smallest_eigenpairs(path_laplacian(10), 0), DomainError);
}

TEST_CASE("threshold margin") { CHECK(eps_num(10.0) == doctest::Approx(3 * std::pow(kPi / 20, 2))); }

TEST_CASE("zero field, no window: separable box spectrum") {
  const double L = 5.0, h = 0.05;
  const auto op = assemble(MagneticField{}, 0.0, L, h, make_zero_gauge());
  CHECK_FALSE(op.complex_arithmetic);
  CHECK(op.hermiticity_error == 0.0);
  const auto r = lowest_eigenpairs(op, 2);
  const double kx = std::pow(kPi / (2 * L), 2);
  CHECK(r.eigenvalues[0] - 1.0 == doctest::Approx(kx).epsilon(1e-3));
  CHECK(r.eigenvalues[1] - 1.0 == doctest::Approx(4 * kx).epsilon(1e-3));
  CHECK(r.below_threshold.empty());
  // real mixed-boundary Laplacian: identical numbers from the zero gauge and
  // from a line-integral gauge of the zero field
  const auto op2 = assemble(MagneticField{}, 0.0, L, h, make_line_integral_gauge(MagneticField{}));
  CHECK((op.H_real - op2.H_real).norm() == 0.0);
}

TEST_CASE("window binds without field") {
  const auto op = assemble(MagneticField{}, 0.5, 40.0, 0.05, make_zero_gauge(), 1.05);
  const auto r = lowest_eigenpairs(op, 1);
  CHECK(r.eigenvalues[0] < 1.0 - eps_num(40.0));
  CHECK_FALSE(r.below_threshold.empty());

  double prev = 0.0;
  for (double l : {1.5, 1.0, 0.7}) {
    Ladder lw;
    lw.L = {40.0};
    lw.h = {0.05};
    const auto est = lambda_window(l, lw);
    CHECK(est.value < 1.0);
    CHECK(est.value > prev);
    prev = est.value;
  }
}

TEST_CASE("lambda window extrapolation") {
  Ladder lw;
  lw.L = {10.0};
  lw.h = {0.1, 0.05, 0.025};
  const auto est = lambda_window(1.0, lw);
  CHECK(est.levels.size() == 3);
  CHECK(est.error < 1e-3);
  CHECK(std::abs(est.value - est.levels.back()) < 5e-3);
}

TEST_CASE("gauge covariance") {
  const MagneticField f(FieldSpec::bump_with_flux({0.5, 1.4}, 0.8, 0.3));
  const double tol = 1e-8;
  const auto base = make_line_integral_gauge(f, 0.0);
  const std::vector<GaugeSpec> gauges{base, make_line_integral_gauge(f, 1.0),
                                      make_shifted_gauge(base, 0.7, 1.3, 0.8),
                                      compactify_gauge(base, f, f.support_half_extent())};
  std::vector<double> ref;
  for (const auto& g : gauges) {
    const auto op = assemble(f, 0.5, 8.0, 0.1, g);
    CHECK(op.plaquette.max_mismatch < 1e-8);
    CHECK(op.complex_arithmetic);
    const auto r = lowest_eigenpairs(op, 3, tol, 7);
    if (ref.empty()) ref = r.eigenvalues;
    for (int i = 0; i < 3; ++i) CHECK(std::abs(r.eigenvalues[i] - ref[i]) <= 10 * tol);
  }
}

TEST_CASE("wrong gauge is rejected") {
  const MagneticField f(FieldSpec::bump_with_flux({0.5, 1.4}, 0.8, 0.3));
  CHECK_THROWS_AS(assemble(f, 0.5, 6.0, 0.1, make_zero_gauge()), GaugeError);
  const MagneticField ab(FieldSpec::aharonov_bohm({-2.0, kPi / 2}, 0.5));
  CHECK_THROWS_AS(assemble(ab, 0.5, 6.0, 0.1, make_zero_gauge()), GaugeError);
}

TEST_CASE("Aharonov-Bohm: flux quantization and conjugation symmetry") {
  const Point p{-2.0, kPi / 2};
  const double tol = 1e-8;
  const auto ab1 = assemble(FieldSpec::aharonov_bohm(p, 1.0), 0.5, 8.0, 0.1);
  CHECK(ab1.grid.x.size() > 0);
  // the plaquette around p carries 2 pi: every plaquette phase is trivial mod 2 pi
  CHECK(ab1.plaquette.max_mismatch < 1e-8);
  const auto zero = assemble_operator(ab1.grid.geom, MagneticField{}, make_zero_gauge(), ab1.grid);
  const auto e1 = lowest_eigenpairs(ab1, 2, tol, 3).eigenvalues;
  const auto e0 = lowest_eigenpairs(zero, 2, tol, 3).eigenvalues;
  for (int i = 0; i < 2; ++i) CHECK(std::abs(e1[i] - e0[i]) <= 10 * tol);

  const auto a3 = lowest_eigenpairs(assemble(FieldSpec::aharonov_bohm(p, 0.3), 0.5, 8.0, 0.1), 2, tol, 3).eigenvalues;
  const auto a7 = lowest_eigenpairs(assemble(FieldSpec::aharonov_bohm(p, 0.7), 0.5, 8.0, 0.1), 2, tol, 3).eigenvalues;
  for (int i = 0; i < 2; ++i) CHECK(std::abs(a3[i] - a7[i]) <= 10 * tol);
  // a non-integer flux raises the ground state above the field-free one
  CHECK(a3[0] > e0[0]);
}

TEST_CASE("determinism and eigenvector output") {
  const MagneticField f(FieldSpec::bump_with_flux({0.5, 1.4}, 0.8, 0.3));
  const auto op = assemble(f, 0.5, 6.0, 0.1);
  const auto r1 = lowest_eigenpairs(op, 2, 1e-8, 11);
  const auto r2 = lowest_eigenpairs(op, 2, 1e-8, 11);
  CHECK(r1.eigenvalues == r2.eigenvalues);
  CHECK(r1.gauge_id == r2.gauge_id);
  for (double res : r1.residuals) CHECK(res < 1e-8);
  // mass-normalised
  double norm = 0.0;
  for (Eigen::Index i = 0; i < r1.eigenvectors[0].size(); ++i) norm += op.mass[i] * std::norm(r1.eigenvectors[0][i]);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));

  std::ostringstream csv;
  write_eigenvector_csv(r1, 0, csv);
  const std::string s = csv.str();
  long lines = 0;
  for (char c : s) lines += c == '\n';
  CHECK(lines == 1 + static_cast<long>(op.grid.nx()) * (op.grid.ny + 1));
  CHECK(s.rfind("x1,x2,re,im,abs", 0) == 0);
  CHECK_THROWS(write_eigenvector_csv(r1, 5, csv));
}

TEST_CASE("variational monotonicity across the ladder") {
  ProbeConfig pc;
  pc.window_l = 0.5;
  pc.ladder.L = {10.0, 20.0, 40.0};
  pc.ladder.h = {0.1};
  const auto pr = discrete_spectrum_probe(pc);
  CHECK(pr.verdict == ProbeVerdict::present);
  CHECK(pr.monotone_in_L);
  for (std::size_t i = 1; i < pr.rungs.size(); ++i) CHECK(pr.rungs[i].lowest <= pr.rungs[i - 1].lowest + 1e-9);
}

TEST_CASE("Hardy form inequality and diamagnetic check") {
  const MagneticField f(FieldSpec::bump_with_flux({3.0, kPi / 2}, 0.8, 0.3));
  const auto op = assemble(f, 1e-4, 10.0, 0.1, nullptr, 1.05);
  const auto trials = random_trial_functions(op, 20, 5);
  CHECK(trials.size() == 20);
  const auto rep = form_inequality_check(op, RhoProfile::compact(0.0, -3.0, 0.004, 3.0), trials);
  CHECK(rep.violations == 0);
  CHECK(rep.min_normalized_margin >= -1e-6);
  // a weight far too large must be caught
  const auto bad = form_inequality_check(op, RhoProfile::compact(50.0, -3.0, 50.0, 3.0), trials);
  CHECK(bad.violations > 0);

  const auto r = lowest_eigenpairs(op, 1);
  const auto d = diamagnetic_check(op, r.eigenvectors[0]);
  CHECK(d.nodes > 0);
  CHECK(d.max_violation <= 1e-10 * std::max(1.0, d.max_gradient));
}
