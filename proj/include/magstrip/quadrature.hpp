#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace magstrip {

/// Adaptive Gauss-Kronrod on [a, b].
template <typename F>
double integrate(F&& f, double a, double b, double tol = 1e-13) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 15, tol, &err);
}

/// Adaptive Gauss-Kronrod with the interval split at the given breakpoints
/// (those outside (a, b) are ignored). Use at kinks of the integrand.
template <typename F>
double integrate_split(F&& f, double a, double b, std::vector<double> breaks, double tol = 1e-13) {
  if (!(b > a)) return 0.0;
  std::erase_if(breaks, [&](double t) { return !(t > a && t < b); });
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  double lo = a;
  for (double t : breaks) {
    total += integrate(f, lo, t, tol);
    lo = t;
  }
  return total + integrate(f, lo, b, tol);
}

/// Fixed 30-point Gauss-Legendre on each piece between breakpoints. For
/// integrands that are analytic between the breakpoints.
template <typename F>
double integrate_smooth_pieces(F&& f, double a, double b, std::vector<double> breaks) {
  if (!(b > a)) return 0.0;
  std::erase_if(breaks, [&](double t) { return !(t > a && t < b); });
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  double lo = a;
  breaks.push_back(b);
  for (double t : breaks) {
    if (t > lo) total += boost::math::quadrature::gauss<double, 30>::integrate(f, lo, t);
    lo = t;
  }
  return total;
}

/// Improper integral int_{-inf}^{b} f(s) ds via the exp-sinh rule.
template <typename F>
double integrate_to_minus_infinity(F&& f, double b, double tol = 1e-12) {
  boost::math::quadrature::exp_sinh<double> rule;
  auto mirrored = [&](double t) { return f(b - t); };
  return rule.integrate(mirrored, tol);
}

}  // namespace magstrip
