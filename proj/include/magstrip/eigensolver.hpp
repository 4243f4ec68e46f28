#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "magstrip/errors.hpp"

namespace magstrip {

template <typename Scalar>
struct EigenpairsResult {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  std::vector<double> values;
  std::vector<Vector> vectors;  // unit 2-norm
  std::vector<double> residuals;
  double shift = 0.0;
  int iterations = 0;
  int passes = 0;
};

struct EigensolverOptions {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  /// Initial shift; must lie below the spectrum for the first factorisation
  /// to be positive definite (it is lowered automatically otherwise).
  double initial_shift = 0.0;
  int max_passes = 40;
  /// Problems up to this size are solved densely.
  int dense_limit = 400;
};

namespace detail {

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if constexpr (std::is_same_v<Scalar, double>) {
      v[i] = nd(rng);
    } else {
      const double re = nd(rng);
      const double im = nd(rng);
      v[i] = Scalar(re, im);
    }
  }
  return v.normalized();
}

template <typename Scalar>
double residual_norm(const Eigen::SparseMatrix<Scalar>& H, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v,
                     double lambda) {
  return (H * v - lambda * v).norm() / v.norm();
}

}  // namespace detail

/// k smallest eigenpairs of a sparse Hermitian matrix by shift-and-invert
/// Lanczos with full reorthogonalisation. The shift is moved towards the
/// lowest Ritz value between passes while an LDL^T factorisation certifies
/// (all pivots positive) that it stays below the spectrum. Deterministic
/// for a given seed.
template <typename Scalar>
EigenpairsResult<Scalar> smallest_eigenpairs(const Eigen::SparseMatrix<Scalar>& H, int k,
                                             const EigensolverOptions& opt = {}) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = H.rows();
  if (k < 1 || k > n) throw DomainError("requested eigenpair count out of range");
  EigenpairsResult<Scalar> out;

  if (n <= opt.dense_limit) {
    const Dense dense(H);
    Eigen::SelfAdjointEigenSolver<Dense> es(dense);
    if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed", 0.0, 0);
    for (int i = 0; i < k; ++i) {
      const double lam = es.eigenvalues()[i];
      Vector v = es.eigenvectors().col(i);
      out.values.push_back(lam);
      out.residuals.push_back(detail::residual_norm(H, v, lam));
      out.vectors.push_back(std::move(v));
    }
    out.passes = 1;
    return out;
  }

  std::mt19937_64 rng(opt.seed);
  Eigen::SparseMatrix<Scalar> I(n, n);
  I.setIdentity();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<Scalar>> ldlt;

  // symbolic analysis once; the pattern does not change with the shift
  ldlt.analyzePattern(H);
  auto factor_pd = [&](double sigma) {
    ldlt.factorize(H - Scalar(sigma) * I);
    if (ldlt.info() != Eigen::Success) return false;
    const auto d = ldlt.vectorD();
    for (Eigen::Index i = 0; i < d.size(); ++i)
      if (!(std::real(d[i]) > 0.0)) return false;
    return true;
  };

  double sigma = opt.initial_shift;
  int guard = 0;
  while (!factor_pd(sigma)) {
    sigma -= std::max(1.0, std::abs(sigma));
    if (++guard > 60) throw SolverError("could not find a shift below the spectrum", 0.0, 0);
  }

  int m = static_cast<int>(std::min<Eigen::Index>(n, std::max(3 * k, k + 30)));
  // the Krylov basis may grow on stagnation, within about 2e7 stored entries
  const int m_cap = static_cast<int>(std::min<Eigen::Index>(n, std::max<Eigen::Index>(m, 20000000 / n)));
  Vector start = detail::random_vector<Scalar>(n, rng);
  double last_worst = 0.0;
  double previous_worst = 0.0;

  for (int pass = 0; pass < opt.max_passes; ++pass) {
    Dense V(n, m);
    std::vector<double> alpha, beta;
    Vector v = start.normalized();
    int steps = 0;
    for (int j = 0; j < m; ++j) {
      V.col(j) = v;
      Vector w = ldlt.solve(v);
      ++out.iterations;
      const double a = std::real(v.dot(w));
      alpha.push_back(a);
      // full reorthogonalisation, applied twice
      for (int rep = 0; rep < 2; ++rep) w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
      const double b = w.norm();
      steps = j + 1;
      if (j + 1 == m) break;
      if (b < 1e-14 * std::abs(a)) {
        // invariant subspace: continue with a fresh orthogonal direction
        Vector r = detail::random_vector<Scalar>(n, rng);
        for (int rep = 0; rep < 2; ++rep) r -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * r);
        beta.push_back(0.0);
        v = r.normalized();
      } else {
        beta.push_back(b);
        v = w / b;
      }
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
    for (int j = 0; j < steps; ++j) {
      T(j, j) = alpha[j];
      if (j + 1 < steps) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(T);
    // largest theta of the inverse <-> smallest lambda of H
    out.values.clear();
    out.vectors.clear();
    out.residuals.clear();
    const int kk = std::min(k, steps);
    for (int i = 0; i < kk; ++i) {
      const int col = steps - 1 - i;
      Vector y = V.leftCols(steps) * tes.eigenvectors().col(col).template cast<Scalar>();
      y.normalize();
      // Rayleigh quotient of H rather than sigma + 1/theta
      const double lam = std::real(y.dot(H * y));
      out.values.push_back(lam);
      out.residuals.push_back(detail::residual_norm(H, y, lam));
      out.vectors.push_back(std::move(y));
    }
    // sort ascending (Rayleigh quotients may swap near-degenerate pairs)
    std::vector<int> order(kk);
    for (int i = 0; i < kk; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return out.values[a] < out.values[b]; });
    EigenpairsResult<Scalar> sorted;
    for (int i : order) {
      sorted.values.push_back(out.values[i]);
      sorted.vectors.push_back(out.vectors[i]);
      sorted.residuals.push_back(out.residuals[i]);
    }
    out.values = std::move(sorted.values);
    out.vectors = std::move(sorted.vectors);
    out.residuals = std::move(sorted.residuals);
    out.passes = pass + 1;
    out.shift = sigma;

    last_worst = *std::max_element(out.residuals.begin(), out.residuals.end());
    if (kk == k && last_worst < opt.tol) return out;
    if (pass > 0 && last_worst > 0.5 * previous_worst) m = std::min(m_cap, 2 * m);
    previous_worst = last_worst;

    // move the shift just below the lowest Ritz value, keeping it certified
    double target = out.values.front() - 2.0 * out.residuals.front() - 1e-10;
    if (target > sigma) {
      bool moved = false;
      for (int t = 0; t < 30 && !moved; ++t) {
        if (factor_pd(target)) {
          sigma = target;
          moved = true;
        } else {
          target = 0.5 * (sigma + target);
        }
      }
      if (!moved && !factor_pd(sigma)) throw SolverError("lost a positive-definite shift", last_worst, out.iterations);
    }
    start = Vector::Zero(n);
    for (const auto& y : out.vectors) start += y;
    start += 1e-3 * detail::random_vector<Scalar>(n, rng);
  }
  throw SolverError("shift-invert Lanczos did not reach the residual tolerance", last_worst, out.iterations);
}

}  // namespace magstrip
