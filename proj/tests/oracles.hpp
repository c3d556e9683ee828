#pragma once

// Test-only oracles, kept independent of the implementation paths they check.

#include <Eigen/Eigenvalues>
#include <random>

#include "fdia/qcqp.hpp"

namespace fdia::test {

// Euclidean projection onto the ellipsoid {x : x^T Qc x + q^T x + c0 <= 0}
// via completing the square and a 1-D secular bisection in the eigenbasis.
// Requires Qc positive definite and a nonempty ellipsoid.
inline Vec project_onto_ellipsoid(const Vec& y, const Mat& Qc, const Vec& q_lin,
                                  double c0) {
  const Eigen::SelfAdjointEigenSolver<Mat> eig(Qc);
  const Vec lam = eig.eigenvalues();
  const Mat V = eig.eigenvectors();
  if (lam.minCoeff() <= 0.0)
    throw std::runtime_error("oracle: constraint Hessian must be PD");

  const Vec center = -0.5 * Qc.ldlt().solve(q_lin);
  const double rho = center.dot(Qc * center) - c0;  // (x-c)^T Qc (x-c) <= rho
  if (rho < 0.0) throw std::runtime_error("oracle: empty ellipsoid");

  const Vec z = V.transpose() * (y - center);
  auto level = [&](double nu) {
    double acc = 0.0;
    for (int i = 0; i < z.size(); ++i) {
      const double xi = z[i] / (1.0 + nu * lam[i]);
      acc += lam[i] * xi * xi;
    }
    return acc;
  };
  if (level(0.0) <= rho) return y;  // already inside

  double lo = 0.0, hi = 1.0;
  while (level(hi) > rho) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (level(mid) > rho ? lo : hi) = mid;
  }
  const double nu = hi;
  Vec x(z.size());
  for (int i = 0; i < z.size(); ++i) x[i] = z[i] / (1.0 + nu * lam[i]);
  return center + V * x;
}

// Accelerated projected gradient descent on the QCQP, run to tight
// convergence. Independent route: primal iteration + ellipsoid projection
// (the production solver bisects the dual).
inline Vec pgd_qcqp_oracle(const QcqpProblem& prob, int max_iter = 200000,
                           double tol = 1e-13) {
  const Eigen::SelfAdjointEigenSolver<Mat> eig(prob.H);
  const double L = eig.eigenvalues().maxCoeff();
  const double step = 1.0 / L;

  Vec x = project_onto_ellipsoid(Vec::Zero(prob.g.size()), prob.Qc, prob.q_lin,
                                 prob.c0);
  Vec x_prev = x;
  for (int t = 1; t <= max_iter; ++t) {
    const double momentum = static_cast<double>(t - 1) / (t + 2);
    const Vec y = x + momentum * (x - x_prev);
    const Vec grad = prob.H * y + prob.g;
    const Vec x_next =
        project_onto_ellipsoid(y - step * grad, prob.Qc, prob.q_lin, prob.c0);
    x_prev = x;
    x = x_next;
    if ((x - x_prev).norm() <= tol * (1.0 + x.norm()) && t > 10) break;
  }
  return x;
}

/// Random SPD matrix with eigenvalues in [lo, hi].
inline Mat random_spd(int n, std::mt19937_64& rng, double lo = 0.5,
                      double hi = 2.0) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
  const Eigen::HouseholderQR<Mat> qr(A);
  const Mat Q = qr.householderQ();
  std::uniform_real_distribution<double> uni(lo, hi);
  Vec d(n);
  for (int i = 0; i < n; ++i) d[i] = uni(rng);
  return Q * d.asDiagonal() * Q.transpose();
}

inline Vec random_vec(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

}  // namespace fdia::test
