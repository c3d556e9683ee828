#pragma once

#include <Eigen/Cholesky>

#include "fdia/plant.hpp"
#include "fdia/types.hpp"

namespace fdia {

// Steady-state Kalman filter in single-step innovation form:
//   x^_{k+1} = A x^_k + B u_k + L r_k,   r_k = y~_k - C x^_k.
// Gains come from the unique stabilizing DARE solution P, with
// Sigma = C P C^T + R and L = A P C^T Sigma^{-1}.
struct EstimatorGains {
  Mat P;        // 2n x 2n steady estimation-error covariance
  Mat Sigma;    // p x p innovation covariance
  Mat L;        // 2n x p steady Kalman gain
  Eigen::LLT<Mat> Sigma_chol;  // factor of Sigma; applied instead of an inverse
};

struct EstimatorState {
  Vec x_hat;            // 2n estimate
  Vec last_innovation;  // p, r_k from the most recent step
};

// Fixed-point iteration of the filter Riccati map
//   P <- A P A^T + Q - A P C^T (C P C^T + R)^{-1} C P A^T
// from P0 = Q. Converges for any detectable (A,C) with R > 0; errors after
// max_iter naming the spectral radius of the closed-loop A - L C observed.
Mat solve_dare(const Mat& A, const Mat& C, const Mat& Q, const Mat& R,
               double rel_tol = 1e-12, int max_iter = 1000000);

/// Assembles Sigma, L (and the Sigma factor) from a solved P.
EstimatorGains gains_from_covariance(const Mat& A, const Mat& C, const Mat& P,
                                     const Mat& R);

// Production solve for the interleaved block-diagonal plant: one 2x2 DARE per
// joint, assembled block-diagonally. The dense solve_dare on the full system
// is kept as an independent cross-check in tests.
EstimatorGains estimator_gains(const PlantModel& model);

/// One innovation-form update; u is the final applied command u_k.
EstimatorState kalman_step(const EstimatorState& est, const EstimatorGains& gains,
                           const Vec& u, const Vec& y_tilde,
                           const PlantModel& model);

}  // namespace fdia
