#pragma once

#include <Eigen/Cholesky>
#include <vector>

#include "fdia/estimator.hpp"
#include "fdia/plant.hpp"
#include "fdia/types.hpp"

namespace fdia {

// Measurement-free actuation-projected predictor x~_{k+1} = A x~_k + B u_k,
// re-synchronized to the Kalman estimate at k = 0. Its residual
// r~_k = x^_k - x~_k is immune to sensor corruption on the x~ side; the
// per-step covariances of r~ under no attack come from the augmented
// covariance recursion below.
struct ProjectorState {
  Vec x_tilde;            // 2n projected state
  int k_since_resync = 0;
};

// Per-step residual covariances Sigma_{r~,k} for k = 1..K_max, with cached
// factors for scoring. Entry index k-1 holds step k; step 0 has zero
// covariance by construction and is excluded.
struct ResidualCovTable {
  std::vector<Mat> sigma;
  std::vector<Eigen::LLT<Mat>> chol;

  const Mat& at(int k) const {
    ensure(k >= 1 && k <= static_cast<int>(sigma.size()),
           "cov table: step index out of range");
    return sigma[k - 1];
  }
  const Eigen::LLT<Mat>& chol_at(int k) const {
    ensure(k >= 1 && k <= static_cast<int>(chol.size()),
           "cov table: step index out of range");
    return chol[k - 1];
  }
  int max_step() const { return static_cast<int>(sigma.size()); }
};

/// x~ <- x^, step counter zeroed.
ProjectorState resync(const EstimatorState& est);

/// Open-loop update with the final applied command u_k.
ProjectorState project_step(const ProjectorState& ps, const Vec& u,
                            const PlantModel& model);

/// r~_k = x^_k - x~_k.
Vec residual(const ProjectorState& ps, const EstimatorState& est);

// Iterates Xi_{i+1} = F Xi_i F^T + Pi from Xi_0 = diag(P, 0) with
//   F = [[A - L C, 0], [L C, A]],  Gamma = [[I, -L], [0, L]],
//   Pi = Gamma diag(Q, R) Gamma^T,
// and returns the lower-right 2n x 2n blocks for k = 1..K_max. The k = 1
// entry equals L Sigma L^T in closed form.
ResidualCovTable covariance_recursion(const EstimatorGains& gains,
                                      const PlantModel& model, int K_max);

// z~_k = r~^T Sigma_{r~,k}^{-1} r~, valid for k >= 1. Errors on a singular
// covariance (k = 0 misuse, or a noise configuration with q_c or R too small
// for the factorization; any q_c > 0 with R > 0 keeps k = 1 well-posed since
// Sigma_{r~,1} = L Sigma L^T with L invertible).
double anomaly_score(const Vec& r_tilde, const Eigen::LLT<Mat>& Sigma_k_chol);
double anomaly_score(const Vec& r_tilde, const Mat& Sigma_k);

}  // namespace fdia
