#pragma once

#include <Eigen/Cholesky>

#include "fdia/types.hpp"

namespace fdia {

// Chi-squared detector over Kalman innovations: z_k = r^T Sigma^{-1} r,
// alarm when z_k > tau. Threshold and per-step false-alarm probability are
// linked by tau = F^{-1}_{chi2(p)}(1 - alpha_F).
struct DetectorConfig {
  double tau = 0.0;      // alarm threshold
  double alpha_F = 0.0;  // per-step false-alarm probability
  int p = 0;             // degrees of freedom (= 2n)
};

/// Builds the config from a threshold; alpha_F (and ARL = 1/alpha_F) derived.
DetectorConfig detector_from_tau(double tau, int p);

/// Builds the config from a per-step false-alarm probability.
DetectorConfig detector_from_alpha(double alpha_F, int p);

// z = r^T Sigma^{-1} r, evaluated by triangular solves against the factor.
double mahalanobis(const Vec& r, const Eigen::LLT<Mat>& Sigma_chol);

/// Convenience overload that factorizes Sigma; errors when not SPD.
double mahalanobis(const Vec& r, const Mat& Sigma);

inline bool alarm(double z, const DetectorConfig& cfg) { return z > cfg.tau; }

}  // namespace fdia
