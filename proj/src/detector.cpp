#include "fdia/detector.hpp"

#include "fdia/chi2.hpp"

namespace fdia {

DetectorConfig detector_from_tau(double tau, int p) {
  ensure(tau > 0.0, "detector: tau must be positive");
  DetectorConfig cfg;
  cfg.tau = tau;
  cfg.p = p;
  cfg.alpha_F = chi2_sf(tau, p);
  return cfg;
}

DetectorConfig detector_from_alpha(double alpha_F, int p) {
  ensure(alpha_F > 0.0 && alpha_F < 1.0, "detector: alpha_F must lie in (0,1)");
  DetectorConfig cfg;
  cfg.alpha_F = alpha_F;
  cfg.p = p;
  cfg.tau = chi2_inv_cdf(1.0 - alpha_F, p);
  return cfg;
}

double mahalanobis(const Vec& r, const Eigen::LLT<Mat>& Sigma_chol) {
  // z = ||L^{-1} r||^2 with Sigma = L L^T.
  const Vec w = Sigma_chol.matrixL().solve(r);
  return w.squaredNorm();
}

double mahalanobis(const Vec& r, const Mat& Sigma) {
  Eigen::LLT<Mat> llt(Sigma);
  ensure(llt.info() == Eigen::Success, "mahalanobis: covariance is singular");
  return mahalanobis(r, llt);
}

}  // namespace fdia
