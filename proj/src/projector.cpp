#include "fdia/projector.hpp"

namespace fdia {

ProjectorState resync(const EstimatorState& est) {
  ProjectorState ps;
  ps.x_tilde = est.x_hat;
  ps.k_since_resync = 0;
  return ps;
}

ProjectorState project_step(const ProjectorState& ps, const Vec& u,
                            const PlantModel& model) {
  ProjectorState next;
  next.x_tilde = model.A * ps.x_tilde + model.B * u;
  next.k_since_resync = ps.k_since_resync + 1;
  return next;
}

Vec residual(const ProjectorState& ps, const EstimatorState& est) {
  return est.x_hat - ps.x_tilde;
}

ResidualCovTable covariance_recursion(const EstimatorGains& gains,
                                      const PlantModel& model, int K_max) {
  ensure(K_max >= 1, "covariance_recursion: K_max must be >= 1");
  const int d = model.state_dim();
  const int p = model.meas_dim();

  Mat F = Mat::Zero(2 * d, 2 * d);
  F.topLeftCorner(d, d) = model.A - gains.L * model.C;
  F.bottomLeftCorner(d, d) = gains.L * model.C;
  F.bottomRightCorner(d, d) = model.A;

  Mat Gamma = Mat::Zero(2 * d, d + p);
  Gamma.topLeftCorner(d, d) = Mat::Identity(d, d);
  Gamma.topRightCorner(d, p) = -gains.L;
  Gamma.bottomRightCorner(d, p) = gains.L;

  Mat QR = Mat::Zero(d + p, d + p);
  QR.topLeftCorner(d, d) = model.Q;
  QR.bottomRightCorner(p, p) = model.R;
  const Mat Pi = Gamma * QR * Gamma.transpose();

  Mat Xi = Mat::Zero(2 * d, 2 * d);
  Xi.topLeftCorner(d, d) = gains.P;

  ResidualCovTable table;
  table.sigma.reserve(K_max);
  table.chol.reserve(K_max);
  for (int k = 1; k <= K_max; ++k) {
    Xi = F * Xi * F.transpose() + Pi;
    Xi = 0.5 * (Xi + Xi.transpose());
    Mat block = Xi.bottomRightCorner(d, d);
    block = 0.5 * (block + block.transpose());
    Eigen::LLT<Mat> llt(block);
    ensure(llt.info() == Eigen::Success,
           "covariance_recursion: residual covariance not positive definite at step " +
               std::to_string(k) + " (noise configuration too degenerate)");
    table.sigma.push_back(std::move(block));
    table.chol.push_back(std::move(llt));
  }
  return table;
}

double anomaly_score(const Vec& r_tilde, const Eigen::LLT<Mat>& Sigma_k_chol) {
  const Vec w = Sigma_k_chol.matrixL().solve(r_tilde);
  return w.squaredNorm();
}

double anomaly_score(const Vec& r_tilde, const Mat& Sigma_k) {
  Eigen::LLT<Mat> llt(Sigma_k);
  ensure(llt.info() == Eigen::Success,
         "anomaly_score: covariance singular (step 0 misuse or degenerate noise)");
  return anomaly_score(r_tilde, llt);
}

}  // namespace fdia
