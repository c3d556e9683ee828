#include "fdia/estimator.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

namespace fdia {

Mat solve_dare(const Mat& A, const Mat& C, const Mat& Q, const Mat& R,
               double rel_tol, int max_iter) {
  const int nx = static_cast<int>(A.rows());
  ensure(A.cols() == nx && C.cols() == nx, "solve_dare: dimension mismatch");
  ensure(Q.rows() == nx && Q.cols() == nx, "solve_dare: Q dimension mismatch");
  ensure(R.rows() == C.rows() && R.cols() == C.rows(), "solve_dare: R dimension mismatch");
  Eigen::LLT<Mat> lltR(R);
  ensure(lltR.info() == Eigen::Success, "solve_dare: R must be positive definite");

  Mat P = Q;
  for (int it = 0; it < max_iter; ++it) {
    const Mat S = C * P * C.transpose() + R;
    const Mat APc = A * P * C.transpose();
    const Mat P_next =
        A * P * A.transpose() + Q - APc * S.ldlt().solve(APc.transpose());
    const double diff = (P_next - P).norm();
    const double scale = std::max(P.norm(), 1e-300);
    P = 0.5 * (P_next + P_next.transpose());  // keep symmetric against roundoff
    if (diff <= rel_tol * scale) return P;
  }

  // Report the closed-loop spectral radius at the last iterate; a value at or
  // above 1 indicates (A,C) is not detectable for this noise model.
  const Mat S = C * P * C.transpose() + R;
  const Mat L = A * P * C.transpose() * S.ldlt().solve(Mat::Identity(S.rows(), S.cols()));
  const Eigen::EigenSolver<Mat> eig(A - L * C);
  const double rho = eig.eigenvalues().cwiseAbs().maxCoeff();
  std::ostringstream msg;
  msg << "solve_dare: no convergence after " << max_iter
      << " iterations; closed-loop spectral radius " << rho;
  throw std::runtime_error(msg.str());
}

EstimatorGains gains_from_covariance(const Mat& A, const Mat& C, const Mat& P,
                                     const Mat& R) {
  EstimatorGains g;
  g.P = P;
  g.Sigma = C * P * C.transpose() + R;
  g.Sigma = 0.5 * (g.Sigma + g.Sigma.transpose());
  g.Sigma_chol.compute(g.Sigma);
  ensure(g.Sigma_chol.info() == Eigen::Success,
         "estimator: innovation covariance is not positive definite");
  g.L = g.Sigma_chol.solve(C * P.transpose() * A.transpose()).transpose();
  return g;
}

EstimatorGains estimator_gains(const PlantModel& model) {
  const int n = model.n;
  const int d = model.state_dim();
  Mat P = Mat::Zero(d, d);
  for (int j = 0; j < n; ++j) {
    const int r = 2 * j;
    const Mat Aj = model.A.block(r, r, 2, 2);
    const Mat Cj = model.C.block(r, r, 2, 2);
    const Mat Qj = model.Q.block(r, r, 2, 2);
    const Mat Rj = model.R.block(r, r, 2, 2);
    P.block(r, r, 2, 2) = solve_dare(Aj, Cj, Qj, Rj);
  }
  return gains_from_covariance(model.A, model.C, P, model.R);
}

EstimatorState kalman_step(const EstimatorState& est, const EstimatorGains& gains,
                           const Vec& u, const Vec& y_tilde,
                           const PlantModel& model) {
  EstimatorState next;
  next.last_innovation = y_tilde - model.C * est.x_hat;
  next.x_hat = model.A * est.x_hat + model.B * u + gains.L * next.last_innovation;
  return next;
}

}  // namespace fdia
