#include "fdia/defense_mr.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "fdia/task_controller.hpp"

namespace fdia {

AttackDirection estimate_direction(const Vec3& p_tilde, const Vec3& p_ref,
                                   double eps) {
  ensure(eps > 0.0, "estimate_direction: eps must be positive");
  AttackDirection out;
  const Vec3 delta = p_tilde - p_ref;
  out.magnitude = delta.norm();
  out.d = delta / (out.magnitude + eps);
  return out;
}

NullSpaceCommand null_space_command(const KinematicChain& chain,
                                    const Vec& q_tilde, const Vec3& d,
                                    const Mat& J_hat, const Vec& grad,
                                    const ManipConfig& cfg) {
  NullSpaceCommand out;
  out.u_sec = Vec::Zero(q_tilde.size());
  if (grad.norm() <= cfg.grad_zero_tol) {
    out.nu = 0.0;
    return out;
  }

  const Mat Jdagger = moore_penrose(J_hat);
  const Vec direction = -(grad - Jdagger * (J_hat * grad));
  const double slope = grad.dot(direction);  // <= 0 by projector psd-ness
  if (direction.norm() < 1e-14) return out;

  auto cost_at = [&](const Vec& q) {
    const double w = directional_manipulability(chain, q, d);
    return 0.5 * w * w;
  };
  const double c0 = cost_at(q_tilde);

  double nu = cfg.nu_max;
  bool accepted = false;
  for (int i = 0; i < 40; ++i) {
    if (cost_at(q_tilde + nu * direction) <= c0 + cfg.armijo_c * nu * slope) {
      accepted = true;
      break;
    }
    nu *= cfg.armijo_beta;
  }
  out.nu = nu;
  out.armijo_accepted = accepted;
  out.u_sec = nu * direction;
  return out;
}

double softplus_shift(double lambda_min, double eps) {
  const double x = eps - lambda_min;
  // Stable softplus: log(1 + exp(x)).
  if (x > 30.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double blend_weight(double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double t = 0.5 * s;
  return 1.0 - t * t * (3.0 - 2.0 * t);
}

WeightedPinvResult weighted_pseudoinverse(const Mat& J_hat, const ManipConfig& cfg,
                                          const std::optional<Mat>& hessian,
                                          double grad_norm) {
  const int n = static_cast<int>(J_hat.cols());
  ensure(cfg.D_diag.size() == n, "weighted_pseudoinverse: D size mismatch");
  ensure((cfg.D_diag.array() > 0.0).all(), "weighted_pseudoinverse: D must be positive");

  double weight = 0.0;  // share of the Hessian term in W
  if (cfg.smooth_blend)
    weight = blend_weight(grad_norm / cfg.grad_zero_tol);
  else
    weight = (grad_norm <= cfg.grad_zero_tol) ? 1.0 : 0.0;

  Mat W = Mat(cfg.D_diag.asDiagonal());
  if (weight > 0.0 && cfg.alpha > 0.0) {
    ensure(hessian.has_value(),
           "weighted_pseudoinverse: stationary branch requires the cost Hessian");
    ensure(hessian->rows() == n && hessian->cols() == n,
           "weighted_pseudoinverse: Hessian shape mismatch");
    const Eigen::SelfAdjointEigenSolver<Mat> eig(*hessian,
                                                 Eigen::EigenvaluesOnly);
    const double mu = softplus_shift(eig.eigenvalues().minCoeff(), cfg.softplus_eps);
    W += (cfg.alpha * weight) * (*hessian + mu * Mat::Identity(n, n));
  }

  Eigen::LLT<Mat> W_chol(W);
  ensure(W_chol.info() == Eigen::Success,
         "weighted_pseudoinverse: W is not positive definite");

  // Rank check mirrors the unweighted path so failures carry the same message.
  moore_penrose(J_hat);

  const Mat WinvJt = W_chol.solve(J_hat.transpose());
  const Mat S = J_hat * WinvJt;
  Eigen::LLT<Mat> S_chol(S);
  ensure(S_chol.info() == Eigen::Success,
         "weighted_pseudoinverse: task Gram matrix not positive definite");

  WeightedPinvResult out;
  out.W = std::move(W);
  out.Jstar = S_chol.solve(WinvJt.transpose()).transpose();
  return out;
}

}  // namespace fdia
