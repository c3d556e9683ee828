#include "fdia/task_controller.hpp"

#include <Eigen/SVD>
#include <sstream>

#include "fdia/estimator.hpp"

namespace fdia {

PdGains lqr_gains(double Ts, double q_pos_weight, double q_vel_weight,
                  double r_weight) {
  ensure(Ts > 0.0, "lqr_gains: sample time must be positive");
  ensure(q_pos_weight > 0.0 && q_vel_weight > 0.0 && r_weight > 0.0,
         "lqr_gains: weights must be positive");
  Mat A(2, 2), B(2, 1), Q(2, 2), R(1, 1);
  A << 1.0, Ts, 0.0, 1.0;
  B << 0.5 * Ts * Ts, Ts;
  Q << q_pos_weight, 0.0, 0.0, q_vel_weight;
  R << r_weight;
  // The control DARE is the filter DARE on transposed data.
  Mat P;
  try {
    P = solve_dare(A.transpose(), B.transpose(), Q, R);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string("lqr_gains: ") + e.what());
  }
  const Mat K = (R + B.transpose() * P * B).ldlt().solve(B.transpose() * P * A);
  PdGains g;
  g.kp = K(0, 0);
  g.kd = K(0, 1);
  return g;
}

ControllerGains make_controller_gains(double Ts, double q_pos_weight,
                                      double q_vel_weight, double r_weight,
                                      double c_w) {
  const PdGains g = lqr_gains(Ts, q_pos_weight, q_vel_weight, r_weight);
  ControllerGains cg;
  cg.Kpp = g.kp * Mat3::Identity();
  cg.Kdp = g.kd * Mat3::Identity();
  cg.Kpo = g.kp * Mat3::Identity();
  cg.Kdo = g.kd * Mat3::Identity();
  cg.c_w = c_w;
  return cg;
}

Vec task_pd(const TaskReference& ref, const HandPose& est_pose,
            const Vec& est_twist, const ControllerGains& gains) {
  ensure(est_twist.size() == 6, "task_pd: twist must have 6 rows");
  Vec u(ref.task_dim());
  u.head<3>() = ref.pddot_ref + gains.Kpp * (ref.p_ref - est_pose.p) +
                gains.Kdp * (ref.pdot_ref - est_twist.head<3>());
  if (ref.orientation_tracked) {
    const Vec3 e_o = orientation_error(ref.R_ref, est_pose.Rmat);
    u.tail<3>() = ref.omegadot_ref + gains.Kpo * e_o +
                  gains.Kdo * (ref.omega_ref - est_twist.tail<3>());
  }
  return u;
}

Mat moore_penrose(const Mat& J, double sv_tol) {
  Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sv_min = svd.singularValues().minCoeff();
  if (sv_min < sv_tol) {
    std::ostringstream msg;
    msg << "task jacobian is row-rank deficient: smallest singular value "
        << sv_min << " < " << sv_tol;
    throw std::runtime_error(msg.str());
  }
  return svd.matrixV() * svd.singularValues().cwiseInverse().asDiagonal() *
         svd.matrixU().transpose();
}

Vec resolve_redundancy(const Vec& u_pd, const Vec& qdot_hat, const Mat& J,
                       const Mat& Jdot, const Mat& Jstar, const Mat& Jdagger,
                       const Vec& u_sec, double c_w) {
  const int n = static_cast<int>(J.cols());
  ensure(u_pd.size() == J.rows() && Jdot.rows() == J.rows(),
         "resolve_redundancy: task dimension mismatch");
  ensure(Jstar.rows() == n && Jstar.cols() == J.rows(),
         "resolve_redundancy: Jstar shape mismatch");
  const double sec_residual = (J * u_sec).norm();
  ensure(sec_residual <= 1e-8 * u_sec.norm() + 1e-12,
         "resolve_redundancy: u_sec is not in the task null space");
  return Jstar * (u_pd - Jdot * qdot_hat) -
         c_w * (qdot_hat - Jdagger * (J * qdot_hat)) + u_sec;
}

Vec hierarchical_scale(const Vec& u_primary, const Vec& u_secondary,
                       const Vec& u_min, const Vec& u_max, double quota) {
  ensure(quota >= 0.0 && quota < 1.0, "hierarchical_scale: quota must be in [0,1)");
  const int n = static_cast<int>(u_primary.size());
  const Vec cap = (1.0 - quota) * u_min.cwiseAbs().cwiseMin(u_max);

  double s1 = 1.0;
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(u_primary[j]);
    if (mag > cap[j]) s1 = std::min(s1, cap[j] / mag);
  }
  const Vec scaled_primary = s1 * u_primary;

  double s2 = 1.0;
  for (int j = 0; j < n; ++j) {
    if (u_secondary[j] > 0.0)
      s2 = std::min(s2, (u_max[j] - scaled_primary[j]) / u_secondary[j]);
    else if (u_secondary[j] < 0.0)
      s2 = std::min(s2, (u_min[j] - scaled_primary[j]) / u_secondary[j]);
  }
  s2 = std::max(s2, 0.0);
  return scaled_primary + s2 * u_secondary;
}

}  // namespace fdia
