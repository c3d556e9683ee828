#include "fdia/kinematics.hpp"

#include <cmath>
#include <numbers>

namespace fdia {

namespace {

Eigen::Matrix4d dh_transform(const DhRow& row, double q) {
  const double ct = std::cos(q + row.theta_offset);
  const double st = std::sin(q + row.theta_offset);
  const double ca = std::cos(row.alpha);
  const double sa = std::sin(row.alpha);
  Eigen::Matrix4d T;
  T << ct, -st * ca, st * sa, row.a * ct,
       st, ct * ca, -ct * sa, row.a * st,
       0.0, sa, ca, row.d,
       0.0, 0.0, 0.0, 1.0;
  return T;
}

}  // namespace

HandPose forward_kinematics(const KinematicChain& chain, const Vec& q) {
  ensure(q.size() == chain.dof(), "forward_kinematics: joint vector size mismatch");
  ensure(all_finite(q), "forward_kinematics: non-finite joint vector");
  Eigen::Matrix4d T = chain.base;
  for (int j = 0; j < chain.dof(); ++j) T = T * dh_transform(chain.rows[j], q[j]);
  HandPose pose;
  pose.p = T.block<3, 1>(0, 3);
  pose.Rmat = T.block<3, 3>(0, 0);
  return pose;
}

Mat geometric_jacobian(const KinematicChain& chain, const Vec& q) {
  ensure(q.size() == chain.dof(), "geometric_jacobian: joint vector size mismatch");
  const int n = chain.dof();
  // Joint origins and axes in the base frame; axis j is the z-axis of the
  // frame preceding joint j.
  Eigen::Matrix4d T = chain.base;
  std::vector<Vec3> origins(n);
  std::vector<Vec3> axes(n);
  for (int j = 0; j < n; ++j) {
    origins[j] = T.block<3, 1>(0, 3);
    axes[j] = T.block<3, 1>(0, 2);
    T = T * dh_transform(chain.rows[j], q[j]);
  }
  const Vec3 p_end = T.block<3, 1>(0, 3);

  Mat J = Mat::Zero(6, n);
  for (int j = 0; j < n; ++j) {
    J.block<3, 1>(0, j) = axes[j].cross(p_end - origins[j]);
    J.block<3, 1>(3, j) = axes[j];
  }
  return J;
}

Mat positional_jacobian(const KinematicChain& chain, const Vec& q) {
  return geometric_jacobian(chain, q).topRows(3);
}

Mat jacobian_time_derivative(const KinematicChain& chain, const Vec& q,
                             const Vec& qdot) {
  ensure(all_finite(qdot), "jacobian_time_derivative: non-finite rates");
  if (qdot.isZero(0.0)) return Mat::Zero(6, chain.dof());
  const double h = fd::kJointStep;
  const Mat Jp = geometric_jacobian(chain, q + h * qdot);
  const Mat Jm = geometric_jacobian(chain, q - h * qdot);
  return (Jp - Jm) / (2.0 * h);
}

double directional_manipulability(const KinematicChain& chain, const Vec& q,
                                  const Vec3& d) {
  ensure(d.norm() <= 1.0 + 1e-9, "directional_manipulability: |d| must be <= 1");
  const Mat Jp = positional_jacobian(chain, q);
  return (Jp.transpose() * d).squaredNorm();
}

Vec manip_cost_gradient(const KinematicChain& chain, const Vec& q, const Vec3& d) {
  const int n = chain.dof();
  const double w = directional_manipulability(chain, q, d);
  Vec grad(n);
  const double h = fd::kJointStep;
  for (int j = 0; j < n; ++j) {
    Vec qp = q;
    Vec qm = q;
    qp[j] += h;
    qm[j] -= h;
    // d^T (dM/dq_j) d == d(w)/dq_j since w = d^T M d with d frozen.
    const double wp = directional_manipulability(chain, qp, d);
    const double wm = directional_manipulability(chain, qm, d);
    grad[j] = w * (wp - wm) / (2.0 * h);
  }
  return grad;
}

Mat manip_cost_hessian(const KinematicChain& chain, const Vec& q, const Vec3& d) {
  const int n = chain.dof();
  Mat H(n, n);
  const double h = fd::kHessianStep;
  for (int j = 0; j < n; ++j) {
    Vec qp = q;
    Vec qm = q;
    qp[j] += h;
    qm[j] -= h;
    H.col(j) = (manip_cost_gradient(chain, qp, d) - manip_cost_gradient(chain, qm, d)) /
               (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

Vec3 orientation_error(const Mat3& R_ref, const Mat3& R) {
  const Mat3 Rel = R_ref * R.transpose();
  const double c = std::min(1.0, std::max(-1.0, 0.5 * (Rel.trace() - 1.0)));
  const double theta = std::acos(c);
  if (theta < 1e-12) return Vec3::Zero();

  Vec3 axis;
  if (theta > std::numbers::pi - 1e-6) {
    // Axis from the symmetric part: Rel + I = 2 (cos(theta) I + (1-cos) aa^T)
    // degenerates to 2 aa^T at theta = pi; take the dominant column.
    const Mat3 S = 0.5 * (Rel + Mat3::Identity());
    int piv = 0;
    S.diagonal().maxCoeff(&piv);
    axis = S.col(piv).normalized();
    // Fix the sign from the skew part when it is not fully degenerate.
    const Vec3 skew(Rel(2, 1) - Rel(1, 2), Rel(0, 2) - Rel(2, 0),
                    Rel(1, 0) - Rel(0, 1));
    if (skew.dot(axis) < 0.0) axis = -axis;
  } else {
    axis = Vec3(Rel(2, 1) - Rel(1, 2), Rel(0, 2) - Rel(2, 0), Rel(1, 0) - Rel(0, 1)) /
           (2.0 * std::sin(theta));
  }
  return std::sin(0.5 * theta) * axis;
}

}  // namespace fdia
