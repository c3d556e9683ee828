#pragma once

#include <vector>

#include "fdia/types.hpp"

namespace fdia {

// Standard Denavit-Hartenberg row: successive frames related by
// Rz(theta + theta_offset) Tz(d) Tx(a) Rx(alpha), all joints revolute.
struct DhRow {
  double a = 0.0;             // link length [m]
  double alpha = 0.0;         // link twist [rad]
  double d = 0.0;             // link offset [m]
  double theta_offset = 0.0;  // joint variable offset [rad]
};

struct KinematicChain {
  std::vector<DhRow> rows;
  Mat base = Mat::Identity(4, 4);  // rigid transform of the first frame

  int dof() const { return static_cast<int>(rows.size()); }
};

struct HandPose {
  Vec3 p = Vec3::Zero();
  Mat3 Rmat = Mat3::Identity();
};

/// Pose of the last frame in the base frame.
HandPose forward_kinematics(const KinematicChain& chain, const Vec& q);

// 6 x dof geometric Jacobian in the base frame: rows 1-3 map qdot to hand
// linear velocity, rows 4-6 to angular velocity.
Mat geometric_jacobian(const KinematicChain& chain, const Vec& q);

/// Top three rows of the geometric Jacobian.
Mat positional_jacobian(const KinematicChain& chain, const Vec& q);

/// Directional central difference of J along qdot: dJ/dt.
Mat jacobian_time_derivative(const KinematicChain& chain, const Vec& q,
                             const Vec& qdot);

/// w = d^T Jp Jp^T d, the squared task-velocity gain along direction d.
double directional_manipulability(const KinematicChain& chain, const Vec& q,
                                  const Vec3& d);

// Gradient of C = w^2 / 2 with respect to q, with d frozen:
// grad_j = w * d^T (dM/dq_j) d, where M = Jp Jp^T is probed by central
// differences of Jp.
Vec manip_cost_gradient(const KinematicChain& chain, const Vec& q, const Vec3& d);

/// Symmetrized central difference of the gradient.
Mat manip_cost_hessian(const KinematicChain& chain, const Vec& q, const Vec3& d);

// Orientation error e_O = sin(theta/2) * axis from R_ref * R^T with
// theta in [0, pi]. Near theta = 0 the error is zero; near theta = pi the
// axis comes from the dominant diagonal of the symmetric part.
Vec3 orientation_error(const Mat3& R_ref, const Mat3& R);

}  // namespace fdia
