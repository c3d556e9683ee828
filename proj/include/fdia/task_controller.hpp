#pragma once

#include "fdia/kinematics.hpp"
#include "fdia/types.hpp"

namespace fdia {

// Task-space references for one step. Position rows are always tracked;
// orientation rows participate only when orientation_tracked is set.
struct TaskReference {
  Vec3 p_ref = Vec3::Zero();
  Vec3 pdot_ref = Vec3::Zero();
  Vec3 pddot_ref = Vec3::Zero();
  Mat3 R_ref = Mat3::Identity();
  Vec3 omega_ref = Vec3::Zero();
  Vec3 omegadot_ref = Vec3::Zero();
  bool orientation_tracked = false;

  int task_dim() const { return orientation_tracked ? 6 : 3; }
};

struct ControllerGains {
  Mat3 Kpp = Mat3::Zero();
  Mat3 Kdp = Mat3::Zero();
  Mat3 Kpo = Mat3::Zero();
  Mat3 Kdo = Mat3::Zero();
  double c_w = 1.0;  // null-space damping
};

// Discrete LQR for the per-axis double integrator at sample time Ts with
// state weights diag(q_pos, q_vel) and input weight r. The state-feedback row
// is read as (kp, kd).
struct PdGains {
  double kp = 0.0;
  double kd = 0.0;
};
PdGains lqr_gains(double Ts, double q_pos_weight, double q_vel_weight,
                  double r_weight);

/// Builds isotropic controller gains from one LQR design for all axes.
ControllerGains make_controller_gains(double Ts, double q_pos_weight,
                                      double q_vel_weight, double r_weight,
                                      double c_w);

// PD + feedforward task acceleration: 3 rows (position) or 6 rows
// (position & orientation). Estimated pose/twist come from the attacked
// estimate by design.
Vec task_pd(const TaskReference& ref, const HandPose& est_pose,
            const Vec& est_twist, const ControllerGains& gains);

// Moore-Penrose pseudoinverse of a full-row-rank task Jacobian; errors naming
// the smallest singular value when rank-deficient.
Mat moore_penrose(const Mat& J, double sv_tol = 1e-6);

// u_nom = Jstar (u_PD - Jdot qdot) - c_w (I - Jdagger J) qdot + u_sec.
// u_sec must already lie in null(J).
Vec resolve_redundancy(const Vec& u_pd, const Vec& qdot_hat, const Mat& J,
                       const Mat& Jdot, const Mat& Jstar, const Mat& Jdagger,
                       const Vec& u_sec, double c_w);

// Magnitude-preserving hierarchical saturation: the primary command is scaled
// into (1-quota) of the per-joint capability, the secondary into the
// remaining headroom; directions of both parts are preserved and the sum is
// within limits element-wise.
Vec hierarchical_scale(const Vec& u_primary, const Vec& u_secondary,
                       const Vec& u_min, const Vec& u_max, double quota);

}  // namespace fdia
