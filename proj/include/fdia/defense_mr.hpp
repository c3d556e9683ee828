#pragma once

#include <optional>

#include "fdia/kinematics.hpp"
#include "fdia/types.hpp"

namespace fdia {

// Manipulability reduction along the estimated attack direction: a projected
// gradient step in the task null space plus a weighted pseudoinverse whose
// weighting penalizes motion that regrows manipulability once the cost is
// stationary.
struct ManipConfig {
  double alpha = 10.0;          // Hessian weight in W
  Vec D_diag;                   // per-joint diagonal weights (> 0)
  double nu_max = 5.0;          // max gradient step
  double armijo_c = 1e-4;       // sufficient-decrease constant
  double armijo_beta = 0.5;     // backtrack factor
  double grad_zero_tol = 1e-4;  // stationarity threshold
  double quota = 0.3;           // actuation fraction reserved for the secondary task
  double softplus_eps = 1e-6;   // eigenvalue floor for the W shift
  // Degeneracy guard in the direction estimate [m]. Doubles as the deviation
  // scale below which the estimate (and with it the whole MR response) fades
  // out: ||d|| = mag / (mag + eps), so millimeter-scale tracking noise yields
  // a near-zero direction while attack-scale displacements saturate to 1.
  double direction_eps = 1e-2;
  bool smooth_blend = false;    // opt-in smooth switch for W (default: hard switch)
};

struct AttackDirection {
  Vec3 d = Vec3::Zero();
  double magnitude = 0.0;  // ||p~ - p_ref|| before normalization
};

/// d = (p~ - p_ref) / (||p~ - p_ref|| + eps); ||d|| <= 1.
AttackDirection estimate_direction(const Vec3& p_tilde, const Vec3& p_ref,
                                   double eps);

struct NullSpaceCommand {
  Vec u_sec;            // in null(J_hat)
  double nu = 0.0;      // accepted Armijo step (0 when the gradient is ~0)
  bool armijo_accepted = true;
};

// u_sec = -nu (I - Jdagger J) grad with nu from a backtracking Armijo search
// on C evaluated at the projected configuration with d frozen; zero when
// ||grad|| <= grad_zero_tol. Falls back to the smallest backtracked step when
// the search never accepts (reported via armijo_accepted).
NullSpaceCommand null_space_command(const KinematicChain& chain,
                                    const Vec& q_tilde, const Vec3& d,
                                    const Mat& J_hat, const Vec& grad,
                                    const ManipConfig& cfg);

/// mu = log(1 + exp(eps - lambda_min)), the softplus eigenvalue shift.
double softplus_shift(double lambda_min, double eps);

struct WeightedPinvResult {
  Mat Jstar;  // n x task_rows
  Mat W;      // the weighting actually used (for diagnostics/tests)
};

// Jstar = W^{-1} J^T (J W^{-1} J^T)^{-1} with
//   W = D + alpha (hessian + mu I)   when the cost gradient is ~0,
//   W = D                            otherwise.
// With smooth_blend enabled the switch becomes a C1 ramp in ||grad||. The
// Hessian must be supplied whenever the stationary branch (or a nonzero blend
// weight) is reachable.
WeightedPinvResult weighted_pseudoinverse(const Mat& J_hat, const ManipConfig& cfg,
                                          const std::optional<Mat>& hessian,
                                          double grad_norm);

/// Blend weight in [0,1]: 1 at s=0, 0 for s>=2, C1 in between.
double blend_weight(double s);

}  // namespace fdia
