#pragma once

#include "fdia/types.hpp"

namespace fdia {

// Anomaly-aware virtual damping. The target power dissipation ratio
//   phi(z~) = rho_max (1 - exp[-(z~/z_s)^m])
// rises from 0 toward rho_max as the projected anomaly score grows; z_s is
// fixed by the control-point condition phi(z_x) = rho_y. All commands are
// computed from projected quantities only, never from the attacked estimate.
struct DampingConfig {
  double rho_max = 1.2;  // sigmoid limit; > 1 gives strict passivity in the limit
  double rho_y = 0.01;   // value at the control point, in (0, rho_max)
  double exp_m = 2.0;    // sigmoid exponent
  double z_x = 0.0;      // control point (chi-squared quantile)
  double psi = 0.0;      // confidence level behind z_x
  double eps_vel = 1e-4; // velocity deadband [rad/s]
  double z_s = 0.0;      // derived scale; see make_damping_config
};

/// Derives z_s (and validates z_x against chi2_inv_cdf(psi, dof) when psi>0).
DampingConfig make_damping_config(double rho_max, double rho_y, double exp_m,
                                  double z_x, double psi, double eps_vel,
                                  int dof);

/// Target power dissipation ratio; phi(0)=0, sup phi = rho_max, phi(z_x)=rho_y.
double phi(double z_tilde, const DampingConfig& cfg);

// Ideal unconstrained damping: per joint -phi(z~) |P_j| / qd~_j where
// P_j = u_sat_j * qd~_j is the projected nominal power, zero inside the
// velocity deadband.
Vec ideal_damping(const Vec& u_nom_sat, const Vec& qdot_tilde, double z_tilde,
                  const DampingConfig& cfg);

// Clip to the actuator headroom [u_min - u_sat, u_max - u_sat]; never flips
// sign or grows magnitude.
Vec headroom_clip(const Vec& u_ideal, const Vec& u_nom_sat, const Vec& u_min,
                  const Vec& u_max);

/// u = Sat{u_nom} + u_d; within limits by headroom construction (asserted).
Vec final_control(const Vec& u_nom_sat, const Vec& u_d, const Vec& u_min,
                  const Vec& u_max);

}  // namespace fdia
