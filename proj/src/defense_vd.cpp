#include "fdia/defense_vd.hpp"

#include <cmath>

#include "fdia/chi2.hpp"

namespace fdia {

DampingConfig make_damping_config(double rho_max, double rho_y, double exp_m,
                                  double z_x, double psi, double eps_vel,
                                  int dof) {
  ensure(rho_max > 0.0, "damping: rho_max must be positive");
  ensure(rho_y > 0.0 && rho_y < rho_max, "damping: rho_y must lie in (0, rho_max)");
  ensure(exp_m > 0.0, "damping: exponent must be positive");
  ensure(eps_vel >= 0.0, "damping: velocity deadband must be non-negative");

  DampingConfig cfg;
  cfg.rho_max = rho_max;
  cfg.rho_y = rho_y;
  cfg.exp_m = exp_m;
  cfg.psi = psi;
  if (psi > 0.0) {
    const double z_quantile = chi2_inv_cdf(psi, dof);
    if (z_x > 0.0)
      ensure(std::abs(z_x - z_quantile) < 1e-6,
             "damping: z_x inconsistent with chi2 quantile for psi");
    cfg.z_x = z_quantile;
  } else {
    ensure(z_x > 0.0, "damping: need z_x or psi");
    cfg.z_x = z_x;
  }
  cfg.z_s = cfg.z_x * std::pow(-std::log(1.0 - rho_y / rho_max), -1.0 / exp_m);
  ensure(std::isfinite(cfg.z_s) && cfg.z_s > 0.0, "damping: derived z_s invalid");
  return cfg;
}

double phi(double z_tilde, const DampingConfig& cfg) {
  ensure(z_tilde >= 0.0, "phi: anomaly score must be non-negative");
  return cfg.rho_max * (1.0 - std::exp(-std::pow(z_tilde / cfg.z_s, cfg.exp_m)));
}

Vec ideal_damping(const Vec& u_nom_sat, const Vec& qdot_tilde, double z_tilde,
                  const DampingConfig& cfg) {
  const double ratio = phi(z_tilde, cfg);
  Vec u_ideal = Vec::Zero(u_nom_sat.size());
  for (int j = 0; j < u_nom_sat.size(); ++j) {
    if (std::abs(qdot_tilde[j]) > cfg.eps_vel) {
      const double power_mag = std::abs(u_nom_sat[j] * qdot_tilde[j]);
      u_ideal[j] = -ratio * power_mag / qdot_tilde[j];
    }
  }
  return u_ideal;
}

Vec headroom_clip(const Vec& u_ideal, const Vec& u_nom_sat, const Vec& u_min,
                  const Vec& u_max) {
  const Vec h_minus = u_min - u_nom_sat;
  const Vec h_plus = u_max - u_nom_sat;
  ensure((h_minus.array() <= 1e-12).all() && (h_plus.array() >= -1e-12).all(),
         "headroom_clip: u_nom_sat outside actuator limits");
  return u_ideal.cwiseMin(h_plus).cwiseMax(h_minus);
}

Vec final_control(const Vec& u_nom_sat, const Vec& u_d, const Vec& u_min,
                  const Vec& u_max) {
  const Vec u = u_nom_sat + u_d;
  ensure((u.array() >= u_min.array() - 1e-9).all() &&
             (u.array() <= u_max.array() + 1e-9).all(),
         "final_control: headroom logic violated actuator limits");
  return u;
}

}  // namespace fdia
