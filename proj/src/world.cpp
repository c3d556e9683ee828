#include "fdia/world.hpp"

#include <cmath>

namespace fdia {

namespace {

// Quintic (minimum-jerk) time law on [0,1]: s(0)=0, s(1)=1, zero first and
// second derivatives at both ends.
void quintic(double tau, double& s, double& sdot, double& sddot) {
  if (tau <= 0.0) {
    s = sdot = sddot = 0.0;
    return;
  }
  if (tau >= 1.0) {
    s = 1.0;
    sdot = sddot = 0.0;
    return;
  }
  const double t2 = tau * tau;
  const double t3 = t2 * tau;
  s = 10.0 * t3 - 15.0 * t2 * t2 + 6.0 * t2 * t3;
  sdot = 30.0 * t2 - 60.0 * t3 + 30.0 * t2 * t2;
  sddot = 60.0 * tau - 180.0 * t2 + 120.0 * t3;
}

}  // namespace

TaskReference TaskPlan::eval(int k) const {
  TaskReference ref;
  if (kind == TaskKind::Still) {
    ref.p_ref = p_start;
    ref.R_ref = R_start;
    ref.orientation_tracked = true;
    return ref;
  }

  ensure(duration_steps > 0 && Ts > 0.0, "task plan: circle needs duration and Ts");
  double s = 0.0, sdot = 0.0, sddot = 0.0;
  const double T_total = duration_steps * Ts;
  quintic(static_cast<double>(k) / duration_steps, s, sdot, sddot);
  sdot /= T_total;
  sddot /= (T_total * T_total);

  const double theta = sweep_angle * s;
  const double thetadot = sweep_angle * sdot;
  const double thetaddot = sweep_angle * sddot;
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  Mat3 Rz;
  Rz << c, -sn, 0.0, sn, c, 0.0, 0.0, 0.0, 1.0;
  const Vec3 p = Rz * p_start;
  const Vec3 zhat(0.0, 0.0, 1.0);
  const Vec3 tangent = zhat.cross(p);
  ref.p_ref = p;
  ref.pdot_ref = thetadot * tangent;
  ref.pddot_ref = thetaddot * tangent + thetadot * thetadot * zhat.cross(tangent);
  ref.orientation_tracked = false;
  return ref;
}

World make_world(std::shared_ptr<const WorldConfig> cfg, const Vec& q0,
                 std::uint64_t stream_id) {
  ensure(q0.size() == cfg->plant.n, "make_world: q0 size mismatch");
  World w;
  w.cfg = std::move(cfg);
  w.plant.x = interleave(q0, Vec::Zero(q0.size()));
  w.plant.rng_stream = stream_id;
  w.est.x_hat = w.plant.x;
  w.est.last_innovation = Vec::Zero(w.cfg->plant.meas_dim());
  w.proj = resync(w.est);
  w.attack_baseline = Vec::Zero(w.cfg->plant.meas_dim());
  w.k = 0;
  return w;
}

ControlEval control_phase(const World& w, const Vec& y, const Vec& attack,
                          bool want_hand_accel) {
  const WorldConfig& C = *w.cfg;
  const int n = C.plant.n;
  ControlEval ev;

  const Vec y_tilde = y + attack;
  ev.r = y_tilde - C.plant.C * w.est.x_hat;
  ev.z = mahalanobis(ev.r, C.gains.Sigma_chol);

  ev.r_tilde = residual(w.proj, w.est);
  ev.z_tilde = (w.proj.k_since_resync == 0)
                   ? 0.0
                   : anomaly_score(ev.r_tilde,
                                   C.cov_table.chol_at(w.proj.k_since_resync));

  const TaskReference ref = C.nominal_task.eval(w.k);
  ev.p_ref = ref.p_ref;
  const int rows = ref.task_dim();

  // Estimated (attack-influenced) kinematics.
  const Vec q_hat = positions(w.est.x_hat);
  const Vec qd_hat = velocities(w.est.x_hat);
  const HandPose pose_hat = forward_kinematics(C.chain, q_hat);
  const Mat J_full = geometric_jacobian(C.chain, q_hat);
  const Mat J_hat = J_full.topRows(rows);
  const Vec est_twist = J_full * qd_hat;
  const Mat Jdot = jacobian_time_derivative(C.chain, q_hat, qd_hat).topRows(rows);
  const Mat Jdagger = moore_penrose(J_hat);

  // Projected (sensor-immune) quantities.
  const Vec q_tilde = positions(w.proj.x_tilde);
  ev.qdot_tilde = velocities(w.proj.x_tilde);
  const Vec3 p_tilde = forward_kinematics(C.chain, q_tilde).p;

  const AttackDirection dir =
      estimate_direction(p_tilde, ref.p_ref, C.manip.direction_eps);
  ev.w_manip = directional_manipulability(C.chain, q_tilde, dir.d);
  ev.cost_val = 0.5 * ev.w_manip * ev.w_manip;

  ev.u_sec = Vec::Zero(n);
  Mat Jstar = Jdagger;
  if (C.flags.mr_on) {
    const Vec grad = manip_cost_gradient(C.chain, q_tilde, dir.d);
    ev.manip_grad_norm = grad.norm();
    const NullSpaceCommand nsc =
        null_space_command(C.chain, q_tilde, dir.d, J_hat, grad, C.manip);
    ev.u_sec = nsc.u_sec;
    ev.armijo_nu = nsc.nu;
    ev.armijo_accepted = nsc.armijo_accepted;

    std::optional<Mat> hess;
    const bool stationary =
        C.manip.smooth_blend
            ? blend_weight(ev.manip_grad_norm / C.manip.grad_zero_tol) > 0.0
            : ev.manip_grad_norm <= C.manip.grad_zero_tol;
    if (stationary && C.manip.alpha > 0.0)
      hess = manip_cost_hessian(C.chain, q_tilde, dir.d);
    Jstar = weighted_pseudoinverse(J_hat, C.manip, hess, ev.manip_grad_norm).Jstar;
  }
  ev.jstar_identity_err =
      (J_hat * Jstar - Mat::Identity(rows, rows)).cwiseAbs().maxCoeff();
  ev.usec_nullspace_rel = (J_hat * ev.u_sec).norm() / (ev.u_sec.norm() + 1e-300);

  // Nominal command: task part plus null-space damping; the MR secondary task
  // enters through the quota-reserving hierarchical scaling.
  const Vec u_pd = task_pd(ref, pose_hat, est_twist, C.ctrl);
  const Vec u_primary = resolve_redundancy(u_pd, qd_hat, J_hat, Jdot, Jstar,
                                           Jdagger, Vec::Zero(n), C.ctrl.c_w);
  Vec u_nom;
  if (C.flags.mr_on)
    u_nom = hierarchical_scale(u_primary, ev.u_sec, C.plant.u_min, C.plant.u_max,
                               C.manip.quota);
  else
    u_nom = u_primary;
  ev.u_nom_sat = saturate(u_nom, C.plant.u_min, C.plant.u_max);

  ev.u_d = Vec::Zero(n);
  ev.u_final = ev.u_nom_sat;
  if (C.flags.vd_on) {
    ev.phi_val = phi(ev.z_tilde, C.damping);
    const Vec u_ideal =
        ideal_damping(ev.u_nom_sat, ev.qdot_tilde, ev.z_tilde, C.damping);
    ev.u_d = headroom_clip(u_ideal, ev.u_nom_sat, C.plant.u_min, C.plant.u_max);
    ev.u_final = final_control(ev.u_nom_sat, ev.u_d, C.plant.u_min, C.plant.u_max);
  }

  if (want_hand_accel) {
    const Vec q = positions(w.plant.x);
    const Vec qd = velocities(w.plant.x);
    const Mat Jp = positional_jacobian(C.chain, q);
    const Mat Jdotp = jacobian_time_derivative(C.chain, q, qd).topRows(3);
    ev.p = forward_kinematics(C.chain, q).p;
    ev.pdot = Jp * qd;
    ev.pddot = Jp * ev.u_final + Jdotp * qd;
  }
  return ev;
}

void advance(World& w, const ControlEval& eval, const Vec& y, const Vec& attack,
             bool noisy, NoiseStream* rng) {
  const WorldConfig& C = *w.cfg;
  const Vec y_tilde = y + attack;
  w.plant = plant_step(w.plant, eval.u_final, C.plant, noisy, rng);
  w.est = kalman_step(w.est, C.gains, eval.u_final, y_tilde, C.plant);
  w.proj = project_step(w.proj, eval.u_final, C.plant);
  w.k += 1;
}

void maybe_resync(World& w) {
  const int interval = w.cfg->resync_interval;
  if (interval > 0 && w.k > 0 && w.k % interval == 0) w.proj = resync(w.est);
}

}  // namespace fdia
