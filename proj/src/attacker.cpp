#include "fdia/attacker.hpp"

namespace fdia {

namespace {

// Zero-increment continuation of an attack: the accumulated position bias is
// a baseline BIA and persists; rate channels are per-step pulses and drop.
Vec persist_bias(Vec a) {
  for (int i = 1; i < a.size(); i += 2) a[i] = 0.0;
  return a;
}

}  // namespace

RolloutOutput rollout(const World& snap, const std::vector<Vec>& attack_seq,
                      int steps) {
  ensure(steps >= 1, "rollout: steps must be >= 1");
  const int p = snap.cfg->plant.meas_dim();
  const Vec zero = Vec::Zero(p);

  // Entries beyond the given sequence mean "no further increment", i.e. the
  // position bias of the last applied attack carries forward.
  Vec current = snap.attack_baseline;
  auto seq_at = [&](int i) -> const Vec& {
    if (i < static_cast<int>(attack_seq.size()))
      current = attack_seq[i];
    else
      current = persist_bias(current);
    return current;
  };

  RolloutOutput out;
  out.end = snap;
  for (int i = 0; i < steps; ++i) {
    maybe_resync(out.end);
    const Vec y = measure(out.end.plant, zero, snap.cfg->plant, false);
    const Vec& a = seq_at(i);
    const ControlEval ev = control_phase(out.end, y, a, false);
    advance(out.end, ev, y, a, false, nullptr);
  }
  // Partial evaluation at the end state: the control phase of tick k+steps
  // supplies the realized hand acceleration there.
  maybe_resync(out.end);
  const Vec y = measure(out.end.plant, zero, snap.cfg->plant, false);
  const ControlEval ev = control_phase(out.end, y, seq_at(steps), true);
  out.p = ev.p;
  out.pdot = ev.pdot;
  out.pddot = ev.pddot;
  return out;
}

Mat incremental_map(int n, double Ts) {
  Mat M = Mat::Zero(2 * n, n);
  for (int j = 0; j < n; ++j) {
    M(2 * j, j) = 1.0;
    M(2 * j + 1, j) = 1.0 / Ts;
  }
  return M;
}

namespace {

Sensitivity sensitivity_with_steps(const World& snap, const Vec& a_baseline,
                                   double h_q, double h_qd) {
  const int p = snap.cfg->plant.meas_dim();
  const int n = snap.cfg->plant.n;
  Sensitivity s;
  s.Z = Mat::Zero(3, p);
  for (int i = 0; i < p; ++i) {
    const double h = (i % 2 == 0) ? h_q : h_qd;
    Vec a_plus = a_baseline;
    Vec a_minus = a_baseline;
    a_plus[i] += h;
    a_minus[i] -= h;
    const Vec3 f_plus = rollout(snap, {a_plus}, 2).pddot;
    const Vec3 f_minus = rollout(snap, {a_minus}, 2).pddot;
    s.Z.col(i) = (f_plus - f_minus) / (2.0 * h);
  }
  s.G = s.Z * incremental_map(n, snap.cfg->plant.Ts);
  return s;
}

}  // namespace

Sensitivity sensitivity(const World& snap, const Vec& a_baseline,
                        const AttackerConfig& cfg) {
  return sensitivity_with_steps(snap, a_baseline, cfg.fd_step_q, cfg.fd_step_qd);
}

double sensitivity_richardson(const World& snap, const Vec& a_baseline,
                              const AttackerConfig& cfg) {
  const Sensitivity full =
      sensitivity_with_steps(snap, a_baseline, cfg.fd_step_q, cfg.fd_step_qd);
  const Sensitivity half = sensitivity_with_steps(
      snap, a_baseline, 0.5 * cfg.fd_step_q, 0.5 * cfg.fd_step_qd);
  double worst = 0.0;
  for (int i = 0; i < full.Z.cols(); ++i) {
    const double scale = half.Z.col(i).norm();
    if (scale < 1e-12) continue;
    worst = std::max(worst, (full.Z.col(i) - half.Z.col(i)).norm() / scale);
  }
  return worst;
}

Vec3 attacker_reference(const World& snap, const AttackerConfig& cfg) {
  const RolloutOutput one = rollout(snap, {snap.attack_baseline}, 1);
  const TaskReference ref = snap.cfg->attacker_task.eval(snap.k + 1);
  return cfg.Kp_A * (ref.p_ref - one.p) + cfg.Kd_A * (ref.pdot_ref - one.pdot);
}

AttackStep synthesize_step(World& world, const Vec& y_live) {
  const WorldConfig& C = *world.cfg;
  const AttackerConfig& cfg = C.attacker;
  const int n = C.plant.n;
  const Vec& a_bar = world.attack_baseline;

  const Sensitivity sens = sensitivity(world, a_bar, cfg);
  const Vec3 pddot_base = rollout(world, {a_bar}, 2).pddot;
  const Vec3 target_acc = attacker_reference(world, cfg);

  QcqpProblem prob;
  prob.H = sens.G.transpose() * sens.G + cfg.zeta * Mat::Identity(n, n);
  prob.g = -sens.G.transpose() * (target_acc - pddot_base);

  const Mat M = incremental_map(n, C.plant.Ts);
  const Vec c_k = y_live + a_bar - C.plant.C * world.est.x_hat;
  const Mat SinvM = C.gains.Sigma_chol.solve(M);
  prob.Qc = M.transpose() * SinvM;
  prob.Qc = 0.5 * (prob.Qc + prob.Qc.transpose());
  prob.q_lin = 2.0 * SinvM.transpose() * c_k;
  const double tau_eff = cfg.tau * (1.0 - cfg.stealth_margin);
  prob.c0 = c_k.dot(C.gains.Sigma_chol.solve(c_k)) - tau_eff;

  const QcqpSolution sol = qcqp_solve(prob);

  AttackStep step;
  step.delta = sol.delta;
  step.lambda = sol.lambda;
  step.constraint_active = sol.active;
  step.a = a_bar + M * sol.delta;
  step.z_model = qcqp_constraint_value(prob, sol.delta) + tau_eff;

  // New baseline: keep the accumulated position bias, zero the rate channels.
  world.attack_baseline = step.a;
  for (int j = 0; j < n; ++j) world.attack_baseline[2 * j + 1] = 0.0;
  return step;
}

}  // namespace fdia
