#include "fdia/scenario.hpp"

#include <cmath>
#include <limits>

namespace fdia {

ScenarioConfig scenario_by_id(const std::string& id) {
  ScenarioConfig sc;
  sc.id = id;
  if (id == "A1") {
    sc.nominal_task = TaskKind::Circle;
  } else if (id == "A2") {
    sc.nominal_task = TaskKind::Circle;
    sc.flags.vd_on = true;
  } else if (id == "A3") {
    sc.nominal_task = TaskKind::Circle;
    sc.flags.vd_on = true;
    sc.flags.mr_on = true;
  } else if (id == "B1") {
    sc.nominal_task = TaskKind::Still;
    sc.has_attacker = true;
    sc.flags.attack_on = true;
  } else if (id == "B2") {
    sc.nominal_task = TaskKind::Still;
    sc.has_attacker = true;
    sc.flags.attack_on = true;
    sc.flags.chi2_on = true;
  } else if (id == "B3") {
    sc.nominal_task = TaskKind::Still;
    sc.has_attacker = true;
    sc.flags.attack_on = true;
    sc.flags.chi2_on = true;
    sc.flags.vd_on = true;
  } else if (id == "B4") {
    sc.nominal_task = TaskKind::Still;
    sc.has_attacker = true;
    sc.flags.attack_on = true;
    sc.flags.chi2_on = true;
    sc.flags.vd_on = true;
    sc.flags.mr_on = true;
  } else {
    throw std::runtime_error("unknown scenario id: " + id);
  }
  sc.mc_runs = sc.has_attacker ? 1 : 100;
  return sc;
}

std::vector<std::string> scenario_ids() {
  return {"A1", "A2", "A3", "B1", "B2", "B3", "B4"};
}

RunResult run_scenario(const std::shared_ptr<const WorldConfig>& wc,
                       const Vec& q0, int T, std::uint64_t seed,
                       bool keep_trace) {
  World w = make_world(wc, q0, seed);
  NoiseStream rng(seed);
  const int n = wc->plant.n;
  const Vec zero_attack = Vec::Zero(wc->plant.meas_dim());

  RunResult out;
  if (keep_trace) out.trace.reserve(T);
  MetricsReport& diag = out.metrics;
  diag.claim1_max_projected_power = -std::numeric_limits<double>::infinity();
  long claim2_hold = 0;
  long claim2_total = 0;
  double sum_w = 0.0;

  std::vector<TraceRow> rows;
  rows.reserve(T);

  for (int k = 0; k < T; ++k) {
    maybe_resync(w);
    Vec y;
    try {
      y = measure(w.plant, zero_attack, wc->plant, true, &rng);

      Vec attack = zero_attack;
      AttackStep astep;
      if (wc->flags.attack_on) {
        if (k == 0)
          diag.sensitivity_richardson =
              sensitivity_richardson(w, w.attack_baseline, wc->attacker);
        astep = synthesize_step(w, y);
        attack = astep.a;
        diag.max_z_model = std::max(diag.max_z_model, astep.z_model);
      }

      const ControlEval ev = control_phase(w, y, attack, true);

      // Per-step bookkeeping for the theorem checks and metrics.
      for (int j = 0; j < n; ++j)
        diag.claim1_max_projected_power = std::max(
            diag.claim1_max_projected_power, ev.u_d[j] * ev.qdot_tilde[j]);
      if (wc->flags.vd_on) {
        double lhs = 0.0, rhs = 0.0;
        for (int j = 0; j < n; ++j) {
          lhs += std::abs(ev.u_d[j] * ev.qdot_tilde[j]);
          rhs += std::abs(ev.u_nom_sat[j] * ev.qdot_tilde[j]);
        }
        claim2_total += 1;
        if (lhs <= wc->damping.rho_y * rhs + 1e-15) claim2_hold += 1;
      }
      diag.jstar_identity_max =
          std::max(diag.jstar_identity_max, ev.jstar_identity_err);
      diag.usec_nullspace_max =
          std::max(diag.usec_nullspace_max, ev.usec_nullspace_rel);
      sum_w += ev.w_manip;

      TraceRow row;
      row.k = k;
      const Vec qd_true = velocities(w.plant.x);
      row.q = positions(w.plant.x);
      row.qd = qd_true;
      row.u = ev.u_final;
      row.u_d = ev.u_d;
      row.z = ev.z;
      row.z_tilde = ev.z_tilde;
      row.phi_val = ev.phi_val;
      row.kin_energy = 0.5 * qd_true.squaredNorm();
      row.cost_val = ev.cost_val;
      row.w_manip = ev.w_manip;
      row.hand_vel = ev.pdot.norm();
      row.p = ev.p;
      row.p_ref = ev.p_ref;
      row.p_att_ref = wc->flags.attack_on
                          ? wc->attacker_task.eval(k).p_ref
                          : Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
      row.abs_power = ev.u_final.cwiseProduct(qd_true).cwiseAbs().sum();
      row.alarmed = wc->flags.chi2_on && alarm(ev.z, wc->detector);
      row.a_pos = positions(attack);
      rows.push_back(std::move(row));

      advance(w, ev, y, attack, true, &rng);
    } catch (const std::exception& e) {
      throw std::runtime_error("scenario aborted at step " + std::to_string(k) +
                               ": " + e.what());
    }
  }

  MetricsReport computed = compute_metrics(rows, wc->plant.Ts, wc->flags.attack_on);
  computed.claim1_max_projected_power = diag.claim1_max_projected_power;
  computed.claim2_hold_fraction =
      claim2_total > 0 ? static_cast<double>(claim2_hold) / claim2_total : 1.0;
  computed.jstar_identity_max = diag.jstar_identity_max;
  computed.usec_nullspace_max = diag.usec_nullspace_max;
  computed.max_z_model = diag.max_z_model;
  computed.mean_w_manip = T > 0 ? sum_w / T : 0.0;
  computed.sensitivity_richardson = diag.sensitivity_richardson;
  out.metrics = computed;
  if (keep_trace) out.trace = std::move(rows);
  return out;
}

MetricsReport compute_metrics(const std::vector<TraceRow>& trace, double Ts,
                              bool has_attacker) {
  MetricsReport m;
  const int T = static_cast<int>(trace.size());
  ensure(T > 0, "compute_metrics: empty trace");

  double sq_nom = 0.0, sq_att = 0.0;
  double sum_qd = 0.0, sum_pw = 0.0;
  for (int k = 0; k < T; ++k) {
    const TraceRow& r = trace[k];
    const double e_nom = (r.p_ref - r.p).norm();
    sq_nom += e_nom * e_nom;
    m.mnd_nominal = std::max(m.mnd_nominal, e_nom);
    if (has_attacker) {
      const double e_att = (r.p_att_ref - r.p).norm();
      sq_att += e_att * e_att;
      m.mnd_attacker = std::max(m.mnd_attacker.value_or(0.0), e_att);
    }
    const double qd_norm = r.qd.norm();
    sum_qd += qd_norm;
    m.max_qdot_norm = std::max(m.max_qdot_norm, qd_norm);
    sum_pw += r.abs_power;
    m.max_abs_power = std::max(m.max_abs_power, r.abs_power);
    const double defense_power = r.qd.dot(r.u_d);
    m.e_inj += std::max(0.0, defense_power) * Ts;
    m.e_diss += std::abs(std::min(0.0, defense_power)) * Ts;
    if (k + 1 < T) m.path_length += (trace[k + 1].p - r.p).norm();
    if (r.alarmed) m.alarm_count += 1;
    m.max_z = std::max(m.max_z, r.z);
    m.max_z_tilde = std::max(m.max_z_tilde, r.z_tilde);
  }
  m.rms_nominal = std::sqrt(sq_nom / T);
  if (has_attacker) m.rms_attacker = std::sqrt(sq_att / T);
  m.mean_qdot_norm = sum_qd / T;
  m.mean_abs_power = sum_pw / T;
  return m;
}

namespace {

void accumulate(MetricsReport& acc, const MetricsReport& r, int count) {
  const double w = 1.0 / count;
  auto mean = [&](double& a, double v) { a += (v - a) * w; };
  mean(acc.rms_nominal, r.rms_nominal);
  mean(acc.mnd_nominal, r.mnd_nominal);
  if (r.rms_attacker) {
    double cur = acc.rms_attacker.value_or(0.0);
    mean(cur, *r.rms_attacker);
    acc.rms_attacker = cur;
    double cur2 = acc.mnd_attacker.value_or(0.0);
    mean(cur2, *r.mnd_attacker);
    acc.mnd_attacker = cur2;
  }
  mean(acc.mean_qdot_norm, r.mean_qdot_norm);
  mean(acc.max_qdot_norm, r.max_qdot_norm);
  mean(acc.mean_abs_power, r.mean_abs_power);
  mean(acc.max_abs_power, r.max_abs_power);
  mean(acc.path_length, r.path_length);
  mean(acc.e_inj, r.e_inj);
  mean(acc.e_diss, r.e_diss);
  acc.alarm_count += r.alarm_count;
  acc.max_z = std::max(acc.max_z, r.max_z);
  acc.max_z_tilde = std::max(acc.max_z_tilde, r.max_z_tilde);
  acc.claim1_max_projected_power =
      std::max(acc.claim1_max_projected_power, r.claim1_max_projected_power);
  mean(acc.claim2_hold_fraction, r.claim2_hold_fraction);
  acc.jstar_identity_max = std::max(acc.jstar_identity_max, r.jstar_identity_max);
  acc.usec_nullspace_max = std::max(acc.usec_nullspace_max, r.usec_nullspace_max);
  acc.max_z_model = std::max(acc.max_z_model, r.max_z_model);
  mean(acc.mean_w_manip, r.mean_w_manip);
  acc.sensitivity_richardson =
      std::max(acc.sensitivity_richardson, r.sensitivity_richardson);
}

}  // namespace

MonteCarloResult monte_carlo(const std::shared_ptr<const WorldConfig>& wc,
                             const Vec& q0, int T, std::uint64_t seed, int runs) {
  ensure(runs >= 1, "monte_carlo: need at least one run");
  MonteCarloResult out;
  int successes = 0;
  out.aggregate.claim1_max_projected_power = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < runs; ++i) {
    try {
      RunResult r = run_scenario(wc, q0, T, seed + i, false);
      out.per_run.push_back(r.metrics);
      successes += 1;
      accumulate(out.aggregate, r.metrics, successes);
    } catch (const std::exception& e) {
      out.failures.push_back("run " + std::to_string(i) + " (seed " +
                             std::to_string(seed + i) + "): " + e.what());
    }
  }
  ensure(successes > 0, "monte_carlo: all runs failed: " +
                            (out.failures.empty() ? "" : out.failures.front()));
  out.aggregate.runs_aggregated = successes;
  out.aggregate.failed_runs = static_cast<int>(out.failures.size());
  return out;
}

}  // namespace fdia
