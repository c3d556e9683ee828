#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fdia/attacker.hpp"
#include "fdia/world.hpp"

namespace fdia {

// The seven-scenario grid: A-runs execute the circle task with no attack,
// B-runs hold the still pose while the attacker steers toward its own circle.
//            nominal  attacker  chi2  VD   MR
//   A1       Circle   -         no    no   no
//   A2       Circle   -         no    yes  no
//   A3       Circle   -         no    yes  yes
//   B1       Still    Circle    no    no   no
//   B2       Still    Circle    yes   no   no
//   B3       Still    Circle    yes   yes  no
//   B4       Still    Circle    yes   yes  yes
struct ScenarioConfig {
  std::string id;
  TaskKind nominal_task = TaskKind::Circle;
  bool has_attacker = false;
  ScenarioFlags flags;
  int T = 5000;
  std::uint64_t seed = 1;
  int mc_runs = 1;
};

/// Returns the Table-style definition for one of A1..B4; errors on unknown ids.
ScenarioConfig scenario_by_id(const std::string& id);
std::vector<std::string> scenario_ids();

struct TraceRow {
  int k = 0;
  Vec q, qd, u, u_d;
  double z = 0.0, z_tilde = 0.0;
  double phi_val = 0.0;      // gainActiveDissipation_q
  double kin_energy = 0.0;   // kinNrgTot
  double cost_val = 0.0;     // costVal
  double hand_vel = 0.0;     // handVelocity_l2
  double w_manip = 0.0;
  Vec3 p = Vec3::Zero();
  Vec3 p_ref = Vec3::Zero();
  Vec3 p_att_ref = Vec3::Zero();  // NaN-filled when no attacker
  double abs_power = 0.0;         // sum_j |u_j qd_j|
  bool alarmed = false;
  Vec a_pos;                      // attack position channels
};

struct MetricsReport {
  double rms_nominal = 0.0;
  double mnd_nominal = 0.0;
  std::optional<double> rms_attacker;
  std::optional<double> mnd_attacker;
  double mean_qdot_norm = 0.0;
  double max_qdot_norm = 0.0;
  double mean_abs_power = 0.0;
  double max_abs_power = 0.0;
  double path_length = 0.0;
  double e_inj = 0.0;
  double e_diss = 0.0;
  int alarm_count = 0;
  double max_z = 0.0;
  double max_z_tilde = 0.0;
  // Diagnostics gathered during the run.
  double claim1_max_projected_power = 0.0;  // max_j u_d_j * qd~_j over the run
  double claim2_hold_fraction = 1.0;        // P(sum|u_d qd~| <= rho_y sum|Pnom|)
  double jstar_identity_max = 0.0;
  double usec_nullspace_max = 0.0;
  double max_z_model = 0.0;
  double mean_w_manip = 0.0;
  double sensitivity_richardson = 0.0;
  int runs_aggregated = 1;
  int failed_runs = 0;
};

struct RunResult {
  MetricsReport metrics;
  std::vector<TraceRow> trace;
};

// Runs one seeded scenario to completion. keep_trace controls whether rows
// are retained (metrics are always computed).
RunResult run_scenario(const std::shared_ptr<const WorldConfig>& wc,
                       const Vec& q0, int T, std::uint64_t seed,
                       bool keep_trace = true);

/// Metrics from a completed trace (diagnostic fields left at defaults).
MetricsReport compute_metrics(const std::vector<TraceRow>& trace, double Ts,
                              bool has_attacker);

struct MonteCarloResult {
  MetricsReport aggregate;
  std::vector<MetricsReport> per_run;
  std::vector<std::string> failures;
};

/// Independently seeded runs (seed, seed+1, ...); means over successes.
MonteCarloResult monte_carlo(const std::shared_ptr<const WorldConfig>& wc,
                             const Vec& q0, int T, std::uint64_t seed, int runs);

}  // namespace fdia
