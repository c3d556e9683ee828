#pragma once

#include <memory>
#include <optional>

#include "fdia/defense_mr.hpp"
#include "fdia/defense_vd.hpp"
#include "fdia/detector.hpp"
#include "fdia/estimator.hpp"
#include "fdia/kinematics.hpp"
#include "fdia/plant.hpp"
#include "fdia/projector.hpp"
#include "fdia/task_controller.hpp"

namespace fdia {

enum class TaskKind { Still, Circle };

// Analytic task reference generator. The circle sweeps the start point about
// the base z-axis by `sweep_angle` with a quintic time law (zero boundary
// velocity and acceleration); orientation is not controlled on the circle.
struct TaskPlan {
  TaskKind kind = TaskKind::Still;
  Vec3 p_start = Vec3::Zero();
  Mat3 R_start = Mat3::Identity();
  double sweep_angle = 0.0;   // rad, circle only
  int duration_steps = 0;     // circle ramp length
  double Ts = 0.0;

  TaskReference eval(int k) const;
};

struct ScenarioFlags {
  bool attack_on = false;
  bool chi2_on = false;
  bool vd_on = false;
  bool mr_on = false;
};

struct AttackerConfig {
  Mat3 Kp_A = 4.0 * Mat3::Identity();
  Mat3 Kd_A = 4.0 * Mat3::Identity();
  double zeta = 1e-2;        // increment regularizer
  double tau = 0.0;          // stealth threshold (copies the detector's)
  // Relative headroom kept below tau so the live statistic stays strictly
  // under the alarm threshold when the constraint is boundary-active (the
  // live z and the solver's constraint evaluate the same quadratic along
  // different floating-point routes).
  double stealth_margin = 1e-7;
  double fd_step_q = fd::kSensorPosStep;
  double fd_step_qd = fd::kSensorVelStep;
};

// Everything immutable during a run, shared by the live world and all
// attacker rollout clones.
struct WorldConfig {
  PlantModel plant;
  EstimatorGains gains;
  DetectorConfig detector;
  DampingConfig damping;
  ManipConfig manip;
  ControllerGains ctrl;
  KinematicChain chain;
  TaskPlan nominal_task;
  TaskPlan attacker_task;  // meaningful when flags.attack_on
  AttackerConfig attacker;
  ScenarioFlags flags;
  ResidualCovTable cov_table;
  int T = 0;                // scenario horizon in steps
  int resync_interval = 0;  // projector resync period; 0 = once at k=0 only
};

// Complete deterministic closed-loop state; value-copied into attacker
// rollouts (the config stays shared).
struct World {
  std::shared_ptr<const WorldConfig> cfg;
  PlantState plant;
  EstimatorState est;
  ProjectorState proj;
  Vec attack_baseline;  // 2n, velocity channels zero
  int k = 0;
};

// Outputs of one control-phase evaluation (tick steps: innovation, scores,
// defenses, command assembly) plus trace/diagnostic signals.
struct ControlEval {
  Vec r;
  double z = 0.0;
  Vec r_tilde;
  double z_tilde = 0.0;
  double phi_val = 0.0;
  Vec u_nom_sat;
  Vec u_d;
  Vec u_final;
  Vec u_sec;
  double w_manip = 0.0;
  double cost_val = 0.0;
  double manip_grad_norm = 0.0;
  double armijo_nu = 0.0;
  bool armijo_accepted = true;
  double jstar_identity_err = 0.0;
  double usec_nullspace_rel = 0.0;
  Vec qdot_tilde;
  Vec3 p = Vec3::Zero();      // true hand position at tick start
  Vec3 pdot = Vec3::Zero();   // true hand velocity
  Vec3 pddot = Vec3::Zero();  // realized hand acceleration under u_final
  Vec3 p_ref = Vec3::Zero();  // nominal reference at this step
};

/// Initial world at joint configuration q0, all states agreeing, zero rates.
World make_world(std::shared_ptr<const WorldConfig> cfg, const Vec& q0,
                 std::uint64_t stream_id = 0);

// Tick steps 3..8 given this step's clean measurement y and attack vector:
// innovation/score, projector residual/score, MR command and weighted
// pseudoinverse, task PD and redundancy resolution with hierarchical scaling,
// and virtual damping. `want_hand_accel` controls whether the true-state hand
// kinematics (p, pdot, pddot) are evaluated.
ControlEval control_phase(const World& w, const Vec& y, const Vec& attack,
                          bool want_hand_accel = true);

/// Tick steps 9..10: advances plant, estimator and projector with u_final.
void advance(World& w, const ControlEval& eval, const Vec& y, const Vec& attack,
             bool noisy, NoiseStream* rng);

/// Applies the periodic resync schedule (no-op for the default config).
void maybe_resync(World& w);

}  // namespace fdia
