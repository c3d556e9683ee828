#pragma once

#include <vector>

#include "fdia/qcqp.hpp"
#include "fdia/world.hpp"

namespace fdia {

// Optimal stealthy FDIA synthesis. The attacker clones the live world
// (including any enabled defenses), predicts the closed loop deterministically
// one and two steps ahead, differentiates the predicted hand acceleration
// against the sensor injection by central differences, and solves a convex
// QCQP whose single quadratic constraint enforces z_k <= tau on the modeled
// innovation.

struct RolloutOutput {
  World end;                  // world after `steps` full deterministic ticks
  Vec3 p = Vec3::Zero();      // true hand position at the end state
  Vec3 pdot = Vec3::Zero();   // true hand velocity at the end state
  Vec3 pddot = Vec3::Zero();  // realized hand acceleration of the final
                              // control evaluation at the end state
};

// Advances `steps` noise-free ticks under attack_seq (zero-padded when
// shorter than steps+1) and evaluates the control phase once more at the end
// state to expose the realized hand acceleration.
RolloutOutput rollout(const World& snap, const std::vector<Vec>& attack_seq,
                      int steps);

/// Maps a joint-space increment to the sensor space: positions get Delta,
/// rates get Delta/Ts (interleaved layout).
Mat incremental_map(int n, double Ts);

struct Sensitivity {
  Mat Z;  // 3 x 2n, d pddot_{k+2} / d a_k at the baseline
  Mat G;  // 3 x n,  Z * M
};

/// Central-difference sensitivity of the 2-step-ahead hand acceleration.
Sensitivity sensitivity(const World& snap, const Vec& a_baseline,
                        const AttackerConfig& cfg);

/// Max relative column deviation between Z at the configured steps and at
/// half steps; small values certify the linearization.
double sensitivity_richardson(const World& snap, const Vec& a_baseline,
                              const AttackerConfig& cfg);

// One-step-ahead PD target: counteracts the drift predicted for k+1 under the
// baseline injection.
Vec3 attacker_reference(const World& snap, const AttackerConfig& cfg);

struct AttackStep {
  Vec a;             // p-vector to inject this step
  Vec delta;         // joint-space increment
  double z_model;    // modeled innovation score at a (<= tau up to solver tol)
  double lambda;     // QCQP multiplier
  bool constraint_active = false;
};

// Assembles and solves the stealth QCQP around the current baseline, then
// accumulates: (a_k)_q = (a_{k-1})_q + Delta, (a_k)_qd = Delta / Ts. Updates
// world.attack_baseline. y_live is the realized (noisy) measurement the
// omniscient attacker observes this step.
AttackStep synthesize_step(World& world, const Vec& y_live);

}  // namespace fdia
