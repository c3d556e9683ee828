#pragma once

#include <cstdint>

#include "fdia/rng.hpp"
#include "fdia/types.hpp"

namespace fdia {

// Feedback-linearized manipulator: n decoupled, saturated, noisy double
// integrators. State is interleaved per joint as (q_j, qdot_j) pairs, so A, B
// and the noise covariances are block-diagonal with identical 2x2 joint
// blocks. Both positions and rates are sensed (C = I, p = 2n).
struct PlantModel {
  int n = 0;            // joint count
  double Ts = 0.0;      // sample time [s]
  Mat A;                // 2n x 2n state transition
  Mat B;                // 2n x n input matrix
  Mat C;                // p x 2n output matrix (identity)
  Mat Q;                // 2n x 2n process noise covariance
  Mat R;                // p x p measurement noise covariance
  Mat Q_chol;           // lower Cholesky factor of Q (noise sampling)
  Mat R_chol;           // lower Cholesky factor of R
  Vec u_min;            // n, acceleration lower limits [rad/s^2]
  Vec u_max;            // n, acceleration upper limits [rad/s^2]

  int state_dim() const { return 2 * n; }
  int meas_dim() const { return 2 * n; }
};

struct PlantState {
  Vec x;                       // 2n, interleaved (q, qdot) per joint
  std::uint64_t rng_stream = 0;  // noise stream identifier (bookkeeping only)
};

// Builds the exact per-joint discretization: A_j = [[1,Ts],[0,1]],
// B_j = [Ts^2/2, Ts]^T, Q_j = q_c * [[Ts^3/3, Ts^2/2],[Ts^2/2, Ts]] (CWNA),
// R_j = diag(sigma_q^2, sigma_qd^2).
PlantModel make_plant_model(int n, double Ts, double q_c, double sigma_q,
                            double sigma_qd, const Vec& u_max_abs);

/// Element-wise clamp of u into [u_min, u_max]. Errors on non-finite input.
Vec saturate(const Vec& u, const Vec& u_min, const Vec& u_max);

// x' = A x + B Sat{u} + w. Process noise w ~ N(0,Q) is drawn from `rng` when
// noisy; with noisy=false the step is a pure function (used by attacker
// rollouts).
PlantState plant_step(const PlantState& state, const Vec& u,
                      const PlantModel& model, bool noisy,
                      NoiseStream* rng = nullptr);

/// y~ = C x + v + attack, v ~ N(0,R) when noisy.
Vec measure(const PlantState& state, const Vec& attack, const PlantModel& model,
            bool noisy, NoiseStream* rng = nullptr);

// Interleaved-layout helpers.
Vec positions(const Vec& x);
Vec velocities(const Vec& x);
Vec interleave(const Vec& q, const Vec& qdot);

}  // namespace fdia
