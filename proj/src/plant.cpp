#include "fdia/plant.hpp"

#include <Eigen/Cholesky>

namespace fdia {

PlantModel make_plant_model(int n, double Ts, double q_c, double sigma_q,
                            double sigma_qd, const Vec& u_max_abs) {
  ensure(n >= 1, "plant: joint count must be >= 1");
  ensure(Ts > 0.0, "plant: sample time must be positive");
  ensure(q_c > 0.0, "plant: process noise intensity must be positive");
  ensure(sigma_q > 0.0 && sigma_qd > 0.0, "plant: sensor stddevs must be positive");
  ensure(u_max_abs.size() == n, "plant: u_max size mismatch");
  ensure((u_max_abs.array() > 0.0).all(), "plant: acceleration limits must be positive");

  PlantModel m;
  m.n = n;
  m.Ts = Ts;
  const int d = 2 * n;
  m.A = Mat::Zero(d, d);
  m.B = Mat::Zero(d, n);
  m.C = Mat::Identity(d, d);
  m.Q = Mat::Zero(d, d);
  m.R = Mat::Zero(d, d);
  for (int j = 0; j < n; ++j) {
    const int r = 2 * j;
    m.A(r, r) = 1.0;
    m.A(r, r + 1) = Ts;
    m.A(r + 1, r + 1) = 1.0;
    m.B(r, j) = 0.5 * Ts * Ts;
    m.B(r + 1, j) = Ts;
    m.Q(r, r) = q_c * Ts * Ts * Ts / 3.0;
    m.Q(r, r + 1) = q_c * Ts * Ts / 2.0;
    m.Q(r + 1, r) = q_c * Ts * Ts / 2.0;
    m.Q(r + 1, r + 1) = q_c * Ts;
    m.R(r, r) = sigma_q * sigma_q;
    m.R(r + 1, r + 1) = sigma_qd * sigma_qd;
  }
  m.u_max = u_max_abs;
  m.u_min = -u_max_abs;
  Eigen::LLT<Mat> lltQ(m.Q);
  ensure(lltQ.info() == Eigen::Success, "plant: Q is not positive definite");
  m.Q_chol = lltQ.matrixL();
  Eigen::LLT<Mat> lltR(m.R);
  ensure(lltR.info() == Eigen::Success, "plant: R is not positive definite");
  m.R_chol = lltR.matrixL();
  return m;
}

namespace {

Mat noise_factor(const Mat& cached, const Mat& cov, const char* what) {
  if (cached.rows() == cov.rows()) return cached;
  const Eigen::LLT<Mat> llt(cov);
  ensure(llt.info() == Eigen::Success,
         std::string(what) + ": covariance is not positive definite");
  return llt.matrixL();
}

}  // namespace

Vec saturate(const Vec& u, const Vec& u_min, const Vec& u_max) {
  ensure(all_finite(u), "saturate: non-finite input");
  ensure(u.size() == u_min.size() && u.size() == u_max.size(),
         "saturate: size mismatch");
  ensure((u_min.array() < u_max.array()).all(), "saturate: invalid limits");
  return u.cwiseMax(u_min).cwiseMin(u_max);
}

PlantState plant_step(const PlantState& state, const Vec& u,
                      const PlantModel& model, bool noisy, NoiseStream* rng) {
  ensure(all_finite(u), "plant_step: non-finite input");
  PlantState next;
  next.rng_stream = state.rng_stream;
  next.x = model.A * state.x + model.B * saturate(u, model.u_min, model.u_max);
  if (noisy) {
    ensure(rng != nullptr, "plant_step: noisy step requires a noise stream");
    next.x += noise_factor(model.Q_chol, model.Q, "plant_step") *
              rng->gaussian_vector(model.state_dim());
  }
  ensure(all_finite(next.x), "plant_step: state diverged to non-finite values");
  return next;
}

Vec measure(const PlantState& state, const Vec& attack, const PlantModel& model,
            bool noisy, NoiseStream* rng) {
  ensure(all_finite(attack), "measure: non-finite attack vector");
  Vec y = model.C * state.x + attack;
  if (noisy) {
    ensure(rng != nullptr, "measure: noisy measurement requires a noise stream");
    y += noise_factor(model.R_chol, model.R, "measure") *
         rng->gaussian_vector(model.meas_dim());
  }
  return y;
}

Vec positions(const Vec& x) {
  const int n = static_cast<int>(x.size()) / 2;
  Vec q(n);
  for (int j = 0; j < n; ++j) q[j] = x[2 * j];
  return q;
}

Vec velocities(const Vec& x) {
  const int n = static_cast<int>(x.size()) / 2;
  Vec qd(n);
  for (int j = 0; j < n; ++j) qd[j] = x[2 * j + 1];
  return qd;
}

Vec interleave(const Vec& q, const Vec& qdot) {
  ensure(q.size() == qdot.size(), "interleave: size mismatch");
  Vec x(2 * q.size());
  for (int j = 0; j < q.size(); ++j) {
    x[2 * j] = q[j];
    x[2 * j + 1] = qdot[j];
  }
  return x;
}

}  // namespace fdia
