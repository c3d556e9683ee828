#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fdia/estimator.hpp"

using namespace fdia;

namespace {

PlantModel default_model() {
  Vec u_max(7);
  u_max << 1, 1, 1, 1, 10, 10, 10;
  return make_plant_model(7, 0.01, 1e-6, 5e-5, 1e-2, u_max);
}

Mat dare_residual(const Mat& A, const Mat& C, const Mat& Q, const Mat& R,
                  const Mat& P) {
  const Mat S = C * P * C.transpose() + R;
  const Mat APc = A * P * C.transpose();
  return A * P * A.transpose() + Q - APc * S.ldlt().solve(APc.transpose()) - P;
}

}  // namespace

TEST_CASE("scalar DARE has the golden-ratio fixed point") {
  // A=C=Q=R=1: P = P + 1 - P^2/(P+1)  =>  P^2 = P + 1.
  Mat one = Mat::Ones(1, 1);
  const Mat P = solve_dare(one, one, one, one);
  CHECK(P(0, 0) == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-9));
}

TEST_CASE("stable dynamics with no process noise settle at zero covariance") {
  Mat A = 0.5 * Mat::Ones(1, 1);
  Mat C = Mat::Ones(1, 1);
  Mat Q = Mat::Zero(1, 1);
  Mat R = Mat::Ones(1, 1);
  const Mat P = solve_dare(A, C, Q, R);
  CHECK(P(0, 0) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("block-diagonal production solve matches the dense iteration") {
  const PlantModel m = default_model();
  const EstimatorGains block = estimator_gains(m);
  const Mat dense = solve_dare(m.A, m.C, m.Q, m.R);
  CHECK((block.P - dense).norm() <= 1e-9 * dense.norm());
}

TEST_CASE("gains satisfy their defining identities") {
  const PlantModel m = default_model();
  const EstimatorGains g = estimator_gains(m);
  CHECK(dare_residual(m.A, m.C, m.Q, m.R, g.P).norm() <= 1e-9 * g.P.norm());
  CHECK((g.Sigma - (m.C * g.P * m.C.transpose() + m.R)).norm() <=
        1e-12 * g.Sigma.norm());
  const Mat L_check = m.A * g.P * m.C.transpose() * g.Sigma.inverse();
  CHECK((g.L - L_check).norm() <= 1e-10 * L_check.norm());
  // P symmetric PSD.
  CHECK((g.P - g.P.transpose()).norm() <= 1e-12 * g.P.norm());
  CHECK(Eigen::LLT<Mat>(g.P + 1e-18 * Mat::Identity(14, 14)).info() ==
        Eigen::Success);
}

TEST_CASE("DARE solution is invariant under state permutation") {
  const PlantModel m = default_model();
  std::mt19937_64 rng(11);
  std::vector<int> perm(14);
  for (int i = 0; i < 14; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  Mat Pm = Mat::Zero(14, 14);
  for (int i = 0; i < 14; ++i) Pm(i, perm[i]) = 1.0;

  const Mat A2 = Pm * m.A * Pm.transpose();
  const Mat C2 = m.C * Pm.transpose();
  const Mat Q2 = Pm * m.Q * Pm.transpose();
  const Mat P_perm = solve_dare(A2, C2, Q2, m.R);
  const Mat P_orig = solve_dare(m.A, m.C, m.Q, m.R);
  CHECK((Pm.transpose() * P_perm * Pm - P_orig).norm() <= 1e-9 * P_orig.norm());
}

TEST_CASE("non-detectable system reports the spectral radius") {
  // Unobserved unstable mode: C = 0 on an A with eigenvalue 2.
  Mat A = 2.0 * Mat::Identity(1, 1);
  Mat C = Mat::Zero(1, 1);
  Mat Q = Mat::Identity(1, 1);
  Mat R = Mat::Identity(1, 1);
  CHECK_THROWS_WITH_AS(solve_dare(A, C, Q, R, 1e-12, 200),
                       doctest::Contains("spectral radius"), std::runtime_error);
}

TEST_CASE("kalman step trivial cases") {
  const PlantModel m = default_model();
  const EstimatorGains g = estimator_gains(m);

  EstimatorState est;
  est.x_hat = Vec::LinSpaced(14, -1.0, 1.0);
  est.last_innovation = Vec::Zero(14);

  // Zero innovation: pure prediction.
  const Vec y_pred = m.C * est.x_hat;
  const EstimatorState next = kalman_step(est, g, Vec::Zero(7), y_pred, m);
  CHECK(next.last_innovation.norm() == 0.0);
  CHECK((next.x_hat - m.A * est.x_hat).norm() == 0.0);

  // Unit innovation feeds through L.
  est.x_hat = Vec::Zero(14);
  Vec e1 = Vec::Zero(14);
  e1[0] = 1.0;
  const EstimatorState unit = kalman_step(est, g, Vec::Zero(7), e1, m);
  CHECK((unit.last_innovation - e1).norm() == 0.0);
  CHECK((unit.x_hat - g.L * e1).norm() == 0.0);
}

TEST_CASE("long-run innovations match Sigma and are white") {
  const PlantModel m = default_model();
  const EstimatorGains g = estimator_gains(m);
  NoiseStream rng(77);

  PlantState plant;
  plant.x = Vec::Zero(14);
  EstimatorState est;
  est.x_hat = Vec::Zero(14);
  est.last_innovation = Vec::Zero(14);

  const int warmup = 200;
  const int N = 10000;
  Mat cov = Mat::Zero(14, 14);
  Vec acf_num = Vec::Zero(14);
  Vec acf_den = Vec::Zero(14);
  Vec prev_r = Vec::Zero(14);
  const Vec u = Vec::Zero(7);
  for (int k = 0; k < warmup + N; ++k) {
    const Vec y = measure(plant, Vec::Zero(14), m, true, &rng);
    const EstimatorState next = kalman_step(est, g, u, y, m);
    if (k >= warmup) {
      const Vec& r = next.last_innovation;
      cov += r * r.transpose();
      if (k > warmup) acf_num += prev_r.cwiseProduct(r);
      acf_den += r.cwiseProduct(r);
      prev_r = r;
    }
    plant = plant_step(plant, u, m, true, &rng);
    est = next;
  }
  cov /= N;
  CHECK((cov - g.Sigma).norm() <= 0.10 * g.Sigma.norm());
  const Vec acf = acf_num.cwiseQuotient(acf_den);
  CHECK(acf.cwiseAbs().maxCoeff() < 0.05);
}
