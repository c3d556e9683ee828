#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fdia/plant.hpp"

using namespace fdia;

namespace {

PlantModel default_model() {
  Vec u_max(7);
  u_max << 1, 1, 1, 1, 10, 10, 10;
  return make_plant_model(7, 0.01, 1e-6, 5e-5, 1e-2, u_max);
}

}  // namespace

TEST_CASE("saturate clamps element-wise") {
  const PlantModel m = default_model();
  CHECK(saturate(Vec::Zero(7), m.u_min, m.u_max).isZero());
  CHECK((saturate(2.0 * m.u_max, m.u_min, m.u_max) - m.u_max).norm() == 0.0);
  Vec interior = 0.5 * Vec::Ones(7);
  CHECK((saturate(interior, m.u_min, m.u_max) - interior).norm() == 0.0);
  // Idempotent.
  Vec wild(7);
  wild << -5, 0.3, 99, -0.2, 11, -10.5, 0;
  const Vec once = saturate(wild, m.u_min, m.u_max);
  CHECK((saturate(once, m.u_min, m.u_max) - once).norm() == 0.0);
  Vec bad = Vec::Zero(7);
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(saturate(bad, m.u_min, m.u_max));
}

TEST_CASE("noise-free step is the exact double integrator") {
  const PlantModel m = default_model();
  PlantState s;
  s.x = Vec::Zero(14);
  CHECK(plant_step(s, Vec::Zero(7), m, false).x.isZero());

  // Ballistic: unit rate coasts, position advances by Ts.
  s.x = interleave(Vec::Zero(7), Vec::Ones(7));
  const PlantState next = plant_step(s, Vec::Zero(7), m, false);
  CHECK((positions(next.x) - Vec::Constant(7, m.Ts)).norm() == 0.0);
  CHECK((velocities(next.x) - Vec::Ones(7)).norm() == 0.0);
}

TEST_CASE("noise-free step is bit-for-bit reproducible") {
  const PlantModel m = default_model();
  PlantState s;
  s.x = Vec::LinSpaced(14, -0.3, 0.9);
  Vec u = Vec::LinSpaced(7, -0.5, 0.7);
  const Vec a = plant_step(s, u, m, false).x;
  const Vec b = plant_step(s, u, m, false).x;
  for (int i = 0; i < 14; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("process noise increments reproduce Q") {
  const PlantModel m = default_model();
  NoiseStream rng(42);
  PlantState s;
  s.x = Vec::Zero(14);
  const int N = 10000;
  Mat cov = Mat::Zero(14, 14);
  for (int k = 0; k < N; ++k) {
    const PlantState next = plant_step(s, Vec::Zero(7), m, true, &rng);
    const Vec w = next.x - m.A * s.x;
    cov += w * w.transpose();
    s = next;
  }
  cov /= N;
  CHECK((cov - m.Q).norm() <= 0.10 * m.Q.norm());
}

TEST_CASE("measurement model adds injection and noise") {
  const PlantModel m = default_model();
  PlantState s;
  s.x = Vec::LinSpaced(14, 0.0, 1.3);
  CHECK((measure(s, Vec::Zero(14), m, false) - m.C * s.x).norm() == 0.0);

  s.x = Vec::Zero(14);
  Vec e1 = Vec::Zero(14);
  e1[0] = 1.0;
  CHECK((measure(s, e1, m, false) - e1).norm() == 0.0);

  NoiseStream rng(43);
  const int N = 10000;
  Mat cov = Mat::Zero(14, 14);
  for (int k = 0; k < N; ++k) {
    const Vec v = measure(s, Vec::Zero(14), m, true, &rng);
    cov += v * v.transpose();
  }
  cov /= N;
  CHECK((cov - m.R).norm() <= 0.10 * m.R.norm());
}

TEST_CASE("constructor reproduces the CWNA block structure") {
  const double Ts = 0.01, qc = 1e-6;
  const PlantModel m = default_model();
  Mat Qbase(2, 2);
  Qbase << Ts * Ts * Ts / 3.0, Ts * Ts / 2.0, Ts * Ts / 2.0, Ts;
  for (int j = 0; j < 7; ++j) {
    CHECK((m.Q.block(2 * j, 2 * j, 2, 2) - qc * Qbase).norm() == 0.0);
    Mat Aj(2, 2);
    Aj << 1, Ts, 0, 1;
    CHECK((m.A.block(2 * j, 2 * j, 2, 2) - Aj).norm() == 0.0);
    Vec Bj(2);
    Bj << Ts * Ts / 2.0, Ts;
    CHECK((m.B.block(2 * j, j, 2, 1) - Bj).norm() == 0.0);
  }
  // Off-block entries vanish.
  Mat Qcopy = m.Q;
  for (int j = 0; j < 7; ++j) Qcopy.block(2 * j, 2 * j, 2, 2).setZero();
  CHECK(Qcopy.norm() == 0.0);
}

TEST_CASE("interleave helpers round-trip") {
  NoiseStream rng(3);
  const Vec q = rng.gaussian_vector(7);
  const Vec qd = rng.gaussian_vector(7);
  const Vec x = interleave(q, qd);
  CHECK((positions(x) - q).norm() == 0.0);
  CHECK((velocities(x) - qd).norm() == 0.0);
}
