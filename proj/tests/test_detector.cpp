#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fdia/chi2.hpp"
#include "fdia/detector.hpp"
#include "fdia/rng.hpp"
#include "oracles.hpp"

using namespace fdia;

TEST_CASE("mahalanobis basics and dense-inverse oracle") {
  CHECK(mahalanobis(Vec::Zero(5), Mat::Identity(5, 5)) == 0.0);

  Vec e1 = Vec::Zero(5);
  e1[0] = 1.0;
  CHECK(mahalanobis(e1, Mat::Identity(5, 5)) == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat S = test::random_spd(7, rng, 0.3, 3.0);
    const Vec r = test::random_vec(7, rng);
    const double direct = r.dot(S.inverse() * r);
    CHECK(mahalanobis(r, S) == doctest::Approx(direct).epsilon(1e-10));
  }

  CHECK_THROWS(mahalanobis(Vec::Zero(3), Mat::Zero(3, 3)));
}

TEST_CASE("alarm uses a strict threshold") {
  const DetectorConfig cfg = detector_from_alpha(0.01, 14);
  CHECK_FALSE(alarm(0.0, cfg));
  CHECK_FALSE(alarm(cfg.tau, cfg));
  CHECK(alarm(cfg.tau + 1e-12, cfg));
}

TEST_CASE("calibration round-trips between alpha and tau") {
  const DetectorConfig from_alpha = detector_from_alpha(0.01, 14);
  CHECK(from_alpha.tau == doctest::Approx(chi2_inv_cdf(0.99, 14)).epsilon(1e-12));
  const DetectorConfig from_tau = detector_from_tau(from_alpha.tau, 14);
  CHECK(from_tau.alpha_F == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("H0 alarm frequency and z statistics") {
  // Draw innovations directly from N(0, Sigma) with a random SPD Sigma.
  std::mt19937_64 seed_rng(9);
  const Mat Sigma = test::random_spd(14, seed_rng, 0.5, 2.0);
  const Eigen::LLT<Mat> chol(Sigma);
  const Mat Lfac = chol.matrixL();
  const DetectorConfig cfg = detector_from_alpha(0.01, 14);

  NoiseStream noise(123);
  const int N = 100000;
  long alarms = 0;
  double mean = 0.0, m2 = 0.0;
  for (int k = 0; k < N; ++k) {
    const Vec r = Lfac * noise.gaussian_vector(14);
    const double z = mahalanobis(r, chol);
    if (alarm(z, cfg)) ++alarms;
    const double delta = z - mean;
    mean += delta / (k + 1);
    m2 += delta * (z - mean);
  }
  const double rate = static_cast<double>(alarms) / N;
  CHECK(rate >= 0.007);
  CHECK(rate <= 0.013);
  CHECK(mean == doctest::Approx(14.0).epsilon(0.5 / 14.0));
  CHECK(m2 / (N - 1) == doctest::Approx(28.0).epsilon(3.0 / 28.0));
}
