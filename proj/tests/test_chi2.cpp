#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fdia/chi2.hpp"

using namespace fdia;

TEST_CASE("two degrees of freedom has the exponential closed form") {
  // F_{chi2(2)}(x) = 1 - exp(-x/2), so the 0.95 quantile is -2 ln(0.05).
  CHECK(chi2_inv_cdf(0.95, 2) == doctest::Approx(-2.0 * std::log(0.05)).epsilon(1e-9));
  CHECK(chi2_cdf(3.0, 2) == doctest::Approx(1.0 - std::exp(-1.5)).epsilon(1e-12));
}

TEST_CASE("14-dof quantiles match published values") {
  CHECK(chi2_inv_cdf(0.99, 14) == doctest::Approx(29.1412).epsilon(1e-4));
  CHECK(chi2_inv_cdf(0.95, 14) == doctest::Approx(23.6848).epsilon(1e-4));
  CHECK(chi2_inv_cdf(0.50, 14) == doctest::Approx(13.3393).epsilon(1e-4));
}

TEST_CASE("quantile is monotone in probability") {
  double prev = 0.0;
  for (double p = 0.05; p < 1.0; p += 0.05) {
    const double x = chi2_inv_cdf(p, 14);
    CHECK(x > prev);
    prev = x;
  }
}

TEST_CASE("forward and inverse round-trip") {
  for (const double p : {0.01, 0.1, 0.5, 0.9, 0.99, 0.9999}) {
    const double x = chi2_inv_cdf(p, 14);
    CHECK(chi2_cdf(x, 14) == doctest::Approx(p).epsilon(1e-9));
  }
  // Calibration direction: alpha -> tau -> alpha, relative 1e-9.
  for (const double alpha : {0.01, 1e-4, 1e-6}) {
    const double tau = chi2_inv_cdf(1.0 - alpha, 14);
    CHECK(chi2_sf(tau, 14) == doctest::Approx(alpha).epsilon(1e-9));
  }
}

TEST_CASE("survival function stays accurate in the far tail") {
  // tau = 71.5735 on 14 dof sits at a ~1e-9 upper tail; the complement path
  // must not lose it to cancellation.
  const double sf = chi2_sf(71.5735, 14);
  CHECK(sf > 0.0);
  CHECK(sf < 2e-9);
  CHECK(chi2_inv_cdf(1.0 - sf, 14) == doctest::Approx(71.5735).epsilon(1e-6));
}

TEST_CASE("domain errors") {
  CHECK_THROWS(chi2_inv_cdf(0.0, 14));
  CHECK_THROWS(chi2_inv_cdf(1.0, 14));
  CHECK_THROWS(chi2_inv_cdf(-0.5, 14));
  CHECK_THROWS(chi2_inv_cdf(0.5, 0));
  CHECK_THROWS(gamma_p(-1.0, 1.0));
}
