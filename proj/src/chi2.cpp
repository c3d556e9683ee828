#include "fdia/chi2.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdia {

namespace {

// Power series for P(a,x), valid and fast for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a,x), valid for x >= a+1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: need a>0, x>=0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: need a>0, x>=0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_cdf(double x, int dof) {
  if (dof < 1) throw std::invalid_argument("chi2_cdf: dof must be >= 1");
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_sf(double x, int dof) {
  if (dof < 1) throw std::invalid_argument("chi2_sf: dof must be >= 1");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

double chi2_inv_cdf(double prob, int dof) {
  if (!(prob > 0.0 && prob < 1.0))
    throw std::invalid_argument("chi2_inv_cdf: prob must lie in (0,1)");
  if (dof < 1) throw std::invalid_argument("chi2_inv_cdf: dof must be >= 1");

  // Bracket the quantile, expanding the upper end as needed.
  double lo = 0.0;
  double hi = dof + 10.0 * std::sqrt(2.0 * dof) + 10.0;
  while (chi2_cdf(hi, dof) < prob) {
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("chi2_inv_cdf: bracket expansion failed");
  }
  // Bisection. For upper-tail probabilities compare survival functions so the
  // stopping test stays meaningful when 1-prob is tiny.
  const bool upper = prob > 0.5;
  const double target_sf = 1.0 - prob;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double err = upper ? target_sf - chi2_sf(mid, dof) : chi2_cdf(mid, dof) - prob;
    if (err < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace fdia
