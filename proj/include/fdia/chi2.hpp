#pragma once

namespace fdia {

// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x),
// evaluated by power series (x < a+1) or continued fraction (x >= a+1).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// CDF of the chi-squared distribution with `dof` degrees of freedom.
double chi2_cdf(double x, int dof);

/// Upper tail P(X > x); accurate for tiny tail probabilities.
double chi2_sf(double x, int dof);

// Quantile F^{-1}_{chi2(dof)}(prob) by bracketing bisection on the forward
// CDF. prob must lie in (0,1); accurate to ~1e-9 in CDF value.
double chi2_inv_cdf(double prob, int dof);

}  // namespace fdia
