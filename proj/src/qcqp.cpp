#include "fdia/qcqp.hpp"

#include <Eigen/Cholesky>
#include <sstream>

namespace fdia {

double qcqp_constraint_value(const QcqpProblem& prob, const Vec& x) {
  return x.dot(prob.Qc * x) + prob.q_lin.dot(x) + prob.c0;
}

double qcqp_objective(const QcqpProblem& prob, const Vec& x) {
  return 0.5 * x.dot(prob.H * x) + prob.g.dot(x);
}

namespace {

Vec stationary_point(const QcqpProblem& prob, double lambda) {
  const Mat K = prob.H + 2.0 * lambda * prob.Qc;
  Eigen::LLT<Mat> llt(K);
  ensure(llt.info() == Eigen::Success,
         "qcqp: KKT system not positive definite (H must be SPD, Qc PSD)");
  return llt.solve(-(prob.g + lambda * prob.q_lin));
}

}  // namespace

QcqpSolution qcqp_solve(const QcqpProblem& prob, double tol) {
  ensure(prob.H.rows() == prob.H.cols() && prob.H.rows() == prob.g.size(),
         "qcqp: H/g dimension mismatch");
  ensure(prob.Qc.rows() == prob.Qc.cols() && prob.Qc.rows() == prob.g.size(),
         "qcqp: Qc dimension mismatch");

  QcqpSolution sol;
  sol.delta = stationary_point(prob, 0.0);
  if (qcqp_constraint_value(prob, sol.delta) <= tol) {
    sol.lambda = 0.0;
    sol.active = false;
    return sol;
  }

  // Infeasibility check: minimize the constraint quadratic itself. With a
  // singular Qc the bracket search below settles feasibility instead.
  {
    Eigen::LLT<Mat> llt(prob.Qc);
    if (llt.info() == Eigen::Success) {
      const Vec x_c = llt.solve(-0.5 * prob.q_lin);
      if (qcqp_constraint_value(prob, x_c) > 0.0) {
        std::ostringstream msg;
        msg << "qcqp: infeasible problem (constraint minimum "
            << qcqp_constraint_value(prob, x_c) << " > 0)";
        throw std::runtime_error(msg.str());
      }
    }
  }

  // Bracket the multiplier by doubling until the iterate turns feasible.
  double lam_lo = 0.0;
  double lam_hi = 1.0;
  bool bracketed = false;
  for (int i = 0; i < 200; ++i) {
    if (qcqp_constraint_value(prob, stationary_point(prob, lam_hi)) <= 0.0) {
      bracketed = true;
      break;
    }
    lam_lo = lam_hi;
    lam_hi *= 2.0;
  }
  if (!bracketed) {
    std::ostringstream msg;
    msg << "qcqp: bracket search failed; constraint value at lambda=" << lam_hi
        << " is "
        << qcqp_constraint_value(prob, stationary_point(prob, lam_hi));
    throw std::runtime_error(msg.str());
  }

  // Bisect on the (monotone) constraint value; keep the feasible endpoint.
  double lam = lam_hi;
  Vec x = stationary_point(prob, lam);
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lam_lo + lam_hi);
    const Vec x_mid = stationary_point(prob, mid);
    const double v = qcqp_constraint_value(prob, x_mid);
    if (v <= 0.0) {
      lam_hi = mid;
      lam = mid;
      x = x_mid;
      if (-v <= tol) break;
    } else {
      lam_lo = mid;
    }
    if (lam_hi - lam_lo <= 1e-16 * (1.0 + lam_hi)) break;
  }

  sol.delta = x;
  sol.lambda = lam;
  sol.active = true;
  return sol;
}

}  // namespace fdia
