#pragma once

#include "fdia/types.hpp"

namespace fdia {

// Strictly convex quadratic program with one convex quadratic constraint:
//   min  0.5 x^T H x + g^T x
//   s.t. x^T Qc x + q_lin^T x + c0 <= 0.
struct QcqpProblem {
  Mat H;      // n x n, symmetric positive definite
  Vec g;      // n
  Mat Qc;     // n x n, symmetric positive semidefinite
  Vec q_lin;  // n
  double c0 = 0.0;
};

struct QcqpSolution {
  Vec delta;           // unique global minimizer
  double lambda = 0.0; // multiplier of the quadratic constraint
  bool active = false; // whether the constraint binds at the solution
};

/// Constraint value at x; feasible iff <= 0.
double qcqp_constraint_value(const QcqpProblem& prob, const Vec& x);

/// Objective value at x.
double qcqp_objective(const QcqpProblem& prob, const Vec& x);

// Dual bisection on lambda >= 0: x(lambda) = -(H + 2 lambda Qc)^{-1}
// (g + lambda q_lin) is the KKT stationary point; the constraint value along
// x(lambda) is non-increasing, so the active multiplier is a scalar root.
// Errors when the constraint is infeasible (its minimum over x exceeds 0) or
// the bracket search fails.
QcqpSolution qcqp_solve(const QcqpProblem& prob, double tol = 1e-10);

}  // namespace fdia
