#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Cholesky>
#include <random>

#include "fdia/qcqp.hpp"
#include "oracles.hpp"

using namespace fdia;

namespace {

QcqpProblem random_problem(std::mt19937_64& rng, double c0) {
  QcqpProblem p;
  p.H = test::random_spd(7, rng, 0.2, 3.0);
  p.g = test::random_vec(7, rng);
  p.Qc = test::random_spd(7, rng, 0.1, 2.0);
  p.q_lin = test::random_vec(7, rng, 0.3);
  p.c0 = c0;
  return p;
}

void check_kkt(const QcqpProblem& p, const QcqpSolution& s, double tol) {
  const Vec stationarity =
      (p.H + 2.0 * s.lambda * p.Qc) * s.delta + p.g + s.lambda * p.q_lin;
  CHECK(stationarity.norm() <= tol * (1.0 + p.g.norm()));
  CHECK(s.lambda >= 0.0);
  const double cval = qcqp_constraint_value(p, s.delta);
  CHECK(cval <= 1e-8);
  CHECK(std::abs(s.lambda * cval) <= 1e-8 * (1.0 + std::abs(s.lambda)));
}

}  // namespace

TEST_CASE("inactive constraint returns the unconstrained minimizer exactly") {
  std::mt19937_64 rng(21);
  const QcqpProblem p = random_problem(rng, -1e6);  // huge feasible ball
  const QcqpSolution s = qcqp_solve(p);
  CHECK_FALSE(s.active);
  CHECK(s.lambda == 0.0);
  const Vec direct = Eigen::LLT<Mat>(p.H).solve(-p.g);
  for (int i = 0; i < 7; ++i) CHECK(s.delta[i] == direct[i]);
}

TEST_CASE("one-dimensional active case solves the hand KKT system") {
  QcqpProblem p;
  p.H = Mat::Ones(1, 1);
  p.g = -2.0 * Vec::Ones(1);
  p.Qc = Mat::Ones(1, 1);
  p.q_lin = Vec::Zero(1);
  p.c0 = -1.0;  // constraint: delta^2 <= 1
  const QcqpSolution s = qcqp_solve(p);
  CHECK(s.active);
  CHECK(s.delta[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.lambda == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("random instances beat rejection-sampled feasible points") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const QcqpProblem p = random_problem(rng, -0.5);
    const QcqpSolution s = qcqp_solve(p);
    check_kkt(p, s, 1e-9);
    const double f_star = qcqp_objective(p, s.delta);
    for (int i = 0; i < 10000; ++i) {
      const Vec x = test::project_onto_ellipsoid(test::random_vec(7, rng, 2.0),
                                                 p.Qc, p.q_lin, p.c0);
      CHECK(f_star <= qcqp_objective(p, x) + 1e-9);
    }
  }
}

TEST_CASE("objective matches the projected-gradient oracle") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const QcqpProblem p = random_problem(rng, trial % 2 == 0 ? -0.3 : -3.0);
    const QcqpSolution s = qcqp_solve(p);
    const Vec x_oracle = test::pgd_qcqp_oracle(p);
    const double f_solver = qcqp_objective(p, s.delta);
    const double f_oracle = qcqp_objective(p, x_oracle);
    CHECK(std::abs(f_solver - f_oracle) <= 1e-6 * (1.0 + std::abs(f_oracle)));
  }
}

TEST_CASE("constraint value is non-increasing along the dual path") {
  std::mt19937_64 rng(66);
  const QcqpProblem p = random_problem(rng, -0.2);
  auto delta_of = [&](double lam) {
    return Vec(Eigen::LLT<Mat>(p.H + 2.0 * lam * p.Qc)
                   .solve(-(p.g + lam * p.q_lin)));
  };
  double prev = qcqp_constraint_value(p, delta_of(0.0));
  for (double lam = 0.25; lam <= 64.0; lam *= 2.0) {
    const double cur = qcqp_constraint_value(p, delta_of(lam));
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("infeasible problems are reported") {
  QcqpProblem p;
  p.H = Mat::Identity(3, 3);
  p.g = Vec::Ones(3);
  p.Qc = Mat::Identity(3, 3);
  p.q_lin = Vec::Zero(3);
  p.c0 = 1.0;  // x^T x + 1 <= 0 never holds
  CHECK_THROWS_WITH_AS(qcqp_solve(p), doctest::Contains("infeasible"),
                       std::runtime_error);
}
