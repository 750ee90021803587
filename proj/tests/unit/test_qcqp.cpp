// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "isac/admm.hpp"
#include "oracles.hpp"

namespace isac {
namespace {

QcqpBlock::Params params(double sigma, double rho, double gamma) {
  QcqpBlock::Params p;
  p.target_power = sigma;
  p.rho = rho;
  p.gamma = gamma;
  return p;
}

CMatrix random_psd(std::mt19937_64& rng, int dim, int rank) {
  const CMatrix F = oracle::random_matrix(rng, dim, rank);
  return F * F.adjoint();
}

TEST(Qcqp, ScalarActiveConstraint) {
  // alpha = 1, v = 2, R_t = 1, sigma = 1: x(tau) = 2 / (1 + tau), active root tau = 1.
  const QcqpBlock block(CMatrix::Zero(1, 1), CMatrix::Ones(1, 1), params(1.0, 0.5, 2.0));
  const auto sol = block.solve(CVector::Constant(1, cx(2.0, 0.0)));
  EXPECT_NEAR(sol.dual.tau, 1.0, 1e-7);
  EXPECT_NEAR(std::abs(sol.x[0] - cx(1.0, 0.0)), 0.0, 1e-8);
  EXPECT_LE(sol.dual.q_value, 1.0);
}

TEST(Qcqp, ScalarInactiveConstraint) {
  const QcqpBlock block(CMatrix::Constant(1, 1, cx(1.0, 0.0)), CMatrix::Ones(1, 1), params(1.0, 0.0, 2.0));
  const auto sol = block.solve(CVector::Constant(1, cx(1.0, 0.0)));
  // (R_i + I) x = v: x = 0.5, q = 0.25 <= 1.
  EXPECT_EQ(sol.dual.tau, 0.0);
  EXPECT_NEAR(std::abs(sol.x[0] - cx(0.5, 0.0)), 0.0, 1e-15);
}

TEST(Qcqp, ZeroRhsGivesZero) {
  std::mt19937_64 rng(1);
  const QcqpBlock block(random_psd(rng, 6, 2), random_psd(rng, 6, 1), params(1.0, 0.3, 1.0));
  const auto sol = block.solve(CVector::Zero(6));
  EXPECT_EQ(sol.x.norm(), 0.0);
  EXPECT_EQ(sol.dual.tau, 0.0);
}

TEST(Qcqp, MatchesConvexSolverFixtures) {
  const auto instances = oracle::load_qcqp_fixtures(ISAC_FIXTURE_DIR "/qcqp_fixtures.json");
  ASSERT_EQ(instances.size(), 50u);
  int active = 0;
  for (const auto& inst : instances) {
    const QcqpBlock block(inst.R_i, inst.R_t, params(inst.target_power, inst.rho, inst.gamma));
    const auto sol = block.solve(inst.v);
    const double obj = oracle::qcqp_objective(inst, sol.x);
    const double q = sol.x.dot(inst.R_t * sol.x).real();
    EXPECT_LE(q, inst.target_power * (1.0 + 1e-8));
    // Both points are feasible to solver accuracy, so ours may only be marginally worse.
    EXPECT_LE(obj, inst.objective + 1e-6 * std::max(1.0, std::abs(inst.objective)));
    EXPECT_NEAR(obj, inst.objective, 1e-5 * std::max(1.0, std::abs(inst.objective)));
    EXPECT_LT((sol.x - inst.x).norm(), 1e-3 * std::max(1.0, inst.x.norm()));
    EXPECT_EQ(sol.dual.tau > 0.0, inst.constraint_active);
    active += inst.constraint_active;
  }
  EXPECT_GT(active, 10);
}

TEST(Qcqp, TargetEnergyDecreasesInMultiplier) {
  std::mt19937_64 rng(2);
  const QcqpBlock block(random_psd(rng, 8, 3), random_psd(rng, 8, 1), params(1.0, 0.2, 1.0));
  const CVector v = oracle::random_vector(rng, 8, 3.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double tau : {0.0, 0.5, 2.0, 10.0}) {
    const double q = block.q(block.solve_at(tau, v));
    EXPECT_LT(q, prev);
    prev = q;
  }
}

TEST(Qcqp, KktConditions) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 5 + trial % 6;
    const CMatrix Ri = random_psd(rng, dim, 1 + trial % 3);
    const CMatrix Rt = random_psd(rng, dim, 1);
    const double rho = 0.1 * (trial % 10), gamma = 0.5 + 0.2 * trial, sigma = 0.5;
    const QcqpBlock block(Ri, Rt, params(sigma, rho, gamma));
    const CVector v = oracle::random_vector(rng, dim, 2.0);
    const auto sol = block.solve(v);
    const double tau = sol.dual.tau;
    const double q = sol.x.dot(Rt * sol.x).real();
    EXPECT_GE(tau, 0.0);
    EXPECT_LE(q, sigma * (1 + 1e-8));
    EXPECT_LE(tau * std::abs(q - sigma), 1e-6 * sigma * std::max(1.0, tau));
    const CVector grad = (1 - rho) * Ri * sol.x + 0.5 * gamma * (sol.x - v) + tau * Rt * sol.x;
    EXPECT_LT(grad.norm(), 1e-9 * std::max(1.0, v.norm()));
  }
}

TEST(Qcqp, RejectsNonPsdInput) {
  CMatrix bad = CMatrix::Identity(3, 3);
  bad(2, 2) = -1.0;
  EXPECT_THROW(QcqpBlock(bad, CMatrix::Identity(3, 3), params(1, 0, 1)), ContractViolation);
  EXPECT_THROW(QcqpBlock(CMatrix::Identity(3, 3), bad, params(1, 0, 1)), ContractViolation);
  CMatrix skew = CMatrix::Identity(2, 2);
  skew(0, 1) = cx(0.0, 1.0);
  EXPECT_THROW(QcqpBlock(skew, CMatrix::Identity(2, 2), params(1, 0, 1)), ContractViolation);
  EXPECT_THROW(QcqpBlock(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2), params(1, 0, 0.0)), ContractViolation);
}

TEST(Qcqp, LowRankAndDensePathsAgree) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 12;
    const CMatrix Fi = oracle::random_matrix(rng, dim, 2);
    const CMatrix Ft = oracle::random_matrix(rng, dim, 1);
    const auto p = params(0.3, 0.25, 0.8 + trial);
    const QcqpBlock fact = QcqpBlock::from_factors(Fi, Ft, p);
    ASSERT_TRUE(fact.low_rank());
    // Add a negligible full-rank component so the dense constructor keeps every direction.
    CMatrix Ri = Fi * Fi.adjoint();
    Ri.diagonal().array() += 1e-10;
    const QcqpBlock dense(Ri, Ft * Ft.adjoint(), p);
    ASSERT_FALSE(dense.low_rank());
    const CVector v = oracle::random_vector(rng, dim, 2.0);
    for (double tau : {0.0, 0.7, 5.0}) {
      const CVector a = fact.solve_at(tau, v);
      EXPECT_LT((a - dense.solve_at(tau, v)).norm(), 1e-9 * a.norm());
    }
    const auto sa = fact.solve(v);
    const auto sb = dense.solve(v);
    EXPECT_LT((sa.x - sb.x).norm(), 1e-6 * std::max(1.0, sa.x.norm()));
    EXPECT_NEAR(fact.objective(sa.x, v), dense.objective(sb.x, v), 1e-8 * std::max(1.0, fact.objective(sa.x, v)));
  }
}

TEST(Qcqp, LengthMismatchThrows) {
  const QcqpBlock block(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2), params(1, 0, 1));
  EXPECT_THROW(block.solve(CVector::Zero(3)), DimensionError);
}

}  // namespace
}  // namespace isac
