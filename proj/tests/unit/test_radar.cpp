// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>

#include "isac/admm.hpp"
#include "isac/radar.hpp"
#include "oracles.hpp"

namespace isac {
namespace {

Scenario small_scenario(int T, int R, int N, int K) {
  Scenario s = default_scenario();
  s.tx_antennas = T;
  s.rx_antennas = R;
  s.symbols = N;
  s.users = 2;
  s.interferers.clear();
  const double angles[] = {-50.0, 40.0, -20.0, 65.0};
  for (int k = 0; k < K; ++k) s.interferers.push_back({deg_to_rad(angles[k % 4]), db_to_linear(20.0 + 5 * k)});
  return s;
}

Waveform random_waveform(std::mt19937_64& rng, const Scenario& s) {
  return Waveform(oracle::random_vector(rng, s.waveform_length(), s.cm_amplitude()), s.tx_antennas, s.symbols);
}

TEST(Steering, BroadsideIsUniform) {
  const auto a = tx_steering(0.0, 4);
  for (int t = 0; t < 4; ++t) EXPECT_NEAR(std::abs(a.entries[t] - cx(0.5, 0.0)), 0.0, 1e-15);
  const auto r = rx_steering(0.0, 9);
  for (int t = 0; t < 9; ++t) EXPECT_NEAR(std::abs(r.entries[t] - cx(1.0 / 3.0, 0.0)), 0.0, 1e-15);
}

TEST(Steering, ThirtyDegreesTwoElements) {
  const double h = 1.0 / std::sqrt(2.0);
  const auto a = tx_steering(deg_to_rad(30.0), 2);
  EXPECT_NEAR(std::abs(a.entries[0] - cx(h, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a.entries[1] - cx(0.0, -h)), 0.0, 1e-15);
  const auto r = rx_steering(deg_to_rad(-30.0), 2);
  EXPECT_NEAR(std::abs(r.entries[1] - cx(0.0, h)), 0.0, 1e-15);
}

TEST(Steering, UnitNormAndFirstEntry) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(-1.5, 1.5);
  for (int i = 0; i < 50; ++i) {
    const double theta = angle(rng);
    const auto a = tx_steering(theta, 16);
    EXPECT_NEAR(a.entries.norm(), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(a.entries[0] - cx(0.25, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(rx_steering(theta, 7).entries.norm(), 1.0, 1e-12);
    EXPECT_LT((a.entries - oracle::steering(theta, 16)).norm(), 1e-14);
  }
}

TEST(StackedResponse, SingleSymbolIsOuterProduct) {
  const Scenario s = small_scenario(3, 4, 1, 0);
  const auto A = stacked_response(0.3, s).dense();
  const CMatrix outer = rx_steering(0.3, 4).entries * tx_steering(0.3, 3).entries.transpose();
  EXPECT_LT((A - outer).norm(), 1e-15);
}

TEST(StackedResponse, OperatorMatchesDenseOracle) {
  std::mt19937_64 rng(8);
  for (int T = 1; T <= 4; ++T)
    for (int R = 1; R <= 4; ++R)
      for (int N = 1; N <= 4; ++N) {
        const Scenario s = small_scenario(T, R, N, 0);
        const double theta = 0.2 * T - 0.15 * R + 0.05 * N;
        const StackedResponse op = stacked_response(theta, s);
        const CMatrix dense = oracle::dense_response(theta, R, T, N);
        const CVector x = oracle::random_vector(rng, T * N);
        const CVector w = oracle::random_vector(rng, R * N);
        EXPECT_LT((op.apply(x) - dense * x).norm(), 1e-12);
        EXPECT_LT((op.apply_adjoint(w) - dense.adjoint() * w).norm(), 1e-12);
        EXPECT_LT((op.dense() - dense).norm(), 1e-12);
      }
}

TEST(StackedResponse, KroneckerIdentity) {
  std::mt19937_64 rng(9);
  const Scenario s = small_scenario(5, 3, 6, 0);
  const auto op = stacked_response(-0.4, s);
  const CMatrix X = oracle::random_matrix(rng, 5, 6);
  const CMatrix expected = op.rx().entries * (op.tx().entries.transpose() * X);
  EXPECT_LT((op.apply(vec(X)) - vec(expected)).norm(), 1e-13);
}

TEST(StackedResponse, RankEqualsSymbolCount) {
  const Scenario s = small_scenario(4, 4, 3, 0);
  const CMatrix A = stacked_response(0.5, s).dense();
  const Eigen::JacobiSVD<CMatrix> svd(A);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv[i] > 1e-10 * sv[0];
  EXPECT_EQ(rank, 3);
}

TEST(StackedResponse, DenseBudgetEnforced) {
  const Scenario s = small_scenario(4, 4, 3, 0);
  EXPECT_THROW(stacked_response(0.5, s).dense(10), DimensionError);
}

TEST(Mvdr, NoInterferersIsMatchedFilter) {
  std::mt19937_64 rng(21);
  const Scenario s = small_scenario(4, 3, 2, 0);
  const Waveform x = random_waveform(rng, s);
  const ReceiveFilter w = mvdr_filter(x, s);
  const CVector a = oracle::dense_response(s.target_angle, 3, 4, 2) * x.vector();
  EXPECT_LT((w.w - a / a.squaredNorm()).norm(), 1e-12 * w.w.norm());
  const double expected = s.target_power * a.squaredNorm() / s.radar_noise;
  EXPECT_NEAR(sensing_sinr(x, w, s), expected, 1e-10 * expected);
}

TEST(Mvdr, DistortionlessAndMatchesDenseSolve) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const Scenario s = small_scenario(4, 4, 3, 1 + trial % 4);
    const Waveform x = random_waveform(rng, s);
    const ReceiveFilter w = mvdr_filter(x, s);
    const CMatrix A0 = oracle::dense_response(s.target_angle, 4, 4, 3);
    const CVector a = A0 * x.vector();
    EXPECT_NEAR(std::abs(w.w.dot(a) - cx(1.0, 0.0)), 0.0, 1e-8);

    CMatrix B = s.radar_noise * CMatrix::Identity(a.size(), a.size());
    for (const auto& k : s.interferers) {
      const CVector b = oracle::dense_response(k.angle, 4, 4, 3) * x.vector();
      B += k.power * b * b.adjoint();
    }
    const CVector z = B.fullPivLu().solve(a);
    const CVector expected = z / a.dot(z);
    EXPECT_LT((w.w - expected).norm(), 1e-9 * expected.norm());
  }
}

TEST(Mvdr, BeatsRandomFilters) {
  std::mt19937_64 rng(23);
  const Scenario s = small_scenario(8, 8, 4, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const Waveform x = random_waveform(rng, s);
    const double best = sensing_sinr(x, mvdr_filter(x, s), s);
    for (int j = 0; j < 100; ++j) {
      CVector v = oracle::random_vector(rng, s.rx_antennas * s.symbols);
      v.normalize();
      EXPECT_GE(best, sensing_sinr(x, ReceiveFilter{v}, s) - 1e-9);
    }
  }
}

TEST(Mvdr, ZeroWaveformIsDegenerate) {
  const Scenario s = small_scenario(4, 4, 2, 1);
  EXPECT_THROW(mvdr_filter(Waveform(CVector::Zero(8), 4, 2), s), DegenerateTargetError);
}

TEST(SensingSinr, PhaseAndScaleInvariance) {
  std::mt19937_64 rng(31);
  const Scenario s = small_scenario(4, 4, 3, 2);
  const Waveform x = random_waveform(rng, s);
  const ReceiveFilter w{oracle::random_vector(rng, 12)};
  const double base = sensing_sinr(x, w, s);
  const Waveform rotated(x.vector() * std::polar(1.0, 0.77), 4, 3);
  EXPECT_NEAR(sensing_sinr(rotated, w, s), base, 1e-10 * base);
  EXPECT_NEAR(sensing_sinr(x, ReceiveFilter{w.w * cx(-3.0, 2.0)}, s), base, 1e-10 * base);
}

TEST(SensingSinr, MatchesDenseFormula) {
  std::mt19937_64 rng(32);
  for (int K = 0; K <= 3; ++K) {
    const Scenario s = small_scenario(3, 4, 2, K);
    const Waveform x = random_waveform(rng, s);
    const CVector w = K == 0 ? CVector(oracle::dense_response(s.target_angle, 4, 3, 2) * x.vector())
                             : oracle::random_vector(rng, 8);
    std::vector<double> angles, powers;
    for (const auto& k : s.interferers) {
      angles.push_back(k.angle);
      powers.push_back(k.power);
    }
    const double expected =
        oracle::sinr(x.vector(), w, s.target_angle, s.target_power, angles, powers, s.radar_noise, 4, 3, 2);
    EXPECT_NEAR(sensing_sinr(x, ReceiveFilter{w}, s), expected, 1e-12 * expected);
  }
}

TEST(SensingMatrices, ConsistentWithSinr) {
  std::mt19937_64 rng(41);
  const Scenario s = small_scenario(4, 3, 3, 2);
  const ReceiveFilter w{oracle::random_vector(rng, 9)};
  const SensingMatrices m = build_sensing_matrices(w, s);
  ASSERT_EQ(m.R_t.rows(), 12);
  for (int i = 0; i < 20; ++i) {
    const Waveform x = random_waveform(rng, s);
    const double direct = sensing_sinr(x, w, s);
    const double quad =
        x.vector().dot(m.R_t * x.vector()).real() / (x.vector().dot(m.R_i * x.vector()).real() + m.noise_term);
    EXPECT_NEAR(quad, direct, 1e-10 * direct);
    EXPECT_NEAR(m.sinr(x.vector()), direct, 1e-10 * direct);
  }
}

TEST(SensingMatrices, HermitianPsdAndTrace) {
  std::mt19937_64 rng(42);
  const Scenario s = small_scenario(4, 4, 2, 3);
  const ReceiveFilter w{oracle::random_vector(rng, 8)};
  const SensingMatrices m = build_sensing_matrices(w, s);
  for (const CMatrix* R : {&m.R_t, &m.R_i}) {
    EXPECT_LT((*R - R->adjoint()).norm(), 1e-12 * R->norm());
    const Eigen::SelfAdjointEigenSolver<CMatrix> eig(*R);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10 * R->trace().real());
  }
  const CVector g = oracle::dense_response(s.target_angle, 4, 4, 2).adjoint() * w.w;
  EXPECT_NEAR(m.R_t.trace().real(), s.target_power * g.squaredNorm(), 1e-12 * m.R_t.trace().real());
  EXPECT_NEAR(m.R_t.trace().imag(), 0.0, 1e-14);
}

TEST(SensingMatrices, NoInterferersGivesZeroRi) {
  std::mt19937_64 rng(43);
  const Scenario s = small_scenario(3, 3, 2, 0);
  const SensingMatrices m = build_sensing_matrices(ReceiveFilter{oracle::random_vector(rng, 6)}, s);
  EXPECT_EQ(m.R_i.norm(), 0.0);
  EXPECT_EQ(m.interference_energy(oracle::random_vector(rng, 6)), 0.0);
}

TEST(Beampattern, MatchedBeamPeaksAtTarget) {
  const Scenario s = default_scenario();
  const int T = s.tx_antennas, N = s.symbols;
  const CVector beam = tx_steering(s.target_angle, T).entries.conjugate() * std::sqrt(s.total_power / T) /
                       std::sqrt(double(N));
  CMatrix X(T, N);
  for (int n = 0; n < N; ++n) X.col(n) = beam * std::polar(1.0, 0.3 * n * n);
  const auto grid = default_beampattern_grid();
  const auto pattern = beampattern(Waveform::from_matrix(X), grid, s);
  ASSERT_EQ(pattern.size(), 721u);
  const auto peak = std::max_element(pattern.begin(), pattern.end(),
                                     [](const BeamPoint& a, const BeamPoint& b) { return a.gain_db < b.gain_db; });
  EXPECT_NEAR(rad_to_deg(peak->theta), 15.0, 0.25 / 2 + 1e-9);
  EXPECT_NEAR(peak->gain_db, 0.0, 1e-12);
}

TEST(Beampattern, NonNegativeAndNormalized) {
  std::mt19937_64 rng(51);
  const Scenario s = small_scenario(6, 6, 5, 0);
  const Waveform x = random_waveform(rng, s);
  const auto grid = default_beampattern_grid();
  for (double theta : grid) EXPECT_GE(transmit_gain(x, theta), 0.0);
  double peak = -1e9;
  for (const auto& p : beampattern(x, grid, s)) peak = std::max(peak, p.gain_db);
  EXPECT_NEAR(peak, 0.0, 1e-12);
  EXPECT_NEAR(rad_to_deg(grid.front()), -90.0, 1e-12);
  EXPECT_NEAR(rad_to_deg(grid.back()), 90.0, 1e-12);
}

TEST(Beampattern, EmptyGridThrows) {
  const Scenario s = small_scenario(2, 2, 1, 0);
  EXPECT_THROW(beampattern(Waveform(CVector::Ones(2), 2, 1), {}, s), DimensionError);
}

}  // namespace
}  // namespace isac
