// SPDX-License-Identifier: Apache-2.0
#include "isac/radar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isac {

namespace {

SteeringVector ula_steering(double theta, int length) {
  SteeringVector a{CVector(length), theta};
  const double scale = 1.0 / std::sqrt(static_cast<double>(length));
  const double phase = -kPi * std::sin(theta);
  for (int t = 0; t < length; ++t) a.entries[t] = scale * std::polar(1.0, phase * t);
  return a;
}

void require_finite(const CVector& v, const char* what) {
  if (!v.allFinite()) throw DivergenceError(what, 0);
}

}  // namespace

SteeringVector tx_steering(double theta, int tx_antennas) { return ula_steering(theta, tx_antennas); }
SteeringVector rx_steering(double theta, int rx_antennas) { return ula_steering(theta, rx_antennas); }

StackedResponse::StackedResponse(SteeringVector rx, SteeringVector tx, int symbols)
    : rx_(std::move(rx)), tx_(std::move(tx)), symbols_(symbols) {}

CVector StackedResponse::apply(const CVector& x) const {
  const Eigen::Index T = tx_.entries.size();
  const Eigen::Index R = rx_.entries.size();
  if (x.size() != T * symbols_) throw DimensionError("A(theta) x: length mismatch");
  Eigen::Map<const CMatrix> X(x.data(), T, symbols_);
  // a_t^T X, no conjugation
  const Eigen::RowVectorXcd proj = tx_.entries.transpose() * X;
  CVector out(R * symbols_);
  Eigen::Map<CMatrix>(out.data(), R, symbols_) = rx_.entries * proj;
  return out;
}

CVector StackedResponse::apply_adjoint(const CVector& w) const {
  const Eigen::Index T = tx_.entries.size();
  const Eigen::Index R = rx_.entries.size();
  if (w.size() != R * symbols_) throw DimensionError("A(theta)^H w: length mismatch");
  Eigen::Map<const CMatrix> W(w.data(), R, symbols_);
  const Eigen::RowVectorXcd proj = rx_.entries.adjoint() * W;
  CVector out(T * symbols_);
  Eigen::Map<CMatrix>(out.data(), T, symbols_) = tx_.entries.conjugate() * proj;
  return out;
}

CMatrix StackedResponse::dense(std::size_t budget) const {
  if (static_cast<std::size_t>(rows()) * static_cast<std::size_t>(cols()) > budget)
    throw DimensionError("stacked response exceeds the dense materialization budget");
  const Eigen::Index T = tx_.entries.size();
  const Eigen::Index R = rx_.entries.size();
  const CMatrix block = rx_.entries * tx_.entries.transpose();
  CMatrix out = CMatrix::Zero(rows(), cols());
  for (int n = 0; n < symbols_; ++n) out.block(n * R, n * T, R, T) = block;
  return out;
}

StackedResponse stacked_response(double theta, const Scenario& scenario) {
  return StackedResponse(rx_steering(theta, scenario.rx_antennas), tx_steering(theta, scenario.tx_antennas),
                         scenario.symbols);
}

ReceiveFilter mvdr_filter(const Waveform& x, const Scenario& scenario) {
  const CVector a = stacked_response(scenario.target_angle, scenario).apply(x.vector());
  const double a_norm = a.norm();
  if (!(a_norm > std::numeric_limits<double>::min() * 1e10) || !std::isfinite(a_norm))
    throw DegenerateTargetError("waveform has no response toward the target angle");

  const Eigen::Index K = scenario.num_interferers();
  const double noise = scenario.radar_noise;
  // B = noise I + F F^H with F = [sigma_k A_k x]. Woodbury reduces the solve
  // to the K x K Hermitian capacitance noise I + F^H F.
  CMatrix F(a.size(), K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto& intf = scenario.interferers[k];
    F.col(k) = std::sqrt(intf.power) * stacked_response(intf.angle, scenario).apply(x.vector());
  }
  CVector Binv_a = a / noise;
  if (K > 0) {
    CMatrix cap = F.adjoint() * F;
    cap.diagonal().array() += noise;
    const Eigen::LLT<CMatrix> llt(cap);
    if (llt.info() != Eigen::Success) throw ContractViolation("MVDR capacitance not positive definite");
    Binv_a -= F * llt.solve(F.adjoint() * a) / noise;
  }
  const cx denom = a.dot(Binv_a);  // a^H B^{-1} a, real positive
  ReceiveFilter w{Binv_a / denom.real()};
  require_finite(w.w, "mvdr_filter");
  return w;
}

double sensing_sinr(const Waveform& x, const ReceiveFilter& w, const Scenario& scenario) {
  const double target =
      scenario.target_power * std::norm(w.w.dot(stacked_response(scenario.target_angle, scenario).apply(x.vector())));
  double interference = 0.0;
  for (const auto& intf : scenario.interferers)
    interference += intf.power * std::norm(w.w.dot(stacked_response(intf.angle, scenario).apply(x.vector())));
  return target / (interference + scenario.radar_noise * w.w.squaredNorm());
}

double SensingMatrices::target_energy(const CVector& x) const {
  return (target_factor.adjoint() * x).squaredNorm();
}

double SensingMatrices::interference_energy(const CVector& x) const {
  if (interference_factor.cols() == 0) return 0.0;
  return (interference_factor.adjoint() * x).squaredNorm();
}

double SensingMatrices::sinr(const CVector& x) const {
  return target_energy(x) / (interference_energy(x) + noise_term);
}

SensingMatrices build_sensing_matrices(const ReceiveFilter& w, const Scenario& scenario, std::size_t dense_budget) {
  const Eigen::Index NT = scenario.waveform_length();
  const Eigen::Index K = scenario.num_interferers();
  SensingMatrices m;
  m.target_factor = std::sqrt(scenario.target_power) *
                    stacked_response(scenario.target_angle, scenario).apply_adjoint(w.w);
  m.interference_factor.resize(NT, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto& intf = scenario.interferers[k];
    m.interference_factor.col(k) = std::sqrt(intf.power) * stacked_response(intf.angle, scenario).apply_adjoint(w.w);
  }
  m.noise_term = scenario.radar_noise * w.w.squaredNorm();
  if (static_cast<std::size_t>(NT) * static_cast<std::size_t>(NT) <= dense_budget) {
    m.R_t = m.target_factor * m.target_factor.adjoint();
    m.R_i = K > 0 ? CMatrix(m.interference_factor * m.interference_factor.adjoint()) : CMatrix::Zero(NT, NT);
  }
  return m;
}

std::vector<double> default_beampattern_grid() {
  std::vector<double> grid;
  grid.reserve(721);
  for (int i = 0; i <= 720; ++i) grid.push_back(deg_to_rad(-90.0 + 0.25 * i));
  return grid;
}

double transmit_gain(const Waveform& x, double theta) {
  const SteeringVector a = tx_steering(theta, x.tx());
  // a_t^T X X^H conj(a_t) / N = ||X^T a_t||^2 / N
  return (x.matrix().transpose() * a.entries).squaredNorm() / x.symbols();
}

std::vector<BeamPoint> beampattern(const Waveform& x, std::span<const double> grid, const Scenario& scenario) {
  (void)scenario;
  if (grid.empty()) throw DimensionError("beampattern grid is empty");
  std::vector<double> gains;
  gains.reserve(grid.size());
  for (double theta : grid) gains.push_back(transmit_gain(x, theta));
  const double peak = *std::max_element(gains.begin(), gains.end());
  std::vector<BeamPoint> out;
  out.reserve(grid.size());
  constexpr double kFloorDb = -300.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rel = peak > 0.0 ? gains[i] / peak : 0.0;
    out.push_back({grid[i], rel > 0.0 ? std::max(linear_to_db(rel), kFloorDb) : kFloorDb});
  }
  return out;
}

}  // namespace isac
