// SPDX-License-Identifier: Apache-2.0
//
// Radar-side model: ULA steering vectors, the per-symbol stacked response
// A(theta) = I_N (x) a_r a_t^T, the MVDR receive filter and sensing SINR.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "isac/model.hpp"

namespace isac {

/// Unit-norm half-wavelength ULA response: entry t is exp(-j pi t sin(theta)) / sqrt(L).
struct SteeringVector {
  CVector entries;
  double angle = 0.0;
};

SteeringVector tx_steering(double theta, int tx_antennas);
SteeringVector rx_steering(double theta, int rx_antennas);

/// Dense builds larger than this many complex entries are refused.
inline constexpr std::size_t kDenseResponseBudget = 10'000'000;

/// Block-diagonal NR x NT operator with N identical rank-1 blocks a_r a_t^T.
/// Applied blockwise; `dense()` is only for small sizes and tests.
class StackedResponse {
 public:
  StackedResponse(SteeringVector rx, SteeringVector tx, int symbols);

  /// A(theta) x, i.e. vec(a_r (a_t^T X)).
  CVector apply(const CVector& x) const;
  /// A(theta)^H w, i.e. vec(conj(a_t) (a_r^H W)).
  CVector apply_adjoint(const CVector& w) const;
  CMatrix dense(std::size_t budget = kDenseResponseBudget) const;

  Eigen::Index rows() const { return rx_.entries.size() * symbols_; }
  Eigen::Index cols() const { return tx_.entries.size() * symbols_; }
  const SteeringVector& rx() const { return rx_; }
  const SteeringVector& tx() const { return tx_; }

 private:
  SteeringVector rx_;
  SteeringVector tx_;
  int symbols_;
};

StackedResponse stacked_response(double theta, const Scenario& scenario);

struct ReceiveFilter {
  CVector w;  // length N R
};

/// w = B^{-1} a / (a^H B^{-1} a), a = A(theta_0) x and
/// B = sum_k sigma_k^2 (A(theta_k) x)(A(theta_k) x)^H + sigma_u^2 I.
/// Throws DegenerateTargetError when a vanishes.
ReceiveFilter mvdr_filter(const Waveform& x, const Scenario& scenario);

double sensing_sinr(const Waveform& x, const ReceiveFilter& w, const Scenario& scenario);

/// R_t = sigma_0^2 A_0^H w w^H A_0 and R_i = sum_k sigma_k^2 A_k^H w w^H A_k,
/// kept both as factors (R_t = F_t F_t^H, R_i = F_i F_i^H) and, when small
/// enough, as dense matrices.
struct SensingMatrices {
  CMatrix target_factor;        // NT x 1, sigma_0 A_0^H w
  CMatrix interference_factor;  // NT x K, columns sigma_k A_k^H w
  double noise_term = 0.0;      // sigma_u^2 ||w||^2
  CMatrix R_t;                  // empty when above the dense budget
  CMatrix R_i;

  double target_energy(const CVector& x) const;        // x^H R_t x
  double interference_energy(const CVector& x) const;  // x^H R_i x
  /// x^H R_t x / (x^H R_i x + sigma_u^2 ||w||^2).
  double sinr(const CVector& x) const;
};

SensingMatrices build_sensing_matrices(const ReceiveFilter& w, const Scenario& scenario,
                                       std::size_t dense_budget = kDenseResponseBudget);

struct BeamPoint {
  double theta = 0.0;    // radians
  double gain_db = 0.0;  // relative to the grid peak
};

/// 721 points from -90 to 90 degrees in 0.25 degree steps.
std::vector<double> default_beampattern_grid();

/// Transmit beampattern a_t^T(theta) (X X^H / N) conj(a_t(theta)), in dB
/// relative to its maximum over the grid.
std::vector<BeamPoint> beampattern(const Waveform& x, std::span<const double> grid,
                                   const Scenario& scenario);

/// Linear transmit gain at one angle (before normalization).
double transmit_gain(const Waveform& x, double theta);

}  // namespace isac
