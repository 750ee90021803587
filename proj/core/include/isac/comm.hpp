// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "isac/model.hpp"

namespace isac {

struct CommMetrics {
  double mui_energy = 0.0;            // ||H X - S||_F^2
  std::vector<double> per_user_sinr;  // linear
  double sum_rate = 0.0;              // bits/s/Hz
};

/// ||H X - S||_F^2. Throws DimensionError on mismatched shapes.
double mui_energy(const Waveform& x, const Channel& channel, const SymbolMatrix& symbols);

/// Symbol-level rate: SINR_m = mean_n |s_mn|^2 / (mean_n |h_m^T x_n - s_mn|^2 + sigma_z^2)
/// and sum_rate = sum_m log2(1 + SINR_m).
CommMetrics comm_metrics(const Waveform& x, const Channel& channel, const SymbolMatrix& symbols,
                         double comm_noise);
double sum_rate(const Waveform& x, const Channel& channel, const SymbolMatrix& symbols, double comm_noise);

struct ZeroMuiPrecoder {
  Waveform waveform;  // rescaled to ||X||_F^2 = P_max, not constant-modulus
  CMatrix unscaled;   // H^H (H H^H)^{-1} S
  bool rank_deficient = false;  // pseudo-inverse fallback was used
};

/// Right-inverse precoder that nulls multi-user interference.
ZeroMuiPrecoder zero_mui_precoder(const Channel& channel, const SymbolMatrix& symbols, double total_power);

}  // namespace isac
