// SPDX-License-Identifier: Apache-2.0
//
// Scenario definition, random problem instances and the column-major
// vectorization convention shared by every other module.
#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "isac/types.hpp"

namespace isac {

struct Interferer {
  double angle = 0.0;  // radians
  double power = 1.0;  // linear
};

enum class InitMode { Auto, ZeroMui, Lfm, RandomPhase };

/// Physical and algorithmic parameters of one problem instance. Angles are
/// radians and powers linear; the config file boundary works in degrees/dB.
struct Scenario {
  int tx_antennas = 16;  // T
  int rx_antennas = 16;  // R
  int symbols = 20;      // N
  int users = 4;         // M

  double target_angle = 0.0;
  std::vector<Interferer> interferers;
  double target_power = 10.0;  // sigma_0^2
  double radar_noise = 1.0;    // sigma_u^2
  double comm_noise = 0.01;    // sigma_z^2
  double total_power = 1.0;    // P_max

  double rho = 0.2;
  double lambda = 1.0;
  double gamma = 1.0;
  double eps_primal = 1e-5;
  double eps_dual = 1e-5;
  int max_inner = 200;
  int max_outer = 30;
  std::uint64_t seed = 1;

  // Solver knobs that are not part of the physical model.
  bool paper_stopping = false;
  InitMode init = InitMode::Auto;
  double outer_tol = 1e-4;
  double tol_bisect = 1e-8;

  /// Constant-modulus amplitude sqrt(P_max / (T N)).
  double cm_amplitude() const;
  int waveform_length() const { return tx_antennas * symbols; }
  int num_interferers() const { return static_cast<int>(interferers.size()); }

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

/// Baseline simulation setup: T = R = 16,
/// N = 20, M = 4, target at 15 deg, interferers at -50/40 deg (30 dB).
Scenario default_scenario();

struct Channel {
  CMatrix H;  // M x T, i.i.d. CN(0, 1)
};

struct SymbolMatrix {
  CMatrix S;  // M x N, unit-modulus QPSK
};

/// Stacked transmit vector x = vec(X), X being T x N.
class Waveform {
 public:
  Waveform() = default;
  Waveform(CVector x, int tx, int symbols, bool cm_compliant = false);
  static Waveform from_matrix(const CMatrix& X, bool cm_compliant = false);

  const CVector& vector() const { return x_; }
  CVector& vector() { return x_; }
  Eigen::Map<const CMatrix> matrix() const { return {x_.data(), tx_, symbols_}; }
  int tx() const { return tx_; }
  int symbols() const { return symbols_; }
  Eigen::Index size() const { return x_.size(); }

  /// Flag set by the producer (projection, LFM construction).
  bool cm_compliant() const { return cm_compliant_; }
  /// Measures max_n | |x_n| - amplitude | against rel_tol * amplitude.
  bool satisfies_cm(double amplitude, double rel_tol = 1e-12) const;

 private:
  CVector x_;
  int tx_ = 0;
  int symbols_ = 0;
  bool cm_compliant_ = false;
};

/// Separate deterministic streams for the independent random draws of a run.
enum class RngStream : std::uint64_t { Channel = 1, Symbols = 2, Init = 3 };
std::mt19937_64 make_rng(std::uint64_t seed, RngStream stream);

Channel generate_channel(const Scenario& scenario);
SymbolMatrix generate_symbols(const Scenario& scenario);

/// The four unit-modulus QPSK points (+-1 +- j)/sqrt(2).
const std::array<cx, 4>& qpsk_constellation();

/// Column-major stacking.
CVector vec(const CMatrix& X);
CMatrix unvec(const CVector& x, int rows, int cols);

/// I_N (x) H, so that stacked_channel(H, N) * vec(X) == vec(H X).
CMatrix stacked_channel(const CMatrix& H, int symbols);

}  // namespace isac
