// SPDX-License-Identifier: Apache-2.0
#include "isac/model.hpp"

#include <cmath>
#include <string>

namespace isac {

namespace {

bool valid_angle(double theta) { return theta > -kPi / 2 && theta < kPi / 2; }

}  // namespace

double Scenario::cm_amplitude() const {
  return std::sqrt(total_power / (static_cast<double>(tx_antennas) * symbols));
}

void Scenario::validate() const {
  if (tx_antennas < 1 || rx_antennas < 1 || symbols < 1 || users < 1)
    throw ConfigError("antenna, symbol and user counts must be >= 1");
  if (max_inner < 1 || max_outer < 1) throw ConfigError("iteration limits must be >= 1");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("rho must lie in [0, 1]");
  if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
  if (!(eps_primal > 0.0) || !(eps_dual > 0.0)) throw ConfigError("ADMM tolerances must be > 0");
  if (!(outer_tol > 0.0) || !(tol_bisect > 0.0)) throw ConfigError("tolerances must be > 0");
  if (!(target_power > 0.0) || !(radar_noise > 0.0) || !(comm_noise > 0.0) || !(total_power > 0.0))
    throw ConfigError("all powers must be > 0");
  if (!valid_angle(target_angle)) throw ConfigError("target angle must lie in (-90, 90) deg");
  for (const auto& k : interferers) {
    if (!valid_angle(k.angle)) throw ConfigError("interferer angle must lie in (-90, 90) deg");
    if (!(k.power > 0.0)) throw ConfigError("interferer power must be > 0");
  }
}

Scenario default_scenario() {
  Scenario s;
  s.tx_antennas = 16;
  s.rx_antennas = 16;
  s.symbols = 20;
  s.users = 4;
  s.target_angle = deg_to_rad(15.0);
  s.interferers = {{deg_to_rad(-50.0), db_to_linear(30.0)}, {deg_to_rad(40.0), db_to_linear(30.0)}};
  s.target_power = db_to_linear(10.0);
  s.radar_noise = db_to_linear(0.0);
  s.total_power = 1.0;
  s.comm_noise = s.total_power / db_to_linear(20.0);
  s.rho = 0.2;
  s.lambda = 1.0;
  return s;
}

Waveform::Waveform(CVector x, int tx, int symbols, bool cm_compliant)
    : x_(std::move(x)), tx_(tx), symbols_(symbols), cm_compliant_(cm_compliant) {
  if (tx < 1 || symbols < 1 || x_.size() != static_cast<Eigen::Index>(tx) * symbols)
    throw DimensionError("waveform length " + std::to_string(x_.size()) + " does not match T*N = " +
                         std::to_string(tx) + "*" + std::to_string(symbols));
}

Waveform Waveform::from_matrix(const CMatrix& X, bool cm_compliant) {
  return Waveform(vec(X), static_cast<int>(X.rows()), static_cast<int>(X.cols()), cm_compliant);
}

bool Waveform::satisfies_cm(double amplitude, double rel_tol) const {
  for (Eigen::Index n = 0; n < x_.size(); ++n)
    if (std::abs(std::abs(x_[n]) - amplitude) > rel_tol * amplitude) return false;
  return x_.size() > 0;
}

std::mt19937_64 make_rng(std::uint64_t seed, RngStream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

Channel generate_channel(const Scenario& scenario) {
  auto rng = make_rng(scenario.seed, RngStream::Channel);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Channel ch{CMatrix(scenario.users, scenario.tx_antennas)};
  // Fill column-major explicitly so the draw order is part of the contract.
  for (Eigen::Index t = 0; t < ch.H.cols(); ++t)
    for (Eigen::Index m = 0; m < ch.H.rows(); ++m) {
      const double re = normal(rng);
      const double im = normal(rng);
      ch.H(m, t) = {re, im};
    }
  return ch;
}

const std::array<cx, 4>& qpsk_constellation() {
  static const double a = 1.0 / std::sqrt(2.0);
  static const std::array<cx, 4> points{cx{a, a}, cx{-a, a}, cx{-a, -a}, cx{a, -a}};
  return points;
}

SymbolMatrix generate_symbols(const Scenario& scenario) {
  auto rng = make_rng(scenario.seed, RngStream::Symbols);
  std::uniform_int_distribution<int> pick(0, 3);
  const auto& points = qpsk_constellation();
  SymbolMatrix sym{CMatrix(scenario.users, scenario.symbols)};
  for (Eigen::Index n = 0; n < sym.S.cols(); ++n)
    for (Eigen::Index m = 0; m < sym.S.rows(); ++m) sym.S(m, n) = points[pick(rng)];
  return sym;
}

CVector vec(const CMatrix& X) { return Eigen::Map<const CVector>(X.data(), X.size()); }

CMatrix unvec(const CVector& x, int rows, int cols) {
  if (rows < 1 || cols < 1 || x.size() != static_cast<Eigen::Index>(rows) * cols)
    throw DimensionError("cannot reshape length " + std::to_string(x.size()) + " into " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  return Eigen::Map<const CMatrix>(x.data(), rows, cols);
}

CMatrix stacked_channel(const CMatrix& H, int symbols) {
  const Eigen::Index M = H.rows();
  const Eigen::Index T = H.cols();
  CMatrix out = CMatrix::Zero(M * symbols, T * symbols);
  for (int n = 0; n < symbols; ++n) out.block(n * M, n * T, M, T) = H;
  return out;
}

}  // namespace isac
