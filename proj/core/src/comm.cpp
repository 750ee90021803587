// SPDX-License-Identifier: Apache-2.0
#include "isac/comm.hpp"

#include <cmath>
#include <string>

namespace isac {

namespace {

void check_shapes(const Waveform& x, const Channel& channel, const SymbolMatrix& symbols) {
  if (channel.H.cols() != x.tx() || symbols.S.rows() != channel.H.rows() || symbols.S.cols() != x.symbols())
    throw DimensionError("H is " + std::to_string(channel.H.rows()) + "x" + std::to_string(channel.H.cols()) +
                         ", X is " + std::to_string(x.tx()) + "x" + std::to_string(x.symbols()) + ", S is " +
                         std::to_string(symbols.S.rows()) + "x" + std::to_string(symbols.S.cols()));
}

}  // namespace

double mui_energy(const Waveform& x, const Channel& channel, const SymbolMatrix& symbols) {
  check_shapes(x, channel, symbols);
  return (channel.H * x.matrix() - symbols.S).squaredNorm();
}

CommMetrics comm_metrics(const Waveform& x, const Channel& channel, const SymbolMatrix& symbols, double comm_noise) {
  check_shapes(x, channel, symbols);
  const CMatrix residual = channel.H * x.matrix() - symbols.S;
  const double n = static_cast<double>(x.symbols());
  CommMetrics out;
  out.mui_energy = residual.squaredNorm();
  out.per_user_sinr.reserve(symbols.S.rows());
  for (Eigen::Index m = 0; m < symbols.S.rows(); ++m) {
    const double signal = symbols.S.row(m).squaredNorm() / n;
    const double distortion = residual.row(m).squaredNorm() / n;
    const double sinr = signal / (distortion + comm_noise);
    out.per_user_sinr.push_back(sinr);
    out.sum_rate += std::log2(1.0 + sinr);
  }
  return out;
}

double sum_rate(const Waveform& x, const Channel& channel, const SymbolMatrix& symbols, double comm_noise) {
  return comm_metrics(x, channel, symbols, comm_noise).sum_rate;
}

ZeroMuiPrecoder zero_mui_precoder(const Channel& channel, const SymbolMatrix& symbols, double total_power) {
  const CMatrix& H = channel.H;
  if (symbols.S.rows() != H.rows()) throw DimensionError("zero-MUI: S rows must equal the user count");
  ZeroMuiPrecoder out;
  const Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(H);
  if (cod.rank() < H.rows()) {
    out.rank_deficient = true;
    out.unscaled = cod.pseudoInverse() * symbols.S;
  } else {
    const Eigen::LLT<CMatrix> gram((H * H.adjoint()).eval());
    out.unscaled = H.adjoint() * gram.solve(symbols.S);
  }
  const double norm = out.unscaled.norm();
  const CMatrix scaled = norm > 0.0 ? CMatrix(out.unscaled * (std::sqrt(total_power) / norm)) : out.unscaled;
  out.waveform = Waveform::from_matrix(scaled, false);
  return out;
}

}  // namespace isac
