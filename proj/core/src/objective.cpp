// SPDX-License-Identifier: Apache-2.0
#include "isac/objective.hpp"

namespace isac {

JointObjective::JointObjective(const Scenario& scenario, const Channel& channel, const SymbolMatrix& symbols,
                               const ReceiveFilter& filter, const Waveform& reference)
    : scenario_(scenario),
      channel_(channel),
      symbols_(symbols),
      sensing_(build_sensing_matrices(filter, scenario, 0)),
      reference_(reference.vector()) {}

ObjectiveTerms JointObjective::evaluate(const CVector& x) const {
  const int T = scenario_.tx_antennas;
  const int N = scenario_.symbols;
  Eigen::Map<const CMatrix> X(x.data(), T, N);
  ObjectiveTerms t;
  t.mui = (channel_.H * X - symbols_.S).squaredNorm();
  t.sinr = sensing_.sinr(x);
  t.similarity = (x - reference_).squaredNorm();
  const double rho = scenario_.rho;
  t.total = rho * t.mui + (1.0 - rho) * scenario_.lambda * t.similarity;
  if (rho < 1.0) t.total += (1.0 - rho) / t.sinr;
  return t;
}

CVector JointObjective::gradient(const CVector& x) const {
  const int T = scenario_.tx_antennas;
  const int N = scenario_.symbols;
  const double rho = scenario_.rho;
  Eigen::Map<const CMatrix> X(x.data(), T, N);

  const CMatrix grad_mui = 2.0 * channel_.H.adjoint() * (channel_.H * X - symbols_.S);
  CVector g = rho * Eigen::Map<const CVector>(grad_mui.data(), grad_mui.size());
  g += 2.0 * (1.0 - rho) * scenario_.lambda * (x - reference_);

  if (rho < 1.0) {
    // 1/SINR = (x^H R_i x + c) / (x^H R_t x)
    const CVector ft = sensing_.target_factor.adjoint() * x;
    const double num = sensing_.interference_energy(x) + sensing_.noise_term;
    const double den = ft.squaredNorm();
    CVector grad_num = CVector::Zero(x.size());
    if (sensing_.interference_factor.cols() > 0)
      grad_num = 2.0 * sensing_.interference_factor * (sensing_.interference_factor.adjoint() * x);
    const CVector grad_den = 2.0 * sensing_.target_factor * ft;
    g += (1.0 - rho) * (grad_num * den - grad_den * num) / (den * den);
  }
  return g;
}

}  // namespace isac
