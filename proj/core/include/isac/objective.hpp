// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isac/comm.hpp"
#include "isac/radar.hpp"

namespace isac {

struct ObjectiveTerms {
  double total = 0.0;
  double mui = 0.0;         // ||H~ x - s||^2
  double sinr = 0.0;        // linear sensing SINR at the fixed filter
  double similarity = 0.0;  // ||x - x0||^2
};

/// Weighted design cost with the receive filter held fixed:
///   rho ||H~ x - s||^2 + (1 - rho) / SINR(x, w) + (1 - rho) lambda ||x - x0||^2.
class JointObjective {
 public:
  JointObjective(const Scenario& scenario, const Channel& channel, const SymbolMatrix& symbols,
                 const ReceiveFilter& filter, const Waveform& reference);

  ObjectiveTerms evaluate(const CVector& x) const;
  double value(const CVector& x) const { return evaluate(x).total; }

  /// Conjugate (Wirtinger) gradient 2 df/dx^*: the first-order change of the
  /// cost along a complex direction d is Re(gradient^H d).
  CVector gradient(const CVector& x) const;

  const SensingMatrices& sensing() const { return sensing_; }

 private:
  Scenario scenario_;
  Channel channel_;
  SymbolMatrix symbols_;
  SensingMatrices sensing_;
  CVector reference_;
};

}  // namespace isac
