// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "isac/driver.hpp"
#include "isac/objective.hpp"

namespace isac {

Waveform lfm_reference(const Scenario& scenario) {
  const int T = scenario.tx_antennas;
  const int N = scenario.symbols;
  const double c = scenario.cm_amplitude();
  CMatrix X(T, N);
  for (int n = 0; n < N; ++n) {
    const double chirp = kPi * static_cast<double>(n) * n / N;
    for (int t = 0; t < T; ++t) {
      // reduce t*n mod N before scaling to keep the phase argument small
      const double shift = 2.0 * kPi * static_cast<double>((static_cast<long long>(t) * n) % N) / N;
      X(t, n) = std::polar(c, shift + chirp);
    }
  }
  return Waveform::from_matrix(X, true);
}

Waveform initial_waveform(const Scenario& scenario, const Channel& channel, const SymbolMatrix& symbols) {
  InitMode mode = scenario.init;
  if (mode == InitMode::Auto) mode = scenario.rho >= 0.5 ? InitMode::ZeroMui : InitMode::Lfm;
  const int T = scenario.tx_antennas;
  const int N = scenario.symbols;
  switch (mode) {
    case InitMode::ZeroMui: {
      const auto zf = zero_mui_precoder(channel, symbols, scenario.total_power);
      return project_cm(zf.waveform.vector(), scenario.total_power, T, N);
    }
    case InitMode::RandomPhase: {
      auto rng = make_rng(scenario.seed, RngStream::Init);
      std::uniform_real_distribution<double> phase(-kPi, kPi);
      CVector x(scenario.waveform_length());
      for (Eigen::Index n = 0; n < x.size(); ++n) x[n] = std::polar(scenario.cm_amplitude(), phase(rng));
      return Waveform(std::move(x), T, N, true);
    }
    case InitMode::Lfm:
    case InitMode::Auto:
      break;
  }
  return lfm_reference(scenario);
}

Waveform projected_gradient_step(const Waveform& x_init, const ReceiveFilter& filter, const Scenario& scenario,
                                 const Channel& channel, const SymbolMatrix& symbols, const Waveform& reference,
                                 PgStepStats* stats, std::vector<double>* accepted_costs) {
  constexpr int kMaxHalvings = 40;
  const int T = scenario.tx_antennas;
  const int N = scenario.symbols;
  const JointObjective cost(scenario, channel, symbols, filter, reference);

  // Initial step from a Lipschitz bound of the smooth quadratic terms.
  const double h_norm2 = channel.H.squaredNorm();
  double step = 1.0 / (2.0 * scenario.rho * h_norm2 + 2.0 * (1.0 - scenario.rho) * scenario.lambda + 1.0);

  CVector x = x_init.vector();
  double f = cost.value(x);
  if (accepted_costs) accepted_costs->push_back(f);
  PgStepStats local;
  for (int it = 0; it < scenario.max_inner; ++it) {
    const CVector g = cost.gradient(x);
    if (!g.allFinite()) throw DivergenceError("pg_baseline", it);
    bool accepted = false;
    CVector candidate;
    double f_new = f;
    for (int h = 0; h < kMaxHalvings; ++h) {
      candidate = project_cm(x - step * g, scenario.total_power, T, N).vector();
      f_new = cost.value(candidate);
      if (std::isfinite(f_new) && f_new <= f) {
        accepted = true;
        break;
      }
      step *= 0.5;
      ++local.rejected_steps;
    }
    if (!accepted) break;
    const double decrease = f - f_new;
    x = std::move(candidate);
    f = f_new;
    if (accepted_costs) accepted_costs->push_back(f);
    local.iterations = it + 1;
    step *= 1.5;
    if (decrease <= scenario.eps_primal * std::max(std::abs(f), 1.0)) break;
  }
  local.final_step = step;
  if (stats) *stats = local;
  return Waveform(std::move(x), T, N, true);
}

}  // namespace isac
