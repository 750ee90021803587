// SPDX-License-Identifier: Apache-2.0
//
// Outer alternation between the waveform and the receive filter, the
// comparison methods and the parameter sweeps.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "isac/admm.hpp"
#include "isac/comm.hpp"
#include "isac/radar.hpp"

namespace isac {

enum class Method { Proposed, Lfm, ZeroMui, PgBaseline };

/// Short tag used on the command line: proposed, lfm, zero_mui, pg_baseline.
std::string_view method_tag(Method m);
/// Label written to output files. The projected-gradient method is a generic
/// stand-in and is labeled as such.
std::string_view method_label(Method m);
Method parse_method(std::string_view tag);
std::vector<Method> parse_methods(std::string_view comma_list);

struct OuterTraceRow {
  int outer = 0;
  double objective = 0.0;
  double sinr_db = 0.0;             // SINR(x^{k+1}, w^{k+1})
  double sinr_db_prev_filter = 0.0;  // SINR(x^{k+1}, w^{k})
  double mui = 0.0;
  int inner_iterations = 0;
};

struct RunResult {
  Method method = Method::Proposed;
  Scenario scenario;
  Waveform waveform;
  ReceiveFilter filter;
  CommMetrics comm;
  double sinr_db = 0.0;
  std::vector<OuterTraceRow> outer_trace;
  std::vector<AdmmTraceRow> inner_trace;
  double runtime_ms = 0.0;
  double axis_value = 0.0;
  bool warning = false;  // e.g. rank-deficient channel in the zero-MUI precoder
};

/// Orthogonal chirp reference X0[t, n] = c exp(j 2 pi t n / N) exp(j pi n^2 / N)
/// (n zero-based), constant-modulus by construction.
Waveform lfm_reference(const Scenario& scenario);

/// Starting point of the waveform iteration: CM projection of the zero-MUI
/// precoder for rho >= 0.5, otherwise the chirp reference (InitMode::Auto).
Waveform initial_waveform(const Scenario& scenario, const Channel& channel, const SymbolMatrix& symbols);

/// x^{k+1} = ADMM(x^k, w^k), w^{k+1} = MVDR(x^{k+1}) until the relative change
/// of the design cost drops below outer_tol or max_outer is reached.
RunResult alternating_optimize(const Scenario& scenario, const Channel& channel, const SymbolMatrix& symbols);

struct PgStepStats {
  int iterations = 0;
  int rejected_steps = 0;
  double final_step = 0.0;
};

/// CM-projected gradient descent on the fixed-filter design cost with a
/// backtracking step that never accepts an increase.
Waveform projected_gradient_step(const Waveform& x_init, const ReceiveFilter& filter, const Scenario& scenario,
                                 const Channel& channel, const SymbolMatrix& symbols, const Waveform& reference,
                                 PgStepStats* stats = nullptr, std::vector<double>* accepted_costs = nullptr);

/// Projected-gradient comparison method, same outer alternation as the
/// proposed one.
RunResult pg_baseline(const Scenario& scenario, const Channel& channel, const SymbolMatrix& symbols);

/// Any method on one instance; fixed waveforms (lfm, zero_mui) get an MVDR filter.
RunResult run_method(Method method, const Scenario& scenario, const Channel& channel, const SymbolMatrix& symbols);

/// Regenerates H and S from scenario.seed.
RunResult run_method(Method method, const Scenario& scenario);

struct SweepSpec {
  enum class Axis { SnrDb, Rho };
  Axis axis = Axis::SnrDb;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  std::vector<Method> methods;

  /// Throws ConfigError unless values strictly increase and seeds is non-empty.
  void validate() const;
};

std::string_view axis_name(SweepSpec::Axis axis);

/// Scenario with the sweep axis set to `value`.
Scenario apply_axis(const Scenario& base, SweepSpec::Axis axis, double value);

/// One result per (value, seed, method), ordered value-major, then seed, then
/// method in spec order.
std::vector<RunResult> run_sweep(const SweepSpec& spec, const Scenario& base);

struct SweepSummaryRow {
  Method method = Method::Proposed;
  double axis_value = 0.0;
  int seeds = 0;
  double mean_sum_rate = 0.0;
  double mean_sinr_db = 0.0;
  double mean_mui = 0.0;
};

/// Seed-averaged metrics per (method, value), ordered by value then method.
std::vector<SweepSummaryRow> summarize(const std::vector<RunResult>& results);

}  // namespace isac
