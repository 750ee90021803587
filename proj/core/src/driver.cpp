// SPDX-License-Identifier: Apache-2.0
#include "isac/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "isac/objective.hpp"

namespace isac {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

enum class WaveformStep { Admm, ProjectedGradient };

RunResult alternate(WaveformStep step, Method tag, const Scenario& scenario, const Channel& channel,
                    const SymbolMatrix& symbols) {
  scenario.validate();
  const auto start = Clock::now();
  const Waveform reference = lfm_reference(scenario);
  Waveform x = initial_waveform(scenario, channel, symbols);
  ReceiveFilter w = mvdr_filter(x, scenario);
  double prev_cost = JointObjective(scenario, channel, symbols, w, reference).value(x.vector());

  RunResult result;
  result.method = tag;
  result.scenario = scenario;
  int inner_offset = 0;
  for (int k = 0; k < scenario.max_outer; ++k) {
    Waveform x_next;
    int inner = 0;
    if (step == WaveformStep::Admm) {
      AdmmSolution sol = solve_waveform(x, w, scenario, channel, symbols, reference);
      for (auto row : sol.trace) {
        row.iter += inner_offset;
        result.inner_trace.push_back(row);
      }
      inner = sol.iterations;
      x_next = std::move(sol.x);
    } else {
      PgStepStats stats;
      x_next = projected_gradient_step(x, w, scenario, channel, symbols, reference, &stats);
      inner = stats.iterations;
    }
    inner_offset += inner;

    const double sinr_prev_filter = sensing_sinr(x_next, w, scenario);
    ReceiveFilter w_next = mvdr_filter(x_next, scenario);
    const ObjectiveTerms terms = JointObjective(scenario, channel, symbols, w_next, reference).evaluate(x_next.vector());
    if (!std::isfinite(terms.total)) throw DivergenceError("alternating_optimize", k + 1);

    result.outer_trace.push_back(
        {k + 1, terms.total, linear_to_db(terms.sinr), linear_to_db(sinr_prev_filter), terms.mui, inner});
    x = std::move(x_next);
    w = std::move(w_next);
    const bool settled = std::abs(terms.total - prev_cost) < scenario.outer_tol * std::abs(prev_cost);
    prev_cost = terms.total;
    if (settled) break;
  }

  result.comm = comm_metrics(x, channel, symbols, scenario.comm_noise);
  result.sinr_db = linear_to_db(sensing_sinr(x, w, scenario));
  result.waveform = std::move(x);
  result.filter = std::move(w);
  result.runtime_ms = elapsed_ms(start);
  return result;
}

RunResult fixed_waveform(Method tag, Waveform x, const Scenario& scenario, const Channel& channel,
                         const SymbolMatrix& symbols, bool warning, Clock::time_point start) {
  RunResult result;
  result.method = tag;
  result.scenario = scenario;
  result.filter = mvdr_filter(x, scenario);
  result.comm = comm_metrics(x, channel, symbols, scenario.comm_noise);
  const double sinr = sensing_sinr(x, result.filter, scenario);
  result.sinr_db = linear_to_db(sinr);
  const ObjectiveTerms terms =
      JointObjective(scenario, channel, symbols, result.filter, lfm_reference(scenario)).evaluate(x.vector());
  result.outer_trace.push_back({1, terms.total, result.sinr_db, result.sinr_db, terms.mui, 0});
  result.waveform = std::move(x);
  result.warning = warning;
  result.runtime_ms = elapsed_ms(start);
  return result;
}

}  // namespace

std::string_view method_tag(Method m) {
  switch (m) {
    case Method::Proposed: return "proposed";
    case Method::Lfm: return "lfm";
    case Method::ZeroMui: return "zero_mui";
    case Method::PgBaseline: return "pg_baseline";
  }
  return "unknown";
}

std::string_view method_label(Method m) {
  if (m == Method::PgBaseline) return "pg_baseline (stand-in)";
  return method_tag(m);
}

Method parse_method(std::string_view tag) {
  for (Method m : {Method::Proposed, Method::Lfm, Method::ZeroMui, Method::PgBaseline})
    if (tag == method_tag(m) || tag == method_label(m)) return m;
  throw ConfigError("unknown method '" + std::string(tag) + "' (expected proposed, lfm, zero_mui or pg_baseline)");
}

std::vector<Method> parse_methods(std::string_view list) {
  std::vector<Method> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    std::string_view item = list.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      const Method m = parse_method(item);
      if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError("method list is empty");
  return out;
}

RunResult alternating_optimize(const Scenario& scenario, const Channel& channel, const SymbolMatrix& symbols) {
  return alternate(WaveformStep::Admm, Method::Proposed, scenario, channel, symbols);
}

RunResult pg_baseline(const Scenario& scenario, const Channel& channel, const SymbolMatrix& symbols) {
  return alternate(WaveformStep::ProjectedGradient, Method::PgBaseline, scenario, channel, symbols);
}

RunResult run_method(Method method, const Scenario& scenario, const Channel& channel, const SymbolMatrix& symbols) {
  const auto start = Clock::now();
  switch (method) {
    case Method::Proposed: return alternating_optimize(scenario, channel, symbols);
    case Method::PgBaseline: return pg_baseline(scenario, channel, symbols);
    case Method::Lfm: return fixed_waveform(method, lfm_reference(scenario), scenario, channel, symbols, false, start);
    case Method::ZeroMui: {
      auto zf = zero_mui_precoder(channel, symbols, scenario.total_power);
      return fixed_waveform(method, std::move(zf.waveform), scenario, channel, symbols, zf.rank_deficient, start);
    }
  }
  throw ConfigError("unknown method");
}

RunResult run_method(Method method, const Scenario& scenario) {
  return run_method(method, scenario, generate_channel(scenario), generate_symbols(scenario));
}

void SweepSpec::validate() const {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw ConfigError("sweep values must be strictly increasing");
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  if (methods.empty()) throw ConfigError("sweep needs at least one method");
}

std::string_view axis_name(SweepSpec::Axis axis) { return axis == SweepSpec::Axis::SnrDb ? "snr_db" : "rho"; }

Scenario apply_axis(const Scenario& base, SweepSpec::Axis axis, double value) {
  Scenario s = base;
  if (axis == SweepSpec::Axis::SnrDb)
    s.comm_noise = s.total_power / db_to_linear(value);
  else
    s.rho = value;
  return s;
}

std::vector<RunResult> run_sweep(const SweepSpec& spec, const Scenario& base) {
  spec.validate();
  struct Cell {
    double value;
    std::uint64_t seed;
    Method method;
  };
  std::vector<Cell> cells;
  for (double v : spec.values)
    for (std::uint64_t seed : spec.seeds)
      for (Method m : spec.methods) cells.push_back({v, seed, m});

  std::vector<RunResult> results(cells.size());
  // Each cell regenerates its own channel and symbols from its seed, so the
  // outcome does not depend on which worker runs it.
  auto run_cell = [&](std::size_t i) {
    Scenario s = apply_axis(base, spec.axis, cells[i].value);
    s.seed = cells[i].seed;
    s.validate();
    results[i] = run_method(cells[i].method, s);
    results[i].axis_value = cells[i].value;
  };

  const unsigned workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), cells.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
          try {
            run_cell(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::vector<SweepSummaryRow> summarize(const std::vector<RunResult>& results) {
  std::map<std::pair<double, int>, SweepSummaryRow> acc;
  for (const auto& r : results) {
    auto& row = acc[{r.axis_value, static_cast<int>(r.method)}];
    row.method = r.method;
    row.axis_value = r.axis_value;
    row.seeds += 1;
    row.mean_sum_rate += r.comm.sum_rate;
    row.mean_sinr_db += r.sinr_db;
    row.mean_mui += r.comm.mui_energy;
  }
  std::vector<SweepSummaryRow> out;
  for (auto& [key, row] : acc) {
    row.mean_sum_rate /= row.seeds;
    row.mean_sinr_db /= row.seeds;
    row.mean_mui /= row.seeds;
    out.push_back(row);
  }
  return out;
}

}  // namespace isac
