// SPDX-License-Identifier: Apache-2.0
//
// CSV and manifest output for runs and sweeps.
//
//   runs.csv          method,axis_value,seed,sum_rate,sinr_db,mui,runtime_ms
//   summary.csv       method,axis_value,seeds,mean_sum_rate,mean_sinr_db,mean_mui
//   trace_<id>.csv    iter,r_primal,s_dual,objective,mui,sinr_sensing_db
//   convergence.csv   method,axis_value,seed,outer_iter,objective,sinr_db,sinr_db_prev_filter,mui
//   beampattern.csv   theta_deg,gain_db,method
//   manifest.json     scenario, sweep and version
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "isac/driver.hpp"

namespace isac {

struct RunRow {
  std::string method;
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  double sum_rate = 0.0;
  double sinr_db = 0.0;
  double mui = 0.0;
  double runtime_ms = 0.0;
};

struct EmitOptions {
  /// Wall-clock times differ between invocations; without this flag the
  /// runtime_ms column is written as 0 so that runs.csv is reproducible.
  bool record_timing = false;
  bool write_traces = true;
  bool write_beampattern = true;
  std::optional<SweepSpec> sweep;
  std::string command;
};

/// Version string of the build (git describe at configure time).
std::string library_version();

std::string run_id(const RunResult& r);

void write_runs_csv(std::ostream& out, const std::vector<RunResult>& results, bool record_timing);
std::vector<RunRow> read_runs_csv(const std::filesystem::path& path);
void write_summary_csv(std::ostream& out, const std::vector<SweepSummaryRow>& rows);
void write_trace_csv(std::ostream& out, const RunResult& result);
void write_convergence_csv(std::ostream& out, const std::vector<RunResult>& results);
/// One curve per method, taken from that method's first result.
void write_beampattern_csv(std::ostream& out, const std::vector<RunResult>& results, const std::vector<double>& grid);
std::string manifest_json(const std::vector<RunResult>& results, const Scenario& base, const EmitOptions& options);

/// Writes every file above into `dir` (created if missing). Throws Error when
/// the directory or a file cannot be written.
void emit_results(const std::vector<RunResult>& results, const Scenario& base, const std::filesystem::path& dir,
                  const EmitOptions& options = {});

}  // namespace isac
