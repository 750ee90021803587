// SPDX-License-Identifier: Apache-2.0
#include "isac/results_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "isac/config.hpp"
#include "json.hpp"

#ifndef ISAC_VERSION
#define ISAC_VERSION "unknown"
#endif

namespace isac {

namespace {

// Shortest round-trip representation is not needed; %.17g is exact and
// deterministic.
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string library_version() { return ISAC_VERSION; }

std::string run_id(const RunResult& r) {
  std::string id = std::string(method_tag(r.method)) + "_" + short_num(r.axis_value) + "_seed" +
                   std::to_string(r.scenario.seed);
  for (char& ch : id)
    if (ch == '+') ch = 'p';
  return id;
}

void write_runs_csv(std::ostream& out, const std::vector<RunResult>& results, bool record_timing) {
  out << "method,axis_value,seed,sum_rate,sinr_db,mui,runtime_ms\n";
  for (const auto& r : results)
    out << method_label(r.method) << ',' << num(r.axis_value) << ',' << r.scenario.seed << ','
        << num(r.comm.sum_rate) << ',' << num(r.sinr_db) << ',' << num(r.comm.mui_energy) << ','
        << (record_timing ? num(r.runtime_ms) : std::string("0")) << '\n';
}

std::vector<RunRow> read_runs_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "method,axis_value,seed,sum_rate,sinr_db,mui,runtime_ms")
    throw Error("'" + path.string() + "' does not have the runs.csv header");
  std::vector<RunRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 7) throw Error("malformed runs.csv row: " + line);
    RunRow row;
    row.method = f[0];
    row.axis_value = std::stod(f[1]);
    row.seed = std::stoull(f[2]);
    row.sum_rate = std::stod(f[3]);
    row.sinr_db = std::stod(f[4]);
    row.mui = std::stod(f[5]);
    row.runtime_ms = std::stod(f[6]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SweepSummaryRow>& rows) {
  out << "method,axis_value,seeds,mean_sum_rate,mean_sinr_db,mean_mui\n";
  for (const auto& r : rows)
    out << method_label(r.method) << ',' << num(r.axis_value) << ',' << r.seeds << ',' << num(r.mean_sum_rate)
        << ',' << num(r.mean_sinr_db) << ',' << num(r.mean_mui) << '\n';
}

void write_trace_csv(std::ostream& out, const RunResult& result) {
  out << "iter,r_primal,s_dual,objective,mui,sinr_sensing_db\n";
  for (const auto& row : result.inner_trace)
    out << row.iter << ',' << num(row.r_primal) << ',' << num(row.s_dual) << ',' << num(row.objective) << ','
        << num(row.mui) << ',' << num(row.sinr_db) << '\n';
}

void write_convergence_csv(std::ostream& out, const std::vector<RunResult>& results) {
  out << "method,axis_value,seed,outer_iter,objective,sinr_db,sinr_db_prev_filter,mui\n";
  for (const auto& r : results)
    for (const auto& row : r.outer_trace)
      out << method_label(r.method) << ',' << num(r.axis_value) << ',' << r.scenario.seed << ',' << row.outer << ','
          << num(row.objective) << ',' << num(row.sinr_db) << ',' << num(row.sinr_db_prev_filter) << ','
          << num(row.mui) << '\n';
}

void write_beampattern_csv(std::ostream& out, const std::vector<RunResult>& results, const std::vector<double>& grid) {
  out << "theta_deg,gain_db,method\n";
  std::set<Method> done;
  for (const auto& r : results) {
    if (!done.insert(r.method).second) continue;
    for (const auto& p : beampattern(r.waveform, grid, r.scenario))
      out << num(rad_to_deg(p.theta)) << ',' << num(p.gain_db) << ',' << method_label(r.method) << '\n';
  }
}

std::string manifest_json(const std::vector<RunResult>& results, const Scenario& base, const EmitOptions& options) {
  using nlohmann::json;
  json doc;
  doc["version"] = library_version();
  doc["command"] = options.command;
  doc["scenario"] = json::parse(scenario_to_json(base));
  if (options.sweep) {
    json sweep;
    sweep["axis"] = axis_name(options.sweep->axis);
    sweep["values"] = options.sweep->values;
    sweep["seeds"] = options.sweep->seeds;
    json methods = json::array();
    for (Method m : options.sweep->methods) methods.push_back(method_label(m));
    sweep["methods"] = methods;
    doc["sweep"] = sweep;
  }
  doc["runs"] = results.size();
  json ids = json::array();
  for (const auto& r : results) ids.push_back(run_id(r));
  doc["run_ids"] = ids;
  doc["runtime_recorded"] = options.record_timing;
  return doc.dump(2) + "\n";
}

void emit_results(const std::vector<RunResult>& results, const Scenario& base, const std::filesystem::path& dir,
                  const EmitOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw Error("cannot create output directory '" + dir.string() + "'");

  {
    auto out = open_for_write(dir / "runs.csv");
    write_runs_csv(out, results, options.record_timing);
  }
  {
    auto out = open_for_write(dir / "summary.csv");
    write_summary_csv(out, summarize(results));
  }
  {
    auto out = open_for_write(dir / "convergence.csv");
    write_convergence_csv(out, results);
  }
  if (options.write_traces)
    for (const auto& r : results) {
      auto out = open_for_write(dir / ("trace_" + run_id(r) + ".csv"));
      write_trace_csv(out, r);
    }
  if (options.write_beampattern) {
    auto out = open_for_write(dir / "beampattern.csv");
    write_beampattern_csv(out, results, default_beampattern_grid());
  }
  {
    auto out = open_for_write(dir / "manifest.json");
    out << manifest_json(results, base, options);
  }
}

}  // namespace isac
