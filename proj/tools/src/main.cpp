// SPDX-License-Identifier: Apache-2.0
//
// isac: command-line front end for single runs, sweeps and diagnostics.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isac/config.hpp"
#include "isac/driver.hpp"
#include "isac/results_io.hpp"

namespace {

using namespace isac;

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kDivergence = 3, kConstraint = 4 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string methods;
  bool paper_stopping = false;
  bool timing = false;
};

struct SweepFlags {
  int seeds = 50;
  std::vector<double> values;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_methods) {
  c.methods = default_methods;
  cmd->add_option("--config", c.config, "Scenario JSON file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Seed (first seed of a sweep)");
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_option("--methods", c.methods, "Comma list of proposed,lfm,zero_mui,pg_baseline")->capture_default_str();
  cmd->add_flag("--paper-stopping", c.paper_stopping, "Stop inner iterations on r <= eps_p OR s <= eps_d");
  cmd->add_flag("--timing", c.timing, "Record wall-clock runtime in runs.csv");
}

void add_sweep(CLI::App* cmd, SweepFlags& f) {
  cmd->add_option("--seeds", f.seeds, "Number of seeds")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--values", f.values, "Axis values (strictly increasing)")->delimiter(',');
}

Scenario load(const Common& c) {
  Scenario s = c.config.empty() ? default_scenario() : load_scenario(c.config);
  if (c.seed) s.seed = *c.seed;
  if (c.paper_stopping) s.paper_stopping = true;
  s.validate();
  return s;
}

// Every proposed-method waveform must be constant-modulus.
int check_cm(const std::vector<RunResult>& results) {
  for (const auto& r : results) {
    if (r.method != Method::Proposed) continue;
    if (!r.waveform.satisfies_cm(r.scenario.cm_amplitude(), 1e-12)) {
      std::cerr << "isac: constant-modulus check failed for " << run_id(r) << "\n";
      return kConstraint;
    }
  }
  return kOk;
}

void print_summary(const std::vector<RunResult>& results) {
  for (const auto& row : summarize(results))
    std::printf("%-24s %10g  sum_rate %8.4f  sinr %8.3f dB  mui %10.4g  (%d seeds)\n",
                std::string(method_label(row.method)).c_str(), row.axis_value, row.mean_sum_rate, row.mean_sinr_db,
                row.mean_mui, row.seeds);
}

int emit(const std::vector<RunResult>& results, const Scenario& base, const Common& c, const std::string& command,
         std::optional<SweepSpec> spec, bool beampattern) {
  EmitOptions opt;
  opt.record_timing = c.timing;
  opt.write_beampattern = beampattern;
  opt.sweep = std::move(spec);
  opt.command = command;
  emit_results(results, base, c.out, opt);
  print_summary(results);
  std::printf("wrote %s\n", std::filesystem::path(c.out).string().c_str());
  return check_cm(results);
}

int run_single(const Common& c, const std::string& command, bool beampattern) {
  const Scenario s = load(c);
  const auto methods = parse_methods(c.methods);
  const Channel ch = generate_channel(s);
  const SymbolMatrix sym = generate_symbols(s);
  std::vector<RunResult> results;
  for (Method m : methods) {
    results.push_back(run_method(m, s, ch, sym));
    if (results.back().warning) std::cerr << "isac: warning: rank-deficient channel in " << method_tag(m) << "\n";
  }
  return emit(results, s, c, command, std::nullopt, beampattern);
}

int run_trace(const Common& c) {
  const Scenario s = load(c);
  RunResult r = run_method(Method::Proposed, s);
  for (const auto& row : r.outer_trace)
    std::printf("outer %2d  objective %.6g  sinr %.4f dB  mui %.6g  inner %d\n", row.outer, row.objective,
                row.sinr_db, row.mui, row.inner_iterations);
  return emit({r}, s, c, "trace", std::nullopt, false);
}

int run_sweep_cmd(const Common& c, const SweepFlags& f, SweepSpec::Axis axis) {
  const Scenario base = load(c);
  SweepSpec spec;
  spec.axis = axis;
  spec.values = f.values;
  if (spec.values.empty())
    spec.values = axis == SweepSpec::Axis::SnrDb ? std::vector<double>{0, 5, 10, 15, 20, 25, 30}
                                                 : std::vector<double>{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  spec.seeds.resize(f.seeds);
  std::iota(spec.seeds.begin(), spec.seeds.end(), base.seed);
  spec.methods = parse_methods(c.methods);
  spec.validate();
  const auto results = run_sweep(spec, base);
  return emit(results, base, c, axis == SweepSpec::Axis::SnrDb ? "sweep-snr" : "sweep-rho", spec, true);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant-modulus ISAC waveform design by consensus ADMM"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  Common run_c, snr_c, rho_c, beam_c, trace_c;
  SweepFlags snr_f, rho_f;
  auto* run = app.add_subcommand("run", "Single scenario, one result per method");
  add_common(run, run_c, "proposed");
  auto* snr = app.add_subcommand("sweep-snr", "Sweep transmit SNR in dB");
  add_common(snr, snr_c, "proposed,zero_mui,pg_baseline,lfm");
  add_sweep(snr, snr_f);
  auto* rho = app.add_subcommand("sweep-rho", "Sweep the communication/sensing weight");
  add_common(rho, rho_c, "proposed");
  add_sweep(rho, rho_f);
  auto* beam = app.add_subcommand("beampattern", "Transmit beampatterns of the selected methods");
  add_common(beam, beam_c, "proposed,lfm,zero_mui");
  auto* trace = app.add_subcommand("trace", "Convergence trace of the proposed method");
  add_common(trace, trace_c, "proposed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return run_single(run_c, "run", true);
    if (*snr) return run_sweep_cmd(snr_c, snr_f, SweepSpec::Axis::SnrDb);
    if (*rho) return run_sweep_cmd(rho_c, rho_f, SweepSpec::Axis::Rho);
    if (*beam) return run_single(beam_c, "beampattern", true);
    if (*trace) return run_trace(trace_c);
  } catch (const ConfigError& e) {
    std::cerr << "isac: configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "isac: " << e.what() << "\n";
    return kDivergence;
  } catch (const std::exception& e) {
    std::cerr << "isac: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
