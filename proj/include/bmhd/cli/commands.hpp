#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bmhd/cli/config.hpp"
#include "bmhd/cli/manifest.hpp"
#include "bmhd/common/error.hpp"
#include "bmhd/decay/functionals.hpp"
#include "bmhd/spectral/field.hpp"

namespace bmhd::cli {

enum ExitCode : int { kExitPass = 0, kExitGate = 2, kExitConfig = 3, kExitNumeric = 4 };

/// Config, parse, I/O and precondition problems map to 3, numerical
/// breakdowns (blow-up, poor fit, non-finite values) to 4.
int exit_code_for(ErrorKind kind);

struct Gate {
  std::string name;
  bool passed = true;
  std::string detail;
};

/// State shared with the dispatcher: the latest solver state feeds the
/// diagnostic bundle when a run aborts.
struct RunContext {
  std::ostream* log = nullptr;
  std::optional<StateVector> last_state;
  std::vector<Gate> gates;

  void gate(const std::string& name, bool passed, const std::string& detail);
  void say(const std::string& line) const;
};

/// Runs one experiment into c.output_dir: config.toml, the artifacts and
/// manifest.json. Returns the exit code. On an error the directory gets
/// diagnostics/ (config, error, last state) and the manifest is still written.
int run(const ExperimentConfig& c, std::ostream& log);

void run_linear_decay(const ExperimentConfig& c, OutputDir& out, RunContext& ctx);
void run_symbol_sweep(const ExperimentConfig& c, OutputDir& out, RunContext& ctx);
void run_harness(const ExperimentConfig& c, OutputDir& out, RunContext& ctx);
void run_simulate(const ExperimentConfig& c, OutputDir& out, RunContext& ctx);
void run_duhamel_check(const ExperimentConfig& c, OutputDir& out, RunContext& ctx);
void run_decay_report(const ExperimentConfig& c, OutputDir& out, RunContext& ctx);

// ---- simulate support ----------------------------------------------------------

/// Small random data: every component gets exp(-|xi|^2 / (2 width^2)) times
/// complex normal coefficients on |k_j| <= k_max, keyed by integer
/// wavevector; H is Leray projected and the largest component sup norm is
/// scaled to amplitude.
StateVector small_data(const Grid& g, std::uint64_t seed, double amplitude, double width, int k_max);

/// Block-norm history as CSV: metadata comments, then one row per (time,
/// key) with t, key, k_min, zero_mode_dropped and the block values.
std::string history_csv(const NormHistory& h);
NormHistory read_history_csv(const std::string& text);

// ---- plot ------------------------------------------------------------------------

struct PlotOptions {
  std::vector<std::string> series;  // empty: every series
  std::string title;
  double fit_t_lo = 0.0;  // reference-line fit window; 0 means the whole trace
  double fit_t_hi = 0.0;
};

/// Renders a trace CSV (log-log norms with predicted-rate reference lines)
/// or an eigen_sweep CSV (margin against |xi| with a zero line). Malformed
/// input is a Parse error with the line number.
std::string plot_csv(const std::string& text, const PlotOptions& opts);

}  // namespace bmhd::cli
