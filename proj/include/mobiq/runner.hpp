#pragma once

#include <string>
#include <vector>

#include "mobiq/config.hpp"

namespace mobiq {

struct RunOptions {
    std::string out_dir = "out";
    int workers = 1;  // 0 = one per hardware thread
};

enum class SweepAxisKind { Velocity, Model, Lambda, Rho };

struct SweepAxis {
    SweepAxisKind kind = SweepAxisKind::Velocity;
    std::vector<double> numeric;       // velocity / lambda / rho values
    std::vector<std::string> models;   // mobility model tokens
};

// Parses --axis/--values. Velocity values must be positive, strictly
// ascending, and integer multiples of the first one; model tokens must name
// mobility kinds. Violations raise ConfigError.
SweepAxis parse_sweep_axis(const std::string& axis, const std::vector<std::string>& values);

// Returns the config with one sweep point applied. Velocity sets the moving
// models' speed (Brownian motion gets the sigma whose mean per-tick step
// matches that speed); lambda replaces the arrival rate; rho sets the arrival
// rate to rho * P(level crossing) / slot and requires the indicator policy.
ExperimentConfig apply_sweep_point(const ExperimentConfig& base, const SweepAxis& axis,
                                   std::size_t index);

// Label used in paths and summary rows, e.g. "v100", "brownian", "rho0.97".
std::string sweep_point_label(const SweepAxis& axis, std::size_t index);

// Mobility kind token plus the speed column value reported in CSV rows (the
// matched speed for Brownian motion, 0 for static).
std::string model_token(const ExperimentConfig& config);
double velocity_column(const ExperimentConfig& config);

// Executes the runs and writes <out>/config.ini, run.log, summary.csv and the
// per-run CSVs under runs/<point>/rep<k>/. Outputs are byte-identical for a
// fixed config and seed no matter how many workers execute the jobs. Returns
// the summary.csv path.
std::string run_simulate(const ExperimentConfig& config, const RunOptions& options);
std::string run_sweep(const ExperimentConfig& config, const SweepAxis& axis,
                      const RunOptions& options);

// Evaluates the config's [analytics] quantities (all applicable ones when the
// list is empty) and writes analyze.csv; also returns the table text that the
// CLI echoes. For sweeps each point contributes its own rows.
struct AnalyzeOutput {
    std::string csv_path;
    std::string echo;  // "quantity value" lines for the terminal
};
AnalyzeOutput run_analyze(const ExperimentConfig& config, const RunOptions& options);
AnalyzeOutput run_analyze_sweep(const ExperimentConfig& config, const SweepAxis& axis,
                                const RunOptions& options);

}  // namespace mobiq
