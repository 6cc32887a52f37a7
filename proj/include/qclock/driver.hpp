#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qclock/config.hpp"
#include "qclock/propagator.hpp"
#include "qclock/protocol.hpp"

namespace qclock {

struct RunOutput {
    SimConfig config;
    Trajectory trajectory;
    std::vector<std::string> annotations;
    std::optional<FidelityReport> fidelity;
};

// Builds every simulation object from the config and runs the trajectory
// (plus the protocol fidelity reconstruction when configured).
RunOutput run_simulation(const SimConfig& cfg);

// trajectory.csv, summary.txt, fidelity_report.txt and final_state.qclk
// under `out_dir`.
void write_run_outputs(const RunOutput& output, const std::string& out_dir);

struct OracleComparison {
    double max_amplitude_deviation = 0.0;
    double split_norm = 0.0;
    double dense_norm = 0.0;
    double energy_drift = 0.0;
    Eigen::Index joint_dimension = 0;
};

// Runs the same instance through the split-step integrator and the dense
// exact propagator. Throws TooLarge above joint dimension 4096.
OracleComparison oracle_comparison(const SimConfig& cfg);

struct SweepOutcome {
    int points = 0;
    int failures = 0;
    std::string csv_path;
};

// Cartesian sweep over the config's "sweep" axes (subset of
// {W, omega, M, dt, pattern, mode}); one row per point, partial failures
// flagged in the status column. `jobs` sizes the worker pool.
SweepOutcome run_sweep(const std::string& config_text, const std::string& out_dir, int jobs);

}  // namespace qclock
