#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qclock/dispersion.hpp"
#include "qclock/engine.hpp"
#include "qclock/grid.hpp"
#include "qclock/propagator.hpp"
#include "qclock/pulse.hpp"

namespace qclock {

// Full description of one simulation, mirroring the JSON configuration tree.
// Matrices appear in files as nested arrays of [re, im] pairs (row-major) or
// as preset names.
struct SimConfig {
    // grid
    int n_points = 0;
    double length = 0.0;
    double origin = 0.0;
    // pulse
    ClockPulse pulse;
    // dispersion
    std::string dispersion_kind = "linear";
    double v_g = 1.0;
    double mass = 0.0;
    std::vector<std::pair<double, double>> dispersion_table;
    std::string dispersion_table_path;
    // reference speed; defaults to v_g
    double c = 1.0;
    // engine
    int engine_dim = 1;
    Eigen::MatrixXcd h_engine;
    Eigen::VectorXcd engine_initial;  // normalized at build time
    std::vector<std::optional<Eigen::MatrixXcd>> schedule_generators;  // nullopt = identity marker
    // windows
    bool has_windows = false;
    double window_width = 0.0;
    std::string window_pattern = "explicit";
    double window_origin = 0.0;
    // stepping
    double dt = 1e-2;
    std::string splitting = "strang";
    int steps_per_record = 1;
    double window_dt_ratio = 100.0;
    // run
    double duration = 0.0;
    std::string out_dir = "out";
    long long seed = 0;  // consumed only by property tests
    bool dump_state = false;
    // protocol (optional)
    bool has_protocol = false;
    std::string mode = "intensity";
    std::vector<Eigen::MatrixXcd> protocol_target;  // piecewise-constant target samples
    double protocol_target_width = 0.0;             // defaults to window_width
    double protocol_origin = 0.0;                   // defaults to window_origin
};

// Parses and validates. Throws ConfigError with the offending field path;
// syntax errors carry the line number.
SimConfig parse_config(const std::string& json_text);
SimConfig load_config(const std::string& path);

// Canonical serialization; parse(serialize(cfg)) reproduces cfg.
std::string serialize_config(const SimConfig& cfg);

// Builders for the simulation objects described by a validated config.
SpatialGrid make_grid(const SimConfig& cfg);
DispersionRelation make_dispersion(const SimConfig& cfg);
HermitianOp make_engine_hamiltonian(const SimConfig& cfg);
GeneratorSchedule make_schedule(const SimConfig& cfg);
StepConfig make_step_config(const SimConfig& cfg);

// Soft-invariant annotations (quasimonochromaticity, window coverage,
// omega * W margin); these are logged, not fatal.
std::vector<std::string> config_annotations(const SimConfig& cfg);

}  // namespace qclock
