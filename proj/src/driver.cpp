#include "qclock/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "qclock/csv.hpp"
#include "qclock/errors.hpp"
#include "qclock/format.hpp"
#include "qclock/oracle.hpp"

namespace qclock {

using nlohmann::json;

RunOutput run_simulation(const SimConfig& cfg) {
    const SpatialGrid grid = make_grid(cfg);
    const DispersionRelation dispersion = make_dispersion(cfg);
    const HermitianOp h_engine = make_engine_hamiltonian(cfg);
    const GeneratorSchedule schedule = make_schedule(cfg);
    const StepConfig stepping = make_step_config(cfg);

    const ClockAmplitudes pulse = make_gaussian_pulse(grid, cfg.pulse);
    const JointState initial = JointState::product(cfg.engine_initial, pulse);
    RunOutput out{cfg, evolve(initial, schedule, h_engine, dispersion, stepping, cfg.duration),
                  config_annotations(cfg), std::nullopt};

    if (cfg.has_protocol && !cfg.protocol_target.empty()) {
        std::vector<HermitianOp> samples;
        samples.reserve(cfg.protocol_target.size());
        for (const auto& m : cfg.protocol_target) samples.emplace_back(m);
        const TargetEvolution target =
            TargetEvolution::piecewise_constant(std::move(samples), cfg.protocol_target_width);
        ProtocolSetup setup{grid, cfg.pulse, dispersion, h_engine, stepping, cfg.duration};
        out.fidelity = protocol_fidelity(target, cfg.window_width, cfg.protocol_origin, setup);
    }
    return out;
}

namespace {

double min_uncertainty_margin(const std::vector<DiagnosticsRecord>& records) {
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
        if (r.var_hc <= 0.0) continue;
        min_margin = std::min(min_margin, uncertainty_check(r).margin);
    }
    return min_margin;
}

}  // namespace

void write_run_outputs(const RunOutput& output, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    {
        std::ofstream csv(out_dir + "/trajectory.csv", std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write " + out_dir + "/trajectory.csv");
        write_trajectory_csv(output.trajectory.records, csv);
    }
    {
        std::ofstream summary(out_dir + "/summary.txt", std::ios::binary);
        const auto& records = output.trajectory.records;
        const auto& last = records.back();
        summary << "records: " << records.size() << "\n";
        summary << "truncated: " << (output.trajectory.truncated ? 1 : 0) << "\n";
        summary << "final_t: " << fmt17(last.t) << "\n";
        summary << "final_mean_T: " << fmt17(last.mean_T) << "\n";
        summary << "final_D: " << fmt17(last.degradation) << "\n";
        summary << "final_D_excess: " << fmt17(last.degradation_excess) << "\n";
        summary << "min_bound_margin: " << fmt17(min_uncertainty_margin(records)) << "\n";
        summary << "mode: " << last.mode << "\n";
        if (output.fidelity) {
            summary << "F_e: " << fmt17(output.fidelity->entanglement_fidelity) << "\n";
            summary << "F_avg: " << fmt17(output.fidelity->average_gate_fidelity) << "\n";
        }
        for (const auto& note : output.annotations) summary << "annotation: " << note << "\n";
    }
    if (output.fidelity) {
        std::ofstream report(out_dir + "/fidelity_report.txt", std::ios::binary);
        write_fidelity_report(*output.fidelity, report);
    }
    if (output.config.dump_state) {
        save_state(output.trajectory.final_state, out_dir + "/final_state.qclk");
    }
}

OracleComparison oracle_comparison(const SimConfig& cfg) {
    const SpatialGrid grid = make_grid(cfg);
    const DispersionRelation dispersion = make_dispersion(cfg);
    const HermitianOp h_engine = make_engine_hamiltonian(cfg);
    const GeneratorSchedule schedule = make_schedule(cfg);
    StepConfig stepping = make_step_config(cfg);
    stepping.steps_per_record = std::numeric_limits<int>::max();

    const ClockAmplitudes pulse = make_gaussian_pulse(grid, cfg.pulse);
    const JointState initial = JointState::product(cfg.engine_initial, pulse);

    const DenseJointHamiltonian dense = build_dense(grid, dispersion, h_engine, schedule);
    const Trajectory traj =
        evolve(initial, schedule, h_engine, dispersion, stepping, cfg.duration);
    const Eigen::VectorXcd dense_final = exact_evolve(dense, flatten(initial), cfg.duration);
    const JointState dense_state = unflatten(grid, h_engine.dim(), dense_final);

    OracleComparison cmp;
    cmp.joint_dimension = dense.total.rows();
    cmp.max_amplitude_deviation =
        (traj.final_state.amplitudes() - dense_state.amplitudes()).cwiseAbs().maxCoeff();
    cmp.split_norm = traj.final_state.norm();
    cmp.dense_norm = dense_state.norm();
    cmp.energy_drift =
        std::abs(traj.records.back().energy - traj.records.front().energy);
    return cmp;
}

namespace {

struct SweepAxis {
    std::string name;
    std::vector<json> values;
};

SimConfig apply_axis(SimConfig cfg, const std::string& axis, const json& value) {
    auto number = [&](const char* name) {
        if (!value.is_number()) {
            throw ConfigError("sweep." + axis, std::string("axis '") + name + "' needs numbers");
        }
        return value.get<double>();
    };
    if (axis == "W") {
        if (!cfg.has_windows) throw ConfigError("sweep.W", "config has no windows section");
        cfg.window_width = number("W");
        if (!cfg.protocol_target.empty() && cfg.protocol_target_width == 0.0) {
            cfg.protocol_target_width = cfg.window_width;
        }
    } else if (axis == "omega") {
        cfg.pulse.bandwidth = number("omega");
    } else if (axis == "M") {
        if (cfg.dispersion_kind != "massive") {
            throw ConfigError("sweep.M", "config dispersion is not massive");
        }
        cfg.mass = number("M");
    } else if (axis == "dt") {
        cfg.dt = number("dt");
    } else if (axis == "pattern") {
        if (!value.is_string()) throw ConfigError("sweep.pattern", "axis needs strings");
        cfg.window_pattern = value.get<std::string>();
    } else if (axis == "mode") {
        if (!value.is_string()) throw ConfigError("sweep.mode", "axis needs strings");
        cfg.mode = value.get<std::string>();
        cfg.has_protocol = true;
    } else {
        throw ConfigError("sweep." + axis,
                          "unknown axis (expected W, omega, M, dt, pattern or mode)");
    }
    return cfg;
}

std::string cell(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : fmt17(v.get<double>());
    std::replace(s.begin(), s.end(), ',', ';');
    return s;
}

std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

struct SweepRow {
    std::vector<std::string> cells;
    bool failed = false;
};

}  // namespace

SweepOutcome run_sweep(const std::string& config_text, const std::string& out_dir, int jobs) {
    const SimConfig base = parse_config(config_text);
    const json root = json::parse(config_text);
    const auto sweep_it = root.find("sweep");
    if (sweep_it == root.end() || !sweep_it->is_object() || sweep_it->empty()) {
        throw ConfigError("sweep", "sweep configs need a nonempty 'sweep' object");
    }
    const bool with_oracle = root.value("sweep_oracle", false);

    std::vector<SweepAxis> axes;
    size_t n_points = 1;
    for (auto it = sweep_it->begin(); it != sweep_it->end(); ++it) {
        if (!it.value().is_array() || it.value().empty()) {
            throw ConfigError("sweep." + it.key(), "axis must be a nonempty array");
        }
        axes.push_back({it.key(), std::vector<json>(it.value().begin(), it.value().end())});
        n_points *= it.value().size();
    }
    if (n_points > 10000) {
        throw ConfigError("sweep", "cartesian product has " + std::to_string(n_points) +
                                       " points, above the 10000 limit");
    }

    std::vector<SweepRow> rows(n_points);
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t p = next.fetch_add(1); p < n_points; p = next.fetch_add(1)) {
            SweepRow& row = rows[p];
            row.cells.push_back(std::to_string(p));
            // Decode the cartesian index; the last axis varies fastest.
            std::vector<size_t> idx(axes.size());
            size_t rest = p;
            for (size_t a = axes.size(); a-- > 0;) {
                idx[a] = rest % axes[a].values.size();
                rest /= axes[a].values.size();
            }
            for (size_t a = 0; a < axes.size(); ++a) {
                row.cells.push_back(cell(axes[a].values[idx[a]]));
            }
            try {
                SimConfig cfg = base;
                for (size_t a = 0; a < axes.size(); ++a) {
                    cfg = apply_axis(std::move(cfg), axes[a].name, axes[a].values[idx[a]]);
                }
                const RunOutput out = run_simulation(cfg);
                const auto& last = out.trajectory.records.back();
                row.cells.push_back(fmt17(last.degradation));
                row.cells.push_back(out.fidelity ? fmt17(out.fidelity->average_gate_fidelity)
                                                 : std::string());
                row.cells.push_back(fmt17(min_uncertainty_margin(out.trajectory.records)));
                if (with_oracle) {
                    row.cells.push_back(fmt17(oracle_comparison(cfg).max_amplitude_deviation));
                } else {
                    row.cells.emplace_back();
                }
                row.cells.push_back(out.trajectory.truncated ? "truncated" : "ok");
                row.failed = out.trajectory.truncated;
            } catch (const std::exception& err) {
                row.cells.resize(1 + axes.size() + 4);
                row.cells.push_back("error: " + sanitize(err.what()));
                row.failed = true;
            }
        }
    };

    const int n_workers = std::max(1, std::min<int>(jobs, static_cast<int>(n_points)));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    SweepOutcome outcome;
    outcome.points = static_cast<int>(n_points);
    outcome.csv_path = out_dir + "/sweep_summary.csv";
    std::ofstream csv(outcome.csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + outcome.csv_path);
    csv << "index";
    for (const auto& axis : axes) csv << ',' << axis.name;
    csv << ",final_D,F_avg,min_bound_margin,oracle_error,status\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.cells.size(); ++i) {
            if (i) csv << ',';
            csv << row.cells[i];
        }
        csv << '\n';
        if (row.failed) ++outcome.failures;
    }
    return outcome;
}

}  // namespace qclock
