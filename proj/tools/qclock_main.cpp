// Command-line front end: run | sweep | verify | oracle.
// Exit codes: 0 success, 1 configuration error, 2 runtime guard
// (wraparound truncation, window misalignment, oversized oracle).

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qclock/config.hpp"
#include "qclock/driver.hpp"
#include "qclock/errors.hpp"
#include "qclock/format.hpp"
#include "qclock/verify.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& out_override,
                const std::string& mode_override, bool quiet) {
    qclock::SimConfig cfg = qclock::load_config(config_path);
    if (!mode_override.empty()) cfg.mode = mode_override;
    const std::string out_dir = out_override.empty() ? cfg.out_dir : out_override;
    const qclock::RunOutput output = qclock::run_simulation(cfg);
    qclock::write_run_outputs(output, out_dir);
    if (!quiet) {
        std::cout << "wrote " << out_dir << "/trajectory.csv (" << output.trajectory.records.size()
                  << " records)\n";
        for (const auto& note : output.annotations) std::cout << "annotation: " << note << "\n";
        if (output.trajectory.truncated) {
            std::cout << "run truncated: wraparound sentinel tripped\n";
        }
    }
    return output.trajectory.truncated ? 2 : 0;
}

int sweep_command(const std::string& config_path, const std::string& out_override, int jobs,
                  bool quiet) {
    std::ifstream in(config_path);
    if (!in) throw qclock::ConfigError("(file)", "cannot open '" + config_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const qclock::SimConfig base = qclock::parse_config(buffer.str());
    const std::string out_dir = out_override.empty() ? base.out_dir : out_override;
    const qclock::SweepOutcome outcome = qclock::run_sweep(buffer.str(), out_dir, jobs);
    if (!quiet) {
        std::cout << "wrote " << outcome.csv_path << " (" << outcome.points << " points, "
                  << outcome.failures << " flagged)\n";
    }
    return 0;
}

int verify_command(const std::string& fault, bool quiet) {
    bool inject = false;
    if (fault == "dispersion-derivative") {
        inject = true;
    } else if (!fault.empty()) {
        std::cerr << "unknown fault '" << fault << "' (supported: dispersion-derivative)\n";
        return 1;
    }
    const qclock::VerificationReport report = qclock::run_verification(inject);
    for (const auto& check : report.checks) {
        std::printf("%-38s %s  measured %-24s tol %-12s %5.2fs%s%s\n", check.name.c_str(),
                    check.pass ? "PASS" : "FAIL", qclock::fmt17(check.measured).c_str(),
                    qclock::fmt17(check.tolerance).c_str(), check.seconds,
                    check.detail.empty() ? "" : "  ", check.detail.c_str());
    }
    if (!quiet) {
        std::printf("%zu checks, %s\n", report.checks.size(),
                    report.all_pass ? "all passed" : "FAILURES present");
    }
    return report.all_pass ? 0 : 1;
}

int oracle_command(const std::string& config_path, const std::string& out_override, bool quiet) {
    const qclock::SimConfig cfg = qclock::load_config(config_path);
    const qclock::OracleComparison cmp = qclock::oracle_comparison(cfg);
    const std::string out_dir = out_override.empty() ? cfg.out_dir : out_override;
    std::filesystem::create_directories(out_dir);
    std::ofstream report(out_dir + "/oracle_report.txt", std::ios::binary);
    report << "joint_dimension: " << cmp.joint_dimension << "\n";
    report << "max_amplitude_deviation: " << qclock::fmt17(cmp.max_amplitude_deviation) << "\n";
    report << "split_norm: " << qclock::fmt17(cmp.split_norm) << "\n";
    report << "dense_norm: " << qclock::fmt17(cmp.dense_norm) << "\n";
    report << "energy_drift: " << qclock::fmt17(cmp.energy_drift) << "\n";
    if (!quiet) {
        std::cout << "max amplitude deviation " << qclock::fmt17(cmp.max_amplitude_deviation)
                  << " (joint dimension " << cmp.joint_dimension << ")\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clock-driven quantum dynamics simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir, mode, fault;
    int jobs = 1;
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress progress output");

    auto* run = app.add_subcommand("run", "run one simulation and write its trajectory");
    run->add_option("--config", config_path, "configuration file")->required();
    run->add_option("--out", out_dir, "output directory override");
    run->add_option("--mode", mode, "modulation mode override (intensity|paper_sqrt)")
        ->check(CLI::IsMember({"intensity", "paper_sqrt"}));

    auto* sweep = app.add_subcommand("sweep", "run the cartesian parameter sweep");
    sweep->add_option("--config", config_path, "configuration file with a sweep section")
        ->required();
    sweep->add_option("--out", out_dir, "output directory override");
    sweep->add_option("--jobs", jobs, "worker pool size")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "run the built-in invariant battery");
    verify->add_option("--fault-inject", fault,
                       "tamper a named quantity to demonstrate check sensitivity");

    auto* oracle = app.add_subcommand("oracle", "dense-matrix comparison on a small config");
    oracle->add_option("--config", config_path, "configuration file")->required();
    oracle->add_option("--out", out_dir, "output directory override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(config_path, out_dir, mode, quiet);
        if (sweep->parsed()) return sweep_command(config_path, out_dir, jobs, quiet);
        if (verify->parsed()) return verify_command(fault, quiet);
        return oracle_command(config_path, out_dir, quiet);
    } catch (const qclock::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 1;
    } catch (const qclock::PulseUnresolvable& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 1;
    } catch (const qclock::PulseTooWide& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 1;
    } catch (const qclock::NotHermitian& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 1;
    } catch (const qclock::WindowGridMisaligned& err) {
        std::cerr << "runtime guard: " << err.what() << "\n";
        return 2;
    } catch (const qclock::TooLarge& err) {
        std::cerr << "runtime guard: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
