#include "qclock/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qclock/errors.hpp"
#include "qclock/format.hpp"

namespace qclock {

namespace {

struct ChannelResult {
    Eigen::MatrixXcd choi;
    Trajectory probe;
};

ChannelResult reconstruct_channel(const GeneratorSchedule& schedule, const ProtocolSetup& setup) {
    const Eigen::Index d = setup.h_engine.dim();
    if (d > 4) {
        throw TooLarge("channel reconstruction is limited to engine dimension 4, got " +
                       std::to_string(d));
    }
    const ClockAmplitudes pulse =
        ClockAmplitudes::normalized(setup.grid, gaussian_envelope(setup.grid, setup.pulse));

    std::vector<Eigen::MatrixXcd> finals;
    finals.reserve(static_cast<size_t>(d));
    bool truncated = false;
    for (Eigen::Index a = 0; a < d; ++a) {
        Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(d);
        basis(a) = 1.0;
        Trajectory traj = evolve(JointState::product(basis, pulse), schedule, setup.h_engine,
                                 setup.dispersion, setup.stepping, setup.duration);
        truncated = truncated || traj.truncated;
        finals.push_back(traj.final_state.amplitudes());
    }
    // Degradation probe: the uniform engine superposition engages every branch.
    Trajectory probe = evolve(
        JointState::product(Eigen::VectorXcd::Constant(d, 1.0), pulse), schedule, setup.h_engine,
        setup.dispersion, setup.stepping, setup.duration);
    probe.truncated = probe.truncated || truncated;

    const double dx = setup.grid.spacing();
    Eigen::MatrixXcd choi(d * d, d * d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            // E(|a><b|) = Tr_C |Phi_a><Phi_b|
            choi.block(a * d, b * d, d, d) = finals[a].transpose() * finals[b].conjugate() * dx;
        }
    }
    return {std::move(choi), std::move(probe)};
}

}  // namespace

Eigen::MatrixXcd realized_channel(const GeneratorSchedule& schedule, const ProtocolSetup& setup) {
    return reconstruct_channel(schedule, setup).choi;
}

double entanglement_fidelity(const Eigen::MatrixXcd& choi,
                             const Eigen::MatrixXcd& target_unitary) {
    const Eigen::Index d = target_unitary.rows();
    if (choi.rows() != d * d || choi.cols() != d * d) {
        throw std::invalid_argument("Choi matrix dimension does not match the target unitary");
    }
    Eigen::VectorXcd phi(d * d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index e = 0; e < d; ++e) {
            phi(a * d + e) = target_unitary(e, a);
        }
    }
    const double overlap = (phi.adjoint() * choi * phi)(0, 0).real();
    return overlap / static_cast<double>(d * d);
}

double average_gate_fidelity(double entanglement_fidelity, Eigen::Index dim) {
    const auto d = static_cast<double>(dim);
    return (d * entanglement_fidelity + 1.0) / (d + 1.0);
}

Eigen::MatrixXcd ideal_window_product(const GeneratorSchedule& schedule,
                                      const HermitianOp& h_engine, double pulse_center,
                                      double group_velocity, double duration) {
    if (group_velocity == 0.0) {
        throw std::invalid_argument("ideal window product requires a moving pulse");
    }
    // Times at which the pulse center crosses a window boundary.
    std::vector<double> breakpoints{0.0, duration};
    for (int i = 0; i <= schedule.size(); ++i) {
        const double boundary = schedule.origin + i * schedule.width;
        const double t = (boundary - pulse_center) / group_velocity;
        if (t > 0.0 && t < duration) breakpoints.push_back(t);
    }
    std::sort(breakpoints.begin(), breakpoints.end());

    const Eigen::Index d = h_engine.dim();
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
    for (size_t s = 0; s + 1 < breakpoints.size(); ++s) {
        const double dt = breakpoints[s + 1] - breakpoints[s];
        if (dt <= 0.0) continue;
        const double mid = pulse_center + group_velocity * (breakpoints[s] + breakpoints[s + 1]) / 2.0;
        const int window = static_cast<int>(std::floor((mid - schedule.origin) / schedule.width));
        Eigen::MatrixXcd generator = h_engine.matrix();
        if (window >= 0 && window < schedule.size()) {
            const auto& slot = schedule.windows[static_cast<size_t>(window)].generator;
            if (slot) generator += slot->matrix() / schedule.width;
            // identity windows: scalar phase only, dropped
        }
        u = hermitian_propagator(HermitianOp(generator), dt) * u;
    }
    return u;
}

FidelityReport protocol_fidelity(const TargetEvolution& target, double window_width,
                                 double schedule_origin, const ProtocolSetup& setup) {
    const GeneratorSchedule schedule = schedule_from_target(
        target, window_width, SchedulePattern::Alternating, schedule_origin);
    ChannelResult result = reconstruct_channel(schedule, setup);

    FidelityReport report;
    report.choi = std::move(result.choi);
    const double v_pulse = setup.dispersion.omega_prime(setup.pulse.carrier);
    report.target_unitary = ideal_window_product(schedule, setup.h_engine, setup.pulse.center,
                                                 v_pulse, setup.duration);
    report.entanglement_fidelity = entanglement_fidelity(report.choi, report.target_unitary);
    report.average_gate_fidelity =
        average_gate_fidelity(report.entanglement_fidelity, setup.h_engine.dim());
    report.final_degradation = result.probe.records.back().degradation;
    report.final_degradation_excess = result.probe.records.back().degradation_excess;
    report.mode = setup.stepping.mode;
    report.truncated = result.probe.truncated;
    return report;
}

void write_fidelity_report(const FidelityReport& report, std::ostream& out) {
    const Eigen::Index d = report.target_unitary.rows();
    out << "engine_dim: " << d << "\n";
    out << "entanglement_fidelity: " << fmt17(report.entanglement_fidelity) << "\n";
    out << "average_gate_fidelity: " << fmt17(report.average_gate_fidelity) << "\n";
    out << "final_degradation: " << fmt17(report.final_degradation) << "\n";
    out << "final_degradation_excess: " << fmt17(report.final_degradation_excess) << "\n";
    out << "mode: " << to_string(report.mode) << "\n";
    out << "truncated: " << (report.truncated ? 1 : 0) << "\n";
    out << "target_unitary: " << flatten17(report.target_unitary) << "\n";
    out << "choi: " << flatten17(report.choi) << "\n";
}

std::vector<TradeoffRow> omega_tradeoff_sweep(const std::vector<double>& omegas) {
    // Fidelity leg: linear dispersion, two noncommuting generators on a
    // dead-window mesh, engine free Hamiltonian tilted away from both.
    const SpatialGrid fidelity_grid(4096, 160.0, -40.0);
    const double window_width = 10.0;
    Eigen::MatrixXcd sy(2, 2);
    sy << 0.0, std::complex<double>(0.0, -1.0), std::complex<double>(0.0, 1.0), 0.0;
    const HermitianOp h_engine(0.2 * sy);
    const std::vector<HermitianOp> targets = {engine_preset("pauli_x", 2),
                                              engine_preset("pauli_z", 2)};
    const TargetEvolution target = TargetEvolution::piecewise_constant(targets, window_width);

    // Degradation leg: free massive run, long enough that the quadratic
    // spread dominates the initial width for every bandwidth in the battery.
    const SpatialGrid free_grid(8192, 384.0, -192.0);
    const DispersionRelation massive = DispersionRelation::massive(1.0, 10.0);
    const GeneratorSchedule no_schedule;
    const HermitianOp h_trivial(Eigen::MatrixXcd::Zero(1, 1));

    std::vector<TradeoffRow> rows;
    for (const double omega : omegas) {
        TradeoffRow row;
        row.omega = omega;

        ProtocolSetup setup{fidelity_grid,
                            ClockPulse{-18.0, omega, 0.0, 0.0},
                            DispersionRelation::linear(1.0),
                            h_engine,
                            StepConfig{},
                            72.0};
        setup.stepping.dt = 0.1;
        setup.stepping.steps_per_record = 90;
        const FidelityReport report = protocol_fidelity(target, window_width, 0.0, setup);
        row.f_avg = report.average_gate_fidelity;

        const ClockAmplitudes pulse = make_gaussian_pulse(free_grid, ClockPulse{-60.0, omega, 0.0, 0.0});
        StepConfig cfg;
        cfg.dt = 0.5;
        cfg.steps_per_record = 16;
        Trajectory traj = evolve(JointState::product(Eigen::VectorXcd::Ones(1), pulse),
                                 no_schedule, h_trivial, massive, cfg, 80.0);
        row.final_degradation = traj.records.back().degradation;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qclock
