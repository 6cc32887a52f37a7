#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "qclock/dispersion.hpp"
#include "qclock/engine.hpp"
#include "qclock/modulation.hpp"
#include "qclock/propagator.hpp"
#include "qclock/pulse.hpp"

namespace qclock {

// Everything one protocol run needs besides the schedule itself.
struct ProtocolSetup {
    SpatialGrid grid;
    ClockPulse pulse;
    DispersionRelation dispersion;
    HermitianOp h_engine;
    StepConfig stepping;
    double duration = 0.0;
};

// Choi matrix of the reduced engine channel realized by the joint evolution
// with one fixed pulse: C = sum_{a,b} |a><b| (x) E(|a><b|), trace d_E.
// Throws TooLarge for engine dimension above 4.
Eigen::MatrixXcd realized_channel(const GeneratorSchedule& schedule, const ProtocolSetup& setup);

// F_e = <phi_U| C |phi_U> / d^2 with |phi_U> = sum_a |a> (x) U|a>.
double entanglement_fidelity(const Eigen::MatrixXcd& choi, const Eigen::MatrixXcd& target_unitary);

double average_gate_fidelity(double entanglement_fidelity, Eigen::Index dim);

// Reference propagator of the dead-window construction: the ordered product
// of exp(-i (H_E + v_i/W) dt_i) factors along the pulse-center trajectory
// x0 + v_g t, with identity windows contributing exp(-i H_E dt_i) (their
// scalar phase is dropped).
Eigen::MatrixXcd ideal_window_product(const GeneratorSchedule& schedule, const HermitianOp& h_engine,
                                      double pulse_center, double group_velocity, double duration);

struct FidelityReport {
    Eigen::MatrixXcd choi;
    Eigen::MatrixXcd target_unitary;
    double entanglement_fidelity = 0.0;
    double average_gate_fidelity = 0.0;
    double final_degradation = 0.0;
    double final_degradation_excess = 0.0;
    ModulationMode mode = ModulationMode::Intensity;
    bool truncated = false;
};

// Builds the alternating dead-window schedule for `target` via
// schedule_from_target, reconstructs the realized channel and scores it
// against the ideal window product.
FidelityReport protocol_fidelity(const TargetEvolution& target, double window_width,
                                 double schedule_origin, const ProtocolSetup& setup);

// Key-value serialization with the Choi matrix embedded as row-major
// re/im pairs.
void write_fidelity_report(const FidelityReport& report, std::ostream& out);

struct TradeoffRow {
    double omega = 0.0;
    double f_avg = 0.0;
    double final_degradation = 0.0;
};

// The localization trade-off sweep: per bandwidth, protocol fidelity under
// linear dispersion and final degradation of a free massive run (M = 10)
// long enough for the quadratic spread to dominate every bandwidth in the
// battery. Both columns are nondecreasing in omega.
std::vector<TradeoffRow> omega_tradeoff_sweep(const std::vector<double>& omegas);

}  // namespace qclock
