#pragma once

#include "qclock/engine.hpp"
#include "qclock/joint_state.hpp"
#include "qclock/propagator.hpp"

namespace qclock {

// Weights of the live generator and the identity for the window pair
// (2m, 2m+1) currently hosting the pulse (identified from its mean
// position). Intensity mode: alpha = mass_live / W; paper_sqrt mode applies
// the square root to the mass before the 1/W factor. Outside the schedule
// both weights are zero and the indices are -1.
struct ModulationFactors {
    double alpha = 0.0;
    double beta = 0.0;
    int live_window = -1;
    int dead_window = -1;
};

ModulationFactors modulation_factors(const JointState& state, const GeneratorSchedule& schedule,
                                     ModulationMode mode);

// alpha * v_live; the identity part is a global phase and is dropped.
Eigen::MatrixXcd effective_generator(double alpha, double beta, const HermitianOp& v_live);

// Probability mass of the clock marginal inside window i, by trapezoidal
// quadrature: boundary grid points contribute half to each adjacent window.
double window_mass(const JointState& state, const GeneratorSchedule& schedule, int window);

}  // namespace qclock
