#pragma once

#include <string>
#include <vector>

#include "qclock/propagator.hpp"

namespace qclock {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
    double seconds = 0.0;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    bool all_pass = true;
};

// Invariant battery behind the `verify` subcommand. `inject_dispersion_fault`
// tampers the dispersion derivative (test hook); the commutator check must
// then fail.
VerificationReport run_verification(bool inject_dispersion_fault = false);

// Shared measurement kernels, also consumed by the acceptance suite.
namespace checks {

// Split-step vs dense propagation on the 16-point, two-level instance
// (linear dispersion, one live pauli_z window, H_E = pauli_x / 4).
struct OracleEquivalence {
    double max_deviation = 0.0;   // at dt = 1e-2, duration 1
    double fitted_order = 0.0;    // over dt in {4e-2, 2e-2, 1e-2, 5e-3}
};
OracleEquivalence oracle_equivalence();

// Max residual |<[T, H_C]> - i <Lambda>| over 20 interior Gaussians under
// linear, massive and tabulated dispersions, N = 64 dense matrices.
double commutator_residual_battery(bool inject_fault = false);

// Dense Heisenberg check: max |<e^{iHt} T e^{-iHt}> - (<T> + t <Lambda>)|
// over interior states.
double heisenberg_residual();

// Free massive run (N = 4096, bandwidth 1, M = 10, carrier 10) long enough
// to triple the initial width.
struct VarianceLawResult {
    double max_rel_error = 0.0;   // against var_T(0) + t^2 var_Lambda
    double sqrt_q = 0.0;          // fitted
    double sqrt_var_lambda = 0.0; // conserved, from the first record
    double fitted_b = 0.0;        // linear coefficient
    double massive_slope = 0.0;   // d<tau>/dt
    double expected_slope = 0.0;  // 1 + k0 / (M c)
    double min_bound_margin = 0.0;
    bool truncated = false;
};
VarianceLawResult variance_law_run();

// Quadratic growth coefficients per dispersion of the battery
// {linear, massive M in {5, 10, 50}, tabulated sine-perturbed}.
struct DichotomyResult {
    double q_linear = 0.0;
    double q_min_nonlinear = 0.0;
    double linear_pauli_slope = 0.0;
    double min_bound_margin = 0.0;
};
DichotomyResult theorem3_battery();

// Saturation of the uncertainty bound by the minimal Gaussian at t = 0.
struct SaturationResult {
    double product = 0.0;  // sqrt(var_T var_HC)
    double bound = 0.0;    // |mean_Lambda| / 2
};
SaturationResult uncertainty_saturation();

// Final degradation excess over the decoupled baseline for a pulse
// straddling a live/dead boundary (N = 16, linear dispersion, pauli_z live
// generator), on the split-step integrator and on the dense oracle.
struct DegradationGap {
    double split_gap = 0.0;
    double oracle_gap = 0.0;
};
DegradationGap coupling_degradation_gap();

// Criterion-8 pair: reduced-state fidelity across a dead window against the
// free H_E conjugation, and the realized-channel gate fidelity against
// exp(-i v tau / W) for a pulse kept inside one live window.
struct NeutralityResult {
    double dead_window_fidelity = 0.0;
    double live_window_f_avg = 0.0;
};
NeutralityResult window_neutrality();

}  // namespace checks

}  // namespace qclock
