#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qclock/dispersion.hpp"
#include "qclock/joint_state.hpp"
#include "qclock/pulse.hpp"

namespace qclock {

// One trajectory snapshot. `degradation` is sqrt(var_T); `degradation_excess`
// is sqrt(max(var_T - var_T(0), 0)) relative to the first record of the run.
// `bound` is |mean_lambda| / (2 sqrt(var_hc)).
struct DiagnosticsRecord {
    double t = 0.0;
    double mean_T = 0.0;
    double var_T = 0.0;
    double degradation = 0.0;
    double degradation_excess = 0.0;
    double mean_lambda = 0.0;
    double var_lambda = 0.0;
    double mean_hc = 0.0;
    double var_hc = 0.0;
    double bound = 0.0;
    double norm = 1.0;
    double energy = 0.0;
    double purity_engine = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    std::string mode = "intensity";
    std::string flags;
};

struct ObservableStats {
    double mean = 0.0;
    double variance = 0.0;
};

// Moments of T = x/c against the clock-marginal position distribution.
ObservableStats time_stats(const JointState& state, double c);
ObservableStats time_stats(const ClockAmplitudes& state, double c);

// Moments of omega'(k)/c against the clock-marginal momentum distribution.
ObservableStats lambda_stats(const JointState& state, const DispersionRelation& dispersion,
                             double c);
ObservableStats lambda_stats(const ClockAmplitudes& state, const DispersionRelation& dispersion,
                             double c);

// Moments of omega(k) (clock free energy).
ObservableStats hc_stats(const JointState& state, const DispersionRelation& dispersion);
ObservableStats hc_stats(const ClockAmplitudes& state, const DispersionRelation& dispersion);

// Symmetrized covariance Re<T psi, Lambda psi> - <T><Lambda> for a pure clock
// state; the cross term of the free-evolution variance law.
double t_lambda_covariance(const ClockAmplitudes& state, const DispersionRelation& dispersion,
                           double c);

// Least-squares coefficients of y = sum_p coeffs[p] t^p.
Eigen::VectorXd polyfit(const Eigen::VectorXd& t, const Eigen::VectorXd& y, int degree);

struct DegradationFit {
    std::vector<double> t;
    std::vector<double> degradation;
    // var_T(t) fitted to a + b t + q t^2.
    double a = 0.0;
    double b = 0.0;
    double q = 0.0;
    double sqrt_q = 0.0;
};

// Degradation series and the quadratic growth fit of var_T over a recorded
// trajectory. Throws InsufficientRecords below 10 records.
DegradationFit degradation_series(const std::vector<DiagnosticsRecord>& records);

struct UncertaintyResult {
    bool satisfied = false;
    double margin = 0.0;  // sqrt(var_T var_hc) - |mean_lambda|/2
};

// Robertson-Schrodinger check sqrt(var_T) sqrt(var_hc) >= |mean_lambda|/2 - 1e-9.
// Throws StationaryState when var_hc == 0.
UncertaintyResult uncertainty_check(const DiagnosticsRecord& record);

// Least-squares slope of mean_T against t.
double pauli_rate(const std::vector<DiagnosticsRecord>& records);

}  // namespace qclock
