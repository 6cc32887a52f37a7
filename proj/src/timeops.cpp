#include "qclock/timeops.hpp"

#include <algorithm>
#include <cmath>

#include "qclock/errors.hpp"
#include "qclock/spectral.hpp"

namespace qclock {

namespace {

ObservableStats weighted_stats(const Eigen::VectorXd& values, const Eigen::VectorXd& mass) {
    const double mean = values.dot(mass);
    const double second = values.cwiseAbs2().dot(mass);
    return {mean, std::max(0.0, second - mean * mean)};
}

Eigen::VectorXd clock_position_mass(const ClockAmplitudes& state) {
    return state.values().cwiseAbs2() * state.grid().spacing();
}

Eigen::VectorXd clock_momentum_mass(const ClockAmplitudes& state) {
    const double dk = 2.0 * M_PI / state.grid().length();
    return to_momentum(state).cwiseAbs2() * dk;
}

}  // namespace

ObservableStats time_stats(const JointState& state, double c) {
    return weighted_stats(state.grid().positions() / c, state.position_mass());
}

ObservableStats time_stats(const ClockAmplitudes& state, double c) {
    return weighted_stats(state.grid().positions() / c, clock_position_mass(state));
}

ObservableStats lambda_stats(const JointState& state, const DispersionRelation& dispersion,
                             double c) {
    return weighted_stats(dispersion.omega_prime(state.grid().momenta()) / c,
                          state.momentum_mass());
}

ObservableStats lambda_stats(const ClockAmplitudes& state, const DispersionRelation& dispersion,
                             double c) {
    return weighted_stats(dispersion.omega_prime(state.grid().momenta()) / c,
                          clock_momentum_mass(state));
}

ObservableStats hc_stats(const JointState& state, const DispersionRelation& dispersion) {
    return weighted_stats(dispersion.omega(state.grid().momenta()), state.momentum_mass());
}

ObservableStats hc_stats(const ClockAmplitudes& state, const DispersionRelation& dispersion) {
    return weighted_stats(dispersion.omega(state.grid().momenta()), clock_momentum_mass(state));
}

double t_lambda_covariance(const ClockAmplitudes& state, const DispersionRelation& dispersion,
                           double c) {
    const SpatialGrid& grid = state.grid();
    // Lambda psi computed spectrally, T psi pointwise.
    Eigen::VectorXcd freq = fft(state.values());
    const Eigen::VectorXd wp = dispersion.omega_prime(grid.momenta()) / c;
    freq.array() *= wp.array();
    const Eigen::VectorXcd lambda_psi = ifft(freq);
    const Eigen::VectorXcd t_psi = state.values().cwiseProduct(grid.positions().cast<std::complex<double>>()) / c;
    const double t_lambda = (t_psi.dot(lambda_psi)).real() * grid.spacing();
    const double mean_t = time_stats(state, c).mean;
    const double mean_lambda = lambda_stats(state, dispersion, c).mean;
    return t_lambda - mean_t * mean_lambda;
}

Eigen::VectorXd polyfit(const Eigen::VectorXd& t, const Eigen::VectorXd& y, int degree) {
    Eigen::MatrixXd vandermonde(t.size(), degree + 1);
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        double p = 1.0;
        for (int d = 0; d <= degree; ++d) {
            vandermonde(i, d) = p;
            p *= t(i);
        }
    }
    return vandermonde.colPivHouseholderQr().solve(y);
}

DegradationFit degradation_series(const std::vector<DiagnosticsRecord>& records) {
    if (records.size() < 10) {
        throw InsufficientRecords("degradation fit needs >= 10 records, got " +
                                  std::to_string(records.size()));
    }
    const auto n = static_cast<Eigen::Index>(records.size());
    Eigen::VectorXd t(n), var(n);
    DegradationFit fit;
    fit.t.reserve(records.size());
    fit.degradation.reserve(records.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        t(i) = records[static_cast<size_t>(i)].t;
        var(i) = records[static_cast<size_t>(i)].var_T;
        fit.t.push_back(t(i));
        fit.degradation.push_back(std::sqrt(std::max(0.0, var(i))));
    }
    const Eigen::VectorXd coeffs = polyfit(t, var, 2);
    fit.a = coeffs(0);
    fit.b = coeffs(1);
    fit.q = coeffs(2);
    fit.sqrt_q = std::sqrt(std::max(0.0, coeffs(2)));
    return fit;
}

UncertaintyResult uncertainty_check(const DiagnosticsRecord& record) {
    if (record.var_hc <= 0.0) {
        throw StationaryState("var_hc = 0: the state is an H_C eigenstate and carries no time");
    }
    UncertaintyResult result;
    result.margin = std::sqrt(record.var_T * record.var_hc) - std::abs(record.mean_lambda) / 2.0;
    result.satisfied = result.margin >= -1e-9;
    return result;
}

double pauli_rate(const std::vector<DiagnosticsRecord>& records) {
    if (records.size() < 2) {
        throw InsufficientRecords("slope fit needs >= 2 records");
    }
    const auto n = static_cast<Eigen::Index>(records.size());
    Eigen::VectorXd t(n), mean(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        t(i) = records[static_cast<size_t>(i)].t;
        mean(i) = records[static_cast<size_t>(i)].mean_T;
    }
    return polyfit(t, mean, 1)(1);
}

}  // namespace qclock
