#include "qclock/pulse.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "qclock/errors.hpp"
#include "qclock/spectral.hpp"

namespace qclock {

using std::complex;

ClockAmplitudes::ClockAmplitudes(SpatialGrid grid, Eigen::VectorXcd amplitudes)
    : grid_(std::move(grid)), amp_(std::move(amplitudes)) {
    if (amp_.size() != grid_.n_points()) {
        throw std::invalid_argument("amplitude vector size does not match the grid");
    }
    const double n = norm();
    if (std::abs(n - 1.0) > 1e-6) {
        throw std::invalid_argument("clock amplitudes must be normalized, norm = " +
                                    std::to_string(n));
    }
}

ClockAmplitudes ClockAmplitudes::normalized(SpatialGrid grid, Eigen::VectorXcd raw) {
    const double n2 = raw.squaredNorm() * grid.spacing();
    if (!(n2 > 0.0)) throw std::invalid_argument("cannot normalize a zero amplitude vector");
    raw /= std::sqrt(n2);
    return ClockAmplitudes(std::move(grid), std::move(raw));
}

double ClockAmplitudes::norm() const { return std::sqrt(amp_.squaredNorm() * grid_.spacing()); }

Eigen::VectorXcd gaussian_envelope(const SpatialGrid& grid, const ClockPulse& pulse) {
    const double w2 = pulse.bandwidth * pulse.bandwidth;
    const double prefactor = std::pow(w2 / (2.0 * M_PI), 0.25);
    Eigen::VectorXcd amp(grid.n_points());
    for (int j = 0; j < grid.n_points(); ++j) {
        const double x = grid.position(j);
        const double d = x - pulse.center;
        const double phase = pulse.carrier * x + pulse.chirp * d * d;
        amp(j) = prefactor * std::exp(-w2 * d * d / 4.0) *
                 complex<double>(std::cos(phase), std::sin(phase));
    }
    return amp;
}

ClockAmplitudes make_gaussian_pulse(const SpatialGrid& grid, const ClockPulse& pulse,
                                    PulseFlags* flags) {
    if (!(pulse.bandwidth > 0.0)) throw std::invalid_argument("pulse bandwidth must be positive");
    const double width = 1.0 / pulse.bandwidth;
    if (width < 4.0 * grid.spacing()) {
        throw PulseUnresolvable("pulse width 1/bandwidth = " + std::to_string(width) +
                                " is below 4 grid spacings (" +
                                std::to_string(4.0 * grid.spacing()) + ")");
    }
    if (6.0 * width > grid.length() / 2.0) {
        throw PulseTooWide("pulse tail extent 6/bandwidth = " + std::to_string(6.0 * width) +
                           " exceeds half the grid length (" +
                           std::to_string(grid.length() / 2.0) + ")");
    }
    if (flags) {
        flags->quasimono_warning = pulse.bandwidth >= std::abs(pulse.carrier) / 5.0;
    }
    return ClockAmplitudes::normalized(grid, gaussian_envelope(grid, pulse));
}

Eigen::VectorXcd to_momentum(const ClockAmplitudes& state) {
    const SpatialGrid& grid = state.grid();
    Eigen::VectorXcd out = fft(state.values());
    const double scale = grid.spacing() / std::sqrt(2.0 * M_PI);
    for (int m = 0; m < grid.n_points(); ++m) {
        const double phase = -grid.momentum(m) * grid.origin();
        out(m) *= scale * complex<double>(std::cos(phase), std::sin(phase));
    }
    return out;
}

ClockAmplitudes to_position(const SpatialGrid& grid, const Eigen::VectorXcd& momentum_amplitudes) {
    if (momentum_amplitudes.size() != grid.n_points()) {
        throw std::invalid_argument("momentum amplitude vector size does not match the grid");
    }
    Eigen::VectorXcd freq(grid.n_points());
    const double scale = std::sqrt(2.0 * M_PI) / grid.spacing();
    for (int m = 0; m < grid.n_points(); ++m) {
        const double phase = grid.momentum(m) * grid.origin();
        freq(m) = momentum_amplitudes(m) * scale * complex<double>(std::cos(phase), std::sin(phase));
    }
    return ClockAmplitudes(grid, ifft(freq));
}

ClockAmplitudes free_step(const ClockAmplitudes& state, const DispersionRelation& dispersion,
                          double dt) {
    if (dt == 0.0) return state;
    const SpatialGrid& grid = state.grid();
    Eigen::VectorXcd freq = fft(state.values());
    for (int m = 0; m < grid.n_points(); ++m) {
        const double angle = -dispersion.omega(grid.momentum(m)) * dt;
        freq(m) *= complex<double>(std::cos(angle), std::sin(angle));
    }
    return ClockAmplitudes(grid, ifft(freq));
}

Moments moments(const ClockAmplitudes& state) {
    const SpatialGrid& grid = state.grid();
    const double dx = grid.spacing();
    const double dk = 2.0 * M_PI / grid.length();

    Moments m;
    double xm = 0.0, x2 = 0.0;
    for (int j = 0; j < grid.n_points(); ++j) {
        const double p = std::norm(state.values()(j)) * dx;
        xm += grid.position(j) * p;
        x2 += grid.position(j) * grid.position(j) * p;
    }
    m.mean_x = xm;
    m.var_x = std::max(0.0, x2 - xm * xm);

    const Eigen::VectorXcd psi_k = to_momentum(state);
    double km = 0.0, k2 = 0.0;
    for (int j = 0; j < grid.n_points(); ++j) {
        const double p = std::norm(psi_k(j)) * dk;
        km += grid.momentum(j) * p;
        k2 += grid.momentum(j) * grid.momentum(j) * p;
    }
    m.mean_k = km;
    m.var_k = std::max(0.0, k2 - km * km);
    return m;
}

double edge_mass(const Eigen::VectorXd& position_distribution, const SpatialGrid& grid,
                 double fraction) {
    const double lo = grid.origin() + fraction * grid.length();
    const double hi = grid.origin() + (1.0 - fraction) * grid.length();
    double mass = 0.0;
    for (int j = 0; j < grid.n_points(); ++j) {
        const double x = grid.position(j);
        if (x < lo || x > hi) mass += position_distribution(j);
    }
    return mass;
}

}  // namespace qclock
