#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qclock/dispersion.hpp"
#include "qclock/grid.hpp"

namespace qclock {

// Gaussian pulse parameters. The envelope is
//   (bandwidth^2 / 2 pi)^(1/4) * exp(-bandwidth^2 (x - center)^2 / 4)
//     * exp(i carrier x) * exp(i chirp (x - center)^2),
// giving position variance 1/bandwidth^2 and, at zero chirp, momentum
// variance bandwidth^2/4.
struct ClockPulse {
    double center = 0.0;
    double bandwidth = 1.0;
    double carrier = 0.0;
    double chirp = 0.0;
};

struct PulseFlags {
    bool quasimono_warning = false;
};

// Normalized single-particle clock amplitudes in the position representation.
class ClockAmplitudes {
  public:
    ClockAmplitudes(SpatialGrid grid, Eigen::VectorXcd amplitudes);

    // Rescales `raw` to unit norm before constructing.
    static ClockAmplitudes normalized(SpatialGrid grid, Eigen::VectorXcd raw);

    const SpatialGrid& grid() const { return grid_; }
    const Eigen::VectorXcd& values() const { return amp_; }
    // sqrt( sum |psi_j|^2 * spacing )
    double norm() const;

  private:
    SpatialGrid grid_;
    Eigen::VectorXcd amp_;
};

// Samples the pulse envelope on the grid without any resolution checks.
Eigen::VectorXcd gaussian_envelope(const SpatialGrid& grid, const ClockPulse& pulse);

// Builds a normalized Gaussian pulse. Throws PulseUnresolvable when
// 1/bandwidth < 4*spacing and PulseTooWide when 6/bandwidth > length/2.
// A violated quasimonochromaticity condition (bandwidth >= |carrier|/5)
// only raises flags->quasimono_warning.
ClockAmplitudes make_gaussian_pulse(const SpatialGrid& grid, const ClockPulse& pulse,
                                    PulseFlags* flags = nullptr);

// Unitary transform pair between position and momentum representations:
//   psi~(k_m) = spacing / sqrt(2 pi) * sum_j psi_j exp(-i k_m x_j)
// so that sum_m |psi~_m|^2 * (2 pi / length) = sum_j |psi_j|^2 * spacing.
Eigen::VectorXcd to_momentum(const ClockAmplitudes& state);
ClockAmplitudes to_position(const SpatialGrid& grid, const Eigen::VectorXcd& momentum_amplitudes);

// Free spectral step: multiplies each momentum amplitude by
// exp(-i omega(k_m) dt). dt == 0 returns the input unchanged.
ClockAmplitudes free_step(const ClockAmplitudes& state, const DispersionRelation& dispersion,
                          double dt);

struct Moments {
    double mean_x = 0.0;
    double var_x = 0.0;
    double mean_k = 0.0;
    double var_k = 0.0;
};

// Grid-quadrature first and second moments in both representations.
Moments moments(const ClockAmplitudes& state);

// Probability mass within `fraction * length` of either grid edge. Used as
// the wraparound sentinel.
double edge_mass(const Eigen::VectorXd& position_distribution, const SpatialGrid& grid,
                 double fraction = 0.05);

}  // namespace qclock
