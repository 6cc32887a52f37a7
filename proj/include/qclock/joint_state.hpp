#pragma once

#include <string>

#include <Eigen/Dense>

#include "qclock/grid.hpp"
#include "qclock/pulse.hpp"

namespace qclock {

// Engine (x) clock state in the single-particle sector: one complex amplitude
// per (grid point, engine basis state). Stored grid-major, N rows x d_E
// columns, so each engine component is a contiguous column.
class JointState {
  public:
    JointState(SpatialGrid grid, Eigen::MatrixXcd amplitudes);

    static JointState product(const Eigen::VectorXcd& engine_state, const ClockAmplitudes& clock);

    const SpatialGrid& grid() const { return grid_; }
    Eigen::Index engine_dim() const { return amp_.cols(); }
    const Eigen::MatrixXcd& amplitudes() const { return amp_; }
    Eigen::MatrixXcd& amplitudes() { return amp_; }

    // sqrt( sum |Psi_{j,e}|^2 * spacing )
    double norm() const;
    // Clock-marginal probability mass per grid point (sums to 1).
    Eigen::VectorXd position_mass() const;
    // Clock-marginal probability mass per momentum bin (sums to 1).
    Eigen::VectorXd momentum_mass() const;
    // Clock marginal amplitudes for a chosen engine component, normalized.
    ClockAmplitudes clock_component(Eigen::Index engine_index) const;

  private:
    SpatialGrid grid_;
    Eigen::MatrixXcd amp_;
};

// Partial trace over the grid: rho_E = A^T A* * spacing, Hermitian with unit
// trace for a normalized state.
Eigen::MatrixXcd reduced_engine_state(const JointState& state);

double purity(const Eigen::MatrixXcd& rho);

// Binary dump with a 64-byte header (magic "QCLK", version, d_E, N, spacing,
// origin; little-endian) followed by engine-major complex amplitudes.
void save_state(const JointState& state, const std::string& path);
JointState load_state(const std::string& path);

}  // namespace qclock
