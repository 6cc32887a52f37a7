#pragma once

#include <Eigen/Dense>

namespace qclock {

// Uniform periodic grid of n_points sites covering [origin, origin + length).
// Momenta are the discrete Fourier frequencies 2*pi*m/length in FFT index
// order (non-negative frequencies first, then the negative half).
class SpatialGrid {
  public:
    SpatialGrid(int n_points, double length, double origin);

    int n_points() const { return n_points_; }
    double length() const { return length_; }
    double origin() const { return origin_; }
    double spacing() const { return spacing_; }

    double position(int j) const { return origin_ + j * spacing_; }
    // Signed frequency of FFT bin m, in {-n/2, ..., n/2 - 1} * (2 pi / length).
    double momentum(int m) const;

    const Eigen::VectorXd& positions() const { return positions_; }
    const Eigen::VectorXd& momenta() const { return momenta_; }

    bool operator==(const SpatialGrid& other) const {
        return n_points_ == other.n_points_ && length_ == other.length_ &&
               origin_ == other.origin_;
    }

  private:
    int n_points_;
    double length_;
    double origin_;
    double spacing_;
    Eigen::VectorXd positions_;
    Eigen::VectorXd momenta_;
};

}  // namespace qclock
