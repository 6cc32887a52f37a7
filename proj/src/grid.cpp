#include "qclock/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace qclock {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

SpatialGrid::SpatialGrid(int n_points, double length, double origin)
    : n_points_(n_points), length_(length), origin_(origin) {
    if (!is_power_of_two(n_points_)) {
        throw std::invalid_argument("grid n_points must be a positive power of two, got " +
                                    std::to_string(n_points_));
    }
    if (!(length_ > 0.0) || !std::isfinite(length_)) {
        throw std::invalid_argument("grid length must be positive and finite");
    }
    if (!std::isfinite(origin_)) {
        throw std::invalid_argument("grid origin must be finite");
    }
    spacing_ = length_ / n_points_;
    positions_.resize(n_points_);
    momenta_.resize(n_points_);
    const double dk = 2.0 * M_PI / length_;
    for (int j = 0; j < n_points_; ++j) {
        positions_(j) = origin_ + j * spacing_;
        const int m_signed = (j < n_points_ / 2) ? j : j - n_points_;
        momenta_(j) = dk * m_signed;
    }
}

double SpatialGrid::momentum(int m) const { return momenta_(m); }

}  // namespace qclock
