#include "qclock/modulation.hpp"

#include <cmath>
#include <stdexcept>

namespace qclock {

namespace {

// Trapezoidal window mass from precomputed per-point probability mass.
double mass_between(const Eigen::VectorXd& point_mass, Eigen::Index begin, Eigen::Index end) {
    if (end < begin) return 0.0;
    double mass = 0.0;
    for (Eigen::Index j = begin; j <= end; ++j) {
        const double w = (j == begin || j == end) ? 0.5 : 1.0;
        mass += w * point_mass(j);
    }
    return mass;
}

double window_mass_from(const Eigen::VectorXd& point_mass,
                        const std::vector<Eigen::Index>& boundaries, int window,
                        Eigen::Index n_points) {
    const Eigen::Index begin = boundaries[static_cast<size_t>(window)];
    Eigen::Index end = boundaries[static_cast<size_t>(window) + 1];
    if (end >= n_points) end = n_points - 1;
    return mass_between(point_mass, begin, end);
}

}  // namespace

double window_mass(const JointState& state, const GeneratorSchedule& schedule, int window) {
    if (window < 0 || window >= schedule.size()) return 0.0;
    const auto boundaries = window_boundary_indices(state.grid(), schedule);
    return window_mass_from(state.position_mass(), boundaries, window, state.grid().n_points());
}

ModulationFactors modulation_factors(const JointState& state, const GeneratorSchedule& schedule,
                                     ModulationMode mode) {
    if (schedule.pattern != SchedulePattern::Alternating) {
        throw std::invalid_argument("modulation factors require an alternating schedule");
    }
    ModulationFactors mf;
    if (schedule.windows.empty()) return mf;
    const Eigen::VectorXd point_mass = state.position_mass();
    const double mean_x = state.grid().positions().dot(point_mass);
    const int pair = static_cast<int>(std::floor((mean_x - schedule.origin) / (2.0 * schedule.width)));
    const int live = 2 * pair;
    const int dead = live + 1;
    if (live < 0 || live >= schedule.size()) return mf;
    mf.live_window = live;
    mf.dead_window = dead < schedule.size() ? dead : -1;
    const auto boundaries = window_boundary_indices(state.grid(), schedule);
    const Eigen::Index n = state.grid().n_points();
    double p_live = window_mass_from(point_mass, boundaries, live, n);
    double p_dead =
        mf.dead_window >= 0 ? window_mass_from(point_mass, boundaries, dead, n) : 0.0;
    if (mode == ModulationMode::PaperSqrt) {
        p_live = std::sqrt(p_live);
        p_dead = std::sqrt(p_dead);
    }
    mf.alpha = p_live / schedule.width;
    mf.beta = p_dead / schedule.width;
    return mf;
}

Eigen::MatrixXcd effective_generator(double alpha, double /*beta*/, const HermitianOp& v_live) {
    return alpha * v_live.matrix();
}

}  // namespace qclock
