#include "qclock/propagator.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include "qclock/errors.hpp"
#include "qclock/modulation.hpp"
#include "qclock/spectral.hpp"

namespace qclock {

using std::complex;

std::vector<Eigen::Index> window_boundary_indices(const SpatialGrid& grid,
                                                  const GeneratorSchedule& schedule) {
    const int n_windows = schedule.size();
    std::vector<Eigen::Index> indices(static_cast<size_t>(n_windows) + 1);
    const double dx = grid.spacing();
    for (int i = 0; i <= n_windows; ++i) {
        const double boundary = schedule.origin + i * schedule.width;
        const double offset = (boundary - grid.origin()) / dx;
        const double snapped = std::round(offset);
        if (std::abs(offset - snapped) > 0.5) {
            throw WindowGridMisaligned("window boundary at " + std::to_string(boundary) +
                                       " is more than half a spacing from the nearest grid point");
        }
        indices[static_cast<size_t>(i)] =
            std::clamp<Eigen::Index>(static_cast<Eigen::Index>(snapped), 0, grid.n_points());
    }
    for (int i = 0; i < n_windows; ++i) {
        const double start = schedule.origin + i * schedule.width;
        const double end = start + schedule.width;
        const bool on_grid = end > grid.origin() && start < grid.origin() + grid.length();
        if (on_grid && indices[static_cast<size_t>(i)] == indices[static_cast<size_t>(i) + 1]) {
            throw WindowGridMisaligned("window " + std::to_string(i) +
                                       " collapses to zero grid points; width " +
                                       std::to_string(schedule.width) +
                                       " is below the grid spacing");
        }
    }
    return indices;
}

std::vector<WindowSegment> window_segments(const SpatialGrid& grid,
                                           const GeneratorSchedule& schedule,
                                           Eigen::Index engine_dim) {
    std::vector<WindowSegment> segments;
    const Eigen::Index n = grid.n_points();
    auto push_outside = [&](Eigen::Index begin, Eigen::Index end) {
        if (end <= begin) return;
        WindowSegment seg;
        seg.begin = begin;
        seg.count = end - begin;
        seg.window_index = -1;
        seg.kind = WindowSegment::Kind::Outside;
        seg.generator = Eigen::MatrixXcd::Zero(engine_dim, engine_dim);
        segments.push_back(std::move(seg));
    };
    if (schedule.windows.empty()) {
        push_outside(0, n);
        return segments;
    }
    if (!(schedule.width > 0.0)) {
        throw std::invalid_argument("schedule window width must be positive");
    }
    const auto boundaries = window_boundary_indices(grid, schedule);
    push_outside(0, boundaries.front());
    for (int i = 0; i < schedule.size(); ++i) {
        const Eigen::Index begin = boundaries[static_cast<size_t>(i)];
        const Eigen::Index end = boundaries[static_cast<size_t>(i) + 1];
        if (end <= begin) continue;
        WindowSegment seg;
        seg.begin = begin;
        seg.count = end - begin;
        seg.window_index = schedule.windows[static_cast<size_t>(i)].index;
        const auto& generator = schedule.windows[static_cast<size_t>(i)].generator;
        if (generator) {
            if (generator->dim() != engine_dim) {
                throw std::invalid_argument("schedule generator dimension mismatch");
            }
            seg.kind = WindowSegment::Kind::Generator;
            seg.generator = generator->matrix();
        } else {
            seg.kind = WindowSegment::Kind::Identity;
            seg.generator = Eigen::MatrixXcd::Identity(engine_dim, engine_dim);
        }
        segments.push_back(std::move(seg));
    }
    push_outside(boundaries.back(), n);
    return segments;
}

InteractionProfile::InteractionProfile(const SpatialGrid& grid, const GeneratorSchedule& schedule,
                                       const HermitianOp& h_engine, double dt)
    : dt_(dt), window_width_(schedule.width), h_engine_(h_engine) {
    segments_ = window_segments(grid, schedule, h_engine.dim());
    const Eigen::Index d = h_engine.dim();
    engine_step_t_ = hermitian_propagator(h_engine, dt).transpose();
    full_step_t_.reserve(segments_.size());
    coupling_step_t_.reserve(segments_.size());
    for (const auto& seg : segments_) {
        switch (seg.kind) {
            case WindowSegment::Kind::Outside:
                full_step_t_.push_back(engine_step_t_);
                coupling_step_t_.push_back(Eigen::MatrixXcd::Identity(d, d));
                break;
            case WindowSegment::Kind::Identity: {
                const double a = -dt / window_width_;
                const complex<double> phase(std::cos(a), std::sin(a));
                full_step_t_.push_back(phase * engine_step_t_);
                coupling_step_t_.push_back(phase * Eigen::MatrixXcd::Identity(d, d));
                break;
            }
            case WindowSegment::Kind::Generator: {
                const HermitianOp coupled(h_engine.matrix() + seg.generator / window_width_);
                full_step_t_.push_back(hermitian_propagator(coupled, dt).transpose());
                coupling_step_t_.push_back(
                    hermitian_propagator(HermitianOp(seg.generator / window_width_), dt)
                        .transpose());
                break;
            }
        }
    }
}

InteractionProfile build_interaction_profile(const SpatialGrid& grid,
                                             const GeneratorSchedule& schedule,
                                             const HermitianOp& h_engine, double dt) {
    return InteractionProfile(grid, schedule, h_engine, dt);
}

namespace {

Eigen::VectorXcd momentum_phase(const SpatialGrid& grid, const DispersionRelation& dispersion,
                                double dt) {
    Eigen::VectorXcd phase(grid.n_points());
    for (int m = 0; m < grid.n_points(); ++m) {
        const double a = -dispersion.omega(grid.momentum(m)) * dt;
        phase(m) = complex<double>(std::cos(a), std::sin(a));
    }
    return phase;
}

void apply_interaction(Eigen::MatrixXcd& amp, const InteractionProfile& profile, bool full) {
    const auto& segments = profile.segments();
    for (size_t s = 0; s < segments.size(); ++s) {
        const auto& seg = segments[s];
        const Eigen::MatrixXcd& u_t = full ? profile.full_step_t(s) : profile.coupling_step_t(s);
        amp.middleRows(seg.begin, seg.count) *= u_t;
    }
}

// In-place stepping core shared by collision_step and evolve.
class Stepper {
  public:
    Stepper(const SpatialGrid& grid, const InteractionProfile& profile,
            const DispersionRelation& dispersion, const StepConfig& cfg)
        : profile_(profile),
          splitting_(cfg.splitting),
          workspace_(grid.n_points()),
          half_phase_(momentum_phase(grid, dispersion, cfg.dt / 2.0)),
          full_phase_(momentum_phase(grid, dispersion, cfg.dt)) {}

    void step(Eigen::MatrixXcd& amp) {
        if (splitting_ == Splitting::Strang) {
            workspace_.apply_momentum_phase(amp, half_phase_);
            apply_interaction(amp, profile_, /*full=*/true);
            workspace_.apply_momentum_phase(amp, half_phase_);
        } else {
            apply_interaction(amp, profile_, /*full=*/false);
            amp *= profile_.engine_step_t();
            workspace_.apply_momentum_phase(amp, full_phase_);
        }
    }

  private:
    const InteractionProfile& profile_;
    Splitting splitting_;
    SpectralWorkspace workspace_;
    Eigen::VectorXcd half_phase_;
    Eigen::VectorXcd full_phase_;
};

}  // namespace

JointState collision_step(const JointState& state, const InteractionProfile& profile,
                          const DispersionRelation& dispersion, const StepConfig& cfg) {
    Eigen::MatrixXcd amp = state.amplitudes();
    Stepper stepper(state.grid(), profile, dispersion, cfg);
    stepper.step(amp);
    return JointState(state.grid(), std::move(amp));
}

double total_energy(const JointState& state, const GeneratorSchedule& schedule,
                    const HermitianOp& h_engine, const DispersionRelation& dispersion) {
    const Eigen::MatrixXcd rho = reduced_engine_state(state);
    double energy = (rho * h_engine.matrix()).trace().real();
    energy += hc_stats(state, dispersion).mean;
    if (!schedule.windows.empty()) {
        const auto segments = window_segments(state.grid(), schedule, state.engine_dim());
        const double dx = state.grid().spacing();
        for (const auto& seg : segments) {
            if (seg.kind == WindowSegment::Kind::Outside) continue;
            const auto block = state.amplitudes().middleRows(seg.begin, seg.count);
            const Eigen::MatrixXcd rho_seg = block.transpose() * block.conjugate() * dx;
            energy += (rho_seg * seg.generator).trace().real() / schedule.width;
        }
    }
    return energy;
}

DiagnosticsRecord diagnostics_record(const JointState& state, double t,
                                     const GeneratorSchedule& schedule,
                                     const HermitianOp& h_engine,
                                     const DispersionRelation& dispersion,
                                     const StepConfig& cfg) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.norm = state.norm();
    const ObservableStats ts = time_stats(state, cfg.c);
    rec.mean_T = ts.mean;
    rec.var_T = ts.variance;
    rec.degradation = std::sqrt(std::max(0.0, ts.variance));
    const ObservableStats ls = lambda_stats(state, dispersion, cfg.c);
    rec.mean_lambda = ls.mean;
    rec.var_lambda = ls.variance;
    const ObservableStats hs = hc_stats(state, dispersion);
    rec.mean_hc = hs.mean;
    rec.var_hc = hs.variance;
    rec.bound = hs.variance > 0.0 ? std::abs(ls.mean) / (2.0 * std::sqrt(hs.variance)) : 0.0;
    rec.energy = total_energy(state, schedule, h_engine, dispersion);
    rec.purity_engine = purity(reduced_engine_state(state));
    rec.mode = to_string(cfg.mode);
    if (schedule.pattern == SchedulePattern::Alternating && !schedule.windows.empty()) {
        const ModulationFactors mf = modulation_factors(state, schedule, cfg.mode);
        rec.alpha = mf.alpha;
        rec.beta = mf.beta;
    }
    return rec;
}

Trajectory evolve(const JointState& initial, const GeneratorSchedule& schedule,
                  const HermitianOp& h_engine, const DispersionRelation& dispersion,
                  const StepConfig& cfg, double duration,
                  const std::vector<Observer>& observers) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (duration < 0.0) throw std::invalid_argument("duration must be nonnegative");
    if (cfg.steps_per_record < 1) throw std::invalid_argument("steps_per_record must be >= 1");
    if (!schedule.windows.empty() && cfg.dt > schedule.width / cfg.window_dt_ratio * (1 + 1e-12)) {
        throw std::invalid_argument("dt must satisfy dt <= W / " +
                                    std::to_string(cfg.window_dt_ratio));
    }
    const auto n_steps = static_cast<long long>(std::llround(duration / cfg.dt));
    if (std::abs(n_steps * cfg.dt - duration) > 1e-9 * std::max(1.0, std::abs(duration))) {
        throw std::invalid_argument("duration must be an integer number of time steps");
    }

    const SpatialGrid& grid = initial.grid();
    const InteractionProfile profile(grid, schedule, h_engine, cfg.dt);
    Stepper stepper(grid, profile, dispersion, cfg);

    Trajectory traj{{}, initial, false};
    Eigen::MatrixXcd amp = initial.amplitudes();
    double var_t0 = 0.0;

    auto record_at = [&](long long step) -> bool {
        JointState snapshot(grid, amp);
        DiagnosticsRecord rec =
            diagnostics_record(snapshot, step * cfg.dt, schedule, h_engine, dispersion, cfg);
        if (traj.records.empty()) {
            var_t0 = rec.var_T;
        }
        rec.degradation_excess = std::sqrt(std::max(0.0, rec.var_T - var_t0));
        const double edge = edge_mass(snapshot.position_mass(), grid, cfg.edge_fraction);
        const bool wrapped = edge > cfg.wraparound_threshold;
        if (wrapped) {
            rec.flags = rec.flags.empty() ? "wraparound" : rec.flags + ";wraparound";
        }
        traj.records.push_back(rec);
        for (const auto& obs : observers) obs(snapshot, traj.records.back());
        if (wrapped || step == n_steps) traj.final_state = std::move(snapshot);
        return wrapped;
    };

    if (record_at(0)) {
        traj.truncated = n_steps > 0;
        return traj;
    }
    for (long long step = 1; step <= n_steps; ++step) {
        stepper.step(amp);
        const bool due = (step % cfg.steps_per_record == 0) || step == n_steps;
        if (!due) continue;
        if (record_at(step)) {
            traj.truncated = step < n_steps;
            if (traj.truncated) return traj;
        }
    }
    return traj;
}

}  // namespace qclock
