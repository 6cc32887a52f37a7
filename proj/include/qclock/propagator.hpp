#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qclock/dispersion.hpp"
#include "qclock/engine.hpp"
#include "qclock/joint_state.hpp"
#include "qclock/timeops.hpp"

namespace qclock {

// Strang: half free-clock step, full interaction step (including H_E), half
// free-clock step. Lie: full interaction step (coupling only) followed by
// the full free step of H_E + H_C, the first-order collision propagator.
enum class Splitting { Strang, Lie };

enum class ModulationMode { Intensity, PaperSqrt };

inline const char* to_string(ModulationMode m) {
    return m == ModulationMode::Intensity ? "intensity" : "paper_sqrt";
}

struct StepConfig {
    double dt = 1e-2;
    int steps_per_record = 1;
    Splitting splitting = Splitting::Strang;
    // Enforces dt <= window_width / window_dt_ratio whenever a schedule is present.
    double window_dt_ratio = 100.0;
    double c = 1.0;  // reference speed entering T and Lambda
    ModulationMode mode = ModulationMode::Intensity;
    // Wraparound sentinel: probability mass above `wraparound_threshold`
    // within `edge_fraction * length` of either grid edge truncates the run.
    double edge_fraction = 0.05;
    double wraparound_threshold = 1e-8;
};

// Grid-aligned partition of the grid induced by the schedule. Uncovered
// regions carry no interaction; dead (identity) windows contribute the
// scalar phase exp(-i dt / W).
struct WindowSegment {
    Eigen::Index begin = 0;
    Eigen::Index count = 0;
    int window_index = -1;  // -1 outside the schedule
    enum class Kind { Outside, Identity, Generator } kind = Kind::Outside;
    Eigen::MatrixXcd generator;  // d x d; zero when Outside, identity when Identity
};

// Grid indices of the schedule window boundaries (size windows+1, clamped to
// [0, n_points]). Throws WindowGridMisaligned when a boundary cannot be
// matched to a grid point or a window collapses below one spacing.
std::vector<Eigen::Index> window_boundary_indices(const SpatialGrid& grid,
                                                  const GeneratorSchedule& schedule);

std::vector<WindowSegment> window_segments(const SpatialGrid& grid,
                                           const GeneratorSchedule& schedule,
                                           Eigen::Index engine_dim);

// Per-segment engine unitaries for one time step, precomputed once per run.
class InteractionProfile {
  public:
    InteractionProfile(const SpatialGrid& grid, const GeneratorSchedule& schedule,
                       const HermitianOp& h_engine, double dt);

    const std::vector<WindowSegment>& segments() const { return segments_; }
    // Transposed unitaries, laid out for right-multiplying row blocks of a
    // grid-major amplitude matrix.
    const Eigen::MatrixXcd& full_step_t(size_t seg) const { return full_step_t_[seg]; }
    const Eigen::MatrixXcd& coupling_step_t(size_t seg) const { return coupling_step_t_[seg]; }
    const Eigen::MatrixXcd& engine_step_t() const { return engine_step_t_; }

    double dt() const { return dt_; }
    double window_width() const { return window_width_; }
    const HermitianOp& engine_hamiltonian() const { return h_engine_; }

  private:
    std::vector<WindowSegment> segments_;
    std::vector<Eigen::MatrixXcd> full_step_t_;
    std::vector<Eigen::MatrixXcd> coupling_step_t_;
    Eigen::MatrixXcd engine_step_t_;
    double dt_;
    double window_width_;
    HermitianOp h_engine_;
};

InteractionProfile build_interaction_profile(const SpatialGrid& grid,
                                             const GeneratorSchedule& schedule,
                                             const HermitianOp& h_engine, double dt);

// One collision step of the chosen splitting; norm-preserving.
JointState collision_step(const JointState& state, const InteractionProfile& profile,
                          const DispersionRelation& dispersion, const StepConfig& cfg);

// <H_E> + <H_C> + <V_EC> from spectral pieces; conserved by the autonomous
// dynamics.
double total_energy(const JointState& state, const GeneratorSchedule& schedule,
                    const HermitianOp& h_engine, const DispersionRelation& dispersion);

// Full per-record diagnostics for a snapshot.
DiagnosticsRecord diagnostics_record(const JointState& state, double t,
                                     const GeneratorSchedule& schedule,
                                     const HermitianOp& h_engine,
                                     const DispersionRelation& dispersion,
                                     const StepConfig& cfg);

struct Trajectory {
    std::vector<DiagnosticsRecord> records;
    JointState final_state;
    bool truncated = false;
};

// Read-only callback invoked at every record.
using Observer = std::function<void(const JointState&, const DiagnosticsRecord&)>;

// Applies collision_step repeatedly for duration/dt steps, recording
// diagnostics every steps_per_record steps (plus the initial and final
// instants). A tripped wraparound sentinel truncates the run, flags the
// offending record and marks the trajectory. duration/dt must be integral
// within rounding.
Trajectory evolve(const JointState& initial, const GeneratorSchedule& schedule,
                  const HermitianOp& h_engine, const DispersionRelation& dispersion,
                  const StepConfig& cfg, double duration,
                  const std::vector<Observer>& observers = {});

}  // namespace qclock
