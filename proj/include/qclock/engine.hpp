#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qclock {

// Finite-dimensional Hermitian generator. Construction rejects matrices with
// max |A - A^H| above 1e-12.
class HermitianOp {
  public:
    explicit HermitianOp(Eigen::MatrixXcd matrix);

    const Eigen::MatrixXcd& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

  private:
    Eigen::MatrixXcd m_;
};

// exp(-i H theta) via the self-adjoint eigendecomposition of H.
Eigen::MatrixXcd hermitian_propagator(const HermitianOp& h, double theta);

// Named generators accepted in configuration files: "pauli_x", "pauli_z",
// "number", "jaynes_cummings_detuning", "identity", "zero".
HermitianOp engine_preset(const std::string& name, int dim);

// Time-dependent engine generator V_E(t), supplied as a closed-form sampler
// or a piecewise-constant table.
class TargetEvolution {
  public:
    TargetEvolution(std::function<Eigen::MatrixXcd(double)> sampler, double duration,
                    Eigen::Index dim);
    static TargetEvolution piecewise_constant(std::vector<HermitianOp> segments,
                                              double segment_width);

    // Samples and validates hermiticity.
    HermitianOp generator(double t) const;
    double duration() const { return duration_; }
    Eigen::Index dim() const { return dim_; }

  private:
    std::function<Eigen::MatrixXcd(double)> sampler_;
    double duration_;
    Eigen::Index dim_;
};

// Time-ordered propagator: the ordered product of exp(-i V(t_j) dt) over
// n_substeps left-endpoint samples, latest factor leftmost. The substep
// count is doubled (at most twice) until the result moves by less than
// 1e-8; NonConvergent if that never happens.
Eigen::MatrixXcd target_propagator(const TargetEvolution& target, double t, int n_substeps);

enum class SchedulePattern { Explicit, Alternating };

// One spatial window of the schedule. A missing generator marks a dead
// window (identity), which contributes only a scalar phase.
struct ScheduledWindow {
    int index = 0;
    double center = 0.0;
    std::optional<HermitianOp> generator;  // nullopt = identity marker
};

// Window-indexed engine generators. Window i covers
// [origin + i W, origin + (i+1) W) with sample point at the center.
struct GeneratorSchedule {
    double width = 0.0;
    double origin = 0.0;
    SchedulePattern pattern = SchedulePattern::Explicit;
    std::vector<ScheduledWindow> windows;

    int size() const { return static_cast<int>(windows.size()); }
    double window_start(int i) const { return origin + i * width; }
    double window_end(int i) const { return origin + (i + 1) * width; }
};

// Places generators on windows. Explicit: window i carries V(s_i) with
// s_i = (i + 1/2) W on the target time axis. Alternating: sample j goes to
// window 2j and every odd window is a dead (identity) window. The target
// duration is padded with identity windows to a whole number of samples.
// `sample_times` optionally overrides the per-window sample instants.
GeneratorSchedule schedule_from_target(const TargetEvolution& target, double window_width,
                                       SchedulePattern pattern, double origin = 0.0,
                                       const std::vector<double>& sample_times = {});

// Schedule with every listed generator placed explicitly (alternating
// patterns interleave dead windows after each entry).
GeneratorSchedule schedule_from_generators(std::vector<std::optional<HermitianOp>> generators,
                                           double window_width, SchedulePattern pattern,
                                           double origin = 0.0);

}  // namespace qclock
