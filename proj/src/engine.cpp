#include "qclock/engine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <utility>

#include "qclock/errors.hpp"

namespace qclock {

using std::complex;

namespace {
constexpr complex<double> kI{0.0, 1.0};

double hermiticity_defect(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}
}  // namespace

HermitianOp::HermitianOp(Eigen::MatrixXcd matrix) : m_(std::move(matrix)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw NotHermitian("generator must be a nonempty square matrix");
    }
    const double defect = hermiticity_defect(m_);
    if (defect > 1e-12) {
        throw NotHermitian("matrix is not Hermitian, max |A - A^H| = " + std::to_string(defect));
    }
}

Eigen::MatrixXcd hermitian_propagator(const HermitianOp& h, double theta) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix());
    const Eigen::VectorXd& evals = solver.eigenvalues();
    Eigen::VectorXcd phases(evals.size());
    for (Eigen::Index i = 0; i < evals.size(); ++i) {
        const double a = -evals(i) * theta;
        phases(i) = complex<double>(std::cos(a), std::sin(a));
    }
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

HermitianOp engine_preset(const std::string& name, int dim) {
    if (dim <= 0) throw std::invalid_argument("engine dimension must be positive");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    if (name == "zero") {
        // all zeros
    } else if (name == "identity") {
        m = Eigen::MatrixXcd::Identity(dim, dim);
    } else if (name == "pauli_x") {
        if (dim != 2) throw std::invalid_argument("pauli_x requires dim = 2");
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
    } else if (name == "pauli_z") {
        if (dim != 2) throw std::invalid_argument("pauli_z requires dim = 2");
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
    } else if (name == "number") {
        for (int i = 0; i < dim; ++i) m(i, i) = static_cast<double>(i);
    } else if (name == "jaynes_cummings_detuning") {
        // Detuning splitting: +1/2 on even levels, -1/2 on odd levels.
        for (int i = 0; i < dim; ++i) m(i, i) = (i % 2 == 0) ? 0.5 : -0.5;
    } else {
        throw std::invalid_argument("unknown generator preset '" + name + "'");
    }
    return HermitianOp(std::move(m));
}

TargetEvolution::TargetEvolution(std::function<Eigen::MatrixXcd(double)> sampler, double duration,
                                 Eigen::Index dim)
    : sampler_(std::move(sampler)), duration_(duration), dim_(dim) {
    if (!(duration_ > 0.0)) throw std::invalid_argument("target duration must be positive");
    if (dim_ <= 0) throw std::invalid_argument("target dimension must be positive");
}

TargetEvolution TargetEvolution::piecewise_constant(std::vector<HermitianOp> segments,
                                                    double segment_width) {
    if (segments.empty()) throw std::invalid_argument("piecewise target needs >= 1 segment");
    if (!(segment_width > 0.0)) throw std::invalid_argument("segment width must be positive");
    const Eigen::Index dim = segments.front().dim();
    for (const auto& s : segments) {
        if (s.dim() != dim) throw std::invalid_argument("target segments must share a dimension");
    }
    const double duration = segment_width * static_cast<double>(segments.size());
    auto table = std::make_shared<std::vector<HermitianOp>>(std::move(segments));
    auto sampler = [table, segment_width](double t) {
        auto idx = static_cast<Eigen::Index>(std::floor(t / segment_width));
        idx = std::clamp<Eigen::Index>(idx, 0, static_cast<Eigen::Index>(table->size()) - 1);
        return (*table)[static_cast<size_t>(idx)].matrix();
    };
    return TargetEvolution(std::move(sampler), duration, dim);
}

HermitianOp TargetEvolution::generator(double t) const { return HermitianOp(sampler_(t)); }

namespace {
Eigen::MatrixXcd ordered_product(const TargetEvolution& target, double t, int n) {
    const double dt = t / n;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(target.dim(), target.dim());
    for (int j = 0; j < n; ++j) {
        const double tj = j * dt;  // left endpoint
        u = hermitian_propagator(target.generator(tj), dt) * u;
    }
    return u;
}
}  // namespace

Eigen::MatrixXcd target_propagator(const TargetEvolution& target, double t, int n_substeps) {
    if (n_substeps < 1) throw std::invalid_argument("n_substeps must be >= 1");
    if (t == 0.0) return Eigen::MatrixXcd::Identity(target.dim(), target.dim());
    constexpr double kTol = 1e-8;
    Eigen::MatrixXcd prev = ordered_product(target, t, n_substeps);
    int n = n_substeps;
    for (int doubling = 0; doubling < 2; ++doubling) {
        n *= 2;
        Eigen::MatrixXcd next = ordered_product(target, t, n);
        if ((next - prev).cwiseAbs().maxCoeff() < kTol) return next;
        prev = std::move(next);
    }
    throw NonConvergent("target propagator did not settle below 1e-8 after doubling " +
                        std::to_string(n_substeps) + " substeps twice");
}

GeneratorSchedule schedule_from_target(const TargetEvolution& target, double window_width,
                                       SchedulePattern pattern, double origin,
                                       const std::vector<double>& sample_times) {
    if (!(window_width > 0.0)) throw std::invalid_argument("window width must be positive");
    const int n_samples =
        static_cast<int>(std::ceil(target.duration() / window_width - 1e-12));
    GeneratorSchedule schedule;
    schedule.width = window_width;
    schedule.origin = origin;
    schedule.pattern = pattern;
    const int stride = (pattern == SchedulePattern::Alternating) ? 2 : 1;
    schedule.windows.reserve(static_cast<size_t>(n_samples * stride));
    for (int j = 0; j < n_samples; ++j) {
        double s_j = (j + 0.5) * window_width;
        if (static_cast<size_t>(j) < sample_times.size()) s_j = sample_times[j];
        const int live_index = stride * j;
        ScheduledWindow live;
        live.index = live_index;
        live.center = origin + (live_index + 0.5) * window_width;
        if (s_j <= target.duration()) {
            live.generator = target.generator(s_j);
        }  // samples past the duration pad with identity
        schedule.windows.push_back(std::move(live));
        if (pattern == SchedulePattern::Alternating) {
            ScheduledWindow dead;
            dead.index = live_index + 1;
            dead.center = origin + (live_index + 1.5) * window_width;
            schedule.windows.push_back(std::move(dead));
        }
    }
    return schedule;
}

GeneratorSchedule schedule_from_generators(std::vector<std::optional<HermitianOp>> generators,
                                           double window_width, SchedulePattern pattern,
                                           double origin) {
    if (!(window_width > 0.0)) throw std::invalid_argument("window width must be positive");
    GeneratorSchedule schedule;
    schedule.width = window_width;
    schedule.origin = origin;
    schedule.pattern = pattern;
    const int stride = (pattern == SchedulePattern::Alternating) ? 2 : 1;
    int index = 0;
    for (auto& g : generators) {
        ScheduledWindow w;
        w.index = index;
        w.center = origin + (index + 0.5) * window_width;
        w.generator = std::move(g);
        schedule.windows.push_back(std::move(w));
        ++index;
        if (pattern == SchedulePattern::Alternating) {
            ScheduledWindow dead;
            dead.index = index;
            dead.center = origin + (index + 0.5) * window_width;
            schedule.windows.push_back(std::move(dead));
            ++index;
        }
    }
    return schedule;
}

}  // namespace qclock
