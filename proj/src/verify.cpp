#include "qclock/verify.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "qclock/config.hpp"
#include "qclock/csv.hpp"
#include "qclock/driver.hpp"
#include "qclock/format.hpp"
#include "qclock/modulation.hpp"
#include "qclock/oracle.hpp"
#include "qclock/protocol.hpp"
#include "qclock/spectral.hpp"

namespace qclock {

namespace checks {

namespace {

using std::complex;
constexpr complex<double> kI{0.0, 1.0};

Eigen::MatrixXcd pauli(char axis) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    switch (axis) {
        case 'x':
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case 'y':
            m(0, 1) = -kI;
            m(1, 0) = kI;
            break;
        default:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
    }
    return m;
}

DispersionRelation sine_perturbed_table(double k_max, double step, double amplitude) {
    const auto n = static_cast<Eigen::Index>(std::ceil(2.0 * k_max / step)) + 1;
    Eigen::VectorXd ks(n), ws(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double k = -k_max + step * static_cast<double>(i);
        ks(i) = k;
        ws(i) = k + amplitude * std::sin(k);
    }
    return DispersionRelation::tabulated(std::move(ks), std::move(ws));
}

// The criterion-1 instance: 16-point grid, two-level engine.
struct SmallInstance {
    SpatialGrid grid{16, 32.0, -16.0};
    DispersionRelation dispersion = DispersionRelation::linear(1.0);
    HermitianOp h_engine{pauli('x') / 4.0};
    GeneratorSchedule schedule;
    JointState initial;

    SmallInstance()
        : schedule(schedule_from_generators({HermitianOp(pauli('z'))}, 16.0,
                                            SchedulePattern::Explicit, -16.0)),
          initial(JointState::product(
              Eigen::VectorXcd::Constant(2, 1.0),
              ClockAmplitudes::normalized(grid,
                                          gaussian_envelope(grid, ClockPulse{-2.0, 0.5, 0.5})))) {}
};

double split_vs_dense_deviation(const SmallInstance& inst, double dt, double duration) {
    StepConfig cfg;
    cfg.dt = dt;
    cfg.steps_per_record = 1 << 30;
    // The 16-point grid cannot hold the sentinel's 1e-8 tail level.
    cfg.wraparound_threshold = 1e-3;
    const Trajectory traj = evolve(inst.initial, inst.schedule, inst.h_engine, inst.dispersion,
                                   cfg, duration);
    const DenseJointHamiltonian dense =
        build_dense(inst.grid, inst.dispersion, inst.h_engine, inst.schedule);
    const Eigen::VectorXcd reference = exact_evolve(dense, flatten(inst.initial), duration);
    const JointState dense_state = unflatten(inst.grid, 2, reference);
    return (traj.final_state.amplitudes() - dense_state.amplitudes()).cwiseAbs().maxCoeff();
}

}  // namespace

OracleEquivalence oracle_equivalence() {
    const SmallInstance inst;
    OracleEquivalence result;
    result.max_deviation = split_vs_dense_deviation(inst, 1e-2, 1.0);

    const std::vector<double> dts = {4e-2, 2e-2, 1e-2, 5e-3};
    Eigen::VectorXd log_dt(4), log_err(4);
    for (int i = 0; i < 4; ++i) {
        log_dt(i) = std::log(dts[static_cast<size_t>(i)]);
        log_err(i) = std::log(split_vs_dense_deviation(inst, dts[static_cast<size_t>(i)], 1.0));
    }
    result.fitted_order = polyfit(log_dt, log_err, 1)(1);
    return result;
}

double commutator_residual_battery(bool inject_fault) {
    const SpatialGrid grid(64, 32.0, -16.0);
    std::vector<DispersionRelation> battery = {
        DispersionRelation::linear(1.0), DispersionRelation::massive(1.0, 10.0),
        sine_perturbed_table(7.0, 0.004, 0.1)};
    if (inject_fault) {
        for (auto& d : battery) d = d.with_derivative_scale(1.05);
    }

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> center(-6.0, 6.0);
    std::uniform_real_distribution<double> bandwidth(0.8, 1.2);
    std::uniform_real_distribution<double> carrier(-1.5, 1.5);
    std::uniform_real_distribution<double> chirp(-0.2, 0.2);

    const double dx = grid.spacing();
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
        const ClockPulse pulse{center(rng), bandwidth(rng), carrier(rng), chirp(rng)};
        const ClockAmplitudes state =
            ClockAmplitudes::normalized(grid, gaussian_envelope(grid, pulse));
        const Eigen::VectorXcd v = state.values() * std::sqrt(dx);
        for (const auto& dispersion : battery) {
            const DenseTimeOperators ops = dense_time_operators(grid, dispersion, 1.0);
            const complex<double> comm =
                (v.adjoint() * (ops.T * (ops.H_C * v) - ops.H_C * (ops.T * v)))(0, 0);
            const complex<double> lambda = (v.adjoint() * (ops.Lambda * v))(0, 0);
            worst = std::max(worst, std::abs(comm - kI * lambda));
        }
    }
    return worst;
}

double heisenberg_residual() {
    const SpatialGrid grid(64, 32.0, -16.0);
    const DispersionRelation dispersion = DispersionRelation::massive(1.0, 10.0);
    const DenseTimeOperators ops = dense_time_operators(grid, dispersion, 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(ops.H_C);

    std::mt19937 rng(777);
    std::uniform_real_distribution<double> center(-6.0, 0.0);
    std::uniform_real_distribution<double> carrier(-1.0, 1.0);

    const double dx = grid.spacing();
    const double t = 3.0;
    Eigen::VectorXcd phases(solver.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        const double a = -solver.eigenvalues()(i) * t;
        phases(i) = complex<double>(std::cos(a), std::sin(a));
    }
    const Eigen::MatrixXcd u_t =
        solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();

    double worst = 0.0;
    for (int s = 0; s < 5; ++s) {
        const ClockPulse pulse{center(rng), 1.0, carrier(rng)};
        const ClockAmplitudes state =
            ClockAmplitudes::normalized(grid, gaussian_envelope(grid, pulse));
        const Eigen::VectorXcd v0 = state.values() * std::sqrt(dx);
        const Eigen::VectorXcd vt = u_t * v0;
        const double evolved = (vt.adjoint() * (ops.T * vt))(0, 0).real();
        const double expected = (v0.adjoint() * (ops.T * v0))(0, 0).real() +
                                t * (v0.adjoint() * (ops.Lambda * v0))(0, 0).real();
        worst = std::max(worst, std::abs(evolved - expected));
    }
    return worst;
}

VarianceLawResult variance_law_run() {
    const SpatialGrid grid(4096, 200.0, -100.0);
    const DispersionRelation dispersion = DispersionRelation::massive(1.0, 10.0);
    const HermitianOp h_trivial(Eigen::MatrixXcd::Zero(1, 1));
    const ClockAmplitudes pulse = make_gaussian_pulse(grid, ClockPulse{-75.0, 1.0, 10.0});
    StepConfig cfg;
    cfg.dt = 0.07;
    cfg.steps_per_record = 40;
    const Trajectory traj = evolve(JointState::product(Eigen::VectorXcd::Ones(1), pulse),
                                   GeneratorSchedule{}, h_trivial, dispersion, cfg, 56.0);

    VarianceLawResult result;
    result.truncated = traj.truncated;
    const auto& records = traj.records;
    const double var0 = records.front().var_T;
    const double var_lambda = records.front().var_lambda;
    result.sqrt_var_lambda = std::sqrt(var_lambda);
    result.min_bound_margin = std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
        const double expected = var0 + r.t * r.t * var_lambda;
        result.max_rel_error =
            std::max(result.max_rel_error, std::abs(r.var_T - expected) / expected);
        result.min_bound_margin = std::min(result.min_bound_margin, uncertainty_check(r).margin);
    }
    const DegradationFit fit = degradation_series(records);
    result.sqrt_q = fit.sqrt_q;
    result.fitted_b = fit.b;
    result.massive_slope = pauli_rate(records);
    result.expected_slope = 1.0 + 10.0 / 10.0;
    return result;
}

DichotomyResult theorem3_battery() {
    const SpatialGrid grid(1024, 100.0, -50.0);
    const ClockAmplitudes pulse = make_gaussian_pulse(grid, ClockPulse{-30.0, 1.0, 5.0});
    const HermitianOp h_trivial(Eigen::MatrixXcd::Zero(1, 1));
    StepConfig cfg;
    cfg.dt = 0.1;
    cfg.steps_per_record = 10;

    std::vector<std::pair<std::string, DispersionRelation>> battery = {
        {"linear", DispersionRelation::linear(1.0)},
        {"massive_5", DispersionRelation::massive(1.0, 5.0)},
        {"massive_10", DispersionRelation::massive(1.0, 10.0)},
        {"massive_50", DispersionRelation::massive(1.0, 50.0)},
        {"tabulated_sine", sine_perturbed_table(33.0, 0.01, 0.1)}};

    DichotomyResult result;
    result.q_min_nonlinear = std::numeric_limits<double>::infinity();
    result.min_bound_margin = std::numeric_limits<double>::infinity();
    for (const auto& [name, dispersion] : battery) {
        const Trajectory traj = evolve(JointState::product(Eigen::VectorXcd::Ones(1), pulse),
                                       GeneratorSchedule{}, h_trivial, dispersion, cfg, 15.0);
        const DegradationFit fit = degradation_series(traj.records);
        if (name == "linear") {
            result.q_linear = std::abs(fit.q);
            result.linear_pauli_slope = pauli_rate(traj.records);
        } else {
            result.q_min_nonlinear = std::min(result.q_min_nonlinear, fit.q);
        }
        for (const auto& r : traj.records) {
            result.min_bound_margin =
                std::min(result.min_bound_margin, uncertainty_check(r).margin);
        }
    }
    return result;
}

SaturationResult uncertainty_saturation() {
    const SpatialGrid grid(1024, 100.0, -50.0);
    const DispersionRelation dispersion = DispersionRelation::linear(1.0);
    const ClockAmplitudes pulse = make_gaussian_pulse(grid, ClockPulse{-30.0, 1.0, 10.0});
    const ObservableStats ts = time_stats(pulse, 1.0);
    const ObservableStats hs = hc_stats(pulse, dispersion);
    const ObservableStats ls = lambda_stats(pulse, dispersion, 1.0);
    return {std::sqrt(ts.variance * hs.variance), std::abs(ls.mean) / 2.0};
}

DegradationGap coupling_degradation_gap() {
    const SpatialGrid grid(16, 32.0, -16.0);
    const DispersionRelation dispersion = DispersionRelation::linear(1.0);
    const HermitianOp h_zero(Eigen::MatrixXcd::Zero(2, 2));
    const GeneratorSchedule coupled = schedule_from_generators(
        {HermitianOp(pauli('z'))}, 16.0, SchedulePattern::Alternating, -16.0);
    const GeneratorSchedule free_schedule;
    const JointState initial = JointState::product(
        Eigen::VectorXcd::Constant(2, 1.0),
        ClockAmplitudes::normalized(grid, gaussian_envelope(grid, ClockPulse{0.0, 0.6, 0.4})));
    StepConfig cfg;
    cfg.dt = 0.05;
    cfg.steps_per_record = 20;
    cfg.wraparound_threshold = 1e-3;  // 16-point tails saturate near 1e-5
    const double duration = 4.0;

    const Trajectory with_coupling =
        evolve(initial, coupled, h_zero, dispersion, cfg, duration);
    const Trajectory without =
        evolve(initial, free_schedule, h_zero, dispersion, cfg, duration);

    DegradationGap gap;
    gap.split_gap = with_coupling.records.back().degradation - without.records.back().degradation;

    const DenseJointHamiltonian dense_coupled = build_dense(grid, dispersion, h_zero, coupled);
    const DenseJointHamiltonian dense_free = build_dense(grid, dispersion, h_zero, free_schedule);
    const JointState coupled_state =
        unflatten(grid, 2, exact_evolve(dense_coupled, flatten(initial), duration));
    const JointState free_state =
        unflatten(grid, 2, exact_evolve(dense_free, flatten(initial), duration));
    gap.oracle_gap = std::sqrt(time_stats(coupled_state, 1.0).variance) -
                     std::sqrt(time_stats(free_state, 1.0).variance);
    return gap;
}

NeutralityResult window_neutrality() {
    NeutralityResult result;
    {
        // Pulse inside a dead window; the engine must see exp(-i H_E t) only.
        const SpatialGrid grid(512, 40.0, 0.0);
        const DispersionRelation dispersion = DispersionRelation::linear(1.0);
        const HermitianOp h_engine(0.3 * pauli('x'));
        const GeneratorSchedule schedule = schedule_from_generators(
            {std::nullopt}, 20.0, SchedulePattern::Explicit, 0.0);
        Eigen::VectorXcd basis0 = Eigen::VectorXcd::Zero(2);
        basis0(0) = 1.0;
        const JointState initial =
            JointState::product(basis0, make_gaussian_pulse(grid, ClockPulse{10.0, 1.0, 0.0}));
        StepConfig cfg;
        cfg.dt = 0.2;
        cfg.steps_per_record = 1 << 30;
        const double duration = 4.0;
        const Trajectory traj = evolve(initial, schedule, h_engine, dispersion, cfg, duration);
        const Eigen::MatrixXcd rho = reduced_engine_state(traj.final_state);
        const Eigen::VectorXcd reference = hermitian_propagator(h_engine, duration) * basis0;
        result.dead_window_fidelity = (reference.adjoint() * rho * reference)(0, 0).real();
    }
    {
        // Pulse kept inside one live window: the channel is exp(-i v tau / W).
        const SpatialGrid grid(512, 64.0, -12.0);
        const double window_width = 30.0;
        const double duration = 5.0;
        const GeneratorSchedule schedule = schedule_from_generators(
            {HermitianOp(pauli('x'))}, window_width, SchedulePattern::Explicit, 0.0);
        ProtocolSetup setup{grid,
                            ClockPulse{10.0, 1.0, 0.0},
                            DispersionRelation::linear(1.0),
                            HermitianOp(Eigen::MatrixXcd::Zero(2, 2)),
                            StepConfig{},
                            duration};
        setup.stepping.dt = 0.1;
        setup.stepping.steps_per_record = 1 << 30;
        const Eigen::MatrixXcd choi = realized_channel(schedule, setup);
        const Eigen::MatrixXcd target =
            hermitian_propagator(HermitianOp(pauli('x')), duration / window_width);
        result.live_window_f_avg = average_gate_fidelity(entanglement_fidelity(choi, target), 2);
    }
    return result;
}

}  // namespace checks

namespace {

using CheckFn = std::function<void(CheckResult&)>;

void run_check(VerificationReport& report, const std::string& name, const CheckFn& fn) {
    CheckResult result;
    result.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
        fn(result);
    } catch (const std::exception& err) {
        result.pass = false;
        result.detail = std::string("exception: ") + err.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.all_pass = report.all_pass && result.pass;
    report.checks.push_back(std::move(result));
}

Eigen::MatrixXcd raw_ordered_product(const TargetEvolution& target, double t, int n) {
    const double dt = t / n;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(target.dim(), target.dim());
    for (int j = 0; j < n; ++j) {
        u = hermitian_propagator(target.generator(j * dt), dt) * u;
    }
    return u;
}

const char* kDeterminismConfig = R"json({
  "grid": {"n_points": 512, "length": 100.0, "origin": -50.0},
  "pulse": {"x0": -20.0, "omega": 1.0, "k0": 5.0},
  "dispersion": {"kind": "massive", "v_g": 1.0, "mass": 10.0},
  "engine": {"dim": 2, "h_e": "pauli_x", "initial": "basis0"},
  "stepping": {"dt": 0.1, "steps_per_record": 5},
  "run": {"duration": 8.0}
})json";

}  // namespace

VerificationReport run_verification(bool inject_dispersion_fault) {
    using namespace checks;
    VerificationReport report;

    run_check(report, "free_step_unitarity_1e4_steps", [](CheckResult& r) {
        const SpatialGrid grid(512, 100.0, -50.0);
        const DispersionRelation dispersion = DispersionRelation::massive(1.0, 10.0);
        ClockAmplitudes state = make_gaussian_pulse(grid, ClockPulse{-20.0, 1.0, 3.0});
        double max_step_drift = 0.0;
        double prev = state.norm();
        for (int i = 0; i < 10000; ++i) {
            state = free_step(state, dispersion, 1e-3);
            const double now = state.norm();
            max_step_drift = std::max(max_step_drift, std::abs(now - prev));
            prev = now;
        }
        r.measured = std::abs(state.norm() - 1.0);
        r.tolerance = 1e-9;
        r.pass = r.measured < r.tolerance && max_step_drift < 1e-13;
        r.detail = "cumulative drift " + fmt17(r.measured) + ", max per-step " +
                   fmt17(max_step_drift);
    });

    run_check(report, "translation_invariance_linear", [](CheckResult& r) {
        const SpatialGrid grid(512, 100.0, -50.0);
        const DispersionRelation dispersion = DispersionRelation::linear(1.0);
        const ClockAmplitudes state = make_gaussian_pulse(grid, ClockPulse{-30.0, 1.0, 4.0});
        const int shift = 128;  // v_g * t = shift * spacing
        const double t = shift * grid.spacing();
        const ClockAmplitudes moved = free_step(state, dispersion, t);
        double worst = 0.0;
        for (int j = 0; j < grid.n_points(); ++j) {
            const int src = (j - shift + grid.n_points()) % grid.n_points();
            worst = std::max(worst,
                             std::abs(std::abs(moved.values()(j)) - std::abs(state.values()(src))));
        }
        r.measured = worst;
        r.tolerance = 1e-6;
        r.pass = worst < r.tolerance;
    });

    run_check(report, "spreading_law_chirped", [](CheckResult& r) {
        const SpatialGrid grid(1024, 100.0, -50.0);
        const DispersionRelation dispersion = DispersionRelation::massive(1.0, 8.0);
        const ClockAmplitudes state =
            ClockAmplitudes::normalized(grid, gaussian_envelope(grid, {-25.0, 1.0, 2.0, 0.15}));
        const double var0 = moments(state).var_x;
        const double cov0 = t_lambda_covariance(state, dispersion, 1.0);
        const double var_lambda = lambda_stats(state, dispersion, 1.0).variance;
        double worst = 0.0;
        for (double t : {2.0, 5.0, 10.0}) {
            const double measured = moments(free_step(state, dispersion, t)).var_x;
            const double expected = var0 + 2.0 * t * cov0 + t * t * var_lambda;
            worst = std::max(worst, std::abs(measured - expected));
        }
        r.measured = worst;
        r.tolerance = 1e-6;
        r.pass = worst < r.tolerance;
    });

    run_check(report, "momentum_distribution_invariance", [](CheckResult& r) {
        const SpatialGrid grid(512, 100.0, -50.0);
        const DispersionRelation dispersion = DispersionRelation::massive(1.0, 5.0);
        const ClockAmplitudes state = make_gaussian_pulse(grid, ClockPulse{-20.0, 1.0, 3.0});
        const Eigen::VectorXd before = to_momentum(state).cwiseAbs2();
        const Eigen::VectorXd after = to_momentum(free_step(state, dispersion, 7.0)).cwiseAbs2();
        r.measured = (after - before).cwiseAbs().maxCoeff();
        r.tolerance = 1e-13;
        r.pass = r.measured < r.tolerance;
    });

    run_check(report, "hermitian_propagator_unitarity", [](CheckResult& r) {
        std::mt19937 rng(4242);
        std::normal_distribution<double> gauss(0.0, 1.0);
        double worst_unitarity = 0.0;
        double worst_series = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            for (int dim : {2, 4, 8}) {
                Eigen::MatrixXcd a(dim, dim);
                for (int i = 0; i < dim; ++i) {
                    for (int j = 0; j < dim; ++j) a(i, j) = complex<double>(gauss(rng), gauss(rng));
                }
                const HermitianOp h((a + a.adjoint()) / 2.0);
                const double theta = 0.8;
                const Eigen::MatrixXcd u = hermitian_propagator(h, theta);
                worst_unitarity = std::max(
                    worst_unitarity,
                    (u.adjoint() * u - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff());
                // Taylor series reference at small angle.
                const double small = 0.05;
                Eigen::MatrixXcd series = Eigen::MatrixXcd::Identity(dim, dim);
                Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(dim, dim);
                for (int n = 1; n < 30; ++n) {
                    term = term * (-kI * small / static_cast<double>(n)) * h.matrix();
                    series += term;
                }
                worst_series = std::max(
                    worst_series,
                    (hermitian_propagator(h, small) - series).cwiseAbs().maxCoeff());
            }
        }
        r.measured = std::max(worst_unitarity, worst_series);
        r.tolerance = 1e-10;
        r.pass = r.measured < r.tolerance;
        r.detail = "unitarity " + fmt17(worst_unitarity) + ", series " + fmt17(worst_series);
    });

    run_check(report, "target_propagator_first_order", [](CheckResult& r) {
        Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(2, 2);
        sx(0, 1) = 1.0;
        sx(1, 0) = 1.0;
        Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(2, 2);
        sz(0, 0) = 1.0;
        sz(1, 1) = -1.0;
        const TargetEvolution target([=](double t) { return (sx + t * sz).eval(); }, 2.0, 2);
        const Eigen::MatrixXcd fine = raw_ordered_product(target, 2.0, 8192);
        const Eigen::MatrixXcd coarse = raw_ordered_product(target, 2.0, 4096);
        const Eigen::MatrixXcd reference = 2.0 * fine - coarse;  // Richardson, first order
        Eigen::VectorXd log_n(4), log_err(4);
        const int ns[4] = {8, 16, 32, 64};
        for (int i = 0; i < 4; ++i) {
            log_n(i) = std::log(1.0 / ns[i]);
            log_err(i) =
                std::log((raw_ordered_product(target, 2.0, ns[i]) - reference).cwiseAbs().maxCoeff());
        }
        const double slope = polyfit(log_n, log_err, 1)(1);
        r.measured = slope;
        r.tolerance = 0.2;
        r.pass = std::abs(slope - 1.0) <= 0.2;
        r.detail = "fitted order " + fmt17(slope);
    });

    run_check(report, "schedule_exact_reproduction", [](CheckResult& r) {
        Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(2, 2);
        sx(0, 1) = 1.0;
        sx(1, 0) = 1.0;
        Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(2, 2);
        sz(0, 0) = 1.0;
        sz(1, 1) = -1.0;
        const std::vector<HermitianOp> segments = {HermitianOp(sx), HermitianOp(sz),
                                                   HermitianOp(-0.5 * sx)};
        const TargetEvolution target = TargetEvolution::piecewise_constant(segments, 2.0);
        const GeneratorSchedule schedule =
            schedule_from_target(target, 2.0, SchedulePattern::Explicit);
        double worst = 0.0;
        for (size_t i = 0; i < segments.size(); ++i) {
            worst = std::max(worst, (schedule.windows[i].generator->matrix() -
                                     segments[i].matrix())
                                        .cwiseAbs()
                                        .maxCoeff());
        }
        r.measured = worst;
        r.tolerance = 0.0;
        r.pass = worst == 0.0;
    });

    run_check(report, "joint_norm_conservation_1e5_steps", [](CheckResult& r) {
        const SpatialGrid grid(16, 32.0, -16.0);
        const DispersionRelation dispersion = DispersionRelation::linear(1.0);
        Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(2, 2);
        sz(0, 0) = 1.0;
        sz(1, 1) = -1.0;
        Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(2, 2);
        sx(0, 1) = 1.0;
        sx(1, 0) = 1.0;
        const HermitianOp h_engine(sx / 4.0);
        const GeneratorSchedule schedule = schedule_from_generators(
            {HermitianOp(sz)}, 16.0, SchedulePattern::Explicit, -16.0);
        const JointState initial = JointState::product(
            Eigen::VectorXcd::Constant(2, 1.0),
            ClockAmplitudes::normalized(grid, gaussian_envelope(grid, ClockPulse{-2.0, 0.5, 0.5})));
        StepConfig cfg;
        cfg.dt = 1e-3;
        cfg.steps_per_record = 100000;
        cfg.wraparound_threshold = 1e-3;
        const Trajectory traj =
            evolve(initial, schedule, h_engine, dispersion, cfg, 100.0);
        r.measured = std::abs(traj.final_state.norm() - 1.0);
        r.tolerance = 1e-9;
        // Per-step drift on a short segment.
        const InteractionProfile profile(grid, schedule, h_engine, cfg.dt);
        JointState state = initial;
        double per_step = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double before = state.norm();
            state = collision_step(state, profile, dispersion, cfg);
            per_step = std::max(per_step, std::abs(state.norm() - before));
        }
        r.pass = r.measured < r.tolerance && per_step < 1e-13;
        r.detail = "cumulative " + fmt17(r.measured) + ", per-step " + fmt17(per_step);
    });

    run_check(report, "energy_conservation_coupled", [](CheckResult& r) {
        const SpatialGrid grid(64, 32.0, -16.0);
        const DispersionRelation dispersion = DispersionRelation::linear(1.0);
        Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(2, 2);
        sz(0, 0) = 1.0;
        sz(1, 1) = -1.0;
        Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(2, 2);
        sx(0, 1) = 1.0;
        sx(1, 0) = 1.0;
        const HermitianOp h_engine(sx / 4.0);
        const GeneratorSchedule schedule = schedule_from_generators(
            {HermitianOp(sz)}, 16.0, SchedulePattern::Explicit, -16.0);
        const JointState initial = JointState::product(
            Eigen::VectorXcd::Constant(2, 1.0),
            ClockAmplitudes::normalized(grid, gaussian_envelope(grid, ClockPulse{-2.0, 0.5, 0.5})));
        StepConfig cfg;
        cfg.dt = 1e-3;
        cfg.steps_per_record = 200;
        const Trajectory traj = evolve(initial, schedule, h_engine, dispersion, cfg, 2.0);
        const double e0 = traj.records.front().energy;
        double worst = 0.0;
        for (const auto& rec : traj.records) {
            worst = std::max(worst, std::abs(rec.energy - e0) / std::max(1.0, std::abs(e0)));
        }
        r.measured = worst;
        r.tolerance = 1e-6;
        r.pass = worst < r.tolerance;
    });

    run_check(report, "strang_order_and_deviation", [](CheckResult& r) {
        const checks::OracleEquivalence oe = checks::oracle_equivalence();
        r.measured = oe.fitted_order;
        r.tolerance = 0.2;
        r.pass = std::abs(oe.fitted_order - 2.0) <= 0.2 && oe.max_deviation <= 5e-6;
        r.detail = "order " + fmt17(oe.fitted_order) + ", deviation " + fmt17(oe.max_deviation);
    });

    run_check(report, "decoupled_factorization", [](CheckResult& r) {
        const SpatialGrid grid(64, 32.0, -16.0);
        const DispersionRelation dispersion = DispersionRelation::linear(1.0);
        Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(2, 2);
        sx(0, 1) = 1.0;
        sx(1, 0) = 1.0;
        const HermitianOp h_engine(sx / 4.0);
        const GeneratorSchedule schedule = schedule_from_generators(
            {HermitianOp(Eigen::MatrixXcd::Zero(2, 2))}, 16.0, SchedulePattern::Explicit, -16.0);
        const JointState initial = JointState::product(
            Eigen::VectorXcd::Constant(2, 1.0),
            ClockAmplitudes::normalized(grid, gaussian_envelope(grid, ClockPulse{-2.0, 0.5, 0.5})));
        StepConfig cfg;
        cfg.dt = 0.01;
        cfg.steps_per_record = 50;
        const Trajectory traj = evolve(initial, schedule, h_engine, dispersion, cfg, 2.0);
        double worst = 0.0;
        for (const auto& rec : traj.records) {
            worst = std::max(worst, std::abs(rec.purity_engine - 1.0));
        }
        r.measured = worst;
        r.tolerance = 1e-10;
        r.pass = worst < r.tolerance;
    });

    run_check(report, "oracle_self_consistency", [](CheckResult& r) {
        const SpatialGrid grid(16, 32.0, -16.0);
        const DispersionRelation dispersion = DispersionRelation::linear(1.0);
        Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(2, 2);
        sz(0, 0) = 1.0;
        sz(1, 1) = -1.0;
        Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(2, 2);
        sx(0, 1) = 1.0;
        sx(1, 0) = 1.0;
        const HermitianOp h_engine(sx / 4.0);
        const GeneratorSchedule schedule = schedule_from_generators(
            {HermitianOp(sz)}, 16.0, SchedulePattern::Explicit, -16.0);
        const DenseJointHamiltonian dense = build_dense(grid, dispersion, h_engine, schedule);
        const JointState initial = JointState::product(
            Eigen::VectorXcd::Constant(2, 1.0),
            ClockAmplitudes::normalized(grid, gaussian_envelope(grid, ClockPulse{-2.0, 0.5, 0.5})));
        const Eigen::VectorXcd psi0 = flatten(initial);
        const Eigen::VectorXcd psi1 = exact_evolve(dense, psi0, 3.0);
        const double norm_err = std::abs(psi1.norm() - psi0.norm());
        const double e0 = (psi0.adjoint() * (dense.total * psi0))(0, 0).real();
        const double e1 = (psi1.adjoint() * (dense.total * psi1))(0, 0).real();
        r.measured = std::max(norm_err, std::abs(e1 - e0));
        r.tolerance = 1e-10;
        r.pass = norm_err < 1e-11 && std::abs(e1 - e0) < 1e-10;
        r.detail = "norm " + fmt17(norm_err) + ", energy " + fmt17(std::abs(e1 - e0));
    });

    run_check(report, "commutator_theorem", [inject_dispersion_fault](CheckResult& r) {
        r.measured = checks::commutator_residual_battery(inject_dispersion_fault);
        r.tolerance = 1e-6;
        r.pass = r.measured < r.tolerance;
    });

    run_check(report, "heisenberg_solution", [](CheckResult& r) {
        r.measured = checks::heisenberg_residual();
        r.tolerance = 1e-6;
        r.pass = r.measured < r.tolerance;
    });

    run_check(report, "free_variance_law", [](CheckResult& r) {
        const checks::VarianceLawResult law = checks::variance_law_run();
        const double fit_gap =
            std::abs(law.sqrt_q - law.sqrt_var_lambda) / law.sqrt_var_lambda;
        r.measured = law.max_rel_error;
        r.tolerance = 1e-6;
        r.pass = !law.truncated && law.max_rel_error < 1e-6 && fit_gap < 1e-3 &&
                 law.min_bound_margin >= -1e-9 &&
                 std::abs(law.massive_slope - law.expected_slope) < 1e-4;
        r.detail = "law error " + fmt17(law.max_rel_error) + ", fit gap " + fmt17(fit_gap) +
                   ", slope " + fmt17(law.massive_slope);
    });

    run_check(report, "spectral_stats_conservation", [](CheckResult& r) {
        const SpatialGrid grid(512, 100.0, -50.0);
        const DispersionRelation dispersion = DispersionRelation::massive(1.0, 10.0);
        const HermitianOp h_trivial(Eigen::MatrixXcd::Zero(1, 1));
        const ClockAmplitudes pulse = make_gaussian_pulse(grid, ClockPulse{-20.0, 1.0, 3.0});
        StepConfig cfg;
        cfg.dt = 0.1;
        cfg.steps_per_record = 10;
        const Trajectory traj = evolve(JointState::product(Eigen::VectorXcd::Ones(1), pulse),
                                       GeneratorSchedule{}, h_trivial, dispersion, cfg, 10.0);
        const auto& first = traj.records.front();
        double worst = 0.0;
        for (const auto& rec : traj.records) {
            worst = std::max({worst, std::abs(rec.mean_lambda - first.mean_lambda),
                              std::abs(rec.var_lambda - first.var_lambda),
                              std::abs(rec.mean_hc - first.mean_hc),
                              std::abs(rec.var_hc - first.var_hc)});
        }
        r.measured = worst;
        r.tolerance = 1e-9;
        r.pass = worst < r.tolerance;
    });

    run_check(report, "theorem3_dichotomy", [](CheckResult& r) {
        const checks::DichotomyResult d = checks::theorem3_battery();
        r.measured = d.q_linear;
        r.tolerance = 1e-10;
        r.pass = d.q_linear < 1e-10 && d.q_min_nonlinear > 1e-8 &&
                 std::abs(d.linear_pauli_slope - 1.0) < 1e-6 && d.min_bound_margin >= -1e-9;
        r.detail = "q_linear " + fmt17(d.q_linear) + ", min nonlinear q " +
                   fmt17(d.q_min_nonlinear) + ", linear slope " + fmt17(d.linear_pauli_slope);
    });

    run_check(report, "uncertainty_saturation", [](CheckResult& r) {
        const checks::SaturationResult s = checks::uncertainty_saturation();
        r.measured = std::abs(s.product - s.bound);
        r.tolerance = 1e-4;
        r.pass = r.measured < r.tolerance;
        r.detail = "product " + fmt17(s.product) + ", bound " + fmt17(s.bound);
    });

    run_check(report, "coupling_degradation", [](CheckResult& r) {
        const checks::DegradationGap gap = checks::coupling_degradation_gap();
        r.measured = std::min(gap.split_gap, gap.oracle_gap);
        r.tolerance = 1e-5;
        r.pass = gap.split_gap > 1e-5 && gap.oracle_gap > 1e-5;
        r.detail = "split gap " + fmt17(gap.split_gap) + ", oracle gap " + fmt17(gap.oracle_gap);
    });

    run_check(report, "window_neutrality_and_live_channel", [](CheckResult& r) {
        const checks::NeutralityResult n = checks::window_neutrality();
        r.measured = n.dead_window_fidelity;
        r.tolerance = 1e-8;
        r.pass = n.dead_window_fidelity >= 1.0 - 1e-8 && n.live_window_f_avg >= 1.0 - 1e-3;
        r.detail = "dead fidelity " + fmt17(n.dead_window_fidelity) + ", live F_avg " +
                   fmt17(n.live_window_f_avg);
    });

    run_check(report, "modulation_bounds", [](CheckResult& r) {
        const SpatialGrid grid(512, 40.0, 0.0);
        const GeneratorSchedule schedule = schedule_from_generators(
            {HermitianOp(Eigen::MatrixXcd::Identity(2, 2))}, 10.0, SchedulePattern::Alternating,
            0.0);
        double worst = -std::numeric_limits<double>::infinity();
        double contained_gap = 0.0;
        for (double x0 : {5.0, 8.0, 10.0, 13.0, 15.0}) {
            const JointState state = JointState::product(
                Eigen::VectorXcd::Constant(2, 1.0),
                make_gaussian_pulse(grid, ClockPulse{x0, 1.5, 0.0}));
            const ModulationFactors mf =
                modulation_factors(state, schedule, ModulationMode::Intensity);
            worst = std::max(worst, mf.alpha + mf.beta - 1.0 / schedule.width);
            if (x0 == 10.0) {
                contained_gap = std::abs(mf.alpha + mf.beta - 1.0 / schedule.width);
            }
        }
        r.measured = worst;
        r.tolerance = 1e-12;
        r.pass = worst <= 1e-12 && contained_gap < 1e-9;
        r.detail = "max alpha+beta-1/W " + fmt17(worst) + ", contained gap " +
                   fmt17(contained_gap);
    });

    run_check(report, "tradeoff_monotonicity", [](CheckResult& r) {
        const auto rows = omega_tradeoff_sweep({0.5, 1.0, 2.0, 4.0});
        double min_f_increment = std::numeric_limits<double>::infinity();
        double min_d_increment = std::numeric_limits<double>::infinity();
        std::string detail;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i > 0) {
                min_f_increment = std::min(min_f_increment, rows[i].f_avg - rows[i - 1].f_avg);
                min_d_increment = std::min(
                    min_d_increment, rows[i].final_degradation - rows[i - 1].final_degradation);
            }
            detail += (detail.empty() ? "" : " | ") + fmt17(rows[i].omega) + ": F=" +
                      fmt17(rows[i].f_avg) + " D=" + fmt17(rows[i].final_degradation);
        }
        r.measured = std::min(min_f_increment, min_d_increment);
        r.tolerance = -1e-9;
        r.pass = min_f_increment >= -1e-9 && min_d_increment >= -1e-9;
        r.detail = detail;
    });

    run_check(report, "choi_trace_preservation", [](CheckResult& r) {
        Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(2, 2);
        sx(0, 1) = 1.0;
        sx(1, 0) = 1.0;
        const SpatialGrid grid(512, 64.0, -12.0);
        const GeneratorSchedule schedule = schedule_from_generators(
            {HermitianOp(sx)}, 30.0, SchedulePattern::Explicit, 0.0);
        ProtocolSetup setup{grid,
                            ClockPulse{10.0, 1.0, 0.0},
                            DispersionRelation::linear(1.0),
                            HermitianOp(0.3 * sx),
                            StepConfig{},
                            5.0};
        setup.stepping.dt = 0.1;
        setup.stepping.steps_per_record = 1 << 30;
        const Eigen::MatrixXcd choi = realized_channel(schedule, setup);
        Eigen::MatrixXcd traced = Eigen::MatrixXcd::Zero(2, 2);
        for (Eigen::Index a = 0; a < 2; ++a) {
            for (Eigen::Index b = 0; b < 2; ++b) {
                for (Eigen::Index e = 0; e < 2; ++e) traced(a, b) += choi(a * 2 + e, b * 2 + e);
            }
        }
        const double trace_err =
            (traced - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(choi);
        const double min_eig = es.eigenvalues().minCoeff();
        const double trace_gap = std::abs(choi.trace().real() - 2.0);
        r.measured = std::max({trace_err, trace_gap, -min_eig});
        r.tolerance = 1e-8;
        r.pass = trace_err < 1e-8 && trace_gap < 1e-8 && min_eig > -1e-8;
        r.detail = "partial trace " + fmt17(trace_err) + ", trace gap " + fmt17(trace_gap) +
                   ", min eig " + fmt17(min_eig);
    });

    run_check(report, "run_determinism", [](CheckResult& r) {
        const SimConfig cfg = parse_config(kDeterminismConfig);
        std::ostringstream first, second;
        write_trajectory_csv(run_simulation(cfg).trajectory.records, first);
        write_trajectory_csv(run_simulation(cfg).trajectory.records, second);
        r.pass = first.str() == second.str();
        r.measured = r.pass ? 0.0 : 1.0;
        r.tolerance = 0.0;
    });

    run_check(report, "config_round_trip", [](CheckResult& r) {
        const SimConfig cfg = parse_config(kDeterminismConfig);
        const std::string once = serialize_config(cfg);
        const std::string twice = serialize_config(parse_config(once));
        r.pass = once == twice;
        r.measured = r.pass ? 0.0 : 1.0;
        r.tolerance = 0.0;
    });

    report.all_pass = true;
    for (const auto& c : report.checks) report.all_pass = report.all_pass && c.pass;
    return report;
}

}  // namespace qclock
