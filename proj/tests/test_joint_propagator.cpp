#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>

#include "qclock/engine.hpp"
#include "qclock/errors.hpp"
#include "qclock/oracle.hpp"
#include "qclock/propagator.hpp"
#include "qclock/pulse.hpp"
#include "qclock/timeops.hpp"

using namespace qclock;
using std::complex;

namespace {

Eigen::MatrixXcd sigma_x() {
    Eigen::MatrixXcd m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Eigen::MatrixXcd sigma_z() {
    Eigen::MatrixXcd m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

JointState plus_state_with_pulse(const SpatialGrid& grid, const ClockPulse& pulse) {
    return JointState::product(Eigen::VectorXcd::Constant(2, 1.0),
                               ClockAmplitudes::normalized(grid, gaussian_envelope(grid, pulse)));
}

}  // namespace

TEST_CASE("interaction profile shapes") {
    const SpatialGrid grid(64, 32.0, -16.0);
    const HermitianOp h_engine(sigma_x() / 4.0);
    const double dt = 0.05;

    SUBCASE("zero generators reduce to the free engine step") {
        const GeneratorSchedule schedule = schedule_from_generators(
            {HermitianOp(Eigen::MatrixXcd::Zero(2, 2))}, 16.0, SchedulePattern::Explicit, -16.0);
        const InteractionProfile profile(grid, schedule, h_engine, dt);
        for (size_t s = 0; s < profile.segments().size(); ++s) {
            CHECK(max_abs(profile.full_step_t(s) - profile.engine_step_t()) < 1e-14);
        }
    }

    SUBCASE("live window at dt/W = pi flips the sign") {
        const HermitianOp h_zero(Eigen::MatrixXcd::Zero(2, 2));
        const GeneratorSchedule schedule = schedule_from_generators(
            {HermitianOp(sigma_x())}, 16.0, SchedulePattern::Explicit, -16.0);
        const InteractionProfile profile(grid, schedule, h_zero, 16.0 * M_PI);
        const auto& segments = profile.segments();
        REQUIRE(segments.size() >= 1);
        bool found = false;
        for (size_t s = 0; s < segments.size(); ++s) {
            if (segments[s].kind == WindowSegment::Kind::Generator) {
                CHECK(max_abs(profile.full_step_t(s) + Eigen::MatrixXcd::Identity(2, 2)) < 1e-10);
                found = true;
            }
        }
        CHECK(found);
    }

    SUBCASE("dead windows carry the scalar phase exactly") {
        const GeneratorSchedule schedule = schedule_from_generators(
            {HermitianOp(sigma_z())}, 8.0, SchedulePattern::Alternating, -16.0);
        const InteractionProfile profile(grid, schedule, h_engine, dt);
        const complex<double> phase = std::exp(complex<double>(0.0, -dt / 8.0));
        for (size_t s = 0; s < profile.segments().size(); ++s) {
            if (profile.segments()[s].kind == WindowSegment::Kind::Identity) {
                CHECK(max_abs(profile.full_step_t(s) - phase * profile.engine_step_t()) < 1e-15);
                CHECK(max_abs(profile.coupling_step_t(s) -
                              phase * Eigen::MatrixXcd::Identity(2, 2)) < 1e-15);
            }
        }
    }

    SUBCASE("windows narrower than the grid spacing are rejected") {
        const GeneratorSchedule schedule = schedule_from_generators(
            {HermitianOp(sigma_z())}, 0.2, SchedulePattern::Explicit, -16.0);
        CHECK_THROWS_AS(InteractionProfile(grid, schedule, h_engine, dt), WindowGridMisaligned);
    }
}

TEST_CASE("decoupled collision steps keep a product state") {
    const SpatialGrid grid(128, 64.0, -32.0);
    const DispersionRelation dispersion = DispersionRelation::linear(1.0);
    const HermitianOp h_engine(sigma_z());
    const GeneratorSchedule schedule;  // no windows at all
    const JointState initial = plus_state_with_pulse(grid, {-10.0, 0.8, 1.0});
    StepConfig cfg;
    cfg.dt = 0.01;

    const InteractionProfile profile(grid, schedule, h_engine, cfg.dt);
    JointState state = initial;
    for (int i = 0; i < 100; ++i) state = collision_step(state, profile, dispersion, cfg);

    // Bloch vector precession at rate 2 under sigma_z.
    const Eigen::MatrixXcd rho = reduced_engine_state(state);
    const double t = 1.0;
    CHECK(std::abs(2.0 * rho(0, 1).real() - std::cos(2.0 * t)) < 1e-9);
    CHECK(std::abs(2.0 * rho(0, 1).imag() - std::sin(2.0 * t)) < 1e-9);
    CHECK(std::abs(purity(rho) - 1.0) < 1e-10);

    // Clock translated independently of the engine.
    CHECK(time_stats(state, 1.0).mean == doctest::Approx(-9.0).epsilon(1e-6));
    CHECK(std::abs(state.norm() - 1.0) < 1e-12);
}

TEST_CASE("pulse inside a live window applies exp(-i v tau / W)") {
    const SpatialGrid grid(512, 64.0, -12.0);
    const DispersionRelation dispersion = DispersionRelation::linear(1.0);
    const HermitianOp h_zero(Eigen::MatrixXcd::Zero(2, 2));
    const double w = 30.0;
    const GeneratorSchedule schedule =
        schedule_from_generators({HermitianOp(sigma_x())}, w, SchedulePattern::Explicit, 0.0);
    const JointState initial = plus_state_with_pulse(grid, {10.0, 1.0, 0.0});
    StepConfig cfg;
    cfg.dt = 0.1;
    cfg.steps_per_record = 1 << 30;
    const double tau = 5.0;
    const Trajectory traj = evolve(initial, schedule, h_zero, dispersion, cfg, tau);

    const Eigen::MatrixXcd u = hermitian_propagator(HermitianOp(sigma_x()), tau / w);
    const Eigen::VectorXcd engine0 = Eigen::VectorXcd::Constant(2, 1.0 / std::sqrt(2.0));
    const Eigen::VectorXcd expected = u * engine0;
    const Eigen::MatrixXcd rho = reduced_engine_state(traj.final_state);
    CHECK(std::abs((expected.adjoint() * rho * expected)(0, 0).real() - 1.0) < 1e-6);
}

TEST_CASE("one collision step matches the dense oracle with third-order local error") {
    const SpatialGrid grid(16, 32.0, -16.0);
    const DispersionRelation dispersion = DispersionRelation::linear(1.0);
    const HermitianOp h_engine(sigma_x() / 4.0);
    const GeneratorSchedule schedule =
        schedule_from_generators({HermitianOp(sigma_z())}, 16.0, SchedulePattern::Explicit, -16.0);
    const JointState initial = plus_state_with_pulse(grid, {-2.0, 0.5, 0.5});
    const DenseJointHamiltonian dense = build_dense(grid, dispersion, h_engine, schedule);

    auto one_step_error = [&](double dt) {
        StepConfig cfg;
        cfg.dt = dt;
        const InteractionProfile profile(grid, schedule, h_engine, dt);
        const JointState stepped = collision_step(initial, profile, dispersion, cfg);
        const JointState exact = unflatten(grid, 2, exact_evolve(dense, flatten(initial), dt));
        return (stepped.amplitudes() - exact.amplitudes()).cwiseAbs().maxCoeff();
    };

    CHECK(one_step_error(1e-2) < 5e-6);

    Eigen::VectorXd log_dt(3), log_err(3);
    const double dts[3] = {4e-2, 2e-2, 1e-2};
    for (int i = 0; i < 3; ++i) {
        log_dt(i) = std::log(dts[i]);
        log_err(i) = std::log(one_step_error(dts[i]));
    }
    const double slope = polyfit(log_dt, log_err, 1)(1);
    CHECK(slope == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("evolve at duration zero emits one untouched record") {
    const SpatialGrid grid(128, 64.0, -32.0);
    const JointState initial = plus_state_with_pulse(grid, {-10.0, 1.0, 2.0});
    StepConfig cfg;
    cfg.dt = 0.01;
    const Trajectory traj = evolve(initial, GeneratorSchedule{}, HermitianOp(sigma_z()),
                                   DispersionRelation::linear(1.0), cfg, 0.0);
    REQUIRE(traj.records.size() == 1);
    CHECK(traj.records[0].t == 0.0);
    CHECK_FALSE(traj.truncated);
    CHECK(max_abs(traj.final_state.amplitudes() - initial.amplitudes()) == 0.0);
}

TEST_CASE("linear decoupled records drift at v_g / c with flat width") {
    const SpatialGrid grid(512, 100.0, -50.0);
    StepConfig cfg;
    cfg.dt = 0.05;
    cfg.steps_per_record = 20;
    cfg.c = 1.0;
    const JointState initial = plus_state_with_pulse(grid, {-30.0, 1.0, 4.0});
    const Trajectory traj = evolve(initial, GeneratorSchedule{}, HermitianOp(sigma_z()),
                                   DispersionRelation::linear(1.0), cfg, 10.0);
    CHECK(pauli_rate(traj.records) == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& r : traj.records) {
        CHECK(std::abs(r.var_T - traj.records.front().var_T) < 1e-9);
    }
}

TEST_CASE("guards: step ratio and step divisibility") {
    const SpatialGrid grid(64, 32.0, -16.0);
    const JointState initial = plus_state_with_pulse(grid, {-2.0, 0.5, 0.0});
    const GeneratorSchedule schedule =
        schedule_from_generators({HermitianOp(sigma_z())}, 16.0, SchedulePattern::Explicit, -16.0);
    StepConfig cfg;
    cfg.dt = 0.5;  // above W / 100
    CHECK_THROWS_AS(evolve(initial, schedule, HermitianOp(sigma_x()),
                           DispersionRelation::linear(1.0), cfg, 1.0),
                    std::invalid_argument);
    cfg.dt = 0.15;  // fine for W = 16, but 1.0 / 0.15 is not integral
    CHECK_THROWS_AS(evolve(initial, schedule, HermitianOp(sigma_x()),
                           DispersionRelation::linear(1.0), cfg, 1.0),
                    std::invalid_argument);
}

TEST_CASE("wraparound sentinel truncates and flags") {
    const SpatialGrid grid(256, 64.0, -32.0);
    StepConfig cfg;
    cfg.dt = 0.05;
    cfg.steps_per_record = 40;
    const JointState initial = plus_state_with_pulse(grid, {20.0, 1.0, 0.0});
    // Linear drift into the right edge region well before the nominal end.
    const Trajectory traj = evolve(initial, GeneratorSchedule{}, HermitianOp(sigma_z()),
                                   DispersionRelation::linear(1.0), cfg, 20.0);
    CHECK(traj.truncated);
    CHECK(traj.records.back().flags.find("wraparound") != std::string::npos);
    CHECK(traj.records.back().t < 20.0);
}

TEST_CASE("reduced engine state and purity") {
    const SpatialGrid grid(256, 64.0, -32.0);
    const ClockAmplitudes left =
        ClockAmplitudes::normalized(grid, gaussian_envelope(grid, {-15.0, 1.0, 0.0}));
    const ClockAmplitudes right =
        ClockAmplitudes::normalized(grid, gaussian_envelope(grid, {15.0, 1.0, 0.0}));

    SUBCASE("product state is pure") {
        Eigen::VectorXcd engine(2);
        engine << complex<double>(0.6, 0.0), complex<double>(0.0, 0.8);
        const JointState state = JointState::product(engine, left);
        const Eigen::MatrixXcd rho = reduced_engine_state(state);
        CHECK(std::abs(purity(rho) - 1.0) < 1e-10);
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-10);
        CHECK(max_abs(rho - rho.adjoint()) < 1e-12);
        // Coherence sign survives the partial trace.
        CHECK(rho(0, 1).imag() == doctest::Approx(-0.48).epsilon(1e-9));
    }

    SUBCASE("two disjoint branches give the maximally mixed state") {
        Eigen::MatrixXcd amp(grid.n_points(), 2);
        amp.col(0) = left.values() / std::sqrt(2.0);
        amp.col(1) = right.values() / std::sqrt(2.0);
        const JointState state(grid, amp);
        const Eigen::MatrixXcd rho = reduced_engine_state(state);
        CHECK(max_abs(rho - 0.5 * Eigen::MatrixXcd::Identity(2, 2)) < 1e-10);
    }

    SUBCASE("straddling distinct windows entangles the branches") {
        const GeneratorSchedule schedule = schedule_from_generators(
            {HermitianOp(sigma_z())}, 32.0, SchedulePattern::Alternating, -32.0);
        StepConfig cfg;
        cfg.dt = 0.05;
        cfg.steps_per_record = 1 << 30;
        const JointState initial = plus_state_with_pulse(grid, {0.0, 1.0, 0.0});
        const Trajectory traj = evolve(initial, schedule, HermitianOp(Eigen::MatrixXcd::Zero(2, 2)),
                                       DispersionRelation::linear(1.0), cfg, 4.0);
        CHECK(purity(reduced_engine_state(traj.final_state)) < 1.0 - 1e-6);
    }
}

TEST_CASE("state dump round trip") {
    namespace fs = std::filesystem;
    const SpatialGrid grid(64, 32.0, -16.0);
    const JointState state = plus_state_with_pulse(grid, {-2.0, 0.5, 0.5});
    const std::string path =
        (fs::temp_directory_path() / "qclock_test_state.qclk").string();
    save_state(state, path);
    const JointState loaded = load_state(path);
    CHECK(loaded.grid().n_points() == grid.n_points());
    CHECK(loaded.grid().spacing() == grid.spacing());
    CHECK(loaded.grid().origin() == grid.origin());
    CHECK(max_abs(loaded.amplitudes() - state.amplitudes()) == 0.0);
    fs::remove(path);
}

TEST_CASE("lie splitting is first order against the oracle") {
    const SpatialGrid grid(16, 32.0, -16.0);
    const DispersionRelation dispersion = DispersionRelation::linear(1.0);
    const HermitianOp h_engine(sigma_x() / 4.0);
    const GeneratorSchedule schedule =
        schedule_from_generators({HermitianOp(sigma_z())}, 16.0, SchedulePattern::Explicit, -16.0);
    const JointState initial = plus_state_with_pulse(grid, {-2.0, 0.5, 0.5});
    const DenseJointHamiltonian dense = build_dense(grid, dispersion, h_engine, schedule);

    auto global_error = [&](double dt, Splitting splitting) {
        StepConfig cfg;
        cfg.dt = dt;
        cfg.splitting = splitting;
        cfg.steps_per_record = 1 << 30;
        cfg.wraparound_threshold = 1e-3;
        const Trajectory traj = evolve(initial, schedule, h_engine, dispersion, cfg, 1.0);
        const JointState exact = unflatten(grid, 2, exact_evolve(dense, flatten(initial), 1.0));
        return (traj.final_state.amplitudes() - exact.amplitudes()).cwiseAbs().maxCoeff();
    };

    Eigen::VectorXd log_dt(3), log_err(3);
    const double dts[3] = {4e-2, 2e-2, 1e-2};
    for (int i = 0; i < 3; ++i) {
        log_dt(i) = std::log(dts[i]);
        log_err(i) = std::log(global_error(dts[i], Splitting::Lie));
    }
    const double lie_slope = polyfit(log_dt, log_err, 1)(1);
    CHECK(lie_slope == doctest::Approx(1.0).epsilon(0.2));
    // Strang is strictly more accurate at the same step.
    CHECK(global_error(1e-2, Splitting::Strang) < global_error(1e-2, Splitting::Lie));
}
