#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "qclock/engine.hpp"
#include "qclock/errors.hpp"
#include "qclock/oracle.hpp"
#include "qclock/propagator.hpp"
#include "qclock/pulse.hpp"

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

}  // namespace

TEST_CASE("dft matrix is unitary and diagonalizes the free step") {
    const SpatialGrid grid(32, 16.0, -8.0);
    const Eigen::MatrixXcd f = dft_matrix(grid);
    CHECK(max_abs(f * f.adjoint() - Eigen::MatrixXcd::Identity(32, 32)) < 1e-12);

    // F^H diag(e^{-i w t}) F psi must equal the spectral free step.
    const DispersionRelation dispersion = DispersionRelation::massive(1.0, 4.0);
    const ClockAmplitudes state =
        ClockAmplitudes::normalized(grid, gaussian_envelope(grid, {-2.0, 0.7, 1.0}));
    const double t = 0.6;
    Eigen::VectorXcd phases(32);
    for (int m = 0; m < 32; ++m) {
        phases(m) = std::exp(complex<double>(0.0, -dispersion.omega(grid.momentum(m)) * t));
    }
    const Eigen::VectorXcd dense = f.adjoint() * (phases.asDiagonal() * (f * state.values()));
    const Eigen::VectorXcd spectral = free_step(state, dispersion, t).values();
    CHECK((dense - spectral).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dense Hamiltonian blocks") {
    const SpatialGrid grid(16, 32.0, -16.0);
    const DispersionRelation dispersion = DispersionRelation::linear(1.0);
    const HermitianOp h_engine(sigma_x() / 4.0);

    SUBCASE("no schedule leaves the interaction zero") {
        const DenseJointHamiltonian dense =
            build_dense(grid, dispersion, h_engine, GeneratorSchedule{});
        CHECK(max_abs(dense.interaction_block) == 0.0);
        CHECK(max_abs(dense.total - dense.engine_block - dense.clock_block) == 0.0);
        CHECK(max_abs(dense.total - dense.total.adjoint()) < 1e-12);
    }

    SUBCASE("clock block eigenvalues are the dispersion samples, twice") {
        const DenseJointHamiltonian dense =
            build_dense(grid, dispersion, h_engine, GeneratorSchedule{});
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense.clock_block);
        std::vector<double> expected;
        for (int m = 0; m < grid.n_points(); ++m) {
            expected.push_back(dispersion.omega(grid.momentum(m)));
            expected.push_back(dispersion.omega(grid.momentum(m)));
        }
        std::sort(expected.begin(), expected.end());
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            CHECK(solver.eigenvalues()(i) ==
                  doctest::Approx(expected[static_cast<size_t>(i)]).epsilon(1e-9));
        }
    }

    SUBCASE("half-grid projector spectrum") {
        const double w = 16.0;
        const GeneratorSchedule schedule = schedule_from_generators(
            {HermitianOp(sigma_z())}, w, SchedulePattern::Explicit, -16.0);
        const DenseJointHamiltonian dense = build_dense(grid, dispersion, h_engine, schedule);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense.interaction_block);
        int plus = 0, minus = 0, zero = 0;
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            const double v = solver.eigenvalues()(i);
            if (std::abs(v - 1.0 / w) < 1e-12) {
                ++plus;
            } else if (std::abs(v + 1.0 / w) < 1e-12) {
                ++minus;
            } else if (std::abs(v) < 1e-12) {
                ++zero;
            }
        }
        CHECK(plus == grid.n_points() / 2);
        CHECK(minus == grid.n_points() / 2);
        CHECK(zero == grid.n_points());
    }

    SUBCASE("interaction commutes with every window projector") {
        const GeneratorSchedule schedule = schedule_from_generators(
            {HermitianOp(sigma_z())}, 8.0, SchedulePattern::Alternating, -16.0);
        const DenseJointHamiltonian dense = build_dense(grid, dispersion, h_engine, schedule);
        for (const auto& seg : window_segments(grid, schedule, 2)) {
            Eigen::MatrixXcd projector =
                Eigen::MatrixXcd::Zero(grid.n_points(), grid.n_points());
            for (Eigen::Index j = seg.begin; j < seg.begin + seg.count; ++j) projector(j, j) = 1.0;
            Eigen::MatrixXcd joint =
                Eigen::MatrixXcd::Zero(2 * grid.n_points(), 2 * grid.n_points());
            joint.topLeftCorner(grid.n_points(), grid.n_points()) = projector;
            joint.bottomRightCorner(grid.n_points(), grid.n_points()) = projector;
            CHECK(max_abs(dense.interaction_block * joint - joint * dense.interaction_block) <
                  1e-14);
        }
    }
}

TEST_CASE("size guard") {
    const SpatialGrid grid(4096, 100.0, -50.0);
    CHECK_THROWS_AS(build_dense(grid, DispersionRelation::linear(1.0),
                                HermitianOp(sigma_x()), GeneratorSchedule{}),
                    TooLarge);
}

TEST_CASE("exact evolve basics") {
    const SpatialGrid grid(16, 32.0, -16.0);
    const DispersionRelation dispersion = DispersionRelation::linear(1.0);
    const HermitianOp h_engine(sigma_x() / 4.0);
    const JointState initial = JointState::product(
        Eigen::VectorXcd::Constant(2, 1.0),
        ClockAmplitudes::normalized(grid, gaussian_envelope(grid, {-2.0, 0.5, 0.5})));

    SUBCASE("t = 0 is the identity") {
        const DenseJointHamiltonian dense =
            build_dense(grid, dispersion, h_engine, GeneratorSchedule{});
        const Eigen::VectorXcd evolved = exact_evolve(dense, flatten(initial), 0.0);
        CHECK((evolved - flatten(initial)).cwiseAbs().maxCoeff() < 1e-13);
    }

    SUBCASE("decoupled case factorizes into engine and clock propagators") {
        const DenseJointHamiltonian dense =
            build_dense(grid, dispersion, h_engine, GeneratorSchedule{});
        const double t = 2.5;
        const JointState joint = unflatten(grid, 2, exact_evolve(dense, flatten(initial), t));

        const Eigen::MatrixXcd u_engine = hermitian_propagator(h_engine, t);
        const ClockAmplitudes clock =
            ClockAmplitudes::normalized(grid, gaussian_envelope(grid, {-2.0, 0.5, 0.5}));
        const ClockAmplitudes moved = free_step(clock, dispersion, t);
        const Eigen::VectorXcd engine0 = Eigen::VectorXcd::Constant(2, 1.0 / std::sqrt(2.0));
        const Eigen::MatrixXcd expected = moved.values() * (u_engine * engine0).transpose();
        CHECK(max_abs(joint.amplitudes() - expected) < 1e-10);
    }

    SUBCASE("flatten and unflatten invert each other") {
        const JointState back = unflatten(grid, 2, flatten(initial));
        CHECK(max_abs(back.amplitudes() - initial.amplitudes()) == 0.0);
    }
}

TEST_CASE("dense time operators") {
    const SpatialGrid grid(64, 32.0, -16.0);

    SUBCASE("linear dispersion collapses Lambda to the identity") {
        const DenseTimeOperators ops =
            dense_time_operators(grid, DispersionRelation::linear(1.0), 1.0);
        CHECK(max_abs(ops.Lambda - Eigen::MatrixXcd::Identity(64, 64)) < 1e-12);
    }

    SUBCASE("Lambda commutes with H_C for any dispersion") {
        const DenseTimeOperators ops =
            dense_time_operators(grid, DispersionRelation::massive(1.0, 7.0), 1.0);
        CHECK(max_abs(ops.Lambda * ops.H_C - ops.H_C * ops.Lambda) < 1e-11);
    }

    SUBCASE("commutator identity in expectation on an interior Gaussian") {
        const DispersionRelation dispersion = DispersionRelation::massive(1.0, 10.0);
        const DenseTimeOperators ops = dense_time_operators(grid, dispersion, 1.0);
        const ClockAmplitudes state =
            ClockAmplitudes::normalized(grid, gaussian_envelope(grid, {-3.0, 1.0, 1.0}));
        const Eigen::VectorXcd v = state.values() * std::sqrt(grid.spacing());
        const complex<double> comm =
            (v.adjoint() * (ops.T * (ops.H_C * v) - ops.H_C * (ops.T * v)))(0, 0);
        const complex<double> lambda = (v.adjoint() * (ops.Lambda * v))(0, 0);
        CHECK(std::abs(comm - complex<double>(0.0, 1.0) * lambda) < 1e-6);
    }
}
