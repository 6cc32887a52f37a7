#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qclock/engine.hpp"
#include "qclock/errors.hpp"

using namespace qclock;
using std::complex;

namespace {

const complex<double> kI{0.0, 1.0};

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

TEST_CASE("hermitian propagator closed forms") {
    // diag(e^{-i pi/2}, e^{i pi/2})
    const Eigen::MatrixXcd uz = hermitian_propagator(HermitianOp(sigma_z()), M_PI / 2.0);
    Eigen::MatrixXcd expected(2, 2);
    expected << std::exp(-kI * M_PI / 2.0), 0.0, 0.0, std::exp(kI * M_PI / 2.0);
    CHECK(max_abs(uz - expected) < 1e-12);

    // zero generator
    const Eigen::MatrixXcd u0 =
        hermitian_propagator(HermitianOp(Eigen::MatrixXcd::Zero(3, 3)), 2.7);
    CHECK(max_abs(u0 - Eigen::MatrixXcd::Identity(3, 3)) < 1e-14);

    // cos(theta) 1 - i sin(theta) sigma_x at theta = pi gives -1
    const Eigen::MatrixXcd ux = hermitian_propagator(HermitianOp(sigma_x()), M_PI);
    CHECK(max_abs(ux + Eigen::MatrixXcd::Identity(2, 2)) < 1e-12);
}

TEST_CASE("non-Hermitian input is rejected") {
    Eigen::MatrixXcd bad(2, 2);
    bad << 0.0, 1.0, 0.5, 0.0;
    CHECK_THROWS_AS(HermitianOp{bad}, NotHermitian);
}

TEST_CASE("target propagator: constant and commuting families") {
    const TargetEvolution constant([](double) { return sigma_x().eval(); }, 3.0, 2);
    const Eigen::MatrixXcd u = target_propagator(constant, 3.0, 64);
    CHECK(max_abs(u - hermitian_propagator(HermitianOp(sigma_x()), 3.0)) < 1e-10);

    // V(t) = sin(t) v: exact result exp(-i v (1 - cos t))
    const TargetEvolution commuting([](double t) { return (std::sin(t) * sigma_x()).eval(); }, 2.0,
                                    2);
    const Eigen::MatrixXcd uc = target_propagator(commuting, 2.0, 512);
    const double integral = 1.0 - std::cos(2.0);
    CHECK(max_abs(uc - hermitian_propagator(HermitianOp(sigma_x()), integral)) < 1e-8);
}

TEST_CASE("target propagator orders a two-segment switch") {
    const double total = 1.5;
    const TargetEvolution switching(
        [total](double t) { return t < total / 2.0 ? sigma_x().eval() : sigma_z().eval(); }, total,
        2);
    const Eigen::MatrixXcd u = target_propagator(switching, total, 2048);
    const Eigen::MatrixXcd expected = hermitian_propagator(HermitianOp(sigma_z()), total / 2.0) *
                                      hermitian_propagator(HermitianOp(sigma_x()), total / 2.0);
    CHECK(max_abs(u - expected) < 1e-10);
}

TEST_CASE("target propagator flags hopeless substep counts") {
    const TargetEvolution wild(
        [](double t) { return (100.0 * std::sin(997.0 * t) * sigma_x()).eval(); }, 1.0, 2);
    CHECK_THROWS_AS(target_propagator(wild, 1.0, 1), NonConvergent);
}

TEST_CASE("schedule construction from targets") {
    const TargetEvolution constant([](double) { return sigma_x().eval(); }, 4.0, 2);

    SUBCASE("explicit pattern samples every window") {
        const GeneratorSchedule s = schedule_from_target(constant, 1.0, SchedulePattern::Explicit);
        REQUIRE(s.size() == 4);
        for (const auto& w : s.windows) {
            REQUIRE(w.generator.has_value());
            CHECK(max_abs(w.generator->matrix() - sigma_x()) == 0.0);
        }
    }

    SUBCASE("alternating pattern interleaves dead windows") {
        const GeneratorSchedule s =
            schedule_from_target(constant, 2.0, SchedulePattern::Alternating);
        REQUIRE(s.size() == 4);  // [v, 1, v, 1]
        CHECK(s.windows[0].generator.has_value());
        CHECK_FALSE(s.windows[1].generator.has_value());
        CHECK(s.windows[2].generator.has_value());
        CHECK_FALSE(s.windows[3].generator.has_value());
    }

    SUBCASE("linear ramp samples window centers") {
        const TargetEvolution ramp([](double t) { return (t * sigma_z()).eval(); }, 3.0, 2);
        const GeneratorSchedule s = schedule_from_target(ramp, 1.0, SchedulePattern::Explicit);
        REQUIRE(s.size() == 3);
        for (int i = 0; i < 3; ++i) {
            const double expected = i + 0.5;
            CHECK(max_abs(s.windows[static_cast<size_t>(i)].generator->matrix() -
                          expected * sigma_z()) < 1e-14);
        }
    }

    SUBCASE("window centers follow the schedule origin") {
        const GeneratorSchedule s =
            schedule_from_target(constant, 1.0, SchedulePattern::Explicit, -7.0);
        CHECK(s.windows[0].center == doctest::Approx(-6.5));
        CHECK(s.windows[3].center == doctest::Approx(-3.5));
    }
}

TEST_CASE("piecewise-constant targets clamp and pad") {
    const std::vector<HermitianOp> segments = {HermitianOp(sigma_x()), HermitianOp(sigma_z())};
    const TargetEvolution target = TargetEvolution::piecewise_constant(segments, 2.0);
    CHECK(target.duration() == doctest::Approx(4.0));
    CHECK(max_abs(target.generator(0.5).matrix() - sigma_x()) == 0.0);
    CHECK(max_abs(target.generator(3.9).matrix() - sigma_z()) == 0.0);
}

TEST_CASE("generator presets") {
    CHECK(max_abs(engine_preset("pauli_x", 2).matrix() - sigma_x()) == 0.0);
    CHECK(max_abs(engine_preset("pauli_z", 2).matrix() - sigma_z()) == 0.0);
    const Eigen::MatrixXcd number = engine_preset("number", 4).matrix();
    for (int i = 0; i < 4; ++i) CHECK(number(i, i).real() == doctest::Approx(i));
    const Eigen::MatrixXcd jc = engine_preset("jaynes_cummings_detuning", 2).matrix();
    CHECK(max_abs(jc - 0.5 * sigma_z()) < 1e-15);
    CHECK(max_abs(engine_preset("zero", 3).matrix()) == 0.0);
    CHECK(max_abs(engine_preset("identity", 3).matrix() - Eigen::MatrixXcd::Identity(3, 3)) == 0.0);
    CHECK_THROWS_AS(engine_preset("pauli_y_typo", 2), std::invalid_argument);
    CHECK_THROWS_AS(engine_preset("pauli_x", 3), std::invalid_argument);
}
