#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "qclock/dispersion.hpp"
#include "qclock/errors.hpp"
#include "qclock/pulse.hpp"
#include "qclock/spectral.hpp"

using namespace qclock;
using std::complex;

namespace {

// Independent quadrature oracle: moments of |psi|^2 against a value grid,
// written against raw arrays on purpose.
double quadrature_mean(const Eigen::VectorXcd& psi, const Eigen::VectorXd& values, double weight) {
    double mean = 0.0;
    for (Eigen::Index j = 0; j < psi.size(); ++j) {
        mean += values(j) * std::norm(psi(j)) * weight;
    }
    return mean;
}

double quadrature_var(const Eigen::VectorXcd& psi, const Eigen::VectorXd& values, double weight) {
    const double mean = quadrature_mean(psi, values, weight);
    double second = 0.0;
    for (Eigen::Index j = 0; j < psi.size(); ++j) {
        second += values(j) * values(j) * std::norm(psi(j)) * weight;
    }
    return second - mean * mean;
}

const SpatialGrid kGrid(1024, 100.0, -50.0);

}  // namespace

TEST_CASE("gaussian pulse normalization and moments") {
    PulseFlags flags;
    const ClockAmplitudes state = make_gaussian_pulse(kGrid, {-30.0, 1.0, 10.0}, &flags);
    CHECK(std::abs(state.norm() - 1.0) < 1e-12);
    CHECK_FALSE(flags.quasimono_warning);  // bandwidth 1 < carrier/5

    // [position variance 1/bandwidth^2, momentum variance bandwidth^2/4]
    // frozen from the Gaussian moment integrals.
    const Moments m = moments(state);
    CHECK(m.mean_x == doctest::Approx(-30.0).epsilon(1e-3));
    CHECK(m.var_x == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(m.mean_k == doctest::Approx(10.0).epsilon(1e-3));
    CHECK(m.var_k == doctest::Approx(0.25).epsilon(1e-3));

    // Same moments through the independent quadrature path.
    CHECK(quadrature_mean(state.values(), kGrid.positions(), kGrid.spacing()) ==
          doctest::Approx(-30.0).epsilon(1e-6));
    CHECK(quadrature_var(state.values(), kGrid.positions(), kGrid.spacing()) ==
          doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("pulse construction guards") {
    CHECK_THROWS_AS(make_gaussian_pulse(kGrid, {0.0, 30.0, 0.0}), PulseUnresolvable);
    CHECK_THROWS_AS(make_gaussian_pulse(kGrid, {0.0, 0.05, 0.0}), PulseTooWide);

    PulseFlags flags;
    make_gaussian_pulse(kGrid, {0.0, 1.0, 2.0}, &flags);  // bandwidth >= carrier/5
    CHECK(flags.quasimono_warning);
}

TEST_CASE("momentum transform round trip and Parseval") {
    std::mt19937 rng(99);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const SpatialGrid grid(256, 40.0, -13.0);
    Eigen::VectorXcd raw(grid.n_points());
    for (int j = 0; j < grid.n_points(); ++j) raw(j) = complex<double>(gauss(rng), gauss(rng));
    const ClockAmplitudes state = ClockAmplitudes::normalized(grid, raw);

    const Eigen::VectorXcd momentum = to_momentum(state);
    const double dk = 2.0 * M_PI / grid.length();
    CHECK(momentum.squaredNorm() * dk == doctest::Approx(1.0).epsilon(1e-12));

    const ClockAmplitudes back = to_position(grid, momentum);
    CHECK((back.values() - state.values()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("delta amplitude spreads flat, carrier shifts the spectrum peak") {
    const SpatialGrid grid(256, 40.0, -20.0);
    Eigen::VectorXcd raw = Eigen::VectorXcd::Zero(grid.n_points());
    raw(100) = 1.0;
    const Eigen::VectorXcd flat = to_momentum(ClockAmplitudes::normalized(grid, raw));
    const Eigen::VectorXd magnitudes = flat.cwiseAbs();
    CHECK((magnitudes.maxCoeff() - magnitudes.minCoeff()) < 1e-12 * magnitudes.maxCoeff());

    const ClockAmplitudes pulse = make_gaussian_pulse(grid, {-5.0, 1.0, 10.0});
    const Eigen::VectorXcd spectrum = to_momentum(pulse);
    Eigen::Index peak;
    spectrum.cwiseAbs().maxCoeff(&peak);
    CHECK(grid.momentum(static_cast<int>(peak)) == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("free step translates at the group velocity") {
    const ClockAmplitudes state = make_gaussian_pulse(kGrid, {-30.0, 1.0, 10.0});
    const ClockAmplitudes moved = free_step(state, DispersionRelation::linear(1.0), 5.0);
    const Moments m = moments(moved);
    CHECK(m.mean_x == doctest::Approx(-25.0).epsilon(1e-6));
    CHECK(m.var_x == doctest::Approx(moments(state).var_x).epsilon(1e-9));
}

TEST_CASE("free step at dt = 0 is bitwise identity") {
    const ClockAmplitudes state = make_gaussian_pulse(kGrid, {-30.0, 1.0, 10.0});
    const ClockAmplitudes same = free_step(state, DispersionRelation::massive(1.0, 10.0), 0.0);
    for (int j = 0; j < kGrid.n_points(); ++j) {
        CHECK(same.values()(j) == state.values()(j));
    }
}

TEST_CASE("massive spreading matches the exact Gaussian law") {
    const double mass = 10.0;
    const ClockAmplitudes state = make_gaussian_pulse(kGrid, {-30.0, 1.0, 10.0});
    const Moments m0 = moments(state);
    const double t = 6.0;
    const Moments mt = moments(free_step(state, DispersionRelation::massive(1.0, mass), t));
    // Zero initial x-k covariance: var_x(t) = var_x(0) + t^2 var_k / M^2.
    CHECK(mt.var_x == doctest::Approx(m0.var_x + t * t * m0.var_k / (mass * mass)).epsilon(1e-6));
    CHECK(mt.var_k == doctest::Approx(m0.var_k).epsilon(1e-12));
}

TEST_CASE("two-lobe superposition variance") {
    const double a = 12.0;
    const Eigen::VectorXcd left = gaussian_envelope(kGrid, {-a, 1.0, 0.0});
    const Eigen::VectorXcd right = gaussian_envelope(kGrid, {a, 1.0, 0.0});
    const ClockAmplitudes state = ClockAmplitudes::normalized(kGrid, left + right);
    // Mixture moment formula for two symmetric distant lobes.
    CHECK(moments(state).var_x == doctest::Approx(a * a + 1.0).epsilon(1e-6));
}

TEST_CASE("dispersion relations and the derivative hook") {
    const DispersionRelation linear = DispersionRelation::linear(2.0);
    CHECK(linear.omega(3.0) == doctest::Approx(6.0));
    CHECK(linear.omega_prime(-7.0) == doctest::Approx(2.0));

    const DispersionRelation massive = DispersionRelation::massive(1.0, 4.0);
    CHECK(massive.omega(2.0) == doctest::Approx(2.0 + 0.5));
    CHECK(massive.omega_prime(2.0) == doctest::Approx(1.5));

    // Tabulated parabola: centered differences reproduce the slope to
    // second order in the table spacing.
    const int n = 201;
    Eigen::VectorXd ks(n), ws(n);
    for (int i = 0; i < n; ++i) {
        ks(i) = -5.0 + 0.05 * i;
        ws(i) = ks(i) + ks(i) * ks(i) / 8.0;
    }
    const DispersionRelation table = DispersionRelation::tabulated(ks, ws);
    CHECK(table.omega(1.234) == doctest::Approx(1.234 + 1.234 * 1.234 / 8.0).epsilon(1e-4));
    CHECK(table.omega_prime(1.0) == doctest::Approx(1.25).epsilon(1e-4));
    CHECK_THROWS_AS(table.omega(9.0), std::out_of_range);

    const DispersionRelation tampered = massive.with_derivative_scale(1.1);
    CHECK(tampered.omega(2.0) == doctest::Approx(massive.omega(2.0)));
    CHECK(tampered.omega_prime(2.0) == doctest::Approx(1.65));
}

TEST_CASE("free evolution conserves the norm over many steps") {
    const SpatialGrid grid(512, 100.0, -50.0);
    ClockAmplitudes state = make_gaussian_pulse(grid, {-20.0, 1.0, 3.0});
    const DispersionRelation dispersion = DispersionRelation::massive(1.0, 10.0);
    for (int i = 0; i < 1000; ++i) state = free_step(state, dispersion, 1e-3);
    CHECK(std::abs(state.norm() - 1.0) < 1e-10);
}
