#include "qclock/oracle.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "qclock/errors.hpp"
#include "qclock/propagator.hpp"

namespace qclock {

using std::complex;

Eigen::MatrixXcd dft_matrix(const SpatialGrid& grid) {
    const int n = grid.n_points();
    Eigen::MatrixXcd f(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j < n; ++j) {
            const double a = -grid.momentum(m) * grid.position(j);
            f(m, j) = scale * complex<double>(std::cos(a), std::sin(a));
        }
    }
    return f;
}

namespace {

// A (x) B with the engine index major, matching flat = e * N + j.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

DenseJointHamiltonian build_dense(const SpatialGrid& grid, const DispersionRelation& dispersion,
                                  const HermitianOp& h_engine, const GeneratorSchedule& schedule) {
    const Eigen::Index n = grid.n_points();
    const Eigen::Index d = h_engine.dim();
    if (d * n > 4096) {
        throw TooLarge("dense joint dimension " + std::to_string(d * n) + " exceeds 4096");
    }
    DenseJointHamiltonian out{Eigen::MatrixXcd(), Eigen::MatrixXcd(), Eigen::MatrixXcd(),
                              Eigen::MatrixXcd(), grid, d};

    const Eigen::MatrixXcd identity_clock = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd identity_engine = Eigen::MatrixXcd::Identity(d, d);
    out.engine_block = kron(h_engine.matrix(), identity_clock);

    const Eigen::MatrixXcd f = dft_matrix(grid);
    const Eigen::VectorXd omegas = dispersion.omega(grid.momenta());
    const Eigen::MatrixXcd h_clock =
        f.adjoint() * omegas.cast<complex<double>>().asDiagonal() * f;
    out.clock_block = kron(identity_engine, h_clock);

    out.interaction_block = Eigen::MatrixXcd::Zero(d * n, d * n);
    if (!schedule.windows.empty()) {
        for (const auto& seg : window_segments(grid, schedule, d)) {
            if (seg.kind == WindowSegment::Kind::Outside) continue;
            Eigen::MatrixXcd projector = Eigen::MatrixXcd::Zero(n, n);
            for (Eigen::Index j = seg.begin; j < seg.begin + seg.count; ++j) {
                projector(j, j) = 1.0;
            }
            out.interaction_block += kron(seg.generator / schedule.width, projector);
        }
    }
    out.total = out.engine_block + out.clock_block + out.interaction_block;
    return out;
}

Eigen::VectorXcd exact_evolve(const DenseJointHamiltonian& h, const Eigen::VectorXcd& state,
                              double t) {
    if (state.size() != h.total.rows()) {
        throw std::invalid_argument("state dimension does not match the dense Hamiltonian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.total);
    Eigen::VectorXcd phases(solver.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        const double a = -solver.eigenvalues()(i) * t;
        phases(i) = complex<double>(std::cos(a), std::sin(a));
    }
    return solver.eigenvectors() *
           (phases.asDiagonal() * (solver.eigenvectors().adjoint() * state));
}

Eigen::VectorXcd flatten(const JointState& state) {
    const Eigen::Index n = state.grid().n_points();
    const Eigen::Index d = state.engine_dim();
    Eigen::VectorXcd flat(d * n);
    for (Eigen::Index e = 0; e < d; ++e) {
        flat.segment(e * n, n) = state.amplitudes().col(e);
    }
    return flat;
}

JointState unflatten(const SpatialGrid& grid, Eigen::Index engine_dim,
                     const Eigen::VectorXcd& flat) {
    const Eigen::Index n = grid.n_points();
    if (flat.size() != engine_dim * n) {
        throw std::invalid_argument("flat vector size does not match grid x engine dimensions");
    }
    Eigen::MatrixXcd amp(n, engine_dim);
    for (Eigen::Index e = 0; e < engine_dim; ++e) {
        amp.col(e) = flat.segment(e * n, n);
    }
    return JointState(grid, std::move(amp));
}

DenseTimeOperators dense_time_operators(const SpatialGrid& grid,
                                        const DispersionRelation& dispersion, double c) {
    const Eigen::Index n = grid.n_points();
    DenseTimeOperators ops;
    ops.T = (grid.positions() / c).cast<complex<double>>().asDiagonal();
    const Eigen::MatrixXcd f = dft_matrix(grid);
    ops.Lambda = f.adjoint() *
                 (dispersion.omega_prime(grid.momenta()) / c).cast<complex<double>>().asDiagonal() *
                 f;
    ops.H_C =
        f.adjoint() * dispersion.omega(grid.momenta()).cast<complex<double>>().asDiagonal() * f;
    return ops;
}

}  // namespace qclock
