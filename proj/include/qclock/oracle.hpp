#pragma once

#include <Eigen/Dense>

#include "qclock/dispersion.hpp"
#include "qclock/engine.hpp"
#include "qclock/grid.hpp"
#include "qclock/joint_state.hpp"

namespace qclock {

// Dense ground truth on tiny instances. The joint index is engine-major:
// flat = e * N + j.
struct DenseJointHamiltonian {
    Eigen::MatrixXcd total;
    Eigen::MatrixXcd engine_block;       // H_E (x) 1
    Eigen::MatrixXcd clock_block;        // 1 (x) H_C
    Eigen::MatrixXcd interaction_block;  // sum_i v_i (x) P_i / W
    SpatialGrid grid;
    Eigen::Index engine_dim = 1;
};

// Unitary DFT matrix F with F(m, j) = exp(-i k_m x_j) / sqrt(N); position to
// momentum, matching the spectral stepping convention.
Eigen::MatrixXcd dft_matrix(const SpatialGrid& grid);

// H_tot = H_E (x) 1 + 1 (x) H_C + sum_i v_i (x) P_i / W. Throws TooLarge for
// joint dimension above 4096.
DenseJointHamiltonian build_dense(const SpatialGrid& grid, const DispersionRelation& dispersion,
                                  const HermitianOp& h_engine, const GeneratorSchedule& schedule);

// exp(-i H t) |state> by eigendecomposition.
Eigen::VectorXcd exact_evolve(const DenseJointHamiltonian& h, const Eigen::VectorXcd& state,
                              double t);

// Engine-major flattening of a joint state and its inverse.
Eigen::VectorXcd flatten(const JointState& state);
JointState unflatten(const SpatialGrid& grid, Eigen::Index engine_dim,
                     const Eigen::VectorXcd& flat);

// Single-particle clock operators on the N-dimensional clock factor:
// T = diag(x_j)/c, Lambda = F^H diag(omega'(k_m)/c) F, H_C = F^H diag(omega) F.
struct DenseTimeOperators {
    Eigen::MatrixXcd T;
    Eigen::MatrixXcd Lambda;
    Eigen::MatrixXcd H_C;
};

DenseTimeOperators dense_time_operators(const SpatialGrid& grid,
                                        const DispersionRelation& dispersion, double c);

}  // namespace qclock
