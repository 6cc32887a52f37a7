#pragma once

#include <Eigen/Dense>

namespace qclock {

// Unscaled DFT: X_m = sum_j x_j exp(-2 pi i m j / N).
Eigen::VectorXcd fft(const Eigen::VectorXcd& x);
// Inverse with 1/N so that ifft(fft(x)) == x.
Eigen::VectorXcd ifft(const Eigen::VectorXcd& x);

// Reusable transform buffers for stepping loops: applies a diagonal momentum
// phase to every column of a grid-major (N x d) amplitude matrix.
class SpectralWorkspace {
  public:
    explicit SpectralWorkspace(Eigen::Index n);

    void apply_momentum_phase(Eigen::MatrixXcd& amplitudes, const Eigen::VectorXcd& phase);

  private:
    Eigen::VectorXcd in_;
    Eigen::VectorXcd freq_;
};

}  // namespace qclock
