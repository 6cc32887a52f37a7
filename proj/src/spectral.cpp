#include "qclock/spectral.hpp"

#include <unsupported/Eigen/FFT>

namespace qclock {

Eigen::VectorXcd fft(const Eigen::VectorXcd& x) {
    Eigen::FFT<double> plan;
    Eigen::VectorXcd out;
    plan.fwd(out, x);
    return out;
}

Eigen::VectorXcd ifft(const Eigen::VectorXcd& x) {
    Eigen::FFT<double> plan;
    Eigen::VectorXcd out;
    plan.inv(out, x);
    return out;
}

SpectralWorkspace::SpectralWorkspace(Eigen::Index n) : in_(n), freq_(n) {}

void SpectralWorkspace::apply_momentum_phase(Eigen::MatrixXcd& amplitudes,
                                             const Eigen::VectorXcd& phase) {
    Eigen::FFT<double> plan;
    for (Eigen::Index col = 0; col < amplitudes.cols(); ++col) {
        in_ = amplitudes.col(col);
        plan.fwd(freq_, in_);
        freq_.array() *= phase.array();
        plan.inv(in_, freq_);
        amplitudes.col(col) = in_;
    }
}

}  // namespace qclock
