#include "qclock/joint_state.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "qclock/spectral.hpp"

namespace qclock {

JointState::JointState(SpatialGrid grid, Eigen::MatrixXcd amplitudes)
    : grid_(std::move(grid)), amp_(std::move(amplitudes)) {
    if (amp_.rows() != grid_.n_points() || amp_.cols() < 1) {
        throw std::invalid_argument("joint amplitudes must be n_points x engine_dim");
    }
    const double n = norm();
    if (std::abs(n - 1.0) > 1e-6) {
        throw std::invalid_argument("joint state must be normalized, norm = " + std::to_string(n));
    }
}

JointState JointState::product(const Eigen::VectorXcd& engine_state,
                               const ClockAmplitudes& clock) {
    const double en = engine_state.norm();
    if (!(en > 0.0)) throw std::invalid_argument("engine state must be nonzero");
    Eigen::MatrixXcd amp = clock.values() * (engine_state / en).transpose();
    return JointState(clock.grid(), std::move(amp));
}

double JointState::norm() const { return std::sqrt(amp_.squaredNorm() * grid_.spacing()); }

Eigen::VectorXd JointState::position_mass() const {
    return amp_.rowwise().squaredNorm() * grid_.spacing();
}

Eigen::VectorXd JointState::momentum_mass() const {
    // |FFT column|^2 * dx^2 / (2 pi) * dk, summed over engine components.
    const double dx = grid_.spacing();
    const double dk = 2.0 * M_PI / grid_.length();
    const double scale = dx * dx / (2.0 * M_PI) * dk;
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(grid_.n_points());
    for (Eigen::Index e = 0; e < amp_.cols(); ++e) {
        mass += fft(amp_.col(e)).cwiseAbs2() * scale;
    }
    return mass;
}

ClockAmplitudes JointState::clock_component(Eigen::Index engine_index) const {
    return ClockAmplitudes::normalized(grid_, amp_.col(engine_index));
}

Eigen::MatrixXcd reduced_engine_state(const JointState& state) {
    // rho_{ef} = sum_j Psi_{e,j} conj(Psi_{f,j}) dx with Psi_{e,j} = A(j,e).
    return state.amplitudes().transpose() * state.amplitudes().conjugate() *
           state.grid().spacing();
}

double purity(const Eigen::MatrixXcd& rho) { return (rho * rho).trace().real(); }

namespace {

constexpr char kMagic[4] = {'Q', 'C', 'L', 'K'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
    std::array<unsigned char, 4> b{};
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(b.data()), 4);
}

void put_f64(std::ofstream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint32_t get_u32(std::ifstream& in) {
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char*>(b.data()), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::ifstream& in) {
    std::array<unsigned char, 8> b{};
    in.read(reinterpret_cast<char*>(b.data()), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void save_state(const JointState& state, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(state.engine_dim()));
    put_u32(out, static_cast<std::uint32_t>(state.grid().n_points()));
    put_f64(out, state.grid().spacing());
    put_f64(out, state.grid().origin());
    // Pad the header to 64 bytes.
    const std::array<char, 32> pad{};
    out.write(pad.data(), pad.size());
    // Engine-major payload: component e = 0 first, grid index fastest.
    for (Eigen::Index e = 0; e < state.engine_dim(); ++e) {
        for (Eigen::Index j = 0; j < state.grid().n_points(); ++j) {
            put_f64(out, state.amplitudes()(j, e).real());
            put_f64(out, state.amplitudes()(j, e).imag());
        }
    }
    if (!out) throw std::runtime_error("short write to '" + path + "'");
}

JointState load_state(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("'" + path + "' is not a QCLK state dump");
    }
    const std::uint32_t version = get_u32(in);
    if (version != kVersion) {
        throw std::runtime_error("unsupported QCLK dump version " + std::to_string(version));
    }
    const std::uint32_t engine_dim = get_u32(in);
    const std::uint32_t n_points = get_u32(in);
    const double spacing = get_f64(in);
    const double origin = get_f64(in);
    in.ignore(32);
    SpatialGrid grid(static_cast<int>(n_points), spacing * n_points, origin);
    Eigen::MatrixXcd amp(n_points, engine_dim);
    for (std::uint32_t e = 0; e < engine_dim; ++e) {
        for (std::uint32_t j = 0; j < n_points; ++j) {
            const double re = get_f64(in);
            const double im = get_f64(in);
            amp(j, e) = std::complex<double>(re, im);
        }
    }
    if (!in) throw std::runtime_error("truncated QCLK state dump '" + path + "'");
    return JointState(std::move(grid), std::move(amp));
}

}  // namespace qclock
