#include "qclock/format.hpp"

#include <cstdio>

namespace qclock {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string flatten17(const Eigen::MatrixXcd& m) {
    std::string out;
    out.reserve(static_cast<size_t>(m.size()) * 20);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!out.empty()) out += ' ';
            out += fmt17(m(i, j).real());
            out += ' ';
            out += fmt17(m(i, j).imag());
        }
    }
    return out;
}

}  // namespace qclock
