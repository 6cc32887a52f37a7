#pragma once

#include <string>

#include <Eigen/Dense>

namespace qclock {

// Shortest representation with 17 significant digits; round-trips doubles
// exactly and keeps repeated runs byte-identical.
std::string fmt17(double v);

// Row-major "re im re im ..." flattening of a complex matrix.
std::string flatten17(const Eigen::MatrixXcd& m);

}  // namespace qclock
