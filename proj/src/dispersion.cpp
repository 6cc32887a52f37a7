#include "qclock/dispersion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qclock {

DispersionRelation DispersionRelation::linear(double v_g) {
    if (!std::isfinite(v_g)) throw std::invalid_argument("dispersion v_g must be finite");
    DispersionRelation d;
    d.kind_ = Kind::Linear;
    d.v_g_ = v_g;
    return d;
}

DispersionRelation DispersionRelation::massive(double v_g, double mass) {
    if (!std::isfinite(v_g)) throw std::invalid_argument("dispersion v_g must be finite");
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw std::invalid_argument("dispersion mass must be positive, got " + std::to_string(mass));
    }
    DispersionRelation d;
    d.kind_ = Kind::Massive;
    d.v_g_ = v_g;
    d.mass_ = mass;
    return d;
}

DispersionRelation DispersionRelation::tabulated(Eigen::VectorXd k_nodes,
                                                 Eigen::VectorXd omega_nodes) {
    const Eigen::Index n = k_nodes.size();
    if (n < 3 || omega_nodes.size() != n) {
        throw std::invalid_argument("dispersion table needs >= 3 nodes and matching sizes");
    }
    for (Eigen::Index i = 1; i < n; ++i) {
        if (!(k_nodes(i) > k_nodes(i - 1))) {
            throw std::invalid_argument("dispersion table k nodes must be strictly increasing");
        }
    }
    DispersionRelation d;
    d.kind_ = Kind::Tabulated;
    d.table_k_ = std::move(k_nodes);
    d.table_omega_ = std::move(omega_nodes);
    // Centered differences in the interior, one-sided at the ends.
    d.table_omega_prime_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i == 0) {
            d.table_omega_prime_(i) = (d.table_omega_(1) - d.table_omega_(0)) /
                                      (d.table_k_(1) - d.table_k_(0));
        } else if (i == n - 1) {
            d.table_omega_prime_(i) = (d.table_omega_(n - 1) - d.table_omega_(n - 2)) /
                                      (d.table_k_(n - 1) - d.table_k_(n - 2));
        } else {
            d.table_omega_prime_(i) = (d.table_omega_(i + 1) - d.table_omega_(i - 1)) /
                                      (d.table_k_(i + 1) - d.table_k_(i - 1));
        }
    }
    // Estimate of the slope for group_velocity(); informational only.
    d.v_g_ = (d.table_omega_(n - 1) - d.table_omega_(0)) / (d.table_k_(n - 1) - d.table_k_(0));
    return d;
}

double DispersionRelation::interpolate(const Eigen::VectorXd& values, double k) const {
    const Eigen::Index n = table_k_.size();
    if (k < table_k_(0) || k > table_k_(n - 1)) {
        throw std::out_of_range("momentum " + std::to_string(k) +
                                " outside tabulated dispersion range [" +
                                std::to_string(table_k_(0)) + ", " +
                                std::to_string(table_k_(n - 1)) + "]");
    }
    // Binary search for the table cell containing k.
    Eigen::Index lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const Eigen::Index mid = (lo + hi) / 2;
        if (table_k_(mid) <= k) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double w = (k - table_k_(lo)) / (table_k_(hi) - table_k_(lo));
    return (1.0 - w) * values(lo) + w * values(hi);
}

double DispersionRelation::omega(double k) const {
    switch (kind_) {
        case Kind::Linear:
            return v_g_ * k;
        case Kind::Massive:
            return v_g_ * k + k * k / (2.0 * mass_);
        case Kind::Tabulated:
            return interpolate(table_omega_, k);
    }
    return 0.0;
}

double DispersionRelation::omega_prime(double k) const {
    double wp = 0.0;
    switch (kind_) {
        case Kind::Linear:
            wp = v_g_;
            break;
        case Kind::Massive:
            wp = v_g_ + k / mass_;
            break;
        case Kind::Tabulated:
            wp = interpolate(table_omega_prime_, k);
            break;
    }
    return derivative_scale_ * wp;
}

Eigen::VectorXd DispersionRelation::omega(const Eigen::VectorXd& k) const {
    Eigen::VectorXd out(k.size());
    for (Eigen::Index i = 0; i < k.size(); ++i) out(i) = omega(k(i));
    return out;
}

Eigen::VectorXd DispersionRelation::omega_prime(const Eigen::VectorXd& k) const {
    Eigen::VectorXd out(k.size());
    for (Eigen::Index i = 0; i < k.size(); ++i) out(i) = omega_prime(k(i));
    return out;
}

DispersionRelation DispersionRelation::with_derivative_scale(double scale) const {
    DispersionRelation d = *this;
    d.derivative_scale_ = scale;
    return d;
}

}  // namespace qclock
