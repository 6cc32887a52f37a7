#pragma once

#include <Eigen/Dense>

namespace qclock {

// Dispersion relation omega(k) of the clock field together with its group
// velocity omega'(k).
//
//   linear    : omega(k) = v_g * k
//   massive   : omega(k) = v_g * k + k^2 / (2 M)
//   tabulated : omega sampled on k nodes, linearly interpolated; omega'
//               from centered differences on the same table.
class DispersionRelation {
  public:
    enum class Kind { Linear, Massive, Tabulated };

    static DispersionRelation linear(double v_g);
    static DispersionRelation massive(double v_g, double mass);
    static DispersionRelation tabulated(Eigen::VectorXd k_nodes, Eigen::VectorXd omega_nodes);

    double omega(double k) const;
    double omega_prime(double k) const;
    Eigen::VectorXd omega(const Eigen::VectorXd& k) const;
    Eigen::VectorXd omega_prime(const Eigen::VectorXd& k) const;

    Kind kind() const { return kind_; }
    double group_velocity() const { return v_g_; }
    double mass() const { return mass_; }

    // Fault-injection hook for the verification battery: scales omega'
    // without touching omega, breaking the commutator identity on purpose.
    DispersionRelation with_derivative_scale(double scale) const;

  private:
    DispersionRelation() = default;

    Kind kind_ = Kind::Linear;
    double v_g_ = 1.0;
    double mass_ = 0.0;
    double derivative_scale_ = 1.0;
    Eigen::VectorXd table_k_;
    Eigen::VectorXd table_omega_;
    Eigen::VectorXd table_omega_prime_;

    double interpolate(const Eigen::VectorXd& values, double k) const;
};

}  // namespace qclock
