// husimi.hpp — Spin Husimi-Q fields over coherent states and their tangent-plane view.

#pragma once

#include <Eigen/Dense>

#include "cep/dicke.hpp"

namespace cep {

struct HusimiField {
    Eigen::VectorXd theta_nodes;    // Gauss–Legendre nodes in cos(theta), mapped to theta
    Eigen::VectorXd theta_weights;  // quadrature weights for the cos(theta) measure
    Eigen::VectorXd phi_nodes;      // uniform grid on [0, 2π)
    Eigen::MatrixXd values;         // Q(theta_i, phi_j) >= 0
    Mat3 rotation;                  // aligned frame of the mean spin (identity if undefined)
    Eigen::MatrixXd tangent_u;      // orthographic coordinates on the plane ⟂ <S>
    Eigen::MatrixXd tangent_v;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> front;  // rotated z > 0 hemisphere

    double integral() const;  // ∫ Q dΩ by the product quadrature
};

// Q(θ,φ) = <θ,φ|ρ|θ,φ> / C with C = 4π/(N+1); overlaps evaluated in log space.
// n_theta, n_phi >= 16.
HusimiField husimi_q(const DickeState& state, int n_theta, int n_phi);

// Q-weighted covariance of the tangent coordinates over the front hemisphere
// (mean-subtracted).  Principal axis of the anisotropy of the distribution.
Mat2 tangent_covariance(const HusimiField& field);

// Gauss–Legendre nodes/weights on [-1, 1] (Newton iteration on P_n).
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

} // namespace cep
