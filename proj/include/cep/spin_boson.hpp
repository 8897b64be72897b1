// spin_boson.hpp — Mean-field and Lyapunov layer for a collective spin coupled to a
// lossy cavity mode: H = g S_x + λ(a†S_- + aS_+)/√N + ω S_z²/N, L = √κ a.
//
// State vector x = (m_x, m_y, m_z, q, p) with q, p the scaled cavity quadratures.

#pragma once

#include <Eigen/Dense>

#include "cep/errors.hpp"
#include "cep/fluctuations.hpp"

namespace cep {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;

struct SpinBosonSpec {
    double g = 0.0;       // transverse field
    double lambda = 0.0;  // spin-boson coupling
    double omega = 0.0;   // twisting strength
    double kappa = 1.0;   // cavity loss rate

    double Delta() const { return 4.0 * std::pow(lambda, 4) + omega * omega * kappa * kappa; }
    double g_c() const { return std::sqrt(Delta()) / kappa; }
    void validate() const;
};

struct SpinBosonFixedPoint {
    double X = 0.0, Y = 0.0, Z = 0.0, Q = 0.0, P = 0.0;
    double Delta = 0.0;
    int branch_sign = -1;

    Vec5 vec() const { return (Vec5() << X, Y, Z, Q, P).finished(); }
};

// Mean-field drift of (x, y, z, q, p).
Vec5 sb_drift(const SpinBosonSpec& spec, const Vec5& x);

// Symmetry-broken fixed point: X = gωκ²/Δ, Y = 2gκλ²/Δ, Z = sign·√(1 − g²κ²/Δ),
// Q = −√2 λY/κ, P = √2 λX/κ.  Throws NoBrokenBranch at or beyond g_c.
SpinBosonFixedPoint sb_fixed_point(const SpinBosonSpec& spec, int branch_sign = -1);

// Analytic 5x5 lab-frame Jacobian evaluated at the given point.
Mat5 sb_jacobian(const SpinBosonSpec& spec, const Vec5& x);

// Characteristic polynomial coefficients of A, highest power first (monic), by
// the Faddeev–LeVerrier recurrence.
Eigen::VectorXd characteristic_polynomial(const Eigen::MatrixXd& A);

struct SpinBosonTangent {
    Mat4 J = Mat4::Zero();  // (η'_x, η'_y, η_q, η_p) drift
    Mat4 D = Mat4::Zero();  // (κ/2) diag(0, 0, 1, 1)
};

// Tangent-cavity linearization with the radial spin mode removed.
// Throws DegenerateFrame when r_perp = sqrt(X² + Y²) vanishes.
SpinBosonTangent sb_tangent_system(const SpinBosonSpec& spec, const SpinBosonFixedPoint& fp);

struct SpinBosonSqueezing {
    double xi_s_sq_closed = 0.0;   // √(1 − g²κ²/Δ)
    double xi_s_sq_numeric = 0.0;  // λ_min of the spin block of the stationary covariance
    Mat4 Sigma = Mat4::Zero();
};

SpinBosonSqueezing sb_squeezing(const SpinBosonSpec& spec);

} // namespace cep
