// fluctuations.hpp — Diffusion matrices, stationary Lyapunov solves, Gaussian
// squeezing reports, closed-form dephasing covariances, and scaling-exponent fits.

#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cep/meanfield.hpp"
#include "cep/model.hpp"

namespace cep {

// D = 2 Σ_μ Re[(ℓ_μ x M)* (ℓ_μ x M)^T] for L_μ = √S ℓ_μ·m; N-independent, symmetric PSD.
Mat3 diffusion(const SpinModelSpec& spec, const Vec3& M);

// Unique solution of J Σ + Σ J^T + D = 0 via Kronecker vectorization, n <= 5.
// J must be Hurwitz (max Re eigenvalue < -1e-12), otherwise NonHurwitzJacobian.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& J, const Eigen::MatrixXd& D);

struct CovariancePack {
    Mat3 J_lab = Mat3::Zero();
    Mat3 D_lab = Mat3::Zero();
    Mat2 J_perp = Mat2::Zero();
    Mat2 D_perp = Mat2::Zero();
    Mat2 Sigma_perp = Mat2::Zero();
    Mat3 Sigma_full = Mat3::Zero();
    AlignedFrame frame;
    Vec2 coalesce_axis_transverse = Vec2(-1.0, 0.0);
    double residual_perp = 0.0;  // relative Lyapunov residual of Sigma_perp
    double residual_full = 0.0;  // absolute residual of Sigma_full in the lab frame
};

// Assemble J, D, the rotated transverse blocks, Sigma_perp from the reduced Lyapunov
// equation, and the lab-frame Sigma_full = R^T blkdiag(Sigma_perp, 0) R (an exact
// stationary solution: the radial mode is noiseless, D M = 0 for this model class).
CovariancePack covariance_pack(const SpinModelSpec& spec, const Vec3& M_fixed_point);

struct SqueezingReport {
    double xi_s_sq = 1.0;
    double xi_r_sq = 1.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    Vec2 axis_min = Vec2(1.0, 0.0);
    Vec2 axis_max = Vec2(0.0, 1.0);
    double alignment_angle = 0.0;  // line angle between axis_max and the coalescing axis
    double polarization = 1.0;
    bool isotropic = false;        // lambda_min == lambda_max tie; alignment_angle is NaN
};

// xi_S^2 = lambda_min(Sigma_perp); polarization = 1 in the Gaussian thermodynamic
// limit, so xi_R^2 = xi_S^2.
SqueezingReport gaussian_squeezing(const CovariancePack& pack);

struct DephasingCoefficients {
    double d11 = 0.0;
    double d12 = 0.0;
    double d22 = 0.0;
    double dz = 0.0;   // Z-independent part of (D'_perp)_22, equal to gamma_z
};

// d11 = 2k + (gx k^2 + gy w^2)/(k^2+w^2), d12 = k w (gx - gy)/(k^2+w^2),
// d22 = 2k + (gx w^2 + gy k^2)/(k^2+w^2) - gz.
DephasingCoefficients dephasing_coefficients(const PresetParams& p);

// Closed-form transverse covariance on the stable branch with dephasing:
//   S11 = -{[(2k^2+w^2) d11 + 2kw d12 + w^2 d22] Z^2 + gz w^2} / [4k(k^2+w^2) Z^3]
//   S12 =  {w(d11 - d22) Z^2 - 2k d12 Z^2 - gz w} / [4(k^2+w^2) Z^2]
//   S22 = -{[w^2 d11 - 2kw d12 + (2k^2+w^2) d22] Z^2 + (2k^2+w^2) gz} / [4k(k^2+w^2) Z]
// Throws AtCriticalPoint for Z* = 0.
Mat2 dephasing_covariance_closed_form(const PresetParams& p, double Z_star);

// Z-independent part of the rotated (D'_perp)_22, extracted by a quadratic fit
// a + b Z*^2 at |Z*| = 1e-3 and 2e-3 on the branch and validated at 1.5e-3.
double dz_component(const PresetParams& p);

struct ScalingFit {
    double slope_min = 0.0, slope_max = 0.0, slope_11 = 0.0;
    double r2_min = 0.0, r2_max = 0.0, r2_11 = 0.0;
    int points_used = 0;
    int points_skipped = 0;
};

// Least-squares slopes of log lambda_min, log lambda_max, log Sigma'_11 versus
// log |Z*| over the delta grid (>= 5 points, >= 2 decades).  Non-Hurwitz points
// are skipped and counted.
ScalingFit scaling_exponents(const PresetParams& p, const std::vector<double>& delta_grid);

} // namespace cep
