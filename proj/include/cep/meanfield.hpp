// meanfield.hpp — Mean-field drift, fixed points, stability, defectiveness diagnostics,
// and the mean-spin-aligned rotation frame.
//
// The drift of this model class is tangent to every sphere (M·g(M) = 0 identically),
// so the raw Jacobian at a fixed point always carries one structural zero eigenvalue
// along the normalization direction.  Stability is therefore classified from the
// spectrum of the tangent 2x2 block in the aligned frame; the stored eigenvalue list
// is {tangent pair, 0}.

#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cep/model.hpp"

namespace cep {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// g(M) = (B + 4 K M) x M - Σ_μ Im[(ℓ_μ*·M)(ℓ_μ x M)]
Vec3 drift(const SpinModelSpec& spec, const Vec3& M);

// Analytic ∂g_i/∂M_j (the drift is polynomial of degree <= 2; no finite differences).
Mat3 jacobian(const SpinModelSpec& spec, const Vec3& M);

// Central-difference fallback used by tests.
Mat3 jacobian_central_diff(const SpinModelSpec& spec, const Vec3& M, double step = 1e-6);

// Jacobian of the example model on a fixed-point branch in the on-sphere form,
// [[kZ, -wZ, 0], [wZ, kZ, 0], [0, g, 2kZ]].  Agrees with jacobian() on all tangent
// vectors; differs by the rank-one radial extension.  Test oracle and diagnostics input.
Mat3 example_jacobian_on_branch(const PresetParams& p, const Vec3& M_star);

enum class Stability { stable, marginal, unstable };
enum class PtCharacter { symmetric, broken };

const char* to_string(Stability s);
const char* to_string(PtCharacter c);

struct FixedPointBranch {
    Vec3 point = Vec3::Zero();
    Eigen::Vector3cd jacobian_eigenvalues = Eigen::Vector3cd::Zero();
    Stability stability = Stability::marginal;
    PtCharacter pt_character = PtCharacter::symmetric;
    int branch_sign = +1;
};

// Stable PT-broken branch of the example model:
//   X* = g w/(k^2+w^2),  Y* = g k/(k^2+w^2),  Z* = -sqrt(d(2r+d)/[1+(r+d)^2]).
// Throws NoBrokenBranch for delta <= 0.  Cross-validated against Z*^2 = 1 - g^2/(k^2+w^2).
FixedPointBranch example_branch(const PresetParams& p);

// Mirror branch with Z* > 0 (unstable radial-partner of the same family).
FixedPointBranch example_branch_mirror(const PresetParams& p);

// Damped Newton on g(M) = 0 from each seed; converged roots (|g| < 1e-12) are
// deduplicated at distance 1e-8 and classified.  Non-converged seeds are counted,
// never fatal.
std::vector<FixedPointBranch> find_fixed_points(const SpinModelSpec& spec,
                                                const std::vector<Vec3>& seeds,
                                                int* num_failed_seeds = nullptr);

// The 26 directions of the 3x3x3 lattice shell, normalized.
std::vector<Vec3> sphere_seed_grid();

struct CepDiagnostics {
    int rank_J = 0;
    double norm_J_squared = 0.0;    // Frobenius norm of J^2
    double eigvec_condition = 0.0;  // condition number of the eigenvector matrix
    double min_eigval_gap = 0.0;    // minimum pairwise eigenvalue distance
};

CepDiagnostics cep_defectiveness(const Mat3& J);

struct AlignedFrame {
    Mat3 rotation = Mat3::Identity();
    double r_perp = 0.0;
    bool degenerate = false;
};

// Orthogonal R with R*M = (0,0,|M|); for the unit direction (X,Y,Z) with
// r_perp = sqrt(X^2+Y^2), c = X/r_perp, s = Y/r_perp:
//   R = [[Zc, Zs, -r_perp], [-s, c, 0], [r_perp c, r_perp s, Z]].
// On the z axis: R = I (north) or diag(1,-1,-1) (south), flagged degenerate.
AlignedFrame aligned_rotation(const Vec3& M);

struct TransverseBlocks {
    Mat2 J_perp = Mat2::Zero();
    Mat2 D_perp = Mat2::Zero();
    Vec2 coalesce_axis_transverse = Vec2::Zero();
};

// Upper-left 2x2 blocks of R J R^T and R D R^T, plus the normalized transverse
// projection of R e_z (identically (-1, 0) whenever the frame is non-degenerate).
TransverseBlocks transverse_blocks(const Mat3& J, const Mat3& D, const AlignedFrame& frame);

} // namespace cep
