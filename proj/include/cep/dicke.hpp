// dicke.hpp — Exact finite-S Lindblad steady states in the symmetric spin-S sector.
//
// The restriction to the Dicke sector is exact for this model class (permutation
// symmetry).  Operators use the |S,m> basis with m = -S..S ascending; superoperators
// act on the row-major vectorization of rho, so
//   L = -i(H⊗I - I⊗H^T) + Σ_μ [ L_μ⊗conj(L_μ) - ½(L_μ†L_μ⊗I + I⊗(L_μ†L_μ)^T) ].

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>

#include "cep/fluctuations.hpp"
#include "cep/model.hpp"

namespace cep {

using SparseXcd = Eigen::SparseMatrix<std::complex<double>>;

// 2S+1 for half-integer S >= 1/2; rejects anything else.
int dicke_dimension(double S);

struct DickeOperators {
    double S = 0.5;
    int dim = 2;
    Eigen::MatrixXcd Sx, Sy, Sz, Sp, Sm;

    static DickeOperators build(double S);
};

// Hamiltonian S(B·m + Σ K_ij {m_i, m_j}) in the Dicke basis.
Eigen::MatrixXcd dicke_hamiltonian(const SpinModelSpec& spec, const DickeOperators& ops);

// Jump operator √S ℓ·m.
Eigen::MatrixXcd dicke_jump(const Vec3c& ell, const DickeOperators& ops);

// Sparse Lindblad generator; throws DimensionTooLarge when (2S+1)^2 exceeds the cap.
SparseXcd build_liouvillian(const SpinModelSpec& spec, double S,
                            double vec_dim_cap = 4e6);

enum class SteadySolver { dense_null, sparse_lu };

struct DickeState {
    double S = 0.5;
    Eigen::MatrixXcd rho;
    double residual = 0.0;        // ||L vec(rho)||_2
    double min_eigenvalue = 0.0;  // before clipping
    SteadySolver solver = SteadySolver::dense_null;
};

enum class SolvePolicy { automatic, dense, sparse };

// Steady state of the generator.  Dense path: full eigendecomposition, eigenvector of
// the eigenvalue nearest zero; NonUniqueSteadyState if a second eigenvalue lies within
// 1e-10 of zero.  Sparse path: LU after replacing the |S,S><S,S| component row by the
// trace condition; NonUniqueSteadyState if the replaced system is singular or the
// verified residual is large.  automatic selects dense for (2S+1)^2 <= 4096.
DickeState steady_state(const SparseXcd& liouvillian, double S,
                        SolvePolicy policy = SolvePolicy::automatic);

struct SpinMoments {
    Vec3 mean = Vec3::Zero();            // <m_alpha>
    Mat3 second_moments = Mat3::Zero();  // ½<{m_i, m_j}>
    Mat3 scaled_cov = Mat3::Zero();      // Σ_ij = ½<{η_i, η_j}>, η = √N (m - M)
};

SpinMoments spin_moments(const DickeState& state);

// Kitagawa–Ueda and Wineland parameters from the exact state: rotate the spin
// covariance into the mean-spin frame, xi_S^2 = 2 λ_min(Cov S'_⊥)/S.
SqueezingReport exact_squeezing(const DickeState& state);

// Row-major vectorization helpers shared by the solvers and tests.
Eigen::VectorXcd vec_row(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd unvec_row(const Eigen::VectorXcd& v, int n);

} // namespace cep
