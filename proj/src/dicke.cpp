#include "cep/dicke.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cep {

namespace {

using Cx = std::complex<double>;

constexpr int kDenseVecDimCap = 4096;     // (2S+1)^2 threshold for the dense path
constexpr double kUniqueTol = 1e-10;      // zero-eigenvalue separation
constexpr double kNegEigFloor = -1e-8;    // admissible steady-state negativity

} // namespace

int dicke_dimension(double S) {
    const double twoS = 2.0 * S;
    if (S < 0.5 || std::abs(twoS - std::round(twoS)) > 1e-9) {
        throw ConfigError("dicke_dimension: S must be a half-integer >= 1/2");
    }
    return static_cast<int>(std::lround(twoS)) + 1;
}

DickeOperators DickeOperators::build(double S) {
    DickeOperators ops;
    ops.S = S;
    ops.dim = dicke_dimension(S);
    const int n = ops.dim;
    ops.Sz = Eigen::MatrixXcd::Zero(n, n);
    ops.Sp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double m = -S + i;
        ops.Sz(i, i) = m;
        if (i + 1 < n) {
            ops.Sp(i + 1, i) = std::sqrt(S * (S + 1.0) - m * (m + 1.0));
        }
    }
    ops.Sm = ops.Sp.adjoint();
    ops.Sx = 0.5 * (ops.Sp + ops.Sm);
    ops.Sy = Cx(0.0, -0.5) * (ops.Sp - ops.Sm);
    return ops;
}

Eigen::MatrixXcd dicke_hamiltonian(const SpinModelSpec& spec, const DickeOperators& ops) {
    const double S = ops.S;
    const Eigen::MatrixXcd* Sv[3] = {&ops.Sx, &ops.Sy, &ops.Sz};
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(ops.dim, ops.dim);
    for (int a = 0; a < 3; ++a) {
        if (spec.field()(a) != 0.0) H += spec.field()(a) * (*Sv[a]);   // S * B_a * m_a
    }
    // S * K_ij {m_i, m_j} = (K_ij / S) (S_i S_j + S_j S_i)
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double k = spec.coupling()(i, j);
            if (k != 0.0) H += (k / S) * ((*Sv[i]) * (*Sv[j]) + (*Sv[j]) * (*Sv[i]));
        }
    }
    return H;
}

Eigen::MatrixXcd dicke_jump(const Vec3c& ell, const DickeOperators& ops) {
    // √S ℓ·m = (1/√S) ℓ·S
    const double inv_sqrt_s = 1.0 / std::sqrt(ops.S);
    return inv_sqrt_s * (ell(0) * ops.Sx + ell(1) * ops.Sy + ell(2) * ops.Sz);
}

SparseXcd build_liouvillian(const SpinModelSpec& spec, double S, double vec_dim_cap) {
    const int n = dicke_dimension(S);
    const double vec_dim = static_cast<double>(n) * n;
    if (vec_dim > vec_dim_cap) {
        throw DimensionTooLarge("build_liouvillian: (2S+1)^2 exceeds the configured cap");
    }
    const DickeOperators ops = DickeOperators::build(S);
    const Eigen::MatrixXcd H = dicke_hamiltonian(spec, ops);

    SparseXcd I(n, n);
    I.setIdentity();
    const SparseXcd Hs = H.sparseView(1.0, 1e-300);

    SparseXcd L(n * n, n * n);
    L = Cx(0.0, -1.0) *
        (Eigen::kroneckerProduct(Hs, I).eval() -
         Eigen::kroneckerProduct(I, SparseXcd(Hs.transpose())).eval());
    for (const auto& ch : spec.channels()) {
        const Eigen::MatrixXcd Lop = dicke_jump(ch.vec, ops);
        const SparseXcd Ls = Lop.sparseView(1.0, 1e-300);
        const SparseXcd LdL = SparseXcd((Lop.adjoint() * Lop).sparseView(1.0, 1e-300));
        L += Eigen::kroneckerProduct(Ls, SparseXcd(Ls.conjugate())).eval();
        L -= 0.5 * Eigen::kroneckerProduct(LdL, I).eval();
        L -= 0.5 * Eigen::kroneckerProduct(I, SparseXcd(LdL.transpose())).eval();
    }
    L.makeCompressed();
    return L;
}

Eigen::VectorXcd vec_row(const Eigen::MatrixXcd& rho) {
    const Eigen::MatrixXcd t = rho.transpose();
    return Eigen::Map<const Eigen::VectorXcd>(t.data(), t.size());
}

Eigen::MatrixXcd unvec_row(const Eigen::VectorXcd& v, int n) {
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), n, n).transpose();
}

namespace {

DickeState finalize_state(const SparseXcd& L, double S, Eigen::MatrixXcd rho,
                          SteadySolver solver) {
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const Cx tr = rho.trace();
    if (std::abs(tr) < 1e-14) {
        throw NonUniqueSteadyState("steady_state: null vector has vanishing trace");
    }
    rho /= tr;

    DickeState state;
    state.S = S;
    state.solver = solver;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    state.min_eigenvalue = es.eigenvalues().minCoeff();
    if (state.min_eigenvalue < kNegEigFloor) {
        throw NonPhysicalState("steady_state: steady state eigenvalue below -1e-8");
    }
    if (state.min_eigenvalue < 0.0) {
        // Clip the tolerated negative tail and renormalize.
        Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
        lam /= lam.sum();
        rho = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    }
    state.rho = rho;
    state.residual = (L * vec_row(state.rho)).norm();
    return state;
}

DickeState steady_dense(const SparseXcd& L, double S) {
    const int n = dicke_dimension(S);
    Eigen::MatrixXcd Ld(L);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Ld);
    const auto& ev = es.eigenvalues();
    int imin = 0, isecond = -1;
    for (int i = 1; i < ev.size(); ++i) {
        if (std::abs(ev(i)) < std::abs(ev(imin))) imin = i;
    }
    for (int i = 0; i < ev.size(); ++i) {
        if (i == imin) continue;
        if (isecond < 0 || std::abs(ev(i)) < std::abs(ev(isecond))) isecond = i;
    }
    if (isecond >= 0 && std::abs(ev(isecond)) < kUniqueTol) {
        throw NonUniqueSteadyState("steady_state: second Liouvillian eigenvalue within 1e-10 of zero");
    }
    return finalize_state(L, S, unvec_row(es.eigenvectors().col(imin), n),
                          SteadySolver::dense_null);
}

DickeState steady_sparse(const SparseXcd& L, double S) {
    const int n = dicke_dimension(S);
    const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
    const Eigen::Index trace_row = dim - 1;  // |S,S><S,S| component

    // Rebuild with the trace condition in place of the chosen row.
    std::vector<Eigen::Triplet<Cx>> trips;
    trips.reserve(L.nonZeros() + n);
    for (int k = 0; k < L.outerSize(); ++k) {
        for (SparseXcd::InnerIterator it(L, k); it; ++it) {
            if (it.row() != trace_row) trips.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (int k = 0; k < n; ++k) {
        trips.emplace_back(trace_row, static_cast<Eigen::Index>(k) * n + k, Cx(1.0, 0.0));
    }
    SparseXcd A(dim, dim);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();

    Eigen::SparseLU<SparseXcd, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) {
        throw NonUniqueSteadyState("steady_state: trace-replaced sparse system is singular");
    }
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dim);
    b(trace_row) = 1.0;
    const Eigen::VectorXcd x = lu.solve(b);
    DickeState state = finalize_state(L, S, unvec_row(x, n), SteadySolver::sparse_lu);
    if (state.residual > 1e-6) {
        throw NonUniqueSteadyState("steady_state: sparse solve residual too large");
    }
    return state;
}

} // namespace

DickeState steady_state(const SparseXcd& L, double S, SolvePolicy policy) {
    const int n = dicke_dimension(S);
    if (L.rows() != static_cast<Eigen::Index>(n) * n) {
        throw ConfigError("steady_state: Liouvillian dimension does not match S");
    }
    const bool dense =
        policy == SolvePolicy::dense ||
        (policy == SolvePolicy::automatic && n * n <= kDenseVecDimCap);
    return dense ? steady_dense(L, S) : steady_sparse(L, S);
}

SpinMoments spin_moments(const DickeState& state) {
    const DickeOperators ops = DickeOperators::build(state.S);
    const double S = state.S;
    const double N = 2.0 * S;
    const Eigen::MatrixXcd* Sv[3] = {&ops.Sx, &ops.Sy, &ops.Sz};
    SpinMoments mom;
    for (int a = 0; a < 3; ++a) {
        mom.mean(a) = (state.rho * (*Sv[a])).trace().real() / S;
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            const double v =
                0.5 * (state.rho * ((*Sv[i]) * (*Sv[j]) + (*Sv[j]) * (*Sv[i]))).trace().real() /
                (S * S);
            mom.second_moments(i, j) = v;
            mom.second_moments(j, i) = v;
        }
    }
    mom.scaled_cov = N * (mom.second_moments - mom.mean * mom.mean.transpose());
    return mom;
}

SqueezingReport exact_squeezing(const DickeState& state) {
    const SpinMoments mom = spin_moments(state);
    const double pol = mom.mean.norm();
    if (pol <= 1e-9) {
        throw ZeroMeanSpin("exact_squeezing: |<S>| too small to define the frame");
    }
    const AlignedFrame frame = aligned_rotation(mom.mean);
    const Mat3 cov_rot = frame.rotation * mom.scaled_cov * frame.rotation.transpose();
    const Mat2 cov_perp = cov_rot.topLeftCorner<2, 2>();

    SqueezingReport rep;
    Eigen::SelfAdjointEigenSolver<Mat2> es(cov_perp);
    rep.lambda_min = es.eigenvalues()(0);
    rep.lambda_max = es.eigenvalues()(1);
    const Vec2 t = (frame.rotation * Vec3::UnitZ()).head<2>();
    const Vec2 coalesce = t.norm() > 1e-14 ? Vec2(t.normalized()) : Vec2(-1.0, 0.0);
    if (rep.lambda_max - rep.lambda_min <= 0.0) {
        rep.isotropic = true;
        rep.axis_min = Vec2(1.0, 0.0);
        rep.axis_max = Vec2(0.0, 1.0);
        rep.alignment_angle = std::numeric_limits<double>::quiet_NaN();
    } else {
        rep.axis_min = es.eigenvectors().col(0);
        rep.axis_max = es.eigenvectors().col(1);
        rep.alignment_angle = std::acos(std::min(1.0, std::abs(rep.axis_max.dot(coalesce))));
    }
    // Σ'_perp eigenvalues already carry the 2/S normalization of xi_S^2.
    rep.xi_s_sq = rep.lambda_min;
    rep.polarization = pol;
    rep.xi_r_sq = rep.xi_s_sq / (pol * pol);
    return rep;
}

} // namespace cep
