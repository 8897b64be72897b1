#include "cep/model.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

#include "cep/dicke.hpp"

namespace cep {

namespace {

constexpr double kSymTol = 1e-10;

// Parity in the Dicke basis: Πσ_x maps |S,m> to |S,-m> (exchange matrix).
Eigen::MatrixXd parity_matrix(int n) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) P(i, n - 1 - i) = 1.0;
    return P;
}

} // namespace

SymmetryReport check_lpt_symmetry(const SpinModelSpec& spec, double S) {
    if (S > 6.0) {
        throw DimensionTooLarge("check_lpt_symmetry: dense comparison limited to S <= 6");
    }
    const int n = dicke_dimension(S);

    const Eigen::MatrixXcd L1 = Eigen::MatrixXcd(build_liouvillian(spec, S));
    const Eigen::MatrixXcd L2 = Eigen::MatrixXcd(build_liouvillian(pt_transform_spec(spec), S));

    SymmetryReport rep;
    rep.test_spin = S;
    rep.matrix_distance_direct = (L1 - L2).cwiseAbs().maxCoeff();

    // Conjugate L2 by the antilinear superoperator rho -> P rho* P: with row-major
    // vectorization its linear part is P⊗P, composed with elementwise conjugation.
    const Eigen::MatrixXd A = Eigen::kroneckerProduct(parity_matrix(n), parity_matrix(n)).eval();
    const Eigen::MatrixXcd L2w = A * L2.conjugate() * A;
    rep.matrix_distance_antilinear = (L1 - L2w).cwiseAbs().maxCoeff();

    if (rep.matrix_distance_direct < kSymTol) {
        rep.verdict = SymmetryVerdict::symmetric_direct;
    } else if (rep.matrix_distance_antilinear < kSymTol) {
        rep.verdict = SymmetryVerdict::symmetric_antilinear;
    } else {
        rep.verdict = SymmetryVerdict::broken;
    }
    return rep;
}

} // namespace cep
