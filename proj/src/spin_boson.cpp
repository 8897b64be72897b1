#include "cep/spin_boson.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace cep {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

void SpinBosonSpec::validate() const {
    if (!(kappa > 0.0)) throw ConfigError("SpinBosonSpec: kappa must be > 0");
    if (!std::isfinite(g) || !std::isfinite(lambda) || !std::isfinite(omega) ||
        !std::isfinite(kappa)) {
        throw ConfigError("SpinBosonSpec: non-finite parameter");
    }
}

Vec5 sb_drift(const SpinBosonSpec& s, const Vec5& x) {
    const double X = x(0), Y = x(1), Z = x(2), Q = x(3), P = x(4);
    Vec5 f;
    f(0) = kSqrt2 * s.lambda * P * Z - s.omega * Z * Y;
    f(1) = -s.g * Z - kSqrt2 * s.lambda * Q * Z + s.omega * Z * X;
    f(2) = s.g * Y + kSqrt2 * s.lambda * Q * Y - kSqrt2 * s.lambda * P * X;
    f(3) = -s.lambda / kSqrt2 * Y - s.kappa / 2.0 * Q;
    f(4) = s.lambda / kSqrt2 * X - s.kappa / 2.0 * P;
    return f;
}

SpinBosonFixedPoint sb_fixed_point(const SpinBosonSpec& s, int branch_sign) {
    s.validate();
    const double D = s.Delta();
    const double gk2 = s.g * s.g * s.kappa * s.kappa;
    if (gk2 >= D) {
        throw NoBrokenBranch("sb_fixed_point: g >= g_c, no symmetry-broken branch");
    }
    SpinBosonFixedPoint fp;
    fp.Delta = D;
    fp.branch_sign = branch_sign >= 0 ? +1 : -1;
    fp.X = s.g * s.omega * s.kappa * s.kappa / D;
    fp.Y = 2.0 * s.g * s.kappa * s.lambda * s.lambda / D;
    fp.Z = fp.branch_sign * std::sqrt(1.0 - gk2 / D);
    fp.Q = -kSqrt2 * s.lambda * fp.Y / s.kappa;
    fp.P = kSqrt2 * s.lambda * fp.X / s.kappa;
    return fp;
}

Mat5 sb_jacobian(const SpinBosonSpec& s, const Vec5& x) {
    const double X = x(0), Y = x(1), Z = x(2), Q = x(3), P = x(4);
    const double l2 = kSqrt2 * s.lambda;
    Mat5 J = Mat5::Zero();
    J(0, 1) = -s.omega * Z;
    J(0, 2) = l2 * P - s.omega * Y;
    J(0, 4) = l2 * Z;
    J(1, 0) = s.omega * Z;
    J(1, 2) = -s.g - l2 * Q + s.omega * X;
    J(1, 3) = -l2 * Z;
    J(2, 0) = -l2 * P;
    J(2, 1) = s.g + l2 * Q;
    J(2, 3) = l2 * Y;
    J(2, 4) = -l2 * X;
    J(3, 1) = -s.lambda / kSqrt2;
    J(3, 3) = -s.kappa / 2.0;
    J(4, 0) = s.lambda / kSqrt2;
    J(4, 4) = -s.kappa / 2.0;
    return J;
}

Eigen::VectorXd characteristic_polynomial(const Eigen::MatrixXd& A) {
    const Eigen::Index n = A.rows();
    Eigen::VectorXd c(n + 1);
    c(0) = 1.0;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        M = A * M + c(k - 1) * Eigen::MatrixXd::Identity(n, n);
        c(k) = -(A * M).trace() / static_cast<double>(k);
    }
    return c;
}

SpinBosonTangent sb_tangent_system(const SpinBosonSpec& s, const SpinBosonFixedPoint& fp) {
    const double rp = std::hypot(fp.X, fp.Y);
    if (rp <= 1e-12) {
        throw DegenerateFrame("sb_tangent_system: fixed point has no transverse component");
    }
    const double X = fp.X / rp, Y = fp.Y / rp;  // c and s of the aligned frame
    const double Z = fp.Z;
    const double l2 = kSqrt2 * s.lambda;
    const double l1 = s.lambda / kSqrt2;
    SpinBosonTangent t;
    t.J << 0.0, -s.omega, -l2 * Y, l2 * X,
           s.omega * Z * Z, 0.0, -l2 * X * Z, -l2 * Y * Z,
           -l1 * Y * Z, -l1 * X, -s.kappa / 2.0, 0.0,
           l1 * X * Z, -l1 * Y, 0.0, -s.kappa / 2.0;
    t.D = s.kappa / 2.0 * (Vec4() << 0.0, 0.0, 1.0, 1.0).finished().asDiagonal();
    return t;
}

SpinBosonSqueezing sb_squeezing(const SpinBosonSpec& s) {
    const SpinBosonFixedPoint fp = sb_fixed_point(s, -1);
    const SpinBosonTangent t = sb_tangent_system(s, fp);
    SpinBosonSqueezing out;
    out.Sigma = solve_lyapunov(t.J, t.D);
    Eigen::SelfAdjointEigenSolver<Mat2> es(Mat2(out.Sigma.topLeftCorner<2, 2>()));
    out.xi_s_sq_numeric = es.eigenvalues()(0);
    out.xi_s_sq_closed = std::sqrt(1.0 - s.g * s.g * s.kappa * s.kappa / s.Delta());
    return out;
}

} // namespace cep
