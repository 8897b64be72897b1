#include "cep/fluctuations.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <limits>

namespace cep {

namespace {

constexpr double kHurwitzTol = 1e-12;

double max_real_eigenvalue(const Eigen::MatrixXd& J) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(J, false);
    return es.eigenvalues().real().maxCoeff();
}

// Invert Z*(delta) for the example branch: Z^2 = 1 - g^2/(kappa^2 + omega^2).
double delta_for_branch_z(const PresetParams& p, double z_abs) {
    const double kappa = std::sqrt(p.g * p.g / (1.0 - z_abs * z_abs) - p.omega * p.omega);
    return (kappa - p.kappa_c()) / p.omega;
}

double rotated_d22_at(const PresetParams& p, double z_abs) {
    PresetParams q = PresetParams::from_delta(p.g, p.omega, delta_for_branch_z(p, z_abs),
                                              p.gamma_x, p.gamma_y, p.gamma_z);
    const SpinModelSpec spec = build_example_model(q);
    const FixedPointBranch branch = example_branch(q);
    const AlignedFrame frame = aligned_rotation(branch.point);
    const Mat3 Dp = frame.rotation * diffusion(spec, branch.point) * frame.rotation.transpose();
    return Dp(1, 1);
}

struct LogFit {
    double slope = 0.0;
    double r_squared = 1.0;
};

LogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        const double dy = std::log(y[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LogFit f;
    f.slope = sxy / sxx;
    f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

} // namespace

Mat3 diffusion(const SpinModelSpec& spec, const Vec3& M) {
    Mat3 D = Mat3::Zero();
    const Vec3c Mc = M.cast<std::complex<double>>();
    for (const auto& ch : spec.channels()) {
        const Vec3c w = complex_cross(ch.vec, Mc);
        D += 2.0 * (w.conjugate() * w.transpose()).real();
    }
    return D;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& J, const Eigen::MatrixXd& D) {
    const Eigen::Index n = J.rows();
    if (n != J.cols() || n != D.rows() || n != D.cols()) {
        throw ConfigError("solve_lyapunov: dimension mismatch");
    }
    if (n > 5) {
        throw ConfigError("solve_lyapunov: Kronecker solve limited to n <= 5");
    }
    if (max_real_eigenvalue(J) >= -kHurwitzTol) {
        throw NonHurwitzJacobian("solve_lyapunov: J is not Hurwitz");
    }
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd A =
        Eigen::kroneckerProduct(J, I).eval() + Eigen::kroneckerProduct(I, J).eval();
    Eigen::VectorXd d(Eigen::Map<const Eigen::VectorXd>(D.data(), n * n));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) {
        throw SingularSystem("solve_lyapunov: Kronecker system is singular");
    }
    Eigen::VectorXd s = lu.solve(-d);
    Eigen::MatrixXd Sigma(Eigen::Map<const Eigen::MatrixXd>(s.data(), n, n));
    return 0.5 * (Sigma + Sigma.transpose());
}

CovariancePack covariance_pack(const SpinModelSpec& spec, const Vec3& M) {
    CovariancePack pack;
    pack.J_lab = jacobian(spec, M);
    pack.D_lab = diffusion(spec, M);
    pack.frame = aligned_rotation(M);
    const TransverseBlocks tb = transverse_blocks(pack.J_lab, pack.D_lab, pack.frame);
    pack.J_perp = tb.J_perp;
    pack.D_perp = tb.D_perp;
    pack.coalesce_axis_transverse = tb.coalesce_axis_transverse;
    pack.Sigma_perp = solve_lyapunov(pack.J_perp, pack.D_perp);

    const Mat2& S = pack.Sigma_perp;
    const double num =
        (pack.J_perp * S + S * pack.J_perp.transpose() + pack.D_perp).norm();
    const double den = pack.D_perp.norm() + pack.J_perp.norm() * S.norm();
    pack.residual_perp = den > 0.0 ? num / den : num;

    Mat3 Srot = Mat3::Zero();
    Srot.topLeftCorner<2, 2>() = S;
    const Mat3& R = pack.frame.rotation;
    pack.Sigma_full = R.transpose() * Srot * R;
    pack.residual_full =
        (pack.J_lab * pack.Sigma_full + pack.Sigma_full * pack.J_lab.transpose() + pack.D_lab)
            .cwiseAbs()
            .maxCoeff();
    return pack;
}

SqueezingReport gaussian_squeezing(const CovariancePack& pack) {
    SqueezingReport rep;
    Eigen::SelfAdjointEigenSolver<Mat2> es(pack.Sigma_perp);
    rep.lambda_min = es.eigenvalues()(0);
    rep.lambda_max = es.eigenvalues()(1);
    if (rep.lambda_max - rep.lambda_min <= 0.0) {
        rep.isotropic = true;
        rep.axis_min = Vec2(1.0, 0.0);
        rep.axis_max = Vec2(0.0, 1.0);
        rep.alignment_angle = std::numeric_limits<double>::quiet_NaN();
    } else {
        rep.axis_min = es.eigenvectors().col(0);
        rep.axis_max = es.eigenvectors().col(1);
        const double c = std::abs(rep.axis_max.dot(pack.coalesce_axis_transverse));
        rep.alignment_angle = std::acos(std::min(1.0, c));
    }
    rep.xi_s_sq = rep.lambda_min;
    rep.polarization = 1.0;
    rep.xi_r_sq = rep.xi_s_sq;
    return rep;
}

DephasingCoefficients dephasing_coefficients(const PresetParams& p) {
    DephasingCoefficients d;
    const double s2 = p.kappa * p.kappa + p.omega * p.omega;
    d.d11 = 2.0 * p.kappa + (p.gamma_x * p.kappa * p.kappa + p.gamma_y * p.omega * p.omega) / s2;
    d.d12 = p.kappa * p.omega * (p.gamma_x - p.gamma_y) / s2;
    d.d22 = 2.0 * p.kappa + (p.gamma_x * p.omega * p.omega + p.gamma_y * p.kappa * p.kappa) / s2 -
            p.gamma_z;
    d.dz = p.gamma_z;
    return d;
}

Mat2 dephasing_covariance_closed_form(const PresetParams& p, double Z_star) {
    if (Z_star == 0.0) {
        throw AtCriticalPoint("dephasing_covariance_closed_form: Z* = 0");
    }
    if (Z_star > 0.0) {
        throw ConfigError("dephasing_covariance_closed_form: expects the stable branch Z* < 0");
    }
    const DephasingCoefficients d = dephasing_coefficients(p);
    const double k = p.kappa, w = p.omega, gz = p.gamma_z;
    const double s2 = k * k + w * w;
    const double z = Z_star, z2 = z * z;
    Mat2 S;
    S(0, 0) = -(((2.0 * k * k + w * w) * d.d11 + 2.0 * k * w * d.d12 + w * w * d.d22) * z2 +
                gz * w * w) /
              (4.0 * k * s2 * z2 * z);
    S(0, 1) = (w * d.d11 * z2 - 2.0 * k * d.d12 * z2 - w * d.d22 * z2 - gz * w) / (4.0 * s2 * z2);
    S(1, 0) = S(0, 1);
    S(1, 1) = -((w * w * d.d11 - 2.0 * k * w * d.d12 + (2.0 * k * k + w * w) * d.d22) * z2 +
                (2.0 * k * k + w * w) * gz) /
              (4.0 * k * s2 * z);
    return S;
}

double dz_component(const PresetParams& p) {
    const double z1 = 1e-3, z2 = 2e-3, zv = 1.5e-3;
    const double v1 = rotated_d22_at(p, z1);
    const double v2 = rotated_d22_at(p, z2);
    const double b = (v2 - v1) / (z2 * z2 - z1 * z1);
    const double a = v1 - b * z1 * z1;
    const double predicted = a + b * zv * zv;
    const double actual = rotated_d22_at(p, zv);
    if (std::abs(predicted - actual) > 1e-8) {
        throw FitFailure("dz_component: a + b Z^2 fit residual exceeds 1e-8");
    }
    return a;
}

ScalingFit scaling_exponents(const PresetParams& p, const std::vector<double>& delta_grid) {
    if (delta_grid.size() < 5) {
        throw ConfigError("scaling_exponents: need at least 5 delta points");
    }
    double lo = delta_grid.front(), hi = delta_grid.front();
    for (double d : delta_grid) {
        if (d <= 0.0) throw ConfigError("scaling_exponents: delta grid must be positive");
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    if (hi / lo < 100.0) {
        throw ConfigError("scaling_exponents: delta grid must span at least two decades");
    }
    std::vector<double> zs, lmin, lmax, s11;
    int skipped = 0;
    for (double delta : delta_grid) {
        PresetParams q = PresetParams::from_delta(p.g, p.omega, delta, p.gamma_x, p.gamma_y,
                                                  p.gamma_z);
        try {
            const FixedPointBranch branch = example_branch(q);
            const CovariancePack pack = covariance_pack(build_example_model(q), branch.point);
            Eigen::SelfAdjointEigenSolver<Mat2> es(pack.Sigma_perp);
            zs.push_back(std::abs(branch.point.z()));
            lmin.push_back(es.eigenvalues()(0));
            lmax.push_back(es.eigenvalues()(1));
            s11.push_back(pack.Sigma_perp(0, 0));
        } catch (const NonHurwitzJacobian&) {
            ++skipped;
        }
    }
    if (zs.size() < 5) {
        throw Error("scaling_exponents: too few solvable grid points");
    }
    ScalingFit fit;
    const LogFit fmin = fit_loglog(zs, lmin);
    const LogFit fmax = fit_loglog(zs, lmax);
    const LogFit f11 = fit_loglog(zs, s11);
    fit.slope_min = fmin.slope;
    fit.r2_min = fmin.r_squared;
    fit.slope_max = fmax.slope;
    fit.r2_max = fmax.r_squared;
    fit.slope_11 = f11.slope;
    fit.r2_11 = f11.r_squared;
    fit.points_used = static_cast<int>(zs.size());
    fit.points_skipped = skipped;
    return fit;
}

} // namespace cep
