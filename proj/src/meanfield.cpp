#include "cep/meanfield.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace cep {

namespace {

using Mat3c = Eigen::Matrix3cd;

Mat3 cross_matrix(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return m;
}

Mat3c cross_matrix(const Vec3c& v) {
    Mat3c m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return m;
}

constexpr double kStabilityTol = 1e-10;
constexpr double kPtTol = 1e-9;
constexpr double kNewtonTol = 1e-12;
constexpr double kDedupDist = 1e-8;

// Eigenvalues of a real 2x2 matrix in closed form.
std::pair<std::complex<double>, std::complex<double>> eig2(const Mat2& A) {
    const double tr = A.trace();
    const double det = A.determinant();
    const std::complex<double> disc =
        std::sqrt(std::complex<double>(tr * tr / 4.0 - det, 0.0));
    return {tr / 2.0 + disc, tr / 2.0 - disc};
}

Stability classify(double max_re) {
    if (max_re < -kStabilityTol) return Stability::stable;
    if (max_re <= kStabilityTol) return Stability::marginal;
    return Stability::unstable;
}

FixedPointBranch classify_point(const SpinModelSpec& spec, const Vec3& M) {
    FixedPointBranch b;
    b.point = M;
    const Mat3 J = jacobian(spec, M);
    if (M.norm() > 1e-12) {
        // Tangent spectrum; the radial direction is the structural zero mode.
        const AlignedFrame frame = aligned_rotation(M);
        const Mat2 Jp = (frame.rotation * J * frame.rotation.transpose()).topLeftCorner<2, 2>();
        auto [l1, l2] = eig2(Jp);
        b.jacobian_eigenvalues << l1, l2, 0.0;
        b.stability = classify(std::max(l1.real(), l2.real()));
    } else {
        Eigen::EigenSolver<Mat3> es(J);
        b.jacobian_eigenvalues = es.eigenvalues();
        b.stability = classify(b.jacobian_eigenvalues.real().maxCoeff());
    }
    b.pt_character = std::abs(M.z()) < kPtTol ? PtCharacter::symmetric : PtCharacter::broken;
    b.branch_sign = M.z() >= 0.0 ? +1 : -1;
    return b;
}

} // namespace

Vec3 drift(const SpinModelSpec& spec, const Vec3& M) {
    const Vec3 w = spec.field() + 4.0 * (spec.coupling() * M);
    Vec3 g = w.cross(M);
    for (const auto& ch : spec.channels()) {
        const Vec3c Mc = M.cast<std::complex<double>>();
        // Eigen's dot conjugates the left argument, so this is ℓ*·M.
        const std::complex<double> amp = ch.vec.dot(Mc);
        const Vec3c lxm = complex_cross(ch.vec, Mc);
        g -= (amp * lxm).imag();
    }
    return g;
}

Mat3 jacobian(const SpinModelSpec& spec, const Vec3& M) {
    Mat3 J = -4.0 * cross_matrix(M) * spec.coupling() +
             cross_matrix(Vec3(spec.field() + 4.0 * (spec.coupling() * M)));
    for (const auto& ch : spec.channels()) {
        const Vec3c Mc = M.cast<std::complex<double>>();
        const std::complex<double> amp = ch.vec.dot(Mc);
        const Vec3c lxm = complex_cross(ch.vec, Mc);
        const Mat3c term = lxm * ch.vec.conjugate().transpose() + amp * cross_matrix(ch.vec);
        J -= term.imag();
    }
    return J;
}

Mat3 jacobian_central_diff(const SpinModelSpec& spec, const Vec3& M, double step) {
    Mat3 J;
    for (int j = 0; j < 3; ++j) {
        Vec3 dp = M, dm = M;
        dp(j) += step;
        dm(j) -= step;
        J.col(j) = (drift(spec, dp) - drift(spec, dm)) / (2.0 * step);
    }
    return J;
}

Mat3 example_jacobian_on_branch(const PresetParams& p, const Vec3& M_star) {
    const double Z = M_star.z();
    Mat3 J;
    J << p.kappa * Z, -p.omega * Z, 0.0,
         p.omega * Z, p.kappa * Z, 0.0,
         0.0, p.g, 2.0 * p.kappa * Z;
    return J;
}

const char* to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::marginal: return "marginal";
        case Stability::unstable: return "unstable";
    }
    return "marginal";
}

const char* to_string(PtCharacter c) {
    return c == PtCharacter::symmetric ? "symmetric" : "broken";
}

namespace {

FixedPointBranch example_branch_signed(const PresetParams& p, int sign) {
    const double kc = p.kappa_c();  // throws NoBrokenBranch if g^2 <= omega^2
    const double delta = p.delta();
    if (delta <= 0.0) {
        throw NoBrokenBranch("example_branch: delta <= 0, no PT-broken fixed point");
    }
    const double r = p.r();
    const double s2 = p.kappa * p.kappa + p.omega * p.omega;
    const double X = p.g * p.omega / s2;
    const double Y = p.g * p.kappa / s2;
    const double z_sq = delta * (2.0 * r + delta) / (1.0 + (r + delta) * (r + delta));
    const double z_sq_alt = 1.0 - p.g * p.g / s2;
    if (std::abs(z_sq - z_sq_alt) > 1e-12) {
        throw Error("example_branch: branch closed forms disagree");
    }
    const double Z = sign * std::sqrt(z_sq);
    Vec3 M(X, Y, Z);
    if (std::abs(M.norm() - 1.0) > 1e-12) {
        throw Error("example_branch: fixed point off the unit sphere");
    }
    (void)kc;
    return classify_point(build_example_model(p), M);
}

} // namespace

FixedPointBranch example_branch(const PresetParams& p) {
    return example_branch_signed(p, -1);
}

FixedPointBranch example_branch_mirror(const PresetParams& p) {
    return example_branch_signed(p, +1);
}

std::vector<FixedPointBranch> find_fixed_points(const SpinModelSpec& spec,
                                                const std::vector<Vec3>& seeds,
                                                int* num_failed_seeds) {
    if (seeds.empty()) {
        throw ConfigError("find_fixed_points: at least one seed required");
    }
    std::vector<FixedPointBranch> out;
    int failed = 0;
    for (const auto& seed : seeds) {
        // The drift is tangent, so each sphere |M| = |seed| is invariant; Newton runs
        // in the two tangent coordinates with retraction back to the seed's sphere.
        const double radius = seed.norm();
        if (radius <= 1e-12) {
            ++failed;
            continue;
        }
        Vec3 M = seed;
        auto tangent_residual = [&](const Vec3& point) -> Vec2 {
            const AlignedFrame f = aligned_rotation(point);
            return (f.rotation * drift(spec, point)).head<2>();
        };
        Vec2 r = tangent_residual(M);
        bool converged = r.norm() < kNewtonTol;
        for (int it = 0; it < 100 && !converged; ++it) {
            const AlignedFrame f = aligned_rotation(M);
            const Mat2 Jt =
                (f.rotation * jacobian(spec, M) * f.rotation.transpose()).topLeftCorner<2, 2>();
            Eigen::CompleteOrthogonalDecomposition<Mat2> cod(Jt);
            if (cod.rank() == 0) break;  // zero tangent Jacobian, nothing to iterate on
            const Vec2 step = cod.solve(-r);
            auto retract = [&](double scale) {
                Vec3 p = M + f.rotation.transpose() * Vec3(scale * step.x(), scale * step.y(), 0.0);
                return Vec3(radius * p.normalized());
            };
            // Damped update: halve the step while the residual grows.
            double scale = 1.0;
            Vec3 M_next = retract(scale);
            Vec2 r_next = tangent_residual(M_next);
            int halvings = 0;
            while (r_next.norm() > r.norm() && halvings < 30) {
                scale *= 0.5;
                M_next = retract(scale);
                r_next = tangent_residual(M_next);
                ++halvings;
            }
            if (r_next.norm() >= r.norm() && r.norm() > kNewtonTol) break;
            M = M_next;
            r = r_next;
            converged = r.norm() < kNewtonTol;
        }
        if (!converged) {
            ++failed;
            continue;
        }
        const bool duplicate = std::any_of(out.begin(), out.end(), [&](const auto& b) {
            return (b.point - M).norm() < kDedupDist;
        });
        if (!duplicate) out.push_back(classify_point(spec, M));
    }
    if (num_failed_seeds) *num_failed_seeds = failed;
    return out;
}

std::vector<Vec3> sphere_seed_grid() {
    std::vector<Vec3> seeds;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            for (int k = -1; k <= 1; ++k) {
                if (i == 0 && j == 0 && k == 0) continue;
                seeds.push_back(Vec3(i, j, k).normalized());
            }
    return seeds;
}

CepDiagnostics cep_defectiveness(const Mat3& J) {
    CepDiagnostics d;
    Eigen::JacobiSVD<Mat3> svd(J);
    const double smax = svd.singularValues()(0);
    const double thr = 1e-9 * (smax > 0.0 ? smax : 1.0);
    d.rank_J = (svd.singularValues().array() > thr).count();
    d.norm_J_squared = (J * J).norm();
    Eigen::EigenSolver<Mat3> es(J);
    Eigen::JacobiSVD<Eigen::Matrix3cd> vsvd(es.eigenvectors());
    const double vmin = vsvd.singularValues()(2);
    d.eigvec_condition =
        vmin > 0.0 ? vsvd.singularValues()(0) / vmin : std::numeric_limits<double>::infinity();
    d.min_eigval_gap = std::numeric_limits<double>::infinity();
    const auto ev = es.eigenvalues();
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            d.min_eigval_gap = std::min(d.min_eigval_gap, std::abs(ev(i) - ev(j)));
    return d;
}

AlignedFrame aligned_rotation(const Vec3& M) {
    const double norm = M.norm();
    if (norm <= 1e-12) {
        throw ZeroVector("aligned_rotation: |M| <= 1e-12");
    }
    const Vec3 u = M / norm;
    AlignedFrame frame;
    frame.r_perp = std::hypot(M.x(), M.y());
    const double rp = std::hypot(u.x(), u.y());
    if (rp < 1e-12) {
        frame.degenerate = true;
        frame.rotation = Mat3::Identity();
        if (u.z() < 0.0) {
            frame.rotation(1, 1) = -1.0;
            frame.rotation(2, 2) = -1.0;
        }
        return frame;
    }
    const double c = u.x() / rp;
    const double s = u.y() / rp;
    frame.rotation << u.z() * c, u.z() * s, -rp,
                      -s, c, 0.0,
                      rp * c, rp * s, u.z();
    return frame;
}

TransverseBlocks transverse_blocks(const Mat3& J, const Mat3& D, const AlignedFrame& frame) {
    TransverseBlocks tb;
    const Mat3& R = frame.rotation;
    tb.J_perp = (R * J * R.transpose()).topLeftCorner<2, 2>();
    tb.D_perp = (R * D * R.transpose()).topLeftCorner<2, 2>();
    const Vec2 t = (R * Vec3::UnitZ()).head<2>();
    tb.coalesce_axis_transverse = t.norm() > 1e-14 ? Vec2(t.normalized()) : Vec2(-1.0, 0.0);
    return tb;
}

} // namespace cep
