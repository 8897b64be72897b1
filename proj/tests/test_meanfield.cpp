#include <doctest.h>

#include <cmath>
#include <random>

#include "cep/meanfield.hpp"

using namespace cep;

namespace {

SpinModelSpec example(double delta, double gx = 0, double gy = 0, double gz = 0) {
    return build_example_model(PresetParams::from_delta(2.0, 1.0, delta, gx, gy, gz));
}

Vec3 random_unit(std::mt19937& rng) {
    std::normal_distribution<double> dist;
    Vec3 v(dist(rng), dist(rng), dist(rng));
    return v.normalized();
}

} // namespace

TEST_CASE("drift vanishes at the PT-broken fixed point") {
    const PresetParams p = PresetParams::from_delta(2.0, 1.0, 1.0);
    const FixedPointBranch branch = example_branch(p);
    CHECK(drift(example(1.0), branch.point).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("drift of a channels-only model vanishes at the fully mixed point") {
    std::vector<Channel> chans;
    Vec3c ell;
    ell << std::complex<double>(0.4, 0.1), std::complex<double>(-0.2, 0.9), 0.3;
    chans.push_back({ell, "c"});
    const SpinModelSpec spec(Vec3::Zero(), Mat3::Zero(), chans);
    CHECK(drift(spec, Vec3::Zero()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("drift is tangent: |M| is conserved for the whole model class") {
    std::mt19937 rng(3);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 20; ++trial) {
        Vec3c ell;
        for (int i = 0; i < 3; ++i) ell(i) = std::complex<double>(dist(rng), dist(rng));
        Mat3 K = Mat3::Random();
        K = ((K + K.transpose()) / 2).eval();
        const SpinModelSpec spec(Vec3(dist(rng), dist(rng), dist(rng)), K, {{ell, "c"}});
        const Vec3 M = Vec3(dist(rng), dist(rng), dist(rng));
        CHECK(std::abs(M.dot(drift(spec, M))) < 1e-12 * (1.0 + M.squaredNorm()));
    }
}

TEST_CASE("n-PT covariance of the drift for an L-PT-symmetric model") {
    const SpinModelSpec spec = example(0.7);
    std::mt19937 rng(7);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 M(dist(rng), dist(rng), dist(rng));
        const Vec3 g = drift(spec, M);
        const Vec3 gm = drift(spec, Vec3(M.x(), M.y(), -M.z()));
        CHECK(std::abs(gm.x() + g.x()) < 1e-12);
        CHECK(std::abs(gm.y() + g.y()) < 1e-12);
        CHECK(std::abs(gm.z() - g.z()) < 1e-12);
    }
}

TEST_CASE("analytic Jacobian matches central differences") {
    std::mt19937 rng(13);
    std::normal_distribution<double> dist;
    const SpinModelSpec spec = example(0.4, 0.5, 0.0, 0.3);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec3 M(dist(rng), dist(rng), dist(rng));
        const Mat3 J = jacobian(spec, M);
        const Mat3 Jfd = jacobian_central_diff(spec, M);
        CHECK((J - Jfd).cwiseAbs().maxCoeff() < 1e-6 * (1.0 + J.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("Jacobian parity in Z") {
    const SpinModelSpec spec = example(0.9, 0.2, 0.1, 0.5);
    std::mt19937 rng(17);
    std::normal_distribution<double> dist;
    // J_xx, J_xy, J_yx, J_yy, J_zz odd; J_xz, J_yz, J_zx, J_zy even.
    const int parity[3][3] = {{-1, -1, +1}, {-1, -1, +1}, {+1, +1, -1}};
    for (int trial = 0; trial < 20; ++trial) {
        const Vec3 M(dist(rng), dist(rng), dist(rng));
        const Mat3 J = jacobian(spec, M);
        const Mat3 Jm = jacobian(spec, Vec3(M.x(), M.y(), -M.z()));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(Jm(i, j) - parity[i][j] * J(i, j)) < 1e-12);
    }
}

TEST_CASE("Jacobian: zero model pieces give the zero matrix") {
    std::vector<Channel> none;
    CHECK_THROWS(SpinModelSpec(Vec3::Zero(), Mat3::Zero(), none));
    // smallest legal stand-in: B-only model has constant Jacobian cross(B)
    const SpinModelSpec spec(Vec3(0, 0, 2), Mat3::Zero(), {});
    const Mat3 J = jacobian(spec, Vec3(0.3, 0.2, 0.1));
    CHECK(J(0, 1) == doctest::Approx(-2.0));
    CHECK(J(1, 0) == doctest::Approx(2.0));
}

TEST_CASE("raw Jacobian agrees with the on-sphere branch form on tangent vectors") {
    const PresetParams p = PresetParams::from_delta(2.0, 1.0, 1.0);
    const FixedPointBranch branch = example_branch(p);
    const Mat3 J = jacobian(example(1.0), branch.point);
    const Mat3 Jc4 = example_jacobian_on_branch(p, branch.point);
    // Same transverse block in the aligned frame...
    const AlignedFrame frame = aligned_rotation(branch.point);
    const Mat3 d = frame.rotation * (J - Jc4) * frame.rotation.transpose();
    CHECK(d.topLeftCorner<2, 2>().cwiseAbs().maxCoeff() < 1e-12);
    // ...and identical action on any tangent vector.
    std::mt19937 rng(29);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 10; ++trial) {
        Vec3 t(dist(rng), dist(rng), dist(rng));
        t -= t.dot(branch.point) * branch.point;
        CHECK(((J - Jc4) * t).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("branch-form Jacobian eigenvalues at delta = 1") {
    const PresetParams p = PresetParams::from_delta(2.0, 1.0, 1.0);
    const FixedPointBranch branch = example_branch(p);
    const Mat3 J = example_jacobian_on_branch(p, branch.point);
    Eigen::EigenSolver<Mat3> es(J);
    std::vector<double> re(3), im(3);
    for (int i = 0; i < 3; ++i) {
        re[i] = es.eigenvalues()(i).real();
        im[i] = std::abs(es.eigenvalues()(i).imag());
    }
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-3.96822).epsilon(1e-4));
    CHECK(re[1] == doctest::Approx(-1.98411).epsilon(1e-4));
    CHECK(re[2] == doctest::Approx(-1.98411).epsilon(1e-4));
    std::sort(im.begin(), im.end());
    CHECK(im[2] == doctest::Approx(0.726234).epsilon(1e-4));
}

TEST_CASE("example_branch closed forms and stability") {
    PresetParams p = PresetParams::from_delta(2.0, 1.0, 1.0);
    FixedPointBranch b = example_branch(p);
    CHECK(b.point.z() == doctest::Approx(-0.726234).epsilon(1e-5));
    CHECK(b.point.x() == doctest::Approx(0.236292).epsilon(1e-5));
    CHECK(b.point.y() == doctest::Approx(0.645562).epsilon(1e-5));
    CHECK(std::abs(b.point.norm() - 1.0) < 1e-12);
    CHECK(b.stability == Stability::stable);
    CHECK(b.pt_character == PtCharacter::broken);
    CHECK(b.branch_sign == -1);

    p = PresetParams::from_delta(2.0, 1.0, 0.1);
    b = example_branch(p);
    CHECK(b.point.z() == doctest::Approx(-0.286029).epsilon(1e-5));

    CHECK_THROWS_AS(example_branch(PresetParams::from_delta(2.0, 1.0, 0.0)), NoBrokenBranch);
}

TEST_CASE("example_branch mirror has positive Z") {
    const PresetParams p = PresetParams::from_delta(2.0, 1.0, 0.5);
    const FixedPointBranch b = example_branch_mirror(p);
    CHECK(b.point.z() > 0.0);
    CHECK(b.branch_sign == +1);
    CHECK(drift(example(0.5), b.point).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("|Z*| approaches sqrt(2 r delta/(1+r^2)) as delta -> 0") {
    const double r = std::sqrt(3.0);
    const double delta = 1e-4;
    const FixedPointBranch b = example_branch(PresetParams::from_delta(2.0, 1.0, delta));
    const double asymptotic = std::sqrt(2.0 * r * delta / (1.0 + r * r));
    CHECK(std::abs(std::abs(b.point.z()) / asymptotic - 1.0) < 0.01);
}

TEST_CASE("find_fixed_points recovers both branches from the seed grid") {
    const PresetParams p = PresetParams::from_delta(2.0, 1.0, 1.0);
    const SpinModelSpec spec = example(1.0);
    int failed = 0;
    const auto points = find_fixed_points(spec, sphere_seed_grid(), &failed);
    const FixedPointBranch expected = example_branch(p);
    bool found_stable = false, found_mirror = false;
    for (const auto& b : points) {
        if ((b.point - expected.point).norm() < 1e-10) {
            found_stable = true;
            CHECK(b.stability == Stability::stable);
        }
        if (b.point.z() > 0.0 && std::abs(std::abs(b.point.z()) - std::abs(expected.point.z())) < 1e-8) {
            found_mirror = true;
        }
    }
    CHECK(found_stable);
    CHECK(found_mirror);
}

TEST_CASE("find_fixed_points: zero drift returns marginal points") {
    // Pure dephasing generates no mean-field drift at all.
    Vec3c ez;
    ez << 0.0, 0.0, 1.0;
    const SpinModelSpec spec(Vec3::Zero(), Mat3::Zero(), {{ez, "dephasing"}});
    const std::vector<Vec3> seeds = {Vec3(0.3, 0.2, 0.4), Vec3(-0.7, 0.1, 0.0)};
    const auto points = find_fixed_points(spec, seeds);
    REQUIRE(points.size() == seeds.size());
    for (const auto& b : points) CHECK(b.stability == Stability::marginal);
}

TEST_CASE("cep_defectiveness at the critical point and on the branch") {
    PresetParams p = PresetParams::from_delta(2.0, 1.0, 1.0);
    // on-sphere form at Z = 0 exactly
    Mat3 J0 = example_jacobian_on_branch(p, Vec3(0.2, 0.9, 0.0));
    CepDiagnostics d0 = cep_defectiveness(J0);
    CHECK(d0.rank_J == 1);
    CHECK(d0.norm_J_squared == doctest::Approx(0.0).epsilon(1e-14));

    const FixedPointBranch b = example_branch(p);
    CepDiagnostics d1 = cep_defectiveness(example_jacobian_on_branch(p, b.point));
    CHECK(d1.rank_J == 3);
    CHECK(d1.min_eigval_gap > 0.1);

    CepDiagnostics dz = cep_defectiveness(Mat3::Zero());
    CHECK(dz.rank_J == 0);
}

TEST_CASE("raw Jacobian is rank-1 nilpotent at the CEP limit") {
    // Fixed point on the equator (delta -> 0 limit of the branch).
    const double g = 2.0, omega = 1.0, kappa = std::sqrt(3.0);
    const double s2 = kappa * kappa + omega * omega;  // = g^2 at the CEP
    PresetParams p;
    p.g = g;
    p.omega = omega;
    p.kappa = kappa;
    const Vec3 M(g * omega / s2, g * kappa / s2, 0.0);
    const Mat3 J = jacobian(build_example_model(p), M);
    const CepDiagnostics d = cep_defectiveness(J);
    CHECK(d.rank_J == 1);
    CHECK(d.norm_J_squared < 1e-12);
}

TEST_CASE("eigvec condition grows toward the CEP") {
    double prev = 0.0;
    for (double delta : {1.0, 0.1, 0.01, 0.001}) {
        const PresetParams p = PresetParams::from_delta(2.0, 1.0, delta);
        const FixedPointBranch b = example_branch(p);
        const CepDiagnostics d = cep_defectiveness(example_jacobian_on_branch(p, b.point));
        CHECK(d.eigvec_condition > prev);
        prev = d.eigvec_condition;
    }
}

TEST_CASE("aligned_rotation basic frames") {
    AlignedFrame f = aligned_rotation(Vec3(1, 0, 0));
    Mat3 expected;
    expected << 0, 0, -1, 0, 1, 0, 1, 0, 0;
    CHECK((f.rotation - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_FALSE(f.degenerate);

    const FixedPointBranch b = example_branch(PresetParams::from_delta(2.0, 1.0, 1.0));
    f = aligned_rotation(b.point);
    CHECK((f.rotation * b.point - Vec3(0, 0, 1)).cwiseAbs().maxCoeff() < 1e-12);

    f = aligned_rotation(Vec3(0, 0, -1));
    CHECK(f.degenerate);
    CHECK((f.rotation * Vec3(0, 0, -1) - Vec3(0, 0, 1)).cwiseAbs().maxCoeff() < 1e-15);

    CHECK_THROWS_AS(aligned_rotation(Vec3::Zero()), ZeroVector);
}

TEST_CASE("aligned_rotation is orthogonal with det +1") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        const Vec3 M = random_unit(rng) * 0.9;
        const AlignedFrame f = aligned_rotation(M);
        CHECK((f.rotation * f.rotation.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() <
              1e-12);
        CHECK(f.rotation.determinant() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((f.rotation * M - Vec3(0, 0, M.norm())).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("transverse_blocks reproduces the branch closed forms") {
    const PresetParams p = PresetParams::from_delta(2.0, 1.0, 1.0);
    const FixedPointBranch b = example_branch(p);
    const SpinModelSpec spec = example(1.0);
    const AlignedFrame frame = aligned_rotation(b.point);
    const Mat3 J = jacobian(spec, b.point);

    Mat3 D = Mat3::Zero();  // fill from the closed-form lab diffusion of the decay channel
    {
        const double k = p.kappa;
        const double X = b.point.x(), Y = b.point.y(), Z = b.point.z();
        D << Z * Z, 0, -X * Z, 0, Z * Z, -Y * Z, -X * Z, -Y * Z, X * X + Y * Y;
        D *= 2.0 * k;
    }
    const TransverseBlocks tb = transverse_blocks(J, D, frame);

    const double Z = b.point.z();
    Mat2 Jp_expected;
    Jp_expected << p.kappa * Z, -p.omega, p.omega * Z * Z, p.kappa * Z;
    CHECK((tb.J_perp - Jp_expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(tb.J_perp(0, 0) == doctest::Approx(-1.98411).epsilon(1e-4));
    CHECK(tb.J_perp(1, 0) == doctest::Approx(0.52742).epsilon(1e-4));

    Mat2 Dp_expected = Mat2::Zero();
    Dp_expected(0, 0) = 2.0 * p.kappa;
    Dp_expected(1, 1) = 2.0 * p.kappa * Z * Z;
    CHECK((tb.D_perp - Dp_expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((tb.coalesce_axis_transverse - Vec2(-1.0, 0.0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transverse_blocks: identity is rotation invariant") {
    const AlignedFrame frame = aligned_rotation(Vec3(0.3, -0.5, 0.7));
    const TransverseBlocks tb = transverse_blocks(Mat3::Identity(), Mat3::Identity(), frame);
    CHECK((tb.J_perp - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((tb.D_perp - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}
