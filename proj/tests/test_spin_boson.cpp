#include <doctest.h>

#include <cmath>
#include <random>

#include "cep/spin_boson.hpp"

using namespace cep;

namespace {

SpinBosonSpec make(double g, double lambda, double omega, double kappa) {
    SpinBosonSpec s;
    s.g = g;
    s.lambda = lambda;
    s.omega = omega;
    s.kappa = kappa;
    return s;
}

Mat5 fd_jacobian(const SpinBosonSpec& s, const Vec5& x, double h = 1e-6) {
    Mat5 J;
    for (int j = 0; j < 5; ++j) {
        Vec5 p = x, m = x;
        p(j) += h;
        m(j) -= h;
        J.col(j) = (sb_drift(s, p) - sb_drift(s, m)) / (2.0 * h);
    }
    return J;
}

} // namespace

TEST_CASE("reference fixed point at (g=1, kappa=2, lambda=1, omega=1)") {
    const SpinBosonSpec s = make(1.0, 1.0, 1.0, 2.0);
    CHECK(s.Delta() == doctest::Approx(8.0).epsilon(1e-15));
    const SpinBosonFixedPoint fp = sb_fixed_point(s, -1);
    CHECK(fp.X == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(fp.Y == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(fp.Z * fp.Z == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(fp.Q == doctest::Approx(-0.35355339059327373).epsilon(1e-12));
    CHECK(fp.P == doctest::Approx(0.35355339059327373).epsilon(1e-12));
}

TEST_CASE("fixed point invariants on random parameter tuples") {
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const double lambda = 0.3 + 1.2 * uni(rng);
        const double omega = 0.2 + 1.3 * uni(rng);
        const double kappa = 0.5 + 2.5 * uni(rng);
        SpinBosonSpec s = make(0.0, lambda, omega, kappa);
        s.g = (0.2 + 0.75 * uni(rng)) * s.g_c();
        const SpinBosonFixedPoint fp = sb_fixed_point(s, trial % 2 == 0 ? -1 : +1);
        CHECK(std::abs(fp.X * fp.X + fp.Y * fp.Y + fp.Z * fp.Z - 1.0) < 1e-12);
        CHECK(std::abs(fp.Q + std::sqrt(2.0) * lambda * fp.Y / kappa) < 1e-12);
        CHECK(std::abs(fp.P - std::sqrt(2.0) * lambda * fp.X / kappa) < 1e-12);
        CHECK(sb_drift(s, fp.vec()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("no broken branch at or beyond the transition") {
    SpinBosonSpec s = make(0.0, 1.0, 1.0, 2.0);
    s.g = s.g_c();
    CHECK_THROWS_AS(sb_fixed_point(s, -1), NoBrokenBranch);
    s.g = 1.1 * s.g_c();
    CHECK_THROWS_AS(sb_fixed_point(s, -1), NoBrokenBranch);
}

TEST_CASE("branch exists at omega = 0 with X = 0") {
    SpinBosonSpec s = make(0.5, 1.0, 0.0, 1.5);  // 4 lambda^4 = 4 > g^2 kappa^2 = 0.5625
    const SpinBosonFixedPoint fp = sb_fixed_point(s, -1);
    CHECK(fp.X == doctest::Approx(0.0));
    CHECK(fp.Y > 0.0);
    CHECK(sb_drift(s, fp.vec()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("analytic 5x5 Jacobian matches finite differences") {
    std::mt19937 rng(71);
    std::normal_distribution<double> dist;
    const SpinBosonSpec s = make(1.0, 0.8, 0.6, 1.7);
    for (int trial = 0; trial < 10; ++trial) {
        Vec5 x;
        for (int i = 0; i < 5; ++i) x(i) = dist(rng);
        const Mat5 J = sb_jacobian(s, x);
        CHECK((J - fd_jacobian(s, x)).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("characteristic polynomial at the forced Z = 0 point") {
    const SpinBosonSpec s = make(1.0, 1.0, 1.0, 2.0);
    SpinBosonFixedPoint fp = sb_fixed_point(s, -1);
    fp.Z = 0.0;
    Vec5 x = fp.vec();
    const Eigen::VectorXd c = characteristic_polynomial(sb_jacobian(s, x));
    // s^3 (s + kappa/2)^2 = s^5 + kappa s^4 + (kappa^2/4) s^3
    Eigen::VectorXd expected(6);
    expected << 1.0, s.kappa, s.kappa * s.kappa / 4.0, 0.0, 0.0, 0.0;
    CHECK((c - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("stable branch: all modes damped except the removed radial one") {
    const SpinBosonSpec s = make(1.0, 1.0, 1.0, 2.0);
    const SpinBosonFixedPoint fp = sb_fixed_point(s, -1);
    const Mat5 J5 = sb_jacobian(s, fp.vec());
    Eigen::EigenSolver<Mat5> es5(J5);
    int near_zero = 0;
    for (int i = 0; i < 5; ++i) {
        if (std::abs(es5.eigenvalues()(i)) < 1e-10) {
            ++near_zero;
        } else {
            CHECK(es5.eigenvalues()(i).real() < 0.0);
        }
    }
    CHECK(near_zero == 1);  // the radial zero mode

    const SpinBosonTangent t = sb_tangent_system(s, fp);
    Eigen::EigenSolver<Mat4> es4(t.J);
    for (int i = 0; i < 4; ++i) {
        CHECK(es4.eigenvalues()(i).real() < -1e-6);
    }
}

TEST_CASE("lambda = 0 decouples spin and cavity blocks") {
    const SpinBosonSpec s = make(0.4, 0.0, 1.0, 2.0);
    Vec5 x;
    x << 0.3, 0.2, -0.5, 0.1, -0.2;
    const Mat5 J = sb_jacobian(s, x);
    CHECK(J.topRightCorner<3, 2>().cwiseAbs().maxCoeff() == 0.0);
    CHECK(J.bottomLeftCorner<2, 3>().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tangent system covariance: spin diag(-1/Z, -Z), cavity vacuum") {
    const SpinBosonSpec s = make(1.0, 1.0, 1.0, 2.0);
    const SpinBosonFixedPoint fp = sb_fixed_point(s, -1);
    const SpinBosonTangent t = sb_tangent_system(s, fp);
    CHECK(t.D(2, 2) == doctest::Approx(s.kappa / 2.0));
    CHECK(t.D(3, 3) == doctest::Approx(s.kappa / 2.0));
    CHECK(t.D.topLeftCorner<2, 2>().cwiseAbs().maxCoeff() == 0.0);

    const Eigen::MatrixXd Sigma = solve_lyapunov(t.J, t.D);
    CHECK(Sigma(0, 0) == doctest::Approx(-1.0 / fp.Z).epsilon(1e-12));
    CHECK(Sigma(1, 1) == doctest::Approx(-fp.Z).epsilon(1e-12));
    CHECK(Sigma(2, 2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(Sigma(3, 3) == doctest::Approx(0.5).epsilon(1e-12));
    const Eigen::MatrixXd res = t.J * Sigma + Sigma * t.J.transpose() + t.D;
    CHECK(res.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("squeezing closed form matches the numeric Lyapunov route") {
    const SpinBosonSpec ref = make(1.0, 1.0, 1.0, 2.0);
    const SpinBosonSqueezing sq = sb_squeezing(ref);
    CHECK(sq.xi_s_sq_closed == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(std::abs(sq.xi_s_sq_numeric - sq.xi_s_sq_closed) < 1e-10);

    std::mt19937 rng(83);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        SpinBosonSpec s = make(0.0, 0.3 + 1.2 * uni(rng), 0.2 + 1.3 * uni(rng),
                               0.5 + 2.5 * uni(rng));
        s.g = (0.2 + 0.75 * uni(rng)) * s.g_c();
        const SpinBosonSqueezing r = sb_squeezing(s);
        CHECK(std::abs(r.xi_s_sq_numeric - r.xi_s_sq_closed) < 1e-10);
    }
}

TEST_CASE("squeezing vanishes toward the transition and ignores the sign of lambda") {
    SpinBosonSpec s = make(0.0, 1.0, 1.0, 2.0);
    s.g = 0.999 * s.g_c();
    CHECK(sb_squeezing(s).xi_s_sq_closed < 0.05);

    SpinBosonSpec neg = s;
    neg.lambda = -s.lambda;
    CHECK(sb_squeezing(neg).xi_s_sq_closed ==
          doctest::Approx(sb_squeezing(s).xi_s_sq_closed).epsilon(1e-14));
}

TEST_CASE("small lambda reduces to the collective-model spin block") {
    SpinBosonSpec s = make(0.0, 0.1, 1.0, 2.0);
    s.g = 0.7 * s.g_c();
    const SpinBosonFixedPoint fp = sb_fixed_point(s, -1);
    const SpinBosonSqueezing r = sb_squeezing(s);
    CHECK(r.Sigma(0, 0) == doctest::Approx(-1.0 / fp.Z).epsilon(1e-9));
    CHECK(r.Sigma(1, 1) == doctest::Approx(-fp.Z).epsilon(1e-9));
}
