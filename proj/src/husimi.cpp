#include "cep/husimi.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace cep {

namespace {

using Cx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// log binom(2S, S+m) via lgamma, stable up to S ~ 500 and beyond.
double log_binom(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Coherent-state column |θ,φ> in the |S,m> basis, m = -S..S ascending; the state
// points along (sinθ cosφ, sinθ sinφ, cosθ), i.e. the product of single-spin states
// cos(θ/2)|up> + e^{iφ} sin(θ/2)|down>.
Eigen::VectorXcd coherent_state(double S, int dim, double theta, double phi) {
    Eigen::VectorXcd v(dim);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const double logc = c > 0.0 ? std::log(c) : -std::numeric_limits<double>::infinity();
    const double logs = s > 0.0 ? std::log(s) : -std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i) {
        const double m = -S + i;
        const double a = S + m, b = S - m;
        double logmag = 0.5 * log_binom(2.0 * S, a);
        logmag += a > 0.0 ? a * logc : 0.0;
        logmag += b > 0.0 ? b * logs : 0.0;
        if ((a > 0.0 && c == 0.0) || (b > 0.0 && s == 0.0)) {
            v(i) = 0.0;
        } else {
            v(i) = std::exp(logmag) * std::exp(Cx(0.0, (S - m) * phi));
        }
    }
    return v;
}

} // namespace

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Recurrence for P_n(x) and P'_n(x).
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes(i) = -x;
        nodes(n - 1 - i) = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights(i) = w;
        weights(n - 1 - i) = w;
    }
}

double HusimiField::integral() const {
    const double dphi = 2.0 * kPi / static_cast<double>(phi_nodes.size());
    double total = 0.0;
    for (int i = 0; i < theta_nodes.size(); ++i) {
        total += theta_weights(i) * values.row(i).sum() * dphi;
    }
    return total;
}

HusimiField husimi_q(const DickeState& state, int n_theta, int n_phi) {
    if (n_theta < 16 || n_phi < 16) {
        throw ConfigError("husimi_q: grids must have at least 16 nodes");
    }
    const double S = state.S;
    const int dim = dicke_dimension(S);
    const double N = 2.0 * S;
    const double C = 4.0 * kPi / (N + 1.0);

    HusimiField field;
    Eigen::VectorXd u;  // cos(theta) nodes
    gauss_legendre(n_theta, u, field.theta_weights);
    field.theta_nodes.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) field.theta_nodes(i) = std::acos(u(i));
    field.phi_nodes.resize(n_phi);
    for (int j = 0; j < n_phi; ++j) field.phi_nodes(j) = 2.0 * kPi * j / n_phi;

    // Frame of the mean spin; fall back to identity for an unpolarized state.
    const SpinMoments mom = spin_moments(state);
    field.rotation = mom.mean.norm() > 1e-9 ? aligned_rotation(mom.mean).rotation
                                            : Mat3::Identity();

    field.values.resize(n_theta, n_phi);
    field.tangent_u.resize(n_theta, n_phi);
    field.tangent_v.resize(n_theta, n_phi);
    field.front.resize(n_theta, n_phi);

    for (int i = 0; i < n_theta; ++i) {
        const double theta = field.theta_nodes(i);
        const double st = std::sin(theta), ct = std::cos(theta);
        for (int j = 0; j < n_phi; ++j) {
            const double phi = field.phi_nodes(j);
            const Eigen::VectorXcd v = coherent_state(S, dim, theta, phi);
            const double q = std::real(v.dot(state.rho * v)) / C;
            field.values(i, j) = q;
            const Vec3 dir(st * std::cos(phi), st * std::sin(phi), ct);
            const Vec3 rot = field.rotation * dir;
            field.tangent_u(i, j) = rot.x();
            field.tangent_v(i, j) = rot.y();
            field.front(i, j) = rot.z() > 0.0;
        }
    }
    return field;
}

Mat2 tangent_covariance(const HusimiField& field) {
    const double dphi = 2.0 * kPi / static_cast<double>(field.phi_nodes.size());
    double wsum = 0.0;
    Vec2 mean = Vec2::Zero();
    Mat2 raw = Mat2::Zero();
    for (int i = 0; i < field.theta_nodes.size(); ++i) {
        for (int j = 0; j < field.phi_nodes.size(); ++j) {
            if (!field.front(i, j)) continue;
            const double w = field.theta_weights(i) * dphi * field.values(i, j);
            const Vec2 x(field.tangent_u(i, j), field.tangent_v(i, j));
            wsum += w;
            mean += w * x;
            raw += w * x * x.transpose();
        }
    }
    if (wsum <= 0.0) {
        throw Error("tangent_covariance: no Q weight on the front hemisphere");
    }
    mean /= wsum;
    return raw / wsum - mean * mean.transpose();
}

} // namespace cep
