#include "cep/model.hpp"

#include <cmath>

namespace cep {

namespace {

bool all_finite(const Vec3& v) { return v.allFinite(); }
bool all_finite(const Mat3& m) { return m.allFinite(); }

} // namespace

SpinModelSpec::SpinModelSpec(const Vec3& field, const Mat3& coupling,
                             std::vector<Channel> channels)
    : field_(field), coupling_(coupling), channels_(std::move(channels)) {
    if (!all_finite(field_) || !all_finite(coupling_)) {
        throw ConfigError("SpinModelSpec: non-finite field or coupling entries");
    }
    if ((coupling_ - coupling_.transpose()).cwiseAbs().maxCoeff() > 0.0) {
        throw ConfigError("SpinModelSpec: coupling matrix must be exactly symmetric");
    }
    double magnitude = field_.norm() + coupling_.norm();
    for (const auto& ch : channels_) {
        if (!ch.vec.allFinite()) {
            throw ConfigError("SpinModelSpec: non-finite channel vector");
        }
        magnitude += ch.vec.norm();
    }
    if (magnitude == 0.0) {
        throw ConfigError("SpinModelSpec: model is identically zero");
    }
}

double PresetParams::kappa_c() const {
    const double disc = g * g - omega * omega;
    if (disc <= 0.0) {
        throw NoBrokenBranch("kappa_c: requires g^2 > omega^2");
    }
    return std::sqrt(disc);
}

double PresetParams::delta() const { return (kappa - kappa_c()) / omega; }

double PresetParams::r() const { return kappa_c() / omega; }

PresetParams PresetParams::from_delta(double g, double omega, double delta,
                                      double gamma_x, double gamma_y, double gamma_z) {
    PresetParams p;
    p.g = g;
    p.omega = omega;
    p.gamma_x = gamma_x;
    p.gamma_y = gamma_y;
    p.gamma_z = gamma_z;
    p.kappa = p.kappa_c() + omega * delta;
    p.validate();
    return p;
}

void PresetParams::validate() const {
    if (!(kappa >= 0.0)) throw ConfigError("PresetParams: kappa must be >= 0");
    if (!(gamma_x >= 0.0 && gamma_y >= 0.0 && gamma_z >= 0.0)) {
        throw ConfigError("PresetParams: dephasing rates must be >= 0");
    }
    if (!std::isfinite(g) || !std::isfinite(omega) || !std::isfinite(kappa)) {
        throw ConfigError("PresetParams: non-finite parameter");
    }
}

SpinModelSpec build_example_model(const PresetParams& p) {
    p.validate();
    Vec3 B(p.g, 0.0, 0.0);
    Mat3 K = Mat3::Zero();
    K(2, 2) = p.omega / 4.0;   // S * K_zz * {m_z,m_z} = S * omega * m_z^2 / 2

    std::vector<Channel> channels;
    if (p.kappa > 0.0) {
        Vec3c minus;
        minus << 1.0, std::complex<double>(0.0, -1.0), 0.0;
        channels.push_back({std::sqrt(p.kappa) * minus, "collective_decay"});
    }
    const double gammas[3] = {p.gamma_x, p.gamma_y, p.gamma_z};
    const char* labels[3] = {"dephasing_x", "dephasing_y", "dephasing_z"};
    for (int a = 0; a < 3; ++a) {
        if (gammas[a] > 0.0) {
            Vec3c e = Vec3c::Zero();
            e(a) = 1.0;
            channels.push_back({std::sqrt(gammas[a] / 2.0) * e, labels[a]});
        }
    }
    if (channels.empty() && p.g == 0.0 && p.omega == 0.0) {
        throw ConfigError("build_example_model: all parameters zero");
    }
    return SpinModelSpec(B, K, std::move(channels));
}

Vec3c pt_transform_channel(const Vec3c& ell) {
    Vec3c out;
    out << ell(0), ell(1), -ell(2);
    return out;
}

SpinModelSpec pt_transform_spec(const SpinModelSpec& spec) {
    Vec3 B = spec.field();
    B(2) = -B(2);
    Mat3 sigma = Mat3::Identity();
    sigma(2, 2) = -1.0;
    Mat3 K = sigma * spec.coupling() * sigma;
    std::vector<Channel> channels;
    channels.reserve(spec.channels().size());
    for (const auto& ch : spec.channels()) {
        channels.push_back({pt_transform_channel(ch.vec), ch.label});
    }
    return SpinModelSpec(B, K, std::move(channels));
}

const char* to_string(SymmetryVerdict v) {
    switch (v) {
        case SymmetryVerdict::symmetric_direct: return "symmetric_direct";
        case SymmetryVerdict::symmetric_antilinear: return "symmetric_antilinear";
        case SymmetryVerdict::broken: return "broken";
    }
    return "broken";
}

} // namespace cep
