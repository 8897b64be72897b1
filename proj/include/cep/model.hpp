// model.hpp — Collective-spin models with quadratic Hamiltonian and linear jump operators.
//
// A model is H = S (B·m + Σ_ij K_ij {m_i, m_j}),  L_μ = √S ℓ_μ·m,  with m_α = S_α/S.
// B is a real field vector (rate), K a real symmetric coupling matrix (rate), and each
// channel ℓ_μ a complex 3-vector (rate^{1/2}).

#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "cep/errors.hpp"

namespace cep {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec3c = Eigen::Vector3cd;

struct Channel {
    Vec3c vec;
    std::string label;
};

// Plain algebraic cross product.  Eigen's Vector3cd::cross conjugates its result
// for complex scalars, which is not the convention used here.
inline Vec3c complex_cross(const Vec3c& a, const Vec3c& b) {
    Vec3c c;
    c << a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0);
    return c;
}

class SpinModelSpec {
public:
    SpinModelSpec(const Vec3& field, const Mat3& coupling, std::vector<Channel> channels);

    const Vec3& field() const { return field_; }
    const Mat3& coupling() const { return coupling_; }
    const std::vector<Channel>& channels() const { return channels_; }

private:
    Vec3 field_;
    Mat3 coupling_;
    std::vector<Channel> channels_;
};

// One-axis-twisting model with transverse field, collective decay, and optional
// collective dephasing along each axis. Rates must be non-negative where required.
struct PresetParams {
    double g = 0.0;
    double omega = 0.0;
    double kappa = 0.0;
    double gamma_x = 0.0;
    double gamma_y = 0.0;
    double gamma_z = 0.0;

    // kappa_c = sqrt(g^2 - omega^2); requires g^2 > omega^2.
    double kappa_c() const;
    // delta = (kappa - kappa_c)/omega, r = kappa_c/omega.
    double delta() const;
    double r() const;

    static PresetParams from_delta(double g, double omega, double delta,
                                   double gamma_x = 0.0, double gamma_y = 0.0,
                                   double gamma_z = 0.0);
    void validate() const;
};

// B = (g,0,0), K_zz = omega/4, channels { √κ (1,−i,0) } ∪ { √(γ_α/2) ê_α }.
// The dephasing vector normalization is fixed so that the rotated diffusion on the
// broken branch reproduces the closed-form d-coefficients and D_z = γ_z exactly.
SpinModelSpec build_example_model(const PresetParams& p);

// Coefficient-vector image of ℓ·m under O ↦ (PT) O† (PT)^{-1} with P = Πσ_x:
// (ℓx, ℓy, ℓz) ↦ (ℓx, ℓy, −ℓz).  Involution; m_− and m_+ are each invariant.
Vec3c pt_transform_channel(const Vec3c& ell);

// PT image of a whole model: B_z flips sign, K_xz/K_yz flip sign, channels mapped
// by pt_transform_channel.
SpinModelSpec pt_transform_spec(const SpinModelSpec& spec);

enum class SymmetryVerdict { symmetric_direct, symmetric_antilinear, broken };

struct SymmetryReport {
    double matrix_distance_direct = 0.0;
    double matrix_distance_antilinear = 0.0;
    SymmetryVerdict verdict = SymmetryVerdict::broken;
    double test_spin = 0.0;
};

const char* to_string(SymmetryVerdict v);

// Dense superoperator comparison of the generator built from (H, {L_μ}) against the
// one built from (PT(H), {PT(L_μ)}): direct max-abs distance, and the distance after
// conjugating the transformed generator by ρ ↦ P ρ P combined with elementwise complex
// conjugation.  Verdict decided at tolerance 1e-10, direct checked first.
SymmetryReport check_lpt_symmetry(const SpinModelSpec& spec, double S);

} // namespace cep
