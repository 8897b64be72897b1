// scaling.hpp — Parameter sweeps over (S, delta) and finite-size-scaling collapses.

#pragma once

#include <string>
#include <vector>

#include "cep/dicke.hpp"
#include "cep/model.hpp"

namespace cep {

struct SweepRow {
    double S = 0.0;
    double delta = 0.0;
    double gamma_x = 0.0, gamma_y = 0.0, gamma_z = 0.0;
    double xi_s_sq = 0.0;
    double xi_r_sq = 0.0;
    double mean_z = 0.0;
    double sqrt_mean_z_sq = 0.0;
    double polarization = 0.0;
    double residual = 0.0;
    double runtime_s = 0.0;          // diagnostic only; never serialized
    double xi_s_sq_gaussian = 0.0;   // NaN when delta <= 0
    double z_star_gaussian = 0.0;    // NaN when delta <= 0
    std::string error;               // empty on success
};

struct SweepResult {
    std::vector<SweepRow> rows;      // sorted by (S, delta), no duplicate keys
    std::string provenance;          // config hash + code version
};

struct SweepConfig {
    double g = 2.0;
    double omega = 1.0;
    double gamma_x = 0.0, gamma_y = 0.0, gamma_z = 0.0;
    std::vector<double> S_list;
    std::vector<double> delta_grid;
    int threads = 0;                 // 0 = hardware concurrency
    SolvePolicy policy = SolvePolicy::sparse;
    double vec_dim_cap = 4e6;
    std::string provenance;
};

// One row per (S, delta): exact steady state, squeezing, order-parameter columns,
// Gaussian-theory columns attached for comparison.  Per-row failures are recorded
// in the error field, never aborting the sweep.
SweepResult sweep(const SweepConfig& cfg);

enum class Observable { order_parameter, inverse_squeezing };

struct CollapseCurve {
    double S = 0.0;
    std::vector<double> x;  // scaled abscissa
    std::vector<double> y;  // scaled observable
};

struct CollapseReport {
    double exponent_a = 1.0 / 3.0;
    double exponent_b = 2.0 / 3.0;
    bool log_correction = false;
    Observable observable = Observable::order_parameter;
    std::vector<CollapseCurve> curves;
    std::vector<double> grid;        // common interpolation grid, strictly inside range
    double quality = 0.0;            // mean squared residual to the pointwise median
    double quality_unscaled = 0.0;   // same metric on the raw (delta, observable) curves
};

// Order parameter: sqrt(<m_z^2>)·S^a vs delta·S^b with (a,b) = (1/3, 2/3).
// Inverse squeezing: G·S_eff^{-a} vs delta·S_eff^{b}, S_eff = S/log S when corrected.
// Requires >= 3 distinct S values and overlapping scaled ranges.
CollapseReport fss_collapse(const SweepResult& data, Observable obs, bool log_correction,
                            double exponent_a = 1.0 / 3.0, double exponent_b = 2.0 / 3.0);

struct GinzburgReport {
    std::vector<std::pair<double, double>> plateau;  // (S, plateau value)
    double exponent = 0.0;
    double r_squared = 0.0;
};

// Plateau value of the chosen column at the delta -> 0+ end per S, and the
// log-log fit of plateau versus S (contract: exponent near -1/3).
GinzburgReport ginzburg_crossover(const SweepResult& data,
                                  Observable column = Observable::order_parameter);

// Monotone cubic (Fritsch–Carlson) interpolation; xs strictly increasing,
// extrapolation forbidden.
double pchip_eval(const std::vector<double>& xs, const std::vector<double>& ys, double x);

} // namespace cep
