#include "cep/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "cep/fluctuations.hpp"

namespace cep {

namespace {

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

SweepRow run_point(const SweepConfig& cfg, double S, double delta) {
    SweepRow row;
    row.S = S;
    row.delta = delta;
    row.gamma_x = cfg.gamma_x;
    row.gamma_y = cfg.gamma_y;
    row.gamma_z = cfg.gamma_z;
    row.xi_s_sq_gaussian = nan_value();
    row.z_star_gaussian = nan_value();
    const auto t0 = std::chrono::steady_clock::now();
    try {
        PresetParams p = PresetParams::from_delta(cfg.g, cfg.omega, delta, cfg.gamma_x,
                                                  cfg.gamma_y, cfg.gamma_z);
        const SpinModelSpec spec = build_example_model(p);
        const SparseXcd L = build_liouvillian(spec, S, cfg.vec_dim_cap);
        const DickeState state = steady_state(L, S, cfg.policy);
        const SpinMoments mom = spin_moments(state);
        const SqueezingReport rep = exact_squeezing(state);
        row.xi_s_sq = rep.xi_s_sq;
        row.xi_r_sq = rep.xi_r_sq;
        row.polarization = rep.polarization;
        row.mean_z = mom.mean.z();
        row.sqrt_mean_z_sq = std::sqrt(std::max(0.0, mom.second_moments(2, 2)));
        row.residual = state.residual;
        if (delta > 0.0) {
            const FixedPointBranch branch = example_branch(p);
            const CovariancePack pack = covariance_pack(spec, branch.point);
            row.xi_s_sq_gaussian = gaussian_squeezing(pack).xi_s_sq;
            row.z_star_gaussian = branch.point.z();
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    row.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        const double dy = std::log(y[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LogLogFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return f;
}

} // namespace

SweepResult sweep(const SweepConfig& cfg) {
    if (cfg.S_list.empty() || cfg.delta_grid.empty()) {
        throw ConfigError("sweep: S_list and delta_grid must be nonempty");
    }
    std::vector<std::pair<double, double>> keys;
    for (double S : cfg.S_list) {
        for (double d : cfg.delta_grid) keys.emplace_back(S, d);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    SweepResult result;
    result.provenance = cfg.provenance;
    result.rows.resize(keys.size());

    int workers = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(keys.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= keys.size()) return;
            result.rows[i] = run_point(cfg, keys[i].first, keys[i].second);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return result;
}

double pchip_eval(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    const int n = static_cast<int>(xs.size());
    if (n < 2) throw ConfigError("pchip_eval: need at least two nodes");
    if (x < xs.front() || x > xs.back()) {
        throw ConfigError("pchip_eval: extrapolation forbidden");
    }
    // Fritsch–Carlson slopes.
    std::vector<double> h(n - 1), del(n - 1), m(n);
    for (int i = 0; i + 1 < n; ++i) {
        h[i] = xs[i + 1] - xs[i];
        del[i] = (ys[i + 1] - ys[i]) / h[i];
    }
    m[0] = del[0];
    m[n - 1] = del[n - 2];
    for (int i = 1; i + 1 < n; ++i) {
        if (del[i - 1] * del[i] <= 0.0) {
            m[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
        }
    }
    const int k = static_cast<int>(
        std::upper_bound(xs.begin(), xs.end() - 1, x) - xs.begin() - 1);
    const int i = std::max(0, k);
    const double t = (x - xs[i]) / h[i];
    const double t2 = t * t, t3 = t2 * t;
    return ys[i] * (2 * t3 - 3 * t2 + 1) + h[i] * m[i] * (t3 - 2 * t2 + t) +
           ys[i + 1] * (-2 * t3 + 3 * t2) + h[i] * m[i + 1] * (t3 - t2);
}

namespace {

struct RawCurve {
    double S = 0.0;
    std::vector<double> x, y;
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Mean squared residual of each curve against the pointwise median on a grid
// strictly inside the common abscissa range.
double collapse_quality(const std::vector<RawCurve>& curves, std::vector<double>* grid_out) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& c : curves) {
        lo = std::max(lo, c.x.front());
        hi = std::min(hi, c.x.back());
    }
    if (!(hi > lo)) {
        throw InsufficientOverlap("fss_collapse: scaled abscissa ranges do not overlap");
    }
    const double inset = 1e-9 * (hi - lo);
    lo += inset;
    hi -= inset;
    const int npts = 50;
    std::vector<double> grid(npts);
    if (lo > 0.0) {
        // Sweep grids are log-spaced in delta; match that density.
        for (int i = 0; i < npts; ++i) grid[i] = lo * std::pow(hi / lo, double(i) / (npts - 1));
    } else {
        for (int i = 0; i < npts; ++i) grid[i] = lo + (hi - lo) * i / (npts - 1);
    }

    std::vector<std::vector<double>> vals(curves.size(), std::vector<double>(npts));
    for (std::size_t c = 0; c < curves.size(); ++c) {
        for (int i = 0; i < npts; ++i) vals[c][i] = pchip_eval(curves[c].x, curves[c].y, grid[i]);
    }
    double quality = 0.0;
    for (int i = 0; i < npts; ++i) {
        std::vector<double> column(curves.size());
        for (std::size_t c = 0; c < curves.size(); ++c) column[c] = vals[c][i];
        const double med = median(column);
        for (std::size_t c = 0; c < curves.size(); ++c) {
            quality += (vals[c][i] - med) * (vals[c][i] - med);
        }
    }
    if (grid_out) *grid_out = grid;
    return quality / (npts * static_cast<double>(curves.size()));
}

} // namespace

CollapseReport fss_collapse(const SweepResult& data, Observable obs, bool log_correction,
                            double exponent_a, double exponent_b) {
    std::vector<double> sizes;
    for (const auto& row : data.rows) {
        if (!row.error.empty()) continue;
        if (std::find(sizes.begin(), sizes.end(), row.S) == sizes.end()) sizes.push_back(row.S);
    }
    std::sort(sizes.begin(), sizes.end());
    if (sizes.size() < 3) {
        throw InsufficientOverlap("fss_collapse: need at least 3 distinct S values");
    }

    CollapseReport rep;
    rep.exponent_a = exponent_a;
    rep.exponent_b = exponent_b;
    rep.log_correction = log_correction;
    rep.observable = obs;

    std::vector<RawCurve> scaled, raw;
    for (double S : sizes) {
        const double s_eff =
            obs == Observable::inverse_squeezing && log_correction ? S / std::log(S) : S;
        RawCurve sc, rw;
        sc.S = rw.S = S;
        for (const auto& row : data.rows) {
            if (row.S != S || !row.error.empty() || row.delta < 0.0) continue;
            double value;
            if (obs == Observable::order_parameter) {
                value = row.sqrt_mean_z_sq;
            } else {
                if (!(row.xi_s_sq > 0.0)) continue;
                value = 1.0 / row.xi_s_sq;
            }
            rw.x.push_back(row.delta);
            rw.y.push_back(value);
            sc.x.push_back(row.delta * std::pow(s_eff, exponent_b));
            sc.y.push_back(obs == Observable::order_parameter
                               ? value * std::pow(s_eff, exponent_a)
                               : value * std::pow(s_eff, -exponent_a));
        }
        if (sc.x.size() < 4) {
            throw InsufficientOverlap("fss_collapse: too few valid rows for some S");
        }
        scaled.push_back(std::move(sc));
        raw.push_back(std::move(rw));
    }

    rep.quality = collapse_quality(scaled, &rep.grid);
    rep.quality_unscaled = collapse_quality(raw, nullptr);
    for (auto& c : scaled) {
        rep.curves.push_back({c.S, std::move(c.x), std::move(c.y)});
    }
    return rep;
}

GinzburgReport ginzburg_crossover(const SweepResult& data, Observable column) {
    std::vector<double> sizes;
    for (const auto& row : data.rows) {
        if (!row.error.empty()) continue;
        if (std::find(sizes.begin(), sizes.end(), row.S) == sizes.end()) sizes.push_back(row.S);
    }
    std::sort(sizes.begin(), sizes.end());
    if (sizes.size() < 3) {
        throw PlateauNotResolved("ginzburg_crossover: need at least 3 distinct S values");
    }

    GinzburgReport rep;
    std::vector<double> xs, ys;
    for (double S : sizes) {
        double best_delta = std::numeric_limits<double>::infinity();
        double value = nan_value();
        for (const auto& row : data.rows) {
            if (row.S != S || !row.error.empty()) continue;
            if (row.delta < best_delta) {
                best_delta = row.delta;
                value = column == Observable::order_parameter ? row.sqrt_mean_z_sq : row.xi_s_sq;
            }
        }
        // The smallest delta must sit inside the finite-size rounded region.
        if (!(best_delta <= 0.3 * std::pow(S, -2.0 / 3.0))) {
            throw PlateauNotResolved("ginzburg_crossover: delta grid does not reach the plateau");
        }
        rep.plateau.emplace_back(S, value);
        xs.push_back(S);
        ys.push_back(value);
    }
    const LogLogFit fit = fit_loglog(xs, ys);
    rep.exponent = fit.slope;
    rep.r_squared = fit.r_squared;
    return rep;
}

} // namespace cep
