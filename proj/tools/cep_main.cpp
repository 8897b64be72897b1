// cep — command-line front end: configure models, run Gaussian-theory scans,
// exact steady states, Husimi exports, finite-size-scaling sweeps, symmetry
// checks, and the spin-boson layer.  Outputs are deterministic, plot-ready
// CSV/JSON tables with a provenance header.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cep/fluctuations.hpp"
#include "cep/husimi.hpp"
#include "cep/io.hpp"
#include "cep/scaling.hpp"
#include "cep/spin_boson.hpp"
#include "cep/toml.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kSchema = "cep.report.v1";

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 0;
    json config = json::object();
};

struct ModelOptions {
    cep::PresetParams preset{.g = 2.0, .omega = 1.0};  // CLI defaults, config overrides
    bool has_delta = false;
    double delta = 0.0;
    std::optional<cep::SpinModelSpec> custom;
};

void check_keys(const json& section, const std::vector<std::string>& allowed,
                const std::string& name) {
    for (auto it = section.begin(); it != section.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
            throw cep::ConfigError("unknown key '" + it.key() + "' in [" + name + "]");
        }
    }
}

cep::SpinModelSpec custom_spec_from_json(const json& sec) {
    check_keys(sec, {"B", "K", "channels"}, "model.custom");
    cep::Vec3 B = cep::Vec3::Zero();
    cep::Mat3 K = cep::Mat3::Zero();
    if (sec.contains("B")) {
        for (int i = 0; i < 3; ++i) B(i) = sec["B"].at(i).get<double>();
    }
    if (sec.contains("K")) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) K(i, j) = sec["K"].at(i).at(j).get<double>();
    }
    std::vector<cep::Channel> channels;
    if (sec.contains("channels")) {
        int index = 0;
        for (const auto& ch : sec["channels"]) {
            cep::Vec3c v = cep::Vec3c::Zero();
            for (int i = 0; i < 3; ++i) {
                double re = ch.contains("re") ? ch["re"].at(i).get<double>() : 0.0;
                double im = ch.contains("im") ? ch["im"].at(i).get<double>() : 0.0;
                v(i) = std::complex<double>(re, im);
            }
            channels.push_back({v, "channel_" + std::to_string(index++)});
        }
    }
    return cep::SpinModelSpec(B, K, channels);
}

ModelOptions model_from_config(const json& cfg) {
    ModelOptions m;
    if (!cfg.contains("model")) return m;
    const json& sec = cfg["model"];
    check_keys(sec, {"g", "omega", "kappa", "delta", "gamma_x", "gamma_y", "gamma_z", "custom"},
               "model");
    if (sec.contains("custom")) {
        m.custom = custom_spec_from_json(sec["custom"]);
    }
    auto get = [&](const char* key, double fallback) {
        return sec.contains(key) ? sec[key].get<double>() : fallback;
    };
    m.preset.g = get("g", 2.0);
    m.preset.omega = get("omega", 1.0);
    m.preset.gamma_x = get("gamma_x", 0.0);
    m.preset.gamma_y = get("gamma_y", 0.0);
    m.preset.gamma_z = get("gamma_z", 0.0);
    if (sec.contains("kappa") && sec.contains("delta")) {
        throw cep::ConfigError("[model] must set kappa or delta, not both");
    }
    if (sec.contains("kappa")) m.preset.kappa = sec["kappa"].get<double>();
    if (sec.contains("delta")) {
        m.has_delta = true;
        m.delta = sec["delta"].get<double>();
        m.preset.kappa = m.preset.kappa_c() + m.preset.omega * m.delta;
    }
    return m;
}

// "min:max:count" log-spaced grid specification.
std::vector<double> parse_log_grid(const std::string& text) {
    const auto a = text.find(':');
    const auto b = text.rfind(':');
    if (a == std::string::npos || b == a) {
        throw cep::ConfigError("grid spec must be min:max:count, got '" + text + "'");
    }
    const double lo = std::stod(text.substr(0, a));
    const double hi = std::stod(text.substr(a + 1, b - a - 1));
    const int n = std::stoi(text.substr(b + 1));
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        throw cep::ConfigError("log grid needs 0 < min < max and count >= 2");
    }
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return grid;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string tok = text.substr(start, comma - start);
        if (!tok.empty()) out.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw cep::ConfigError("empty list: '" + text + "'");
    return out;
}

std::uint64_t hash_invocation(const json& resolved) { return cep::fnv1a_hash(resolved.dump()); }

void write_json_report(const fs::path& path, json body, std::uint64_t config_hash) {
    body["schema"] = kSchema;
    body["version"] = CEPSPIN_VERSION;
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(config_hash));
    body["config_hash"] = buf;
    std::ofstream out(path);
    if (!out) throw cep::ConfigError("cannot open output file: " + path.string());
    out << body.dump(2) << "\n";
}

json squeezing_to_json(const cep::SqueezingReport& rep) {
    json j;
    j["xi_s_sq"] = rep.xi_s_sq;
    j["xi_r_sq"] = rep.xi_r_sq;
    j["lambda_min"] = rep.lambda_min;
    j["lambda_max"] = rep.lambda_max;
    j["axis_min"] = {rep.axis_min.x(), rep.axis_min.y()};
    j["axis_max"] = {rep.axis_max.x(), rep.axis_max.y()};
    j["alignment_angle"] = std::isnan(rep.alignment_angle) ? json() : json(rep.alignment_angle);
    j["polarization"] = rep.polarization;
    j["isotropic"] = rep.isotropic;
    return j;
}

// ----------------------------------------------------------------------------
// subcommands
// ----------------------------------------------------------------------------

int cmd_gaussian(const GlobalOptions& global, const ModelOptions& model,
                 const std::vector<double>& grid) {
    const cep::PresetParams& base = model.preset;
    json resolved = {{"command", "gaussian"},
                     {"g", base.g},
                     {"omega", base.omega},
                     {"gamma_x", base.gamma_x},
                     {"gamma_y", base.gamma_y},
                     {"gamma_z", base.gamma_z},
                     {"delta_grid", grid}};
    const std::uint64_t h = hash_invocation(resolved);

    cep::CsvTable table;
    table.comments = {cep::provenance_line(h), "command: gaussian"};
    table.columns = {"delta", "Z_star", "xi_s_sq", "lambda_max", "alignment_angle",
                     "d11",   "d12",    "d22",     "D_z",        "status"};

    int failures = 0;
    const double nan = std::nan("");
    for (double delta : grid) {
        std::vector<std::string> row{cep::format_double(delta)};
        try {
            const cep::PresetParams p = cep::PresetParams::from_delta(
                base.g, base.omega, delta, base.gamma_x, base.gamma_y, base.gamma_z);
            const cep::FixedPointBranch branch = cep::example_branch(p);
            const cep::CovariancePack pack =
                cep::covariance_pack(cep::build_example_model(p), branch.point);
            const cep::SqueezingReport rep = cep::gaussian_squeezing(pack);
            const cep::DephasingCoefficients d = cep::dephasing_coefficients(p);
            row.push_back(cep::format_double(branch.point.z()));
            row.push_back(cep::format_double(rep.xi_s_sq));
            row.push_back(cep::format_double(rep.lambda_max));
            row.push_back(cep::format_double(rep.alignment_angle));
            row.push_back(cep::format_double(d.d11));
            row.push_back(cep::format_double(d.d12));
            row.push_back(cep::format_double(d.d22));
            row.push_back(cep::format_double(cep::dz_component(p)));
            row.push_back("ok");
        } catch (const std::exception& e) {
            ++failures;
            std::cerr << "gaussian: delta=" << cep::format_double(delta) << ": " << e.what()
                      << "\n";
            for (int i = 0; i < 8; ++i) row.push_back(cep::format_double(nan));
            row.push_back("skipped");
        }
        table.rows.push_back(std::move(row));
    }
    cep::write_csv((fs::path(global.out_dir) / "gaussian.csv").string(), table);
    std::cout << "gaussian: " << table.rows.size() - failures << "/" << table.rows.size()
              << " rows -> " << (fs::path(global.out_dir) / "gaussian.csv").string() << "\n";
    return failures == static_cast<int>(table.rows.size()) ? 3 : 0;
}

int cmd_exact(const GlobalOptions& global, const ModelOptions& model, double S,
              const std::string& policy_name) {
    cep::SolvePolicy policy = cep::SolvePolicy::automatic;
    if (policy_name == "dense") policy = cep::SolvePolicy::dense;
    else if (policy_name == "sparse") policy = cep::SolvePolicy::sparse;
    else if (policy_name != "auto") throw cep::ConfigError("unknown policy " + policy_name);

    cep::SpinModelSpec spec = model.custom
                                  ? *model.custom
                                  : cep::build_example_model(model.preset);
    json resolved = {{"command", "exact"}, {"S", S}, {"policy", policy_name}};
    const std::uint64_t h = hash_invocation(resolved);

    const cep::SparseXcd L = cep::build_liouvillian(spec, S);
    const cep::DickeState state = cep::steady_state(L, S, policy);
    const cep::SpinMoments mom = cep::spin_moments(state);
    const cep::SqueezingReport rep = cep::exact_squeezing(state);

    json body;
    body["S"] = S;
    body["solver"] = state.solver == cep::SteadySolver::dense_null ? "dense_null" : "sparse_lu";
    body["residual"] = state.residual;
    body["min_eigenvalue"] = state.min_eigenvalue;
    body["mean"] = {mom.mean.x(), mom.mean.y(), mom.mean.z()};
    body["sqrt_mean_z_sq"] = std::sqrt(std::max(0.0, mom.second_moments(2, 2)));
    body["squeezing"] = squeezing_to_json(rep);
    write_json_report(fs::path(global.out_dir) / "exact.json", body, h);
    std::cout << "exact: S=" << S << " xi_s_sq=" << rep.xi_s_sq
              << " residual=" << state.residual << "\n";
    return 0;
}

int cmd_husimi(const GlobalOptions& global, const ModelOptions& model, double S, int n_theta,
               int n_phi) {
    cep::SpinModelSpec spec = model.custom
                                  ? *model.custom
                                  : cep::build_example_model(model.preset);
    json resolved = {{"command", "husimi"}, {"S", S}, {"n_theta", n_theta}, {"n_phi", n_phi}};
    const std::uint64_t h = hash_invocation(resolved);

    const cep::DickeState state = cep::steady_state(cep::build_liouvillian(spec, S), S);
    const cep::HusimiField field = cep::husimi_q(state, n_theta, n_phi);

    cep::CsvTable sphere;
    sphere.comments = {cep::provenance_line(h), "command: husimi (spherical grid)"};
    sphere.columns = {"theta", "phi", "Q"};
    cep::CsvTable tangent;
    tangent.comments = {cep::provenance_line(h),
                        "command: husimi (tangent plane, front hemisphere)"};
    tangent.columns = {"u", "v", "Q"};
    for (int i = 0; i < field.theta_nodes.size(); ++i) {
        for (int j = 0; j < field.phi_nodes.size(); ++j) {
            sphere.rows.push_back({cep::format_double(field.theta_nodes(i)),
                                   cep::format_double(field.phi_nodes(j)),
                                   cep::format_double(field.values(i, j))});
            if (field.front(i, j)) {
                tangent.rows.push_back({cep::format_double(field.tangent_u(i, j)),
                                        cep::format_double(field.tangent_v(i, j)),
                                        cep::format_double(field.values(i, j))});
            }
        }
    }
    cep::write_csv((fs::path(global.out_dir) / "husimi.csv").string(), sphere);
    cep::write_csv((fs::path(global.out_dir) / "husimi_tangent.csv").string(), tangent);

    json body;
    body["S"] = S;
    body["integral"] = field.integral();
    body["theta_nodes"] = std::vector<double>(field.theta_nodes.begin(), field.theta_nodes.end());
    body["phi_nodes"] = std::vector<double>(field.phi_nodes.begin(), field.phi_nodes.end());
    json values = json::array();
    for (int i = 0; i < field.values.rows(); ++i) {
        json rowj = json::array();
        for (int j = 0; j < field.values.cols(); ++j) rowj.push_back(field.values(i, j));
        values.push_back(rowj);
    }
    body["Q"] = values;
    const cep::Mat2 C = cep::tangent_covariance(field);
    body["tangent_covariance"] = {{C(0, 0), C(0, 1)}, {C(1, 0), C(1, 1)}};
    write_json_report(fs::path(global.out_dir) / "husimi.json", body, h);
    std::cout << "husimi: S=" << S << " integral=" << field.integral() << "\n";
    return 0;
}

int cmd_fss(const GlobalOptions& global, const ModelOptions& model,
            const std::vector<double>& S_list, std::vector<double> grid,
            const std::string& observable_name, bool log_correction) {
    cep::Observable obs = cep::Observable::inverse_squeezing;
    if (observable_name == "order_parameter") obs = cep::Observable::order_parameter;
    else if (observable_name != "inverse_squeezing")
        throw cep::ConfigError("unknown observable " + observable_name);

    json resolved = {{"command", "fss"},
                     {"S_list", S_list},
                     {"delta_grid", grid},
                     {"observable", observable_name},
                     {"log_correction", log_correction},
                     {"g", model.preset.g},
                     {"omega", model.preset.omega}};
    const std::uint64_t h = hash_invocation(resolved);

    cep::SweepConfig cfg;
    cfg.g = model.preset.g;
    cfg.omega = model.preset.omega;
    cfg.gamma_x = model.preset.gamma_x;
    cfg.gamma_y = model.preset.gamma_y;
    cfg.gamma_z = model.preset.gamma_z;
    cfg.S_list = S_list;
    cfg.delta_grid = std::move(grid);
    cfg.threads = global.threads;
    char hash_text[20];
    std::snprintf(hash_text, sizeof(hash_text), "%016llx", static_cast<unsigned long long>(h));
    cfg.provenance = hash_text;
    const cep::SweepResult data = cep::sweep(cfg);

    cep::CsvTable table;
    table.comments = {cep::provenance_line(h), "command: fss (sweep rows)"};
    table.columns = {"S", "delta", "gamma_x", "gamma_y", "gamma_z", "xi_s_sq", "xi_r_sq",
                     "mean_z", "sqrt_mean_z_sq", "polarization", "residual",
                     "xi_s_sq_gaussian", "z_star_gaussian", "status"};
    for (const auto& row : data.rows) {
        table.rows.push_back({cep::format_double(row.S), cep::format_double(row.delta),
                              cep::format_double(row.gamma_x), cep::format_double(row.gamma_y),
                              cep::format_double(row.gamma_z), cep::format_double(row.xi_s_sq),
                              cep::format_double(row.xi_r_sq), cep::format_double(row.mean_z),
                              cep::format_double(row.sqrt_mean_z_sq),
                              cep::format_double(row.polarization),
                              cep::format_double(row.residual),
                              cep::format_double(row.xi_s_sq_gaussian),
                              cep::format_double(row.z_star_gaussian),
                              row.error.empty() ? "ok" : "error"});
    }
    cep::write_csv((fs::path(global.out_dir) / "sweep.csv").string(), table);

    const cep::CollapseReport rep = cep::fss_collapse(data, obs, log_correction);
    json body;
    body["observable"] = observable_name;
    body["log_correction"] = rep.log_correction;
    body["exponent_a"] = rep.exponent_a;
    body["exponent_b"] = rep.exponent_b;
    body["quality"] = rep.quality;
    body["quality_unscaled"] = rep.quality_unscaled;
    body["grid"] = rep.grid;
    json curves = json::array();
    for (const auto& c : rep.curves) {
        curves.push_back({{"S", c.S}, {"x", c.x}, {"y", c.y}});
    }
    body["curves"] = curves;
    write_json_report(fs::path(global.out_dir) / "collapse.json", body, h);
    std::cout << "fss: quality=" << rep.quality << " quality_unscaled=" << rep.quality_unscaled
              << "\n";
    return 0;
}

int cmd_symmetry(const GlobalOptions& global, const ModelOptions& model, double S) {
    cep::SpinModelSpec spec = model.custom
                                  ? *model.custom
                                  : cep::build_example_model(model.preset);
    json resolved = {{"command", "symmetry"}, {"S", S}};
    const std::uint64_t h = hash_invocation(resolved);
    const cep::SymmetryReport rep = cep::check_lpt_symmetry(spec, S);
    json body;
    body["S"] = S;
    body["verdict"] = cep::to_string(rep.verdict);
    body["distance_direct"] = rep.matrix_distance_direct;
    body["distance_antilinear"] = rep.matrix_distance_antilinear;
    write_json_report(fs::path(global.out_dir) / "symmetry.json", body, h);
    std::cout << "symmetry: " << cep::to_string(rep.verdict)
              << " (direct=" << rep.matrix_distance_direct
              << ", antilinear=" << rep.matrix_distance_antilinear << ")\n";
    return 0;
}

int cmd_spinboson(const GlobalOptions& global, const cep::SpinBosonSpec& sb,
                  const std::string& scan_spec) {
    json resolved = {{"command", "spinboson"},
                     {"g", sb.g},
                     {"lambda", sb.lambda},
                     {"omega", sb.omega},
                     {"kappa", sb.kappa},
                     {"scan", scan_spec}};
    const std::uint64_t h = hash_invocation(resolved);

    const cep::SpinBosonFixedPoint fp = cep::sb_fixed_point(sb, -1);
    const cep::SpinBosonSqueezing sq = cep::sb_squeezing(sb);
    json body;
    body["g"] = sb.g;
    body["lambda"] = sb.lambda;
    body["omega"] = sb.omega;
    body["kappa"] = sb.kappa;
    body["g_c"] = sb.g_c();
    body["fixed_point"] = {{"X", fp.X}, {"Y", fp.Y}, {"Z", fp.Z}, {"Q", fp.Q}, {"P", fp.P}};
    body["xi_s_sq_closed"] = sq.xi_s_sq_closed;
    body["xi_s_sq_numeric"] = sq.xi_s_sq_numeric;
    json sigma = json::array();
    for (int i = 0; i < 4; ++i) {
        json rowj = json::array();
        for (int j = 0; j < 4; ++j) rowj.push_back(sq.Sigma(i, j));
        sigma.push_back(rowj);
    }
    body["sigma_tangent"] = sigma;
    write_json_report(fs::path(global.out_dir) / "spinboson.json", body, h);

    if (!scan_spec.empty()) {
        // g scan toward the transition: "min:max:count" fractions of g_c.
        const std::vector<double> fracs = parse_log_grid(scan_spec);
        cep::CsvTable table;
        table.comments = {cep::provenance_line(h), "command: spinboson (g scan)"};
        table.columns = {"g", "Z_star", "xi_s_sq_closed", "xi_s_sq_numeric"};
        for (double f : fracs) {
            cep::SpinBosonSpec s = sb;
            s.g = f * sb.g_c();
            const auto fpi = cep::sb_fixed_point(s, -1);
            const auto sqi = cep::sb_squeezing(s);
            table.rows.push_back({cep::format_double(s.g), cep::format_double(fpi.Z),
                                  cep::format_double(sqi.xi_s_sq_closed),
                                  cep::format_double(sqi.xi_s_sq_numeric)});
        }
        cep::write_csv((fs::path(global.out_dir) / "spinboson_scan.csv").string(), table);
    }
    std::cout << "spinboson: xi_s_sq=" << sq.xi_s_sq_closed << " (numeric "
              << sq.xi_s_sq_numeric << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dissipative collective-spin toolkit: Gaussian fluctuation theory, exact "
                 "Dicke-sector steady states, squeezing diagnostics, and scaling analysis"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--config", global.config_path, "TOML configuration file");
    app.add_option("--out", global.out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", global.threads, "worker threads (0 = hardware)");

    double g = 2.0, omega = 1.0, gx = 0.0, gy = 0.0, gz = 0.0;
    auto add_model_flags = [&](CLI::App* cmd) {
        cmd->fallthrough();  // global --out/--config/--threads may follow the subcommand
        cmd->add_option("--g", g, "transverse field");
        cmd->add_option("--omega", omega, "twisting strength");
        cmd->add_option("--gamma-x", gx, "x dephasing rate");
        cmd->add_option("--gamma-y", gy, "y dephasing rate");
        cmd->add_option("--gamma-z", gz, "z dephasing rate");
    };

    auto* gaussian = app.add_subcommand("gaussian", "Gaussian theory over a delta grid");
    std::string delta_log = "1e-4:1:61";
    std::string delta_list;
    add_model_flags(gaussian);
    gaussian->add_option("--delta-log", delta_log, "log grid min:max:count")
        ->capture_default_str();
    gaussian->add_option("--delta", delta_list, "explicit comma-separated delta list");

    auto* exact = app.add_subcommand("exact", "exact Dicke-sector steady state");
    double S = 10.0, delta = 0.5;
    std::string policy = "auto";
    add_model_flags(exact);
    exact->add_option("--S", S, "total spin (half-integer)");
    exact->add_option("--delta", delta, "distance from the critical point");
    exact->add_option("--policy", policy, "auto|dense|sparse")->capture_default_str();

    auto* husimi = app.add_subcommand("husimi", "Husimi-Q field of the steady state");
    int n_theta = 128, n_phi = 256;
    add_model_flags(husimi);
    husimi->add_option("--S", S, "total spin");
    husimi->add_option("--delta", delta, "distance from the critical point");
    husimi->add_option("--n-theta", n_theta, "polar nodes")->capture_default_str();
    husimi->add_option("--n-phi", n_phi, "azimuthal nodes")->capture_default_str();

    auto* fss = app.add_subcommand("fss", "finite-size sweep and scaling collapse");
    std::string S_list_text = "20,40,80,160";
    std::string fss_grid = "1e-3:1:16";
    std::string observable = "inverse_squeezing";
    bool log_correction = false;
    bool include_zero = false;
    add_model_flags(fss);
    fss->add_option("--S", S_list_text, "comma-separated spin sizes")->capture_default_str();
    fss->add_option("--delta-log", fss_grid, "log grid min:max:count")->capture_default_str();
    fss->add_flag("--include-zero", include_zero, "append delta = 0 to the grid");
    fss->add_option("--observable", observable, "order_parameter|inverse_squeezing")
        ->capture_default_str();
    fss->add_flag("--log-correction", log_correction, "use S_eff = S/log S");

    auto* symmetry = app.add_subcommand("symmetry", "superoperator PT-symmetry check");
    double kappa_flag = 3.0;
    add_model_flags(symmetry);
    symmetry->add_option("--kappa", kappa_flag, "collective decay rate")->capture_default_str();
    symmetry->add_option("--S", S, "test spin (<= 6)");

    auto* spinboson = app.add_subcommand("spinboson", "spin-boson mean-field layer");
    spinboson->fallthrough();
    cep::SpinBosonSpec sb;
    sb.g = 1.0;
    sb.lambda = 1.0;
    sb.omega = 1.0;
    sb.kappa = 2.0;
    std::string scan;
    spinboson->add_option("--g", sb.g, "transverse field")->capture_default_str();
    spinboson->add_option("--lambda", sb.lambda, "spin-boson coupling")->capture_default_str();
    spinboson->add_option("--omega", sb.omega, "twisting strength")->capture_default_str();
    spinboson->add_option("--kappa", sb.kappa, "cavity loss rate")->capture_default_str();
    spinboson->add_option("--scan-g", scan, "scan g as fractions of g_c, min:max:count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!global.config_path.empty()) {
            global.config = cep::parse_toml_file(global.config_path);
            check_keys(global.config, {"model", "sweep", "solver"}, "config");
            if (global.config.contains("solver")) {
                const json& sol = global.config["solver"];
                check_keys(sol, {"threads", "policy", "vec_dim_cap"}, "solver");
                if (sol.contains("threads") && global.threads == 0) {
                    global.threads = sol["threads"].get<int>();
                }
            }
        }
        ModelOptions model = model_from_config(global.config);
        // Command-line model flags override the config.
        for (CLI::App* cmd : {gaussian, exact, husimi, fss, symmetry}) {
            if (!cmd->parsed()) continue;
            if (cmd->count("--g")) model.preset.g = g;
            if (cmd->count("--omega")) model.preset.omega = omega;
            if (cmd->count("--gamma-x")) model.preset.gamma_x = gx;
            if (cmd->count("--gamma-y")) model.preset.gamma_y = gy;
            if (cmd->count("--gamma-z")) model.preset.gamma_z = gz;
        }
        fs::create_directories(global.out_dir);

        if (gaussian->parsed()) {
            std::vector<double> grid = delta_list.empty() ? parse_log_grid(delta_log)
                                                          : parse_list(delta_list);
            return cmd_gaussian(global, model, grid);
        }
        if (exact->parsed()) {
            if (!model.custom) {
                const double d = exact->count("--delta") || !model.has_delta ? delta
                                                                             : model.delta;
                model.preset = cep::PresetParams::from_delta(
                    model.preset.g, model.preset.omega, d, model.preset.gamma_x,
                    model.preset.gamma_y, model.preset.gamma_z);
            }
            return cmd_exact(global, model, S, policy);
        }
        if (husimi->parsed()) {
            if (!model.custom) {
                const double d = husimi->count("--delta") || !model.has_delta ? delta
                                                                              : model.delta;
                model.preset = cep::PresetParams::from_delta(
                    model.preset.g, model.preset.omega, d, model.preset.gamma_x,
                    model.preset.gamma_y, model.preset.gamma_z);
            }
            return cmd_husimi(global, model, S, n_theta, n_phi);
        }
        if (fss->parsed()) {
            std::vector<double> S_list = parse_list(S_list_text);
            std::vector<double> grid;
            if (global.config.contains("sweep")) {
                const json& sw = global.config["sweep"];
                check_keys(sw, {"S_list", "delta_min", "delta_max", "delta_points",
                                "log_spacing", "include_zero"},
                           "sweep");
                if (sw.contains("S_list") && fss->count("--S") == 0) {
                    S_list = sw["S_list"].get<std::vector<double>>();
                }
                if (sw.contains("delta_min")) {
                    const double lo = sw["delta_min"].get<double>();
                    const double hi = sw["delta_max"].get<double>();
                    const int n = sw["delta_points"].get<int>();
                    const bool logsp =
                        !sw.contains("log_spacing") || sw["log_spacing"].get<bool>();
                    for (int i = 0; i < n; ++i) {
                        grid.push_back(logsp ? lo * std::pow(hi / lo, double(i) / (n - 1))
                                             : lo + (hi - lo) * i / (n - 1));
                    }
                    if (sw.contains("include_zero") && sw["include_zero"].get<bool>()) {
                        include_zero = true;
                    }
                }
            }
            if (grid.empty()) grid = parse_log_grid(fss_grid);
            if (include_zero) grid.insert(grid.begin(), 0.0);
            return cmd_fss(global, model, S_list, grid, observable, log_correction);
        }
        if (symmetry->parsed()) {
            if (!model.custom) {
                if (symmetry->count("--kappa") || model.preset.kappa == 0.0) {
                    model.preset.kappa = kappa_flag;
                }
            }
            return cmd_symmetry(global, model, S);
        }
        if (spinboson->parsed()) {
            return cmd_spinboson(global, sb, scan);
        }
    } catch (const cep::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
