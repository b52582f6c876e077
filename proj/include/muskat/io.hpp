#pragma once

// Serialization: JSON schemas for spectra, states, and run configuration,
// plus the trajectory CSV/JSON emitters. All floating-point output goes
// through one fixed "%.17g" formatter so identical runs produce identical
// bytes.

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "muskat/evolution.hpp"
#include "muskat/geometry.hpp"
#include "muskat/linear.hpp"
#include "muskat/spectral.hpp"

namespace muskat {

using json = nlohmann::json;

// Configuration problems carry the offending field name; the CLI maps these
// to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error("config field '" + field + "': " + what), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// SpectralField <-> {"n_modes": N, "re": [...], "im": [...]} for k = 0..N.
// ---------------------------------------------------------------------------

inline json to_json(const SpectralField& f) {
    json j;
    j["n_modes"] = f.n_modes();
    json re = json::array(), im = json::array();
    for (int k = 0; k <= f.n_modes(); ++k) {
        re.push_back(f.coeff(k).real());
        im.push_back(f.coeff(k).imag());
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

inline SpectralField spectral_field_from_json(const json& j) {
    if (!j.contains("n_modes") || !j["n_modes"].is_number_integer())
        throw ConfigError("n_modes", "missing or not an integer");
    const int n = j["n_modes"].get<int>();
    if (n < 0)
        throw ConfigError("n_modes", "must be >= 0");
    if (!j.contains("re") || !j.contains("im"))
        throw ConfigError("re/im", "missing coefficient arrays");
    const auto& re = j["re"];
    const auto& im = j["im"];
    if (static_cast<int>(re.size()) != n + 1 || static_cast<int>(im.size()) != n + 1)
        throw ConfigError("re/im", "arrays must list k = 0..n_modes");
    SpectralField f(n);
    for (int k = 0; k <= n; ++k)
        f.set_coeff(k, complex{re[static_cast<std::size_t>(k)].get<double>(),
                               im[static_cast<std::size_t>(k)].get<double>()});
    return f;
}

// ---------------------------------------------------------------------------
// BubbleState.
// ---------------------------------------------------------------------------

inline json to_json(const BubbleState& s) {
    json j;
    j["mean_angle"] = s.mean_angle;
    j["length"] = s.length;
    j["base_point"] = {s.base_point.real(), s.base_point.imag()};
    j["time"] = s.time;
    j["theta"] = to_json(s.theta);
    return j;
}

inline BubbleState bubble_state_from_json(const json& j) {
    BubbleState s;
    s.mean_angle = j.at("mean_angle").get<double>();
    s.length = j.at("length").get<double>();
    s.base_point = complex{j.at("base_point").at(0).get<double>(),
                           j.at("base_point").at(1).get<double>()};
    s.time = j.at("time").get<double>();
    s.theta = spectral_field_from_json(j.at("theta"));
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// Run configuration. Dimensionless groups and raw fluid constants are
// mutually exclusive sections; initial data is a list of (k, re, im) modes.
// ---------------------------------------------------------------------------

struct OutputConfig {
    std::string directory = "out";
    bool csv = true;
    bool json_out = true;
    bool curve_snapshots = false;
};

struct RunConfig {
    PhysicalParams params;
    double mean_angle = 0.0;
    complex base_point{0.0, 0.0};
    std::vector<std::array<double, 3>> modes; // (k, re, im), k >= 1
    SolverConfig solver;
    OutputConfig output;

    BubbleState initial_state() const {
        BubbleState s;
        s.mean_angle = mean_angle;
        s.base_point = base_point;
        s.theta = SpectralField(solver.n_modes);
        for (const auto& m : modes) {
            const int k = static_cast<int>(m[0]);
            s.theta.set_coeff(k, complex{m[1], m[2]});
        }
        s.length = length_from_theta(s.theta, mean_angle, params.radius);
        return s;
    }
};

inline RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    const bool has_params = j.contains("params");
    const bool has_fluid = j.contains("fluid");
    if (has_params == has_fluid)
        throw ConfigError("params/fluid", "exactly one of the two sections is required");
    try {
        if (has_params) {
            const auto& p = j["params"];
            c.params.a_mu = p.at("a_mu").get<double>();
            c.params.a_sigma = p.at("a_sigma").get<double>();
            c.params.a_rho = p.at("a_rho").get<double>();
            c.params.radius = p.at("radius").get<double>();
            c.params.validate();
        } else {
            const auto& f = j["fluid"];
            c.params = derive_params(f.at("mu1").get<double>(), f.at("mu2").get<double>(),
                                     f.at("rho1").get<double>(), f.at("rho2").get<double>(),
                                     f.at("sigma").get<double>(), f.at("kappa").get<double>(),
                                     f.at("g").get<double>(), f.at("radius").get<double>());
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(has_params ? "params" : "fluid", e.what());
    } catch (const json::exception& e) {
        throw ConfigError(has_params ? "params" : "fluid", e.what());
    }

    if (j.contains("solver")) {
        const auto& s = j["solver"];
        try {
            if (s.contains("n_modes"))
                c.solver.n_modes = s["n_modes"].get<int>();
            if (s.contains("dt"))
                c.solver.dt = s["dt"].get<double>();
            if (s.contains("t_end"))
                c.solver.t_end = s["t_end"].get<double>();
            if (s.contains("omega_tol"))
                c.solver.omega_tol = s["omega_tol"].get<double>();
            if (s.contains("omega_max_iter"))
                c.solver.omega_max_iter = s["omega_max_iter"].get<int>();
            if (s.contains("record_every"))
                c.solver.record_every = s["record_every"].get<int>();
            if (s.contains("nu0"))
                c.solver.nu0 = s["nu0"].get<double>();
            if (s.contains("project_constraint"))
                c.solver.project_constraint = s["project_constraint"].get<bool>();
            if (s.contains("imex_mode")) {
                const std::string m = s["imex_mode"].get<std::string>();
                if (m == "integrating_factor")
                    c.solver.imex_mode = ImexMode::integrating_factor;
                else if (m == "backward_euler_diag")
                    c.solver.imex_mode = ImexMode::backward_euler_diag;
                else
                    throw ConfigError("solver.imex_mode", "unknown mode '" + m + "'");
            }
            c.solver.validate();
        } catch (const json::exception& e) {
            throw ConfigError("solver", e.what());
        } catch (const std::invalid_argument& e) {
            throw ConfigError("solver", e.what());
        }
    }

    if (j.contains("initial")) {
        const auto& ini = j["initial"];
        try {
            if (ini.contains("mean_angle"))
                c.mean_angle = ini["mean_angle"].get<double>();
            if (ini.contains("base_point"))
                c.base_point = complex{ini["base_point"].at(0).get<double>(),
                                       ini["base_point"].at(1).get<double>()};
            if (ini.contains("modes")) {
                for (const auto& m : ini["modes"]) {
                    if (!m.is_array() || m.size() != 3)
                        throw ConfigError("initial.modes", "each entry must be [k, re, im]");
                    const double kd = m.at(0).get<double>();
                    const int k = static_cast<int>(kd);
                    if (k != kd || k < 1)
                        throw ConfigError("initial.modes", "mode index must be an integer >= 1");
                    if (k > c.solver.n_modes)
                        throw ConfigError("initial.modes", "mode index exceeds n_modes");
                    c.modes.push_back({kd, m.at(1).get<double>(), m.at(2).get<double>()});
                }
            }
        } catch (const json::exception& e) {
            throw ConfigError("initial", e.what());
        }
    }

    if (j.contains("output")) {
        const auto& o = j["output"];
        try {
            if (o.contains("directory"))
                c.output.directory = o["directory"].get<std::string>();
            if (o.contains("formats")) {
                c.output.csv = false;
                c.output.json_out = false;
                for (const auto& f : o["formats"]) {
                    const std::string s = f.get<std::string>();
                    if (s == "csv")
                        c.output.csv = true;
                    else if (s == "json")
                        c.output.json_out = true;
                    else
                        throw ConfigError("output.formats", "unknown format '" + s + "'");
                }
            }
            if (o.contains("curve_snapshots"))
                c.output.curve_snapshots = o["curve_snapshots"].get<bool>();
        } catch (const json::exception& e) {
            throw ConfigError("output", e.what());
        }
    }
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config", std::string("parse error: ") + e.what());
    }
    return run_config_from_json(j);
}

// ---------------------------------------------------------------------------
// Trajectory emission.
// ---------------------------------------------------------------------------

inline const char* trajectory_csv_header() {
    return "t,norm_f01,norm_f121,norm_f121_nu,length,mean_angle,base_re,base_im,area,"
           "constraint_res,omega_iters";
}

inline std::string trajectory_to_csv(const TrajectoryRecord& rec) {
    std::ostringstream out;
    out << trajectory_csv_header() << '\n';
    for (const auto& p : rec.points) {
        out << format_double(p.t) << ',' << format_double(p.norm_f01) << ','
            << format_double(p.norm_f121) << ',' << format_double(p.norm_f121_nu) << ','
            << format_double(p.length) << ',' << format_double(p.mean_angle) << ','
            << format_double(p.base_point.real()) << ',' << format_double(p.base_point.imag())
            << ',' << format_double(p.area) << ',' << format_double(p.constraint_res) << ','
            << p.omega_iters << '\n';
    }
    return out.str();
}

inline json trajectory_to_json(const TrajectoryRecord& rec) {
    json rows = json::array();
    for (const auto& p : rec.points) {
        rows.push_back({{"t", p.t},
                        {"norm_f01", p.norm_f01},
                        {"norm_f121", p.norm_f121},
                        {"norm_f121_nu", p.norm_f121_nu},
                        {"length", p.length},
                        {"mean_angle", p.mean_angle},
                        {"base_point", {p.base_point.real(), p.base_point.imag()}},
                        {"area", p.area},
                        {"constraint_res", p.constraint_res},
                        {"omega_iters", p.omega_iters}});
    }
    json j;
    j["nu0"] = rec.nu0;
    j["aborted"] = rec.aborted;
    if (rec.aborted)
        j["abort_reason"] = rec.abort_reason;
    j["rows"] = std::move(rows);
    return j;
}

// Convergence report rows {k, eps, err, fitted_slope}.
inline json to_json(const LinearizationReport& rep) {
    json rows = json::array();
    for (const auto& c : rep.cases)
        rows.push_back({{"k", c.mode},
                        {"eps", c.eps},
                        {"err", c.err},
                        {"fitted_slope", rep.fitted_slope}});
    return rows;
}

inline TrajectoryRecord trajectory_from_json(const json& j) {
    TrajectoryRecord rec;
    rec.nu0 = j.at("nu0").get<double>();
    rec.aborted = j.at("aborted").get<bool>();
    if (rec.aborted && j.contains("abort_reason"))
        rec.abort_reason = j["abort_reason"].get<std::string>();
    for (const auto& row : j.at("rows")) {
        TrajectoryPoint p;
        p.t = row.at("t").get<double>();
        p.norm_f01 = row.at("norm_f01").get<double>();
        p.norm_f121 = row.at("norm_f121").get<double>();
        p.norm_f121_nu = row.at("norm_f121_nu").get<double>();
        p.length = row.at("length").get<double>();
        p.mean_angle = row.at("mean_angle").get<double>();
        p.base_point = complex{row.at("base_point").at(0).get<double>(),
                               row.at("base_point").at(1).get<double>()};
        p.area = row.at("area").get<double>();
        p.constraint_res = row.at("constraint_res").get<double>();
        p.omega_iters = row.at("omega_iters").get<int>();
        rec.points.push_back(p);
    }
    return rec;
}

// Interface snapshot {t, points: [[x, y], ...]} for external plotting.
inline json curve_snapshot_json(const BubbleState& state, int grid = 256) {
    const auto z = reconstruct_curve(state, grid);
    json pts = json::array();
    for (const auto& p : z)
        pts.push_back({p.real(), p.imag()});
    json j;
    j["t"] = state.time;
    j["points"] = std::move(pts);
    return j;
}

} // namespace muskat
