// Command-line front end: `simulate` runs a configured evolution and writes
// trajectory/state files, `analyze` emits the linear-analysis tables, and
// `verify` executes a named acceptance suite.
//
// Exit codes: 0 success, 1 failed verification, 2 configuration/usage error,
// 3 solver/admissibility error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "muskat/diagonal.hpp"
#include "muskat/io.hpp"
#include "muskat/linear.hpp"
#include "muskat/verify.hpp"

namespace fs = std::filesystem;
using namespace muskat;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

int cmd_simulate(const std::string& config_path) {
    RunConfig cfg = load_run_config(config_path);
    if (const char* env = std::getenv("MUSKAT_OUTPUT_DIR"))
        cfg.output.directory = env;

    const BubbleState initial = cfg.initial_state();
    const TrajectoryRecord rec = run(initial, cfg.params, cfg.solver);

    fs::create_directories(cfg.output.directory);
    const fs::path dir = cfg.output.directory;
    if (cfg.output.csv)
        write_text(dir / "trajectory.csv", trajectory_to_csv(rec));
    if (cfg.output.json_out)
        write_text(dir / "trajectory.json", trajectory_to_json(rec).dump(2) + "\n");

    if (!rec.points.empty()) {
        BubbleState final_state;
        final_state.mean_angle = rec.points.back().mean_angle;
        final_state.theta = rec.theta_snapshots.back();
        final_state.length = rec.points.back().length;
        final_state.base_point = rec.points.back().base_point;
        final_state.time = rec.points.back().t;
        write_text(dir / "final_state.json", to_json(final_state).dump(2) + "\n");
        if (cfg.output.curve_snapshots) {
            for (std::size_t i = 0; i < rec.points.size(); ++i) {
                BubbleState s;
                s.mean_angle = rec.points[i].mean_angle;
                s.theta = rec.theta_snapshots[i];
                s.length = rec.points[i].length;
                s.base_point = rec.points[i].base_point;
                s.time = rec.points[i].t;
                char name[32];
                std::snprintf(name, sizeof name, "curve_%04zu.json", i);
                write_text(dir / name, curve_snapshot_json(s).dump() + "\n");
            }
        }
    }

    if (rec.aborted) {
        std::cerr << "simulate: aborted: " << rec.abort_reason << "\n";
        return 3;
    }
    std::cout << "simulate: wrote " << rec.points.size() << " records to " << dir.string()
              << "\n";
    return 0;
}

json integrals_table() {
    json rows = json::array();
    double worst = 0.0;
    for (int k = -32; k <= 32; ++k) {
        if (k == 0)
            continue;
        const double c1 = integral_i1(k), c2 = integral_i2(k);
        const double q1 = integral_i_quadrature(1, k), q2 = integral_i_quadrature(2, k);
        worst = std::max({worst, std::abs(c1 - q1), std::abs(c2 - q2)});
        rows.push_back({{"k", k},
                        {"i1_closed", c1},
                        {"i1_quadrature", q1},
                        {"i2_closed", c2},
                        {"i2_quadrature", q2}});
    }
    return json{{"max_abs_difference", worst}, {"rows", std::move(rows)}};
}

json spectrum_table(const PhysicalParams& p, double mean_angle, int n) {
    const auto c = make_coefficients(p, mean_angle, n);
    json rows = json::array();
    for (int k = 1; k <= n; ++k)
        rows.push_back({{"k", k},
                        {"a", c.a_of(k)},
                        {"b_re", c.b_of(k).real()},
                        {"b_im", c.b_of(k).imag()}});
    return json{{"rows", std::move(rows)},
                {"c1", {c.c1.real(), c.c1.imag()}},
                {"cr_constant", cr_constant()}};
}

json transform_table(const PhysicalParams& p, double mean_angle, int n) {
    const auto c = make_coefficients(p, mean_angle, n);
    const auto t = build_transform(c, n);
    const auto norms = t.l1_norms();
    return json{{"n_modes", n},
                {"inverse_residual", verify_inverse(t)},
                {"diagonalization_residual", verify_diagonalizes(t, c)},
                {"l1_norm_s", norms.s},
                {"l1_norm_s_inv", norms.s_inv},
                {"cs_bound", cs_bound(p)}};
}

int cmd_analyze(const std::string& config_path, bool spectrum, bool transform, bool integrals) {
    RunConfig cfg = load_run_config(config_path);
    if (!spectrum && !transform && !integrals)
        spectrum = transform = integrals = true;
    json out;
    if (spectrum)
        out["spectrum"] = spectrum_table(cfg.params, cfg.mean_angle, cfg.solver.n_modes);
    if (transform)
        out["transform"] =
            transform_table(cfg.params, cfg.mean_angle, std::min(cfg.solver.n_modes, 64));
    if (integrals)
        out["integrals"] = integrals_table();
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int jobs) {
    const auto names = verify::suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
        std::cerr << "verify: unknown suite '" << suite << "'; available:";
        for (const auto& n : names)
            std::cerr << " " << n;
        std::cerr << "\n";
        return 2;
    }
    const auto r = verify::run_suite(suite, seed, jobs);
    std::cout << verify::render(r);
    return r.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral contour dynamics for surface-tension Muskat bubbles"};
    app.require_subcommand(1);

    std::string config_path;
    auto* sim = app.add_subcommand("simulate", "run a configured evolution");
    sim->add_option("config", config_path, "JSON run configuration")->required();

    std::string analyze_config;
    bool flag_spectrum = false, flag_transform = false, flag_integrals = false;
    auto* ana = app.add_subcommand("analyze", "emit linear-analysis tables as JSON");
    ana->add_option("config", analyze_config, "JSON run configuration")->required();
    ana->add_flag("--spectrum", flag_spectrum, "a(k), b(k), c1 coefficient table");
    ana->add_flag("--transform", flag_transform, "S/S^-1 residuals and l1 norms");
    ana->add_flag("--integrals", flag_integrals, "I1/I2 closed form vs quadrature");

    std::string suite;
    std::uint64_t seed = 12345;
    int jobs = 1;
    auto* ver = app.add_subcommand("verify", "run a named acceptance suite");
    ver->add_option("--suite", suite, "suite name")->required();
    ver->add_option("--seed", seed, "seed for randomized suites");
    ver->add_option("--jobs", jobs, "parallelize independent cases")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(config_path);
        if (ana->parsed())
            return cmd_analyze(analyze_config, flag_spectrum, flag_transform, flag_integrals);
        return cmd_verify(suite, seed, jobs);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const AdmissibilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
