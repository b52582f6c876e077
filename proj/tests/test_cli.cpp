#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string(MUSKAT_CLI_PATH) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path make_workdir() {
    const fs::path dir = fs::temp_directory_path() / "muskat_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace

TEST_CASE("simulate: circle rises at A_rho with zero perturbation norm") {
    const auto dir = make_workdir();
    write_file(dir / "circle.json", R"({
        "params": {"a_mu": 0.3, "a_sigma": 1.0, "a_rho": 1.0, "radius": 1.0},
        "initial": {"mean_angle": 0.0, "base_point": [1.0, 0.0], "modes": []},
        "solver": {"n_modes": 16, "t_end": 0.1, "dt": 0.01},
        "output": {"directory": ")" + (dir / "out_circle").string() + R"("}
    })");
    const auto r = run_cli("simulate " + (dir / "circle.json").string(), dir);
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(slurp(dir / "out_circle" / "trajectory.csv"));
    REQUIRE(rows.size() > 3);
    double prev_im = -1e300;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::abs(std::stod(rows[i][1])) < 1e-11); // norm_f01
        const double im = std::stod(rows[i][7]);        // base_im
        CHECK(im > prev_im);
        prev_im = im;
    }
    // final height ~ A_rho * t_end
    CHECK(std::stod(rows.back()[7]) == Catch::Approx(0.1).margin(1e-6));
}

TEST_CASE("simulate: perturbed bubble relaxes") {
    const auto dir = make_workdir();
    write_file(dir / "perturbed.json", R"({
        "params": {"a_mu": 0.3, "a_sigma": 1.0, "a_rho": 1.0, "radius": 1.0},
        "initial": {"modes": [[2, 0.05, 0.0]]},
        "solver": {"n_modes": 16, "t_end": 0.2},
        "output": {"directory": ")" + (dir / "out_p").string() + R"(",
                    "curve_snapshots": true}
    })");
    const auto r = run_cli("simulate " + (dir / "perturbed.json").string(), dir);
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(slurp(dir / "out_p" / "trajectory.csv"));
    REQUIRE(rows.size() > 5);
    CHECK(std::stod(rows.back()[2]) < 0.5 * std::stod(rows[1][2])); // norm_f121 decays
    CHECK(fs::exists(dir / "out_p" / "final_state.json"));
    CHECK(fs::exists(dir / "out_p" / "curve_0000.json"));
    CHECK(fs::exists(dir / "out_p" / "trajectory.json"));
}

TEST_CASE("simulate: identical config gives byte-identical output") {
    const auto dir = make_workdir();
    write_file(dir / "cfg.json", R"({
        "params": {"a_mu": 0.3, "a_sigma": 1.0, "a_rho": 1.0, "radius": 1.0},
        "initial": {"modes": [[2, 0.04, 0.0]]},
        "solver": {"n_modes": 16, "t_end": 0.05, "nu0": 0.05},
        "output": {"directory": ")" + (dir / "out_a").string() + R"("}
    })");
    REQUIRE(run_cli("simulate " + (dir / "cfg.json").string(), dir).exit_code == 0);
    const auto first = slurp(dir / "out_a" / "trajectory.csv");
    REQUIRE(run_cli("simulate " + (dir / "cfg.json").string(), dir).exit_code == 0);
    CHECK(first == slurp(dir / "out_a" / "trajectory.csv"));
}

TEST_CASE("simulate: output directory env override") {
    const auto dir = make_workdir();
    write_file(dir / "cfg.json", R"({
        "params": {"a_mu": 0.0, "a_sigma": 1.0, "a_rho": 0.0, "radius": 1.0},
        "initial": {"modes": []},
        "solver": {"n_modes": 8, "t_end": 0.02},
        "output": {"directory": ")" + (dir / "ignored").string() + R"("}
    })");
    const std::string env = "MUSKAT_OUTPUT_DIR=" + (dir / "redirected").string() + " ";
    const fs::path out = dir / "stdout.txt";
    const std::string cmd = env + std::string(MUSKAT_CLI_PATH) + " simulate " +
                            (dir / "cfg.json").string() + " > " + out.string() + " 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(dir / "redirected" / "trajectory.csv"));
    CHECK(!fs::exists(dir / "ignored"));
}

TEST_CASE("config errors name the field and exit 2") {
    const auto dir = make_workdir();
    write_file(dir / "bad.json", R"({
        "params": {"a_mu": 0.3, "a_sigma": -1.0, "a_rho": 1.0, "radius": 1.0}
    })");
    const auto r = run_cli("simulate " + (dir / "bad.json").string(), dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("params") != std::string::npos);

    write_file(dir / "bad2.json", "{ not json");
    const auto r2 = run_cli("simulate " + (dir / "bad2.json").string(), dir);
    CHECK(r2.exit_code == 2);

    write_file(dir / "bad3.json", R"({
        "params": {"a_mu": 0.0, "a_sigma": 1.0, "a_rho": 0.0, "radius": 1.0},
        "initial": {"modes": [[40, 0.01, 0.0]]},
        "solver": {"n_modes": 16}
    })");
    const auto r3 = run_cli("simulate " + (dir / "bad3.json").string(), dir);
    CHECK(r3.exit_code == 2);
    CHECK(r3.err.find("initial.modes") != std::string::npos);
}

TEST_CASE("analyze emits the requested tables") {
    const auto dir = make_workdir();
    write_file(dir / "cfg.json", R"({
        "params": {"a_mu": 0.3, "a_sigma": 1.0, "a_rho": 1.0, "radius": 1.0},
        "solver": {"n_modes": 16}
    })");
    const auto r = run_cli("analyze " + (dir / "cfg.json").string() + " --integrals", dir);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"integrals\"") != std::string::npos);
    CHECK(r.out.find("\"spectrum\"") == std::string::npos);

    const auto r2 = run_cli("analyze " + (dir / "cfg.json").string() + " --spectrum", dir);
    REQUIRE(r2.exit_code == 0);
    CHECK(r2.out.find("\"a\": 0.0") != std::string::npos); // a(1) = 0 row present

    const auto r3 = run_cli("analyze " + (dir / "cfg.json").string() + " --transform", dir);
    REQUIRE(r3.exit_code == 0);
    CHECK(r3.out.find("cs_bound") != std::string::npos);
}

TEST_CASE("verify subcommand") {
    const auto dir = make_workdir();
    SECTION("unknown suite exits 2") {
        const auto r = run_cli("verify --suite nonsense", dir);
        CHECK(r.exit_code == 2);
    }
    SECTION("integrals suite passes") {
        const auto r = run_cli("verify --suite integrals", dir);
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("PASS") != std::string::npos);
        CHECK(r.out.find("FAIL") == std::string::npos);
    }
    SECTION("jobs flag parallelizes without changing the report") {
        const auto r1 = run_cli("verify --suite constraint --seed 99", dir);
        const auto r4 = run_cli("verify --suite constraint --seed 99 --jobs 4", dir);
        CHECK(r1.exit_code == 0);
        CHECK(r4.exit_code == 0);
        CHECK(r1.out == r4.out);
    }
}
