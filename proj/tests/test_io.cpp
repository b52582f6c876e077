#include <catch_amalgamated.hpp>

#include <cmath>

#include "muskat/io.hpp"

using namespace muskat;

TEST_CASE("spectral field json round trip") {
    SpectralField f(4);
    f.set_coeff(0, complex{0.3, 0.0});
    f.set_coeff(2, complex{0.1, -0.05});
    const auto j = to_json(f);
    CHECK(j["n_modes"] == 4);
    CHECK(j["re"].size() == 5);
    const auto g = spectral_field_from_json(j);
    for (int k = -4; k <= 4; ++k)
        CHECK(g.coeff(k) == f.coeff(k));
}

TEST_CASE("bubble state json round trip") {
    BubbleState s;
    s.mean_angle = 0.4;
    s.theta = SpectralField(6);
    s.theta.set_coeff(2, complex{0.03, 0.01});
    s.length = 6.4;
    s.base_point = complex{0.5, -1.5};
    s.time = 2.25;
    const auto j = to_json(s);
    const auto t = bubble_state_from_json(j);
    CHECK(t.mean_angle == s.mean_angle);
    CHECK(t.length == s.length);
    CHECK(t.base_point == s.base_point);
    CHECK(t.time == s.time);
    CHECK(t.theta.coeff(2) == s.theta.coeff(2));
}

TEST_CASE("run config parsing") {
    SECTION("dimensionless groups") {
        const auto j = json::parse(R"({
            "params": {"a_mu": 0.3, "a_sigma": 1.0, "a_rho": 1.0, "radius": 1.0},
            "initial": {"mean_angle": 0.0, "modes": [[2, 0.05, 0.0]]},
            "solver": {"n_modes": 16, "t_end": 0.5}
        })");
        const auto cfg = run_config_from_json(j);
        CHECK(cfg.params.a_mu == 0.3);
        CHECK(cfg.solver.n_modes == 16);
        const auto s = cfg.initial_state();
        CHECK(s.theta.coeff(2) == complex{0.05, 0.0});
        CHECK(s.length > 0.0);
    }
    SECTION("raw fluid constants") {
        const auto j = json::parse(R"({
            "fluid": {"mu1": 1.0, "mu2": 3.0, "rho1": 1.0, "rho2": 2.0,
                      "sigma": 0.5, "kappa": 1.0, "g": 9.8, "radius": 1.0}
        })");
        const auto cfg = run_config_from_json(j);
        CHECK(cfg.params.a_mu == Catch::Approx(0.5));
    }
    SECTION("both sections rejected, naming the field") {
        const auto j = json::parse(R"({
            "params": {"a_mu": 0, "a_sigma": 1, "a_rho": 0, "radius": 1},
            "fluid": {"mu1": 1, "mu2": 1, "rho1": 1, "rho2": 1,
                      "sigma": 1, "kappa": 1, "g": 1, "radius": 1}
        })");
        try {
            run_config_from_json(j);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.field() == "params/fluid");
        }
    }
    SECTION("mode index above the band is rejected") {
        const auto j = json::parse(R"({
            "params": {"a_mu": 0, "a_sigma": 1, "a_rho": 0, "radius": 1},
            "solver": {"n_modes": 8},
            "initial": {"modes": [[9, 0.01, 0.0]]}
        })");
        CHECK_THROWS_AS(run_config_from_json(j), ConfigError);
    }
    SECTION("nonpositive mode index is rejected") {
        const auto j = json::parse(R"({
            "params": {"a_mu": 0, "a_sigma": 1, "a_rho": 0, "radius": 1},
            "initial": {"modes": [[0, 0.01, 0.0]]}
        })");
        CHECK_THROWS_AS(run_config_from_json(j), ConfigError);
    }
    SECTION("unknown imex mode is rejected") {
        const auto j = json::parse(R"({
            "params": {"a_mu": 0, "a_sigma": 1, "a_rho": 0, "radius": 1},
            "solver": {"imex_mode": "leapfrog"}
        })");
        CHECK_THROWS_AS(run_config_from_json(j), ConfigError);
    }
}

TEST_CASE("trajectory csv shape") {
    TrajectoryRecord rec;
    TrajectoryPoint p;
    p.t = 0.5;
    p.norm_f01 = 0.1;
    p.norm_f121 = 0.2;
    p.norm_f121_nu = 0.21;
    p.length = 6.28;
    p.mean_angle = 0.0;
    p.base_point = complex{1.0, 2.0};
    p.area = 3.14;
    p.constraint_res = 1e-9;
    p.omega_iters = 7;
    rec.points.push_back(p);
    const auto csv = trajectory_to_csv(rec);
    CHECK(csv.rfind("t,norm_f01,norm_f121,norm_f121_nu,length,mean_angle,base_re,base_im,area,"
                    "constraint_res,omega_iters\n",
                    0) == 0);
    CHECK(csv.find(",7\n") != std::string::npos);
    // the formatter is round-trip lossless
    CHECK(csv.find("0.5,") != std::string::npos);
}

TEST_CASE("trajectory json round trip") {
    TrajectoryRecord rec;
    rec.nu0 = 0.05;
    for (int i = 0; i < 3; ++i) {
        TrajectoryPoint p;
        p.t = 0.25 * i;
        p.norm_f01 = 0.1 / (1 + i);
        p.norm_f121 = 0.2 / (1 + i);
        p.norm_f121_nu = 0.21 / (1 + i);
        p.length = 6.28 + 0.01 * i;
        p.mean_angle = 0.02 * i;
        p.base_point = complex{0.1 * i, 0.3 * i};
        p.area = 3.14159;
        p.constraint_res = 1e-9 * (i + 1);
        p.omega_iters = i;
        rec.points.push_back(p);
    }
    const auto back = trajectory_from_json(trajectory_to_json(rec));
    REQUIRE(back.points.size() == rec.points.size());
    CHECK(back.nu0 == rec.nu0);
    for (std::size_t i = 0; i < rec.points.size(); ++i) {
        CHECK(back.points[i].t == rec.points[i].t);
        CHECK(back.points[i].norm_f121 == rec.points[i].norm_f121);
        CHECK(back.points[i].base_point == rec.points[i].base_point);
        CHECK(back.points[i].omega_iters == rec.points[i].omega_iters);
    }
}

TEST_CASE("curve snapshot schema") {
    BubbleState s;
    s.theta = SpectralField(8);
    s.length = two_pi;
    s.time = 1.5;
    const auto j = curve_snapshot_json(s, 32);
    CHECK(j["t"] == 1.5);
    CHECK(j["points"].size() == 32);
    CHECK(j["points"][0].size() == 2);
}

TEST_CASE("linearization report rows") {
    LinearizationReport rep;
    rep.fitted_slope = 1.01;
    rep.cases.push_back({2, 1e-2, 0.5});
    rep.cases.push_back({2, 1e-3, 0.05});
    const auto j = to_json(rep);
    REQUIRE(j.size() == 2);
    CHECK(j[0]["k"] == 2);
    CHECK(j[0]["eps"] == 1e-2);
    CHECK(j[1]["err"] == 0.05);
    CHECK(j[0]["fitted_slope"] == 1.01);
}
