#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "muskat/linear.hpp"

using namespace muskat;

TEST_CASE("closed-form integrals I1 and I2") {
    SECTION("stated values") {
        CHECK(integral_i1(1) == Catch::Approx(-pi));
        CHECK(integral_i1(5) == Catch::Approx(-pi));
        CHECK(integral_i1(2) == Catch::Approx(pi * (0.5 - std::log(4.0))));
        CHECK(integral_i1(-1) == Catch::Approx(pi / 3.0));
        CHECK(integral_i2(5) == 0.0);
        CHECK(integral_i2(2) == Catch::Approx(pi * (std::log(4.0) - 1.5)));
        CHECK(integral_i2(-2) == Catch::Approx(0.5 * pi));
    }
    SECTION("k = 0 rejected") {
        CHECK_THROWS_AS(integral_i1(0), std::invalid_argument);
        CHECK_THROWS_AS(integral_i2(0), std::invalid_argument);
        CHECK_THROWS_AS(integral_i_quadrature(1, 0), std::invalid_argument);
    }
    SECTION("quadrature agrees to 1e-9 for 1 <= |k| <= 32") {
        for (int k = -32; k <= 32; ++k) {
            if (k == 0)
                continue;
            CHECK(std::abs(integral_i_quadrature(1, k) - integral_i1(k)) < 1e-9);
            CHECK(std::abs(integral_i_quadrature(2, k) - integral_i2(k)) < 1e-9);
        }
    }
}

TEST_CASE("catalan constant and C_R") {
    CHECK(catalan_constant() == Catch::Approx(0.9159655941772190).epsilon(1e-12));
    const double ct = 4.0 / pi * catalan_constant() * std::sqrt(1.0 + pi * pi / 4.0);
    CHECK(cr_constant() == Catch::Approx(1.0 + ct));
    CHECK(cr_constant() > 1.0);
}

TEST_CASE("linear coefficients") {
    PhysicalParams p{0.3, 2.0, 1.5, 1.0};
    const auto c = make_coefficients(p, 0.0, 8);
    SECTION("a(1) = 0 and a increasing") {
        CHECK(c.a_of(1) == 0.0);
        for (int k = 2; k <= 8; ++k) {
            CHECK(c.a_of(k) > 0.0);
            CHECK(c.a_of(k) > c.a_of(k - 1));
        }
        CHECK(c.a_of(2) == Catch::Approx(6.0 * p.a_sigma));
    }
    SECTION("b and c1 formulas") {
        // b(2) = -(1+A_mu) A_rho (3*3)/(2*4)
        CHECK(c.b_of(2).real() == Catch::Approx(-(1.0 + p.a_mu) * p.a_rho * 9.0 / 8.0));
        CHECK(c.b_of(1) == complex{});
        CHECK(c.c1.real() ==
              Catch::Approx((1.0 - p.a_mu) * p.a_rho * 1.5 * (0.75 - std::log(2.0))));
    }
    SECTION("radius scaling") {
        PhysicalParams p2 = p;
        p2.radius = 2.0;
        const auto c2 = make_coefficients(p2, 0.0, 4);
        CHECK(c2.a_of(2) == Catch::Approx(c.a_of(2) / 8.0));
        CHECK(c2.b_of(2).real() == Catch::Approx(c.b_of(2).real() / 2.0));
    }
}

TEST_CASE("linearized rows") {
    PhysicalParams p{0.3, 1.0, 1.0, 1.0};
    SECTION("mode 1 is neutral for any input") {
        std::mt19937_64 rng(51);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        SpectralField theta(12);
        for (int k = 1; k <= 12; ++k)
            theta.set_coeff(k, complex{u(rng), u(rng)});
        const auto l = linearized_rhs_hat(theta, p, 0.4, two_pi);
        CHECK(std::abs(l.coeff(1)) == 0.0);
    }
    SECTION("diagonal equals -a(k) at L = 2 pi R, any radius") {
        for (double r : {1.0, 2.0}) {
            PhysicalParams pr = p;
            pr.radius = r;
            const auto c = make_coefficients(pr, 0.0, 8);
            for (int k : {2, 3, 5}) {
                SpectralField theta(8);
                theta.set_coeff(k, complex{1.0, 0.0});
                const auto l = linearized_rhs_hat(theta, pr, 0.0, two_pi * r);
                CHECK(l.coeff(k).real() == Catch::Approx(-c.a_of(k)));
            }
        }
    }
    SECTION("k=2 surface tension coefficient is -6 A_sigma / R^3") {
        PhysicalParams pr{0.0, 2.0, 0.0, 2.0};
        SpectralField theta(4);
        theta.set_coeff(2, complex{1.0, 0.0});
        const auto l = linearized_rhs_hat(theta, pr, 0.0, two_pi * pr.radius);
        CHECK(l.coeff(2).real() == Catch::Approx(-6.0 * pr.a_sigma / 8.0));
    }
    SECTION("k=3 coupling coefficient is -(32/15)(1+A_mu)A_rho at R=1") {
        SpectralField theta(8);
        theta.set_coeff(4, complex{1.0, 0.0});
        const auto l = linearized_rhs_hat(theta, p, 0.0, two_pi);
        CHECK(l.coeff(3).real() == Catch::Approx(-(32.0 / 15.0) * (1.0 + p.a_mu) * p.a_rho));
    }
    SECTION("A_rho = 0 leaves only the diagonal") {
        PhysicalParams pr{0.5, 1.0, 0.0, 1.0};
        SpectralField theta(8);
        theta.set_coeff(3, complex{0.5, 0.2});
        theta.set_coeff(4, complex{0.1, -0.3});
        const auto l = linearized_rhs_hat(theta, pr, 0.7, two_pi);
        const auto c = make_coefficients(pr, 0.7, 8);
        for (int k = 1; k <= 8; ++k)
            CHECK(std::abs(l.coeff(k) + c.a_of(k) * theta.coeff(k)) < 1e-14);
    }
    SECTION("real fields map to real fields") {
        std::mt19937_64 rng(52);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        SpectralField theta(10);
        for (int k = 1; k <= 10; ++k)
            theta.set_coeff(k, complex{u(rng), u(rng)});
        const auto l = linearized_rhs_hat(theta, p, 0.3, 6.0);
        const auto samples = inverse_transform(l, 32);
        const auto back = forward_transform(samples, 10);
        for (int k = 0; k <= 10; ++k)
            CHECK(std::abs(back.coeff(k) - l.coeff(k)) < 1e-12);
    }
}

TEST_CASE("linearization against the nonlinear right-hand side") {
    PhysicalParams p{0.3, 1.0, 1.0, 1.0};
    const std::vector<double> eps = {1e-2, 1e-3, 1e-4};
    SECTION("single modes show O(eps) remainder") {
        for (int mode : {2, 3}) {
            const auto rep = verify_linearization(p, 0.0, mode, eps, 24);
            CHECK(rep.fitted_slope > 0.8);
            CHECK(rep.fitted_slope < 1.2);
            for (std::size_t i = 1; i < rep.cases.size(); ++i)
                CHECK(rep.cases[i].err < rep.cases[i - 1].err);
        }
    }
    SECTION("k=2 anomaly coefficient from a mode-1 excitation") {
        // exciting theta(1) populates row 2 through c1; Richardson in eps
        // removes the O(eps) remainder
        const auto measure = [&](double e) {
            SpectralField theta(24);
            theta.set_coeff(1, complex{e, 0.0});
            BubbleState st;
            st.theta = theta;
            st.length = two_pi;
            const auto rhs = full_rhs(st, p, 1e-12, 200, 192);
            return rhs.dtheta.coeff(2) / e;
        };
        const complex m3 = measure(1e-3);
        const complex m4 = measure(1e-4);
        const complex rich = (10.0 * m4 - m3) / 9.0;
        const double expected = (1.0 - p.a_mu) * p.a_rho * 1.5 * (0.75 - std::log(2.0));
        // three significant digits
        CHECK(std::abs(rich.real() - expected) < 5e-4 * std::abs(expected));
        CHECK(std::abs(rich.imag()) < 1e-6);
    }
}
