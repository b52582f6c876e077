#pragma once

// The Fourier-side linearized operator around the circle, its coefficients
// a(k), b(k), c1, the closed-form integrals I1/I2 with their quadrature
// twins, and finite-amplitude validation of the linearization against the
// full nonlinear right-hand side.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "muskat/evolution.hpp"
#include "muskat/geometry.hpp"
#include "muskat/numerics.hpp"
#include "muskat/spectral.hpp"

namespace muskat {

// Row data of the linearized mode system theta_t(k) = -a(k) theta(k)
// + b(k) theta(k+1) + 1_{k=2} c1 theta(1), expressed at L = 2 pi R.
struct LinearCoefficients {
    std::vector<double> a;  // index k >= 1; a[0] unused
    std::vector<complex> b; // superdiagonal coupling
    complex c1{};           // the (2,1) entry

    double a_of(int k) const { return a[static_cast<std::size_t>(k)]; }
    complex b_of(int k) const { return b[static_cast<std::size_t>(k)]; }
};

inline LinearCoefficients make_coefficients(const PhysicalParams& p, double mean_angle, int n) {
    p.validate();
    if (n < 2)
        throw std::invalid_argument("make_coefficients: need n >= 2");
    LinearCoefficients c;
    c.a.assign(static_cast<std::size_t>(n) + 1, 0.0);
    c.b.assign(static_cast<std::size_t>(n) + 1, complex{});
    const double r = p.radius;
    const double r3 = r * r * r;
    const complex phase_m = std::polar(1.0, -mean_angle);
    for (int k = 1; k <= n; ++k) {
        const double kd = k;
        c.a[static_cast<std::size_t>(k)] = p.a_sigma / r3 * kd * (kd * kd - 1.0);
        c.b[static_cast<std::size_t>(k)] = -(1.0 + p.a_mu) * (p.a_rho / r) *
                                           ((kd * kd - 1.0) * (kd + 1.0)) / (kd * (kd + 2.0)) *
                                           phase_m;
    }
    c.c1 = (1.0 - p.a_mu) * (p.a_rho / r) * 1.5 * (0.75 - std::log(2.0)) *
           std::polar(1.0, mean_angle);
    return c;
}

// Linearized theta_t at frozen length L: row k (k >= 1) is
//   -A_sigma (2pi/L)^3 k(k^2-1) theta(k)
//   - (1+A_mu) A_rho (2pi/L) (k^2-1)(k+1)/(k(k+2)) e^{-i thetahat0} theta(k+1),
// with the extra k = 2 entry +(1-A_mu) A_rho (2pi/L)(3/2)(3/4-log2)
// e^{+i thetahat0} theta(1). At L = 2 pi R the rows reduce to the
// LinearCoefficients entries. Mode 1 is neutral.
inline SpectralField linearized_rhs_hat(const SpectralField& theta_hat, const PhysicalParams& p,
                                        double mean_angle, double length) {
    p.validate();
    if (!(length > 0.0))
        throw std::invalid_argument("linearized_rhs_hat: length must be positive");
    const int n = theta_hat.n_modes();
    const double q = two_pi / length;
    const complex phase_m = std::polar(1.0, -mean_angle);
    const complex phase_p = std::polar(1.0, mean_angle);
    SpectralField out(n);
    for (int k = 1; k <= n; ++k) {
        const double kd = k;
        complex v = -p.a_sigma * q * q * q * kd * (kd * kd - 1.0) * theta_hat.coeff(k);
        v += -(1.0 + p.a_mu) * p.a_rho * q * ((kd * kd - 1.0) * (kd + 1.0)) / (kd * (kd + 2.0)) *
             phase_m * theta_hat.coeff(k + 1);
        if (k == 2)
            v += (1.0 - p.a_mu) * p.a_rho * q * 1.5 * (0.75 - std::log(2.0)) * phase_p *
                 theta_hat.coeff(1);
        out.set_coeff(k, v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// The closed-form integrals of the linearization and their quadrature twins.
// ---------------------------------------------------------------------------

inline double integral_i1(int k) {
    if (k == 0)
        throw std::invalid_argument("integral_i1: k must be nonzero");
    if (k == 2)
        return pi * (0.5 - std::log(4.0));
    if (k >= 1)
        return -pi;
    return -static_cast<double>(k) * pi / (2.0 - k);
}

inline double integral_i2(int k) {
    if (k == 0)
        throw std::invalid_argument("integral_i2: k must be nonzero");
    if (k == 2)
        return pi * (std::log(4.0) - 1.5);
    if (k >= 1)
        return 0.0;
    return 2.0 * pi / (2.0 - k);
}

// Quadrature of the defining double integrals. The s-integral is carried out
// analytically; what remains is a smooth even integrand in beta:
//   I1(k) = int_{-pi}^{pi} [ (cos k b - 1)/k - (cos k b - cos 2b)/(2-k) ]
//           / (8 sin^2(b/2)) db,
//   I2(k) = same with the relative sign of the two brackets flipped,
// where at k = 2 the second bracket degenerates to b sin(2b).
inline double integral_i_quadrature(int which, int k, double tol = 1e-11) {
    if (k == 0)
        throw std::invalid_argument("integral_i_quadrature: k must be nonzero");
    if (which != 1 && which != 2)
        throw std::invalid_argument("integral_i_quadrature: which must be 1 or 2");
    const double sign = (which == 1) ? -1.0 : 1.0;
    const auto f = [k, sign](double b) {
        if (b < 1e-7) {
            // Removable limit at b = 0.
            const double first = -0.5 * k;
            const double second = 0.5 * (2.0 + k); // also the k = 2 limit
            return (first + sign * second) * 0.5;
        }
        const double s2 = std::sin(0.5 * b);
        const double first = (std::cos(k * b) - 1.0) / k;
        double second;
        if (k == 2)
            second = b * std::sin(2.0 * b);
        else
            second = (std::cos(k * b) - std::cos(2.0 * b)) / (2.0 - k);
        return (first + sign * second) / (8.0 * s2 * s2);
    };
    const int min_depth = 3 + static_cast<int>(std::ceil(std::log2(std::abs(k) + 2.0)));
    return 2.0 * adaptive_simpson(f, 0.0, pi, tol, 48, min_depth);
}

// C_R = 1 + (4/pi) V sqrt(1 + pi^2/4) with Catalan's constant V.
inline double cr_constant() {
    return 1.0 + 4.0 / pi * catalan_constant() * std::sqrt(1.0 + pi * pi / 4.0);
}

// ---------------------------------------------------------------------------
// Finite-amplitude validation of the linearization.
// ---------------------------------------------------------------------------

struct LinearizationCase {
    int mode = 0;
    double eps = 0.0;
    double err = 0.0; // || RHS(eps)/eps - Lhat(row) ||_{F^{0,1}}
};

struct LinearizationReport {
    std::vector<LinearizationCase> cases;
    double fitted_slope = 0.0; // log err vs log eps; 1 confirms O(eps) remainder
};

// Evaluates the full nonlinear RHS at theta = eps * 2cos(k alpha) with L
// frozen at 2 pi R, divides by eps, and compares against the linearized rows.
inline LinearizationReport verify_linearization(const PhysicalParams& params, double mean_angle,
                                                int mode, const std::vector<double>& eps_list,
                                                int n_modes = 32) {
    params.validate();
    if (mode < 1 || mode > n_modes - 1)
        throw std::invalid_argument("verify_linearization: mode out of band");
    LinearizationReport rep;
    std::vector<double> lx, ly;
    for (double eps : eps_list) {
        SpectralField theta(n_modes);
        theta.set_coeff(mode, complex{eps, 0.0});
        BubbleState st;
        st.mean_angle = mean_angle;
        st.theta = theta;
        st.length = two_pi * params.radius;
        const RhsResult rhs = full_rhs(st, params);
        SpectralField unit(n_modes);
        unit.set_coeff(mode, complex{1.0, 0.0});
        const SpectralField lin = linearized_rhs_hat(unit, params, mean_angle, st.length);
        CompensatedSum err;
        for (int k = n_modes; k >= 1; --k)
            err.add(2.0 * std::abs(rhs.dtheta.coeff(k) / eps - lin.coeff(k)));
        rep.cases.push_back({mode, eps, err.value()});
        lx.push_back(std::log(eps));
        ly.push_back(std::log(std::max(err.value(), 1e-300)));
    }
    if (lx.size() >= 2)
        rep.fitted_slope = fit_line(lx, ly).slope;
    return rep;
}

} // namespace muskat
