#pragma once

// Recovery of the +-1 modes of theta from the closed-curve constraint: the
// frozen-Jacobian contraction iteration of the implicit function theorem,
// and the explicit constant C_I(r) bounding the recovered modes.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "muskat/spectral.hpp"

namespace muskat {

inline double constraint_radius_limit() { return 0.5 * std::log(1.25); }

// C_I(r) = (1/r) * 2 e^r (e^r - 1) / (1 - 4(e^{2r} - 1)), increasing on
// (0, (1/2)log(5/4)).
inline double ci_constant(double r) {
    if (!(r > 0.0) || !(r < constraint_radius_limit()))
        throw std::invalid_argument("ci_constant: r must lie in (0, (1/2)log(5/4))");
    const double er = std::exp(r);
    return (1.0 / r) * 2.0 * er * (er - 1.0) / (1.0 - 4.0 * (er * er - 1.0));
}

// The higher-mode data of the problem: u has no modes |k| <= 1.
struct ConstraintProblem {
    SpectralField theta_tilde;
    double radius_r = 0.1;

    void validate() const {
        if (theta_tilde.coeff(0) != complex{} || theta_tilde.coeff(1) != complex{})
            throw std::invalid_argument("ConstraintProblem: theta_tilde must have zero modes |k| <= 1");
        if (!(radius_r > 0.0) || !(radius_r < constraint_radius_limit()))
            throw std::invalid_argument("ConstraintProblem: radius_r outside (0, (1/2)log(5/4))");
        if (wiener_norm(theta_tilde, 0.0) >= radius_r)
            throw std::invalid_argument("ConstraintProblem: ||theta_tilde|| must be < radius_r");
    }
};

// g(u,x) = (int cos(psi), int sin(psi)) with
// psi(alpha) = alpha + 2(x1 cos(alpha) - x2 sin(alpha)) + u(alpha),
// evaluated by spectral quadrature on the uniform grid.
inline std::array<double, 2> g_map(const SpectralField& u, double x1, double x2, int grid = 0) {
    const int size = grid > 0 ? grid : 4 * std::max(u.n_modes(), 8);
    const auto us = inverse_transform(u, size);
    const auto pts = grid_points(size);
    CompensatedSum gc, gs;
    for (int j = 0; j < size; ++j) {
        const double psi = pts[static_cast<std::size_t>(j)] +
                           2.0 * (x1 * std::cos(pts[static_cast<std::size_t>(j)]) -
                                  x2 * std::sin(pts[static_cast<std::size_t>(j)])) +
                           us[static_cast<std::size_t>(j)];
        gc.add(std::cos(psi));
        gs.add(std::sin(psi));
    }
    const double w = two_pi / size;
    return {gc.value() * w, gs.value() * w};
}

struct FirstModesSolution {
    double x1 = 0.0; // Re thetahat(1)
    double x2 = 0.0; // Im thetahat(1)
    int iterations = 0;
    double residual = 0.0; // |g| at the returned point
};

// Fixed-point iteration x <- x - D_x g(0,0)^{-1} g(theta_tilde, x), the
// contraction of the implicit function theorem with the Jacobian 2pi [[0,1],[1,0]]
// frozen at the origin.
inline FirstModesSolution solve_first_modes(const ConstraintProblem& p, double tol = 1e-13,
                                            int max_iter = 100) {
    p.validate();
    double x1 = 0.0, x2 = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        const auto g = g_map(p.theta_tilde, x1, x2);
        const double gnorm = std::hypot(g[0], g[1]);
        if (gnorm < tol)
            return {x1, x2, it - 1, gnorm};
        x1 -= g[1] / two_pi;
        x2 -= g[0] / two_pi;
    }
    throw std::runtime_error("solve_first_modes: contraction did not converge; "
                             "admissibility bound likely violated");
}

// theta_tilde with the solved +-1 modes inserted.
inline SpectralField assemble_theta(const ConstraintProblem& p, const FirstModesSolution& s) {
    SpectralField out = p.theta_tilde;
    out.set_coeff(1, complex{s.x1, s.x2});
    return out;
}

} // namespace muskat
