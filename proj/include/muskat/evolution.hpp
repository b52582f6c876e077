#pragma once

// Time integration of the full contour system: the assembled right-hand side
// for (theta, thetahat(0), z(0)), an IMEX step with the stiff diagonal
// surface-tension term handled by an integrating factor, trajectory
// recording, and decay-rate extraction.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "muskat/constraint.hpp"
#include "muskat/contour.hpp"
#include "muskat/geometry.hpp"

namespace muskat {

enum class ImexMode { integrating_factor, backward_euler_diag };

struct SolverConfig {
    int n_modes = 128;
    double dt = 0.0; // 0 selects the stability heuristic
    double t_end = 1.0;
    double omega_tol = 1e-12;
    int omega_max_iter = 200;
    ImexMode imex_mode = ImexMode::integrating_factor;
    int record_every = 1;
    double nu0 = 0.0;
    bool project_constraint = false;

    void validate() const {
        if (n_modes < 8)
            throw std::invalid_argument("SolverConfig: n_modes must be >= 8");
        if (dt < 0.0 || !(t_end > 0.0))
            throw std::invalid_argument("SolverConfig: dt must be >= 0 and t_end > 0");
        if (record_every < 1)
            throw std::invalid_argument("SolverConfig: record_every must be >= 1");
        if (nu0 < 0.0)
            throw std::invalid_argument("SolverConfig: nu0 must be >= 0");
    }
};

// Stability heuristic for the explicit part of the split.
inline double default_dt(const PhysicalParams& p, int n_modes) {
    const double r3 = p.radius * p.radius * p.radius;
    const double stiff = 0.5 * r3 / (p.a_sigma * n_modes);
    const double advect = 0.1 * p.radius / (std::abs(p.a_rho) * n_modes + 1e-12);
    return std::min(stiff, advect);
}

struct RhsResult {
    SpectralField dtheta;   // mean-free part of vartheta_t, truncated to N
    double dmean = 0.0;     // d thetahat(0)/dt
    complex dbase{};        // d z(0)/dt
    int omega_iters = 0;
};

namespace detail {

// Assembles the time derivatives once conj(BR) samples of the converged
// vorticity are available.
inline RhsResult assemble_rhs(const BubbleState& state, const PhysicalParams& params,
                              const detail::CurveSamples& curve, const std::vector<complex>& br,
                              int omega_iters, int n, int size, int band, double l) {
    std::vector<double> u(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i)
        u[static_cast<std::size_t>(i)] = -(br[static_cast<std::size_t>(i)] * curve.e_main(i)).imag();

    const auto theta_a = inverse_transform(derivative(resize_band(state.theta, band), 1), size);
    std::vector<double> prod(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i)
        prod[static_cast<std::size_t>(i)] =
            (1.0 + theta_a[static_cast<std::size_t>(i)]) * u[static_cast<std::size_t>(i)];
    SpectralField t_hat = mean_free_antiderivative(forward_transform(prod, band));
    t_hat.add_coeff(0, complex{params.a_rho * std::sin(state.mean_angle), 0.0});
    const auto t_samples = inverse_transform(t_hat, size);

    const auto u_alpha = inverse_transform(derivative(forward_transform(u, band), 1), size);
    std::vector<double> vt(static_cast<std::size_t>(size));
    const double pref = two_pi / l;
    for (int i = 0; i < size; ++i)
        vt[static_cast<std::size_t>(i)] =
            pref * (u_alpha[static_cast<std::size_t>(i)] +
                    t_samples[static_cast<std::size_t>(i)] *
                        (1.0 + theta_a[static_cast<std::size_t>(i)]));
    SpectralField vt_hat = forward_transform(vt, band);

    RhsResult out;
    out.omega_iters = omega_iters;
    out.dmean = vt_hat.coeff(0).real();
    out.dtheta = resize_band(vt_hat, n);
    out.dtheta.set_coeff(0, complex{});
    // z_t(0) = U(0) n(0) + T(0) tau(0); alpha = 0 is grid index size/2.
    const int i0 = size / 2;
    const complex tau0 = curve.e_main(i0);
    out.dbase = u[static_cast<std::size_t>(i0)] * complex{0.0, 1.0} * tau0 +
                t_samples[static_cast<std::size_t>(i0)] * tau0;
    return out;
}

} // namespace detail

// vartheta_t = (2pi/L)(U_alpha + T (1 + vartheta_alpha)) with U, T from the
// converged vorticity; L is taken from the state as-is (callers freeze or
// recompute it).
inline RhsResult full_rhs(const BubbleState& state, const PhysicalParams& params,
                          double omega_tol = 1e-12, int omega_max_iter = 200, int grid = 0) {
    const int n = state.theta.n_modes();
    const int size = grid > 0 ? grid : default_contour_grid(n);
    const int band = size / 2 - 1;
    const double l = state.length;

    const detail::CurveSamples curve(state, size);
    const detail::BrKernel kernel(curve);
    const detail::BrKernel* kp = params.a_mu == 0.0 ? nullptr : &kernel;
    auto vw = detail::solve_vorticity_impl(curve, kp, state, params, omega_tol, omega_max_iter);
    const auto br = kernel.apply(vw.omega_offset);
    return detail::assemble_rhs(state, params, curve, br, vw.iterations, n, size, band, l);
}

namespace detail {

struct StepResult {
    BubbleState state;
    int omega_iters = 0;
};

// One IMEX step. The diagonal stiff rate lambda_k = A_sigma (2pi/L)^3 k(k^2-1)
// is integrated exactly (or by diagonal backward Euler); everything else is
// advanced by explicit two-stage midpoint. L is frozen across the step and
// recomputed from the volume identity afterwards.
inline StepResult step_impl(const BubbleState& state, const PhysicalParams& params,
                            const SolverConfig& config, double dt) {
    const int n = state.theta.n_modes();
    const double l = state.length;
    const double lam_scale = params.a_sigma * std::pow(two_pi / l, 3);
    std::vector<double> lam(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 1; k <= n; ++k)
        lam[static_cast<std::size_t>(k)] =
            lam_scale * k * (static_cast<double>(k) * k - 1.0);

    const RhsResult r1 = full_rhs(state, params, config.omega_tol, config.omega_max_iter);

    BubbleState half = state;
    half.time = state.time + 0.5 * dt;
    half.mean_angle = state.mean_angle + 0.5 * dt * r1.dmean;
    half.base_point = state.base_point + 0.5 * dt * r1.dbase;
    for (int k = 1; k <= n; ++k) {
        const complex g1 = r1.dtheta.coeff(k) + lam[static_cast<std::size_t>(k)] * state.theta.coeff(k);
        const complex pred = state.theta.coeff(k) + 0.5 * dt * g1;
        if (config.imex_mode == ImexMode::integrating_factor)
            half.theta.set_coeff(k, std::exp(-lam[static_cast<std::size_t>(k)] * 0.5 * dt) * pred);
        else
            half.theta.set_coeff(k, pred / (1.0 + lam[static_cast<std::size_t>(k)] * 0.5 * dt));
    }

    const RhsResult r2 = full_rhs(half, params, config.omega_tol, config.omega_max_iter);

    BubbleState next = state;
    next.time = state.time + dt;
    next.mean_angle = state.mean_angle + dt * r2.dmean;
    next.base_point = state.base_point + dt * r2.dbase;
    for (int k = 1; k <= n; ++k) {
        const complex g2 = r2.dtheta.coeff(k) + lam[static_cast<std::size_t>(k)] * half.theta.coeff(k);
        if (config.imex_mode == ImexMode::integrating_factor)
            next.theta.set_coeff(k, std::exp(-lam[static_cast<std::size_t>(k)] * dt) * state.theta.coeff(k) +
                                        dt * std::exp(-lam[static_cast<std::size_t>(k)] * 0.5 * dt) * g2);
        else
            next.theta.set_coeff(k, (state.theta.coeff(k) + dt * g2) /
                                        (1.0 + lam[static_cast<std::size_t>(k)] * dt));
    }
    next.theta.set_coeff(0, complex{});

    if (config.project_constraint) {
        ConstraintProblem p;
        p.theta_tilde = next.theta;
        p.theta_tilde.set_coeff(1, complex{});
        p.radius_r = 0.99 * constraint_radius_limit();
        const auto sol = solve_first_modes(p);
        next.theta = assemble_theta(p, sol);
    }

    next.length = length_from_theta(next.theta, next.mean_angle, params.radius);
    return {std::move(next), r2.omega_iters};
}

} // namespace detail

inline BubbleState step(const BubbleState& state, const PhysicalParams& params,
                        const SolverConfig& config) {
    config.validate();
    const double dt = config.dt > 0.0 ? config.dt : default_dt(params, config.n_modes);
    return detail::step_impl(state, params, config, dt).state;
}

struct TrajectoryPoint {
    double t = 0.0;
    double norm_f01 = 0.0;     // ||theta||_{F^{0,1}}
    double norm_f121 = 0.0;    // ||theta||_{F^{1/2,1}}
    double norm_f121_nu = 0.0; // ||theta||_{F^{1/2,1}_nu} with nu(t) = nu0 t/(1+t)
    double length = 0.0;
    double mean_angle = 0.0;
    complex base_point{};
    double area = 0.0;
    double constraint_res = 0.0; // |constraint residual|
    int omega_iters = 0;
};

struct TrajectoryRecord {
    std::vector<TrajectoryPoint> points;
    std::vector<SpectralField> theta_snapshots; // parallel to points
    double nu0 = 0.0;
    bool aborted = false;
    std::string abort_reason;
};

namespace detail {

inline TrajectoryPoint make_point(const BubbleState& state, double nu0, int omega_iters) {
    TrajectoryPoint p;
    p.t = state.time;
    p.norm_f01 = wiener_norm(state.theta, 0.0);
    p.norm_f121 = wiener_norm(state.theta, 0.5);
    p.norm_f121_nu = wiener_norm(state.theta, 0.5, AnalyticWeight{nu0, state.time});
    p.length = state.length;
    p.mean_angle = state.mean_angle;
    p.base_point = state.base_point;
    p.area = enclosed_area(state);
    p.constraint_res = std::abs(constraint_residual(state));
    p.omega_iters = omega_iters;
    return p;
}

} // namespace detail

// Steps to t_end recording every record_every steps; on an admissibility
// failure the partial record is returned with the abort flag set.
inline TrajectoryRecord run(const BubbleState& initial, const PhysicalParams& params,
                            const SolverConfig& config) {
    config.validate();
    params.validate();
    BubbleState state = initial;
    state.validate();
    if (state.theta.n_modes() != config.n_modes)
        state.theta = resize_band(state.theta, config.n_modes);

    TrajectoryRecord rec;
    rec.nu0 = config.nu0;
    const double dt0 = config.dt > 0.0 ? config.dt : default_dt(params, config.n_modes);
    const long steps = std::max(1L, static_cast<long>(std::ceil(config.t_end / dt0 - 1e-12)));
    const double dt = config.t_end / static_cast<double>(steps);

    try {
        state.length = length_from_theta(state.theta, state.mean_angle, params.radius);
        rec.points.push_back(detail::make_point(state, config.nu0, 0));
        rec.theta_snapshots.push_back(state.theta);
        for (long i = 1; i <= steps; ++i) {
            auto res = detail::step_impl(state, params, config, dt);
            state = std::move(res.state);
            if (i % config.record_every == 0 || i == steps) {
                rec.points.push_back(detail::make_point(state, config.nu0, res.omega_iters));
                rec.theta_snapshots.push_back(state.theta);
            }
        }
    } catch (const AdmissibilityError& e) {
        rec.aborted = true;
        rec.abort_reason = e.what();
    }
    return rec;
}

struct DecayFit {
    double rate = 0.0;
    double r_squared = 0.0;
};

// Least-squares slope of log ||theta||_{F^{1/2,1}} over [t_a, t_b]; the rate
// is reported positive for decay.
inline DecayFit fit_decay(const TrajectoryRecord& rec, double t_a, double t_b) {
    std::vector<double> ts, ys;
    for (const auto& p : rec.points) {
        if (p.t < t_a || p.t > t_b)
            continue;
        if (!(p.norm_f121 > 0.0))
            throw std::invalid_argument("fit_decay: nonpositive norm inside the window");
        ts.push_back(p.t);
        ys.push_back(std::log(p.norm_f121));
    }
    if (ts.size() < 2)
        throw std::invalid_argument("fit_decay: window contains fewer than two records");
    const LineFit f = fit_line(ts, ys);
    return {-f.slope, f.r_squared};
}

// nu-weighted norm series recomputed from the stored spectra, allowing a
// different nu0 than the one used during the run.
inline std::vector<double> analytic_norm_series(const TrajectoryRecord& rec, double nu0) {
    std::vector<double> out;
    out.reserve(rec.points.size());
    for (std::size_t i = 0; i < rec.points.size(); ++i)
        out.push_back(wiener_norm(rec.theta_snapshots[i], 0.5,
                                  AnalyticWeight{nu0, rec.points[i].t}));
    return out;
}

} // namespace muskat
