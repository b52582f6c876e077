#pragma once

// Acceptance suites: each criterion is an executable check that prints one
// pass/fail line with the measured value and its pinned tolerance. The same
// suites back the `verify` CLI subcommand and the acceptance test binary.

#include <atomic>
#include <cstdio>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "muskat/constraint.hpp"
#include "muskat/contour.hpp"
#include "muskat/diagonal.hpp"
#include "muskat/evolution.hpp"
#include "muskat/geometry.hpp"
#include "muskat/io.hpp"
#include "muskat/linear.hpp"

namespace muskat::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass)
                return false;
        return !checks.empty();
    }
};

namespace detail {

inline std::string meas(double value, double tol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "measured %.6e, tolerance %.6e", value, tol);
    return buf;
}

inline std::string meas_range(double value, double lo, double hi) {
    char buf[112];
    std::snprintf(buf, sizeof buf, "measured %.6f, required [%.6f, %.6f]", value, lo, hi);
    return buf;
}

template <class Fn>
inline void parallel_cases(int jobs, int count, Fn body) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(jobs, count);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                body(i);
        });
    for (auto& t : pool)
        t.join();
}

// ---------------------------------------------------------------------------
// Criterion 1: closed-form integrals vs adaptive quadrature.
// ---------------------------------------------------------------------------

inline SuiteResult suite_integrals(std::uint64_t, int jobs) {
    SuiteResult out;
    out.suite = "integrals";
    std::vector<double> errs1(65, 0.0), errs2(65, 0.0);
    std::vector<int> ks;
    for (int k = -32; k <= 32; ++k)
        if (k != 0)
            ks.push_back(k);
    parallel_cases(jobs, static_cast<int>(ks.size()), [&](int i) {
        const int k = ks[static_cast<std::size_t>(i)];
        errs1[static_cast<std::size_t>(i)] = std::abs(integral_i_quadrature(1, k) - integral_i1(k));
        errs2[static_cast<std::size_t>(i)] = std::abs(integral_i_quadrature(2, k) - integral_i2(k));
    });
    double w1 = 0.0, w2 = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        w1 = std::max(w1, errs1[i]);
        w2 = std::max(w2, errs2[i]);
    }
    out.checks.push_back({"I1 closed form vs quadrature, 1<=|k|<=32", w1 < 1e-9, meas(w1, 1e-9)});
    out.checks.push_back({"I2 closed form vs quadrature, 1<=|k|<=32", w2 < 1e-9, meas(w2, 1e-9)});
    const double e12 = std::abs(integral_i_quadrature(1, 2) - pi * (0.5 - std::log(4.0)));
    const double e22 = std::abs(integral_i_quadrature(2, 2) - pi * (std::log(4.0) - 1.5));
    out.checks.push_back({"I1(2) = pi(1/2 - log 4)", e12 < 1e-9, meas(e12, 1e-9)});
    out.checks.push_back({"I2(2) = pi(log 4 - 3/2)", e22 < 1e-9, meas(e22, 1e-9)});
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 2: circles are steady states rising at A_rho.
// ---------------------------------------------------------------------------

inline SuiteResult suite_steady_state(std::uint64_t, int jobs) {
    SuiteResult out;
    out.suite = "steady-state";
    const std::vector<double> mus = {-0.5, 0.0, 0.5};
    const std::vector<double> rhos = {-1.0, 0.0, 1.0};
    std::vector<double> dn(9, 0.0), dv(9, 0.0);
    parallel_cases(jobs, 9, [&](int i) {
        PhysicalParams p{mus[static_cast<std::size_t>(i / 3)], 1.0,
                         rhos[static_cast<std::size_t>(i % 3)], 1.0};
        BubbleState s;
        s.theta = SpectralField(128);
        s.mean_angle = 0.25;
        s.length = two_pi;
        const auto rhs = full_rhs(s, p);
        dn[static_cast<std::size_t>(i)] = wiener_norm(rhs.dtheta, 0.0);
        dv[static_cast<std::size_t>(i)] = std::abs(rhs.dbase - complex{0.0, p.a_rho});
    });
    double wn = 0.0, wv = 0.0;
    for (int i = 0; i < 9; ++i) {
        wn = std::max(wn, dn[static_cast<std::size_t>(i)]);
        wv = std::max(wv, dv[static_cast<std::size_t>(i)]);
    }
    out.checks.push_back(
        {"||dtheta/dt|| over 3x3 (A_mu, A_rho) grid at theta=0", wn < 1e-10, meas(wn, 1e-10)});
    out.checks.push_back({"dz(0)/dt = i A_rho over the grid", wv < 1e-10, meas(wv, 1e-10)});
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 3: the linearization is the O(eps) limit of the full system.
// ---------------------------------------------------------------------------

inline SuiteResult suite_linearization(std::uint64_t, int jobs) {
    SuiteResult out;
    out.suite = "linearization";
    PhysicalParams p{0.3, 1.0, 1.0, 1.0};
    const std::vector<double> eps = {1e-2, 1e-3, 1e-4};
    const std::vector<int> modes = {2, 3, 5};
    std::vector<LinearizationReport> reps(modes.size());
    parallel_cases(jobs, static_cast<int>(modes.size()), [&](int i) {
        reps[static_cast<std::size_t>(i)] =
            verify_linearization(p, 0.0, modes[static_cast<std::size_t>(i)], eps, 24);
    });
    const double c_bound = 300.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto& r = reps[i];
        bool bounded = true;
        double worst_ratio = 0.0;
        for (const auto& cse : r.cases) {
            worst_ratio = std::max(worst_ratio, cse.err / cse.eps);
            bounded = bounded && cse.err <= c_bound * cse.eps;
        }
        char nm[64];
        std::snprintf(nm, sizeof nm, "mode %d remainder |RHS/eps - Lhat| <= C eps",
                      modes[i]);
        out.checks.push_back({nm, bounded, meas(worst_ratio, c_bound)});
        std::snprintf(nm, sizeof nm, "mode %d fitted slope in [0.8, 1.2]", modes[i]);
        out.checks.push_back({nm, r.fitted_slope > 0.8 && r.fitted_slope < 1.2,
                              meas_range(r.fitted_slope, 0.8, 1.2)});
    }
    // k=2 anomaly coefficient to three significant digits via Richardson
    const auto measure = [&](double e) {
        SpectralField theta(24);
        theta.set_coeff(1, complex{e, 0.0});
        BubbleState st;
        st.theta = theta;
        st.length = two_pi;
        return full_rhs(st, p, 1e-12, 200, 192).dtheta.coeff(2) / e;
    };
    const complex rich = (10.0 * measure(1e-4) - measure(1e-3)) / 9.0;
    const double expected = (1.0 - p.a_mu) * p.a_rho * 1.5 * (0.75 - std::log(2.0));
    const double rel = std::abs(rich - complex{expected, 0.0}) / std::abs(expected);
    out.checks.push_back({"k=2 anomaly coefficient (1-A_mu)A_rho(3/2)(3/4-log2) to 3 digits",
                          rel < 5e-4, meas(rel, 5e-4)});
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 4: diagonalization residuals and l1 norms on the parameter grid.
// ---------------------------------------------------------------------------

inline SuiteResult suite_diagonalization(std::uint64_t, int jobs) {
    SuiteResult out;
    out.suite = "diagonalization";
    const std::vector<double> mus = {-0.9, 0.0, 0.9};
    const std::vector<double> xs = {0.1, 1.0, 5.0};
    std::vector<double> inv(9, 0.0), diag(9, 0.0), excess(9, -1.0);
    parallel_cases(jobs, 9, [&](int i) {
        PhysicalParams p;
        p.a_mu = mus[static_cast<std::size_t>(i / 3)];
        p.a_sigma = 1.0;
        p.a_rho = xs[static_cast<std::size_t>(i % 3)];
        p.radius = 1.0;
        const auto c = make_coefficients(p, 0.4, 64);
        const auto t = build_transform(c, 64);
        inv[static_cast<std::size_t>(i)] = verify_inverse(t);
        diag[static_cast<std::size_t>(i)] = verify_diagonalizes(t, c);
        const auto norms = t.l1_norms();
        excess[static_cast<std::size_t>(i)] =
            std::max(norms.s, norms.s_inv) - cs_bound(p);
    });
    double wi = 0.0, wd = 0.0, we = -1e300;
    for (int i = 0; i < 9; ++i) {
        wi = std::max(wi, inv[static_cast<std::size_t>(i)]);
        wd = std::max(wd, diag[static_cast<std::size_t>(i)]);
        we = std::max(we, excess[static_cast<std::size_t>(i)]);
    }
    out.checks.push_back({"S S^-1 - I interior residual at N=64", wi < 1e-12, meas(wi, 1e-12)});
    out.checks.push_back(
        {"S^-1 M S - diag(-a) interior residual at N=64", wd < 1e-11, meas(wd, 1e-11)});
    out.checks.push_back({"l1 norms of S, S^-1 bounded by C_S (max excess <= 0)", we <= 1e-12,
                          meas(we, 0.0)});
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 5: constraint solver on seeded random admissible data.
// ---------------------------------------------------------------------------

inline SuiteResult suite_constraint(std::uint64_t seed, int jobs) {
    SuiteResult out;
    out.suite = "constraint";
    const int cases = 100;
    const double r = 0.1;
    const double cir = ci_constant(r) * r;
    std::vector<int> iters(cases, 0);
    std::vector<double> resid(cases, 0.0), slack(cases, 0.0);
    parallel_cases(jobs, cases, [&](int i) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::uniform_real_distribution<double> amp(0.005, 0.08);
        ConstraintProblem p;
        p.theta_tilde = SpectralField(16);
        for (int k = 2; k <= 16; ++k)
            p.theta_tilde.set_coeff(k, complex{u(rng), u(rng)} / static_cast<double>(k));
        const double target = amp(rng);
        const double have = wiener_norm(p.theta_tilde, 0.0);
        for (int k = 2; k <= 16; ++k)
            p.theta_tilde.set_coeff(k, p.theta_tilde.coeff(k) * (target / have));
        p.radius_r = r;
        const auto s = solve_first_modes(p, 1e-13, 100);
        iters[static_cast<std::size_t>(i)] = s.iterations;
        BubbleState st;
        st.theta = assemble_theta(p, s);
        st.length = length_from_theta(st.theta, 0.0, 1.0);
        resid[static_cast<std::size_t>(i)] = std::abs(constraint_residual(st));
        slack[static_cast<std::size_t>(i)] =
            2.0 * std::abs(st.theta.coeff(1)) - cir * wiener_norm(p.theta_tilde, 0.0);
    });
    int wi = 0;
    double wr = 0.0, ws = -1e300;
    for (int i = 0; i < cases; ++i) {
        wi = std::max(wi, iters[static_cast<std::size_t>(i)]);
        wr = std::max(wr, resid[static_cast<std::size_t>(i)]);
        ws = std::max(ws, slack[static_cast<std::size_t>(i)]);
    }
    out.checks.push_back({"convergence within 30 iterations on 100 seeded problems", wi <= 30,
                          meas(static_cast<double>(wi), 30.0)});
    out.checks.push_back({"assembled constraint residual", wr < 1e-12, meas(wr, 1e-12)});
    out.checks.push_back({"frequency relation |theta(1)|+|theta(-1)| <= C_I(r) r sum_{|k|>=2}",
                          ws <= 0.0, meas(ws, 0.0)});
    return out;
}

// ---------------------------------------------------------------------------
// Criteria 6 and 7 share one production-scale run.
// ---------------------------------------------------------------------------

struct AcceptanceRun {
    PhysicalParams params{0.3, 1.0, 1.0, 1.0};
    SolverConfig config;
    TrajectoryRecord record;
};

inline const AcceptanceRun& acceptance_run() {
    static const AcceptanceRun shared = [] {
        AcceptanceRun r;
        r.config.n_modes = 128;
        r.config.t_end = 2.0; // 2 R^3 / A_sigma
        r.config.nu0 = 0.05;
        r.config.record_every = 16;
        SpectralField theta(128);
        theta.set_coeff(2, complex{0.05, 0.0});
        BubbleState s;
        s.theta = theta;
        s.length = length_from_theta(theta, 0.0, r.params.radius);
        r.record = run(s, r.params, r.config);
        return r;
    }();
    return shared;
}

inline SuiteResult suite_conservation(std::uint64_t, int) {
    SuiteResult out;
    out.suite = "conservation";
    const auto& ar = acceptance_run();
    const auto& rec = ar.record;
    out.checks.push_back({"run completed without admissibility failure", !rec.aborted,
                          rec.aborted ? rec.abort_reason : "ok"});
    if (rec.aborted)
        return out;
    const double area0 = pi * ar.params.radius * ar.params.radius;
    double drift = 0.0, resid = 0.0, env_violation = -1e300;
    for (const auto& p : rec.points) {
        drift = std::max(drift, std::abs(p.area - area0) / area0);
        resid = std::max(resid, p.constraint_res);
        const auto env = length_envelope(p.norm_f121, ar.params.radius);
        env_violation = std::max(env_violation,
                                 std::max(env.lower - p.length, p.length - env.upper));
    }
    out.checks.push_back({"relative area drift", drift < 1e-7, meas(drift, 1e-7)});
    out.checks.push_back(
        {"constraint residual without projection", resid < 1e-6, meas(resid, 1e-6)});
    out.checks.push_back({"length inside the two-sided envelope (max violation <= 0)",
                          env_violation <= 0.0, meas(env_violation, 0.0)});
    return out;
}

inline SuiteResult suite_decay(std::uint64_t, int) {
    SuiteResult out;
    out.suite = "decay";
    const auto& ar = acceptance_run();
    const auto& rec = ar.record;
    out.checks.push_back({"run completed without admissibility failure", !rec.aborted,
                          rec.aborted ? rec.abort_reason : "ok"});
    if (rec.aborted)
        return out;

    bool monotone = true;
    double prev = 1e300;
    for (const auto& p : rec.points) {
        if (p.t < 0.1 || p.t > 1.5)
            continue;
        monotone = monotone && (p.norm_f121 < prev);
        prev = p.norm_f121;
    }
    out.checks.push_back({"||theta||_{F^{1/2,1}} monotone on [0.1, 1.5]", monotone,
                          monotone ? "monotone" : "non-monotone segment found"});

    const auto fit = fit_decay(rec, 0.25, 1.25);
    const double a2 = 6.0 * ar.params.a_sigma / std::pow(ar.params.radius, 3);
    out.checks.push_back({"fitted decay rate within 25% of a(2) = 6 A_sigma/R^3",
                          std::abs(fit.rate - a2) < 0.25 * a2,
                          meas_range(fit.rate, 0.75 * a2, 1.25 * a2)});

    const double l_err = std::abs(rec.points.back().length - two_pi * ar.params.radius);
    out.checks.push_back(
        {"L(t_end) within 1e-3 R of 2 pi R", l_err < 1e-3 * ar.params.radius,
         meas(l_err, 1e-3 * ar.params.radius)});

    const auto& pa = rec.points[rec.points.size() - 2];
    const auto& pb = rec.points.back();
    const double vel = (pb.base_point.imag() - pa.base_point.imag()) / (pb.t - pa.t);
    out.checks.push_back({"late-time vertical velocity within 1% of A_rho",
                          std::abs(vel - ar.params.a_rho) < 0.01 * std::abs(ar.params.a_rho),
                          meas_range(vel, 0.99 * ar.params.a_rho, 1.01 * ar.params.a_rho)});

    const auto series = analytic_norm_series(rec, 0.05);
    const double bound = 1.5 * rec.points.front().norm_f121;
    double worst = 0.0;
    for (double v : series)
        worst = std::max(worst, v);
    out.checks.push_back({"nu-weighted norm bounded by 1.5 ||theta_0||_{F^{1/2,1}}",
                          worst <= bound, meas(worst, bound)});
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 8: multiplier form of R against direct quadrature, and the
// Fourier entries of Im R / Re R applied to sin(alpha + thetahat0).
// ---------------------------------------------------------------------------

inline SuiteResult suite_r_operator(std::uint64_t seed, int jobs) {
    SuiteResult out;
    out.suite = "r-operator";
    const int cases = 20;
    std::vector<double> errs(cases, 0.0);
    parallel_cases(jobs, cases, [&](int i) {
        std::mt19937_64 rng(seed + 1000 + static_cast<std::uint64_t>(i));
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        SpectralField theta(8), f(8);
        for (int k = 1; k <= 8; ++k) {
            theta.set_coeff(k, 0.4 / (1.0 + k * k) * complex{u(rng), u(rng)});
            f.set_coeff(k, complex{u(rng), u(rng)} / (1.0 + k));
        }
        RMultiplier table(16);
        const auto rm = apply_r(theta, f, table);
        const auto rq = apply_r_quadrature(theta, f);
        double worst = 0.0;
        for (int k = -8; k <= 8; ++k)
            worst = std::max(worst, std::abs(rm.coeff(k) - rq.coeff(k)));
        errs[static_cast<std::size_t>(i)] = worst;
    });
    double we = 0.0;
    for (double e : errs)
        we = std::max(we, e);
    out.checks.push_back(
        {"multiplier path vs PV quadrature on 20 seeded pairs", we < 1e-8, meas(we, 1e-8)});

    // closed-form Fourier entries for k in {1,2,3,4}
    std::mt19937_64 rng(seed + 7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst_entries = 0.0;
    for (double ang : {0.0, 0.7}) {
        SpectralField theta(8);
        for (int k = 1; k <= 8; ++k)
            theta.set_coeff(k, 0.3 / (1.0 + k * k) * complex{u(rng), u(rng)});
        SpectralField f(8);
        f.set_coeff(1, std::polar(1.0, ang) / complex{0.0, 2.0}); // sin(alpha+ang)
        RMultiplier table(16);
        const auto r = apply_r(theta, f, table);
        const auto im_r = imag_part(r, 6);
        const auto re_r = real_part(r, 6);
        const complex ep = std::polar(1.0, ang);
        const complex em = std::polar(1.0, -ang);
        for (int k = 1; k <= 4; ++k) {
            complex expect_im = em / two_pi * theta.coeff(k + 1) * (-k * pi / (2.0 + k));
            const double i1_term = (k == 2) ? pi * (0.5 - std::log(4.0)) : -pi;
            expect_im -= ep / two_pi * theta.coeff(k - 1) * i1_term;
            worst_entries = std::max(worst_entries, std::abs(im_r.coeff(k) - expect_im));
            complex expect_re =
                complex{0.0, 1.0} * em / two_pi * theta.coeff(k + 1) * (two_pi / (2.0 + k));
            if (k == 2)
                expect_re -=
                    complex{0.0, 1.0} * ep / two_pi * theta.coeff(1) * pi * (std::log(4.0) - 1.5);
            worst_entries = std::max(worst_entries, std::abs(re_r.coeff(k) - expect_re));
        }
    }
    out.checks.push_back({"Fourier entries of Im R, Re R for k in {1,2,3,4}",
                          worst_entries < 1e-9, meas(worst_entries, 1e-9)});
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 9: determinism of seeded pipelines.
// ---------------------------------------------------------------------------

inline std::string render_suite(const SuiteResult& r);

inline SuiteResult suite_determinism(std::uint64_t seed, int jobs) {
    SuiteResult out;
    out.suite = "determinism";

    const auto simulate_once = [&] {
        PhysicalParams p{0.3, 1.0, 1.0, 1.0};
        SolverConfig cfg;
        cfg.n_modes = 16;
        cfg.t_end = 0.05;
        cfg.nu0 = 0.05;
        SpectralField theta(16);
        theta.set_coeff(2, complex{0.04, 0.0});
        BubbleState s;
        s.theta = theta;
        s.length = length_from_theta(theta, 0.0, 1.0);
        const auto rec = run(s, p, cfg);
        return trajectory_to_csv(rec) + trajectory_to_json(rec).dump();
    };
    const bool csv_same = simulate_once() == simulate_once();
    out.checks.push_back({"simulate pipeline is byte-identical across runs", csv_same,
                          csv_same ? "identical" : "outputs differ"});

    const bool suite_same = render_suite(suite_constraint(seed, jobs)) ==
                            render_suite(suite_constraint(seed, jobs));
    out.checks.push_back({"seeded verify suite reports are byte-identical", suite_same,
                          suite_same ? "identical" : "reports differ"});
    return out;
}

inline std::string render_suite(const SuiteResult& r) {
    std::string s;
    for (const auto& c : r.checks) {
        s += c.pass ? "PASS " : "FAIL ";
        s += r.suite + ": " + c.name + " (" + c.detail + ")\n";
    }
    return s;
}

} // namespace detail

inline std::vector<std::string> suite_names() {
    return {"integrals",    "steady-state", "linearization", "diagonalization", "constraint",
            "conservation", "decay",        "r-operator",    "determinism"};
}

inline SuiteResult run_suite(const std::string& name, std::uint64_t seed = 12345, int jobs = 1) {
    if (name == "integrals")
        return detail::suite_integrals(seed, jobs);
    if (name == "steady-state")
        return detail::suite_steady_state(seed, jobs);
    if (name == "linearization")
        return detail::suite_linearization(seed, jobs);
    if (name == "diagonalization")
        return detail::suite_diagonalization(seed, jobs);
    if (name == "constraint")
        return detail::suite_constraint(seed, jobs);
    if (name == "conservation")
        return detail::suite_conservation(seed, jobs);
    if (name == "decay")
        return detail::suite_decay(seed, jobs);
    if (name == "r-operator")
        return detail::suite_r_operator(seed, jobs);
    if (name == "determinism")
        return detail::suite_determinism(seed, jobs);
    throw std::invalid_argument("unknown verify suite '" + name + "'");
}

inline std::string render(const SuiteResult& r) { return detail::render_suite(r); }

} // namespace muskat::verify
