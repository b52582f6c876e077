#pragma once

// Nonlocal velocity machinery on the interface: the Birkhoff-Rott integral
// evaluated by the alternating-point trapezoidal rule, the induced normal and
// tangential velocities, the D operator, the Picard solve of the implicit
// vorticity identity, and the Fourier-multiplier form of the R operator used
// for cross-validation.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "muskat/geometry.hpp"
#include "muskat/spectral.hpp"

namespace muskat {

// Vorticity strength on the interface; its mean vanishes because omega is an
// exact derivative.
struct VorticityField {
    SpectralField omega;

    VorticityField() = default;
    explicit VorticityField(SpectralField w) : omega(std::move(w)) {
        omega.set_coeff(0, complex{0.0, 0.0});
    }
};

namespace detail {

// Precomputed curve samples shared by one state's Birkhoff-Rott evaluations.
// Targets live on the even half-grid points, sources on the odd ones, so the
// principal value at beta = 0 sits exactly between source points.
struct CurveSamples {
    int size = 0;           // main grid points (targets)
    double h = 0.0;         // main grid spacing
    double scale = 0.0;     // L/2pi
    complex base{};
    complex e0{};                    // mean of E = e^{i(alpha+thetahat0+theta)}
    std::vector<complex> e_half;     // E on the 2*size half-grid
    std::vector<complex> ae_half;    // mean-free antiderivative of E, half-grid
    std::vector<complex> z_ext;      // curve points for index m in [-2size, 2size)

    CurveSamples(const BubbleState& state, int grid_size) {
        size = grid_size;
        if (size < 8 || size % 2 != 0)
            throw std::invalid_argument("CurveSamples: grid size must be even and >= 8");
        h = two_pi / size;
        scale = state.length / two_pi;
        base = state.base_point;
        const int half = 2 * size;
        const int band = std::min(half / 2 - 1, 2 * state.theta.n_modes() + 32);
        const ComplexSpectrum e = tangent_spectrum(state.theta, state.mean_angle, half, band);
        e0 = e.coeff(0);
        e_half = inverse_transform_complex(e, half);
        ae_half = inverse_transform_complex(mean_free_antiderivative(e), half);
        // z(x) = base + scale*(A_E(x) + x*e0); the linear term uses the
        // unwrapped coordinate so the formula stays exact when the constraint
        // residual (and hence e0) is nonzero. Index m covers [-half, 2*half)
        // so source windows centered at any target stay in range.
        z_ext.assign(static_cast<std::size_t>(3 * half), complex{});
        for (int m = -half; m < 2 * half; ++m) {
            const int mm = (m % half + half) % half;
            const double x = -pi + m * (0.5 * h);
            z_ext[static_cast<std::size_t>(m + half)] =
                base + scale * (ae_half[static_cast<std::size_t>(mm)] + x * e0);
        }
    }

    complex z_at(int m) const { return z_ext[static_cast<std::size_t>(m + 2 * size)]; }
    complex e_main(int i) const { return e_half[static_cast<std::size_t>(2 * i)]; }
};

// Quadrature weights 1/(z(alpha_i) - z(alpha_i - beta_j)) cached across the
// Picard sweeps of one vorticity solve. The offset sources beta_j =
// -pi + (j+1/2)h keep the window centered on the target so the principal
// value cancels in symmetric pairs even when the curve does not close.
struct BrKernel {
    int size = 0;
    double prefactor_h = 0.0;
    std::vector<complex> weight; // row-major, size x size

    explicit BrKernel(const CurveSamples& c) {
        size = c.size;
        prefactor_h = c.h;
        weight.resize(static_cast<std::size_t>(size) * static_cast<std::size_t>(size));
        const double thr2 = 1e-16 * c.scale * c.scale;
        for (int i = 0; i < size; ++i) {
            const complex zi = c.z_at(2 * i);
            for (int j = 0; j < size; ++j) {
                // source coordinate alpha_i - beta_j = half-grid index
                // 2(i-j) - 1 + size
                const complex d = zi - c.z_at(2 * (i - j) - 1 + size);
                if (std::norm(d) < thr2)
                    throw AdmissibilityError("birkhoff_rott: near self-intersection of the curve");
                weight[static_cast<std::size_t>(i) * size + j] = 1.0 / d;
            }
        }
    }

    // conj(BR)(alpha_i) = (1/2pi i) sum_j h * omega(alpha_i - beta_j) / dz,
    // with omega sampled on the offset source grid x_l = -pi + (l+1/2) h.
    std::vector<complex> apply(const std::vector<double>& omega_offset) const {
        std::vector<complex> out(static_cast<std::size_t>(size));
        const int half = 2 * size;
        const complex pref = prefactor_h / complex{0.0, two_pi};
        for (int i = 0; i < size; ++i) {
            complex acc{};
            const complex* row = &weight[static_cast<std::size_t>(i) * size];
            int m = ((2 * i - 1 + size) % half + half) % half;
            int l = (m - 1) / 2;
            for (int j = 0; j < size; ++j) {
                acc += omega_offset[static_cast<std::size_t>(l)] * row[j];
                if (--l < 0)
                    l += size;
            }
            out[static_cast<std::size_t>(i)] = pref * acc;
        }
        return out;
    }
};

// Source points alpha = -pi + (l+1/2) h of the offset quadrature grid.
inline std::vector<double> offset_points(int size) {
    auto pts = grid_points(size);
    const double half_h = pi / size;
    for (double& p : pts)
        p += half_h;
    return pts;
}

} // namespace detail

inline int default_contour_grid(int n_modes) { return 4 * std::max(n_modes, 8); }

// Samples of conj(BR)(omega) on the uniform grid of the given size.
inline std::vector<complex> birkhoff_rott(const BubbleState& state, const VorticityField& w,
                                          int grid = 0) {
    const int size = grid > 0 ? grid : default_contour_grid(state.theta.n_modes());
    const detail::CurveSamples curve(state, size);
    const detail::BrKernel kernel(curve);
    return kernel.apply(inverse_transform_at(w.omega, detail::offset_points(size)));
}

// U(alpha) = Re(conj(BR) i e^{i(alpha+vartheta)}).
inline SpectralField normal_velocity(const BubbleState& state, const VorticityField& w,
                                     int grid = 0) {
    const int size = grid > 0 ? grid : default_contour_grid(state.theta.n_modes());
    const detail::CurveSamples curve(state, size);
    const detail::BrKernel kernel(curve);
    const auto br = kernel.apply(inverse_transform_at(w.omega, detail::offset_points(size)));
    std::vector<double> u(br.size());
    for (int i = 0; i < size; ++i)
        u[static_cast<std::size_t>(i)] = -(br[static_cast<std::size_t>(i)] * curve.e_main(i)).imag();
    return forward_transform(u, size / 2 - 1);
}

// D(omega)(alpha) = -Re(conj(BR) e^{i(alpha+vartheta)}).
inline SpectralField d_operator(const BubbleState& state, const VorticityField& w, int grid = 0) {
    const int size = grid > 0 ? grid : default_contour_grid(state.theta.n_modes());
    const detail::CurveSamples curve(state, size);
    const detail::BrKernel kernel(curve);
    const auto br = kernel.apply(inverse_transform_at(w.omega, detail::offset_points(size)));
    std::vector<double> d(br.size());
    for (int i = 0; i < size; ++i)
        d[static_cast<std::size_t>(i)] = -(br[static_cast<std::size_t>(i)] * curve.e_main(i)).real();
    return forward_transform(d, size / 2 - 1);
}

// omega_0 = -A_rho (L/pi) sin(alpha + thetahat(0)).
inline VorticityField omega_zero(const BubbleState& state, const PhysicalParams& params) {
    SpectralField w(std::max(state.theta.n_modes(), 1));
    w.set_coeff(1, complex{0.0, 0.5} * params.a_rho * state.length / pi *
                       std::polar(1.0, state.mean_angle));
    return VorticityField{std::move(w)};
}

struct VorticitySolution {
    VorticityField omega;
    int iterations = 0;
};

namespace detail {

struct VorticityWork {
    SpectralField omega_hat;
    int iterations = 0;
    std::vector<double> omega_offset; // converged samples on the source grid
};

// Picard iteration reusing an already-built curve (and kernel when A_mu != 0).
inline VorticityWork solve_vorticity_impl(const CurveSamples& curve, const BrKernel* kernel,
                                          const BubbleState& state, const PhysicalParams& params,
                                          double tol, int max_iter) {
    const int size = curve.size;
    const int band = size / 2 - 1;
    const double l = state.length;
    SpectralField theta_aa = derivative(resize_band(state.theta, band), 2);
    const auto curv_term = inverse_transform(theta_aa, size);
    std::vector<double> forcing(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i)
        forcing[static_cast<std::size_t>(i)] =
            2.0 * params.a_sigma * (two_pi / l) * curv_term[static_cast<std::size_t>(i)] -
            2.0 * params.a_rho * (l / two_pi) * curve.e_main(i).imag();
    SpectralField omega_hat = forward_transform(forcing, band);
    omega_hat.set_coeff(0, complex{});

    const auto src_points = offset_points(size);
    VorticityWork out;
    if (params.a_mu == 0.0) {
        out.omega_offset = inverse_transform_at(omega_hat, src_points);
        out.omega_hat = std::move(omega_hat);
        out.iterations = 0;
        return out;
    }

    const double mu_factor = 2.0 * params.a_mu * l / two_pi;
    std::vector<double> d(static_cast<std::size_t>(size));
    for (int it = 1; it <= max_iter; ++it) {
        const auto omega_src = inverse_transform_at(omega_hat, src_points);
        const auto br = kernel->apply(omega_src);
        for (int i = 0; i < size; ++i)
            d[static_cast<std::size_t>(i)] =
                forcing[static_cast<std::size_t>(i)] -
                mu_factor * (br[static_cast<std::size_t>(i)] * curve.e_main(i)).real();
        SpectralField next = forward_transform(d, band);
        next.set_coeff(0, complex{});
        CompensatedSum diff;
        for (int k = band; k >= 1; --k)
            diff.add(2.0 * std::abs(next.coeff(k) - omega_hat.coeff(k)));
        omega_hat = std::move(next);
        if (diff.value() < tol) {
            out.omega_offset = inverse_transform_at(omega_hat, src_points);
            out.omega_hat = std::move(omega_hat);
            out.iterations = it;
            return out;
        }
    }
    throw AdmissibilityError("solve_vorticity: Picard iteration did not converge; "
                             "state outside the contractive regime");
}

} // namespace detail

// Picard iteration for the implicit identity
//   omega = 2 A_mu (L/2pi) D(omega) + 2 A_sigma (2pi/L) theta_aa
//           - 2 A_rho (L/2pi) sin(alpha + vartheta),
// started from the forcing terms, with the zero mode cleared each sweep.
// Non-convergence signals a state outside the contractive regime.
inline VorticitySolution solve_vorticity(const BubbleState& state, const PhysicalParams& params,
                                         double tol = 1e-12, int max_iter = 200, int grid = 0) {
    params.validate();
    const int size = grid > 0 ? grid : default_contour_grid(state.theta.n_modes());
    const detail::CurveSamples curve(state, size);
    if (params.a_mu == 0.0) {
        auto work = detail::solve_vorticity_impl(curve, nullptr, state, params, tol, max_iter);
        return {VorticityField{std::move(work.omega_hat)}, work.iterations};
    }
    const detail::BrKernel kernel(curve);
    auto work = detail::solve_vorticity_impl(curve, &kernel, state, params, tol, max_iter);
    return {VorticityField{std::move(work.omega_hat)}, work.iterations};
}

// T(alpha) = int_0^alpha (1+theta_a) U - (alpha/2pi) int (1+theta_a) U + T(0),
// with the frame constant T(0) = A_rho sin(thetahat(0)).
inline SpectralField tangential_velocity(const BubbleState& state, const SpectralField& u,
                                         const PhysicalParams& params) {
    const int n = std::max(u.n_modes(), state.theta.n_modes());
    int size = 2 * (2 * n + 1);
    if (size % 2 != 0)
        ++size;
    const auto us = inverse_transform(resize_band(u, n), size);
    const auto tas = inverse_transform(derivative(resize_band(state.theta, n), 1), size);
    std::vector<double> prod(us.size());
    for (std::size_t j = 0; j < us.size(); ++j)
        prod[j] = (1.0 + tas[j]) * us[j];
    SpectralField t = mean_free_antiderivative(forward_transform(prod, n));
    t.add_coeff(0, complex{params.a_rho * std::sin(state.mean_angle), 0.0});
    return t;
}

// ---------------------------------------------------------------------------
// Fourier multiplier form of R.
// ---------------------------------------------------------------------------

// I(k, k1) for k1 != -1: the indicator sums obtained from the geometric-series
// reduction of the defining principal-value integral.
inline double r_multiplier_sum(int k, int k1) {
    if (k1 == -1)
        throw std::invalid_argument("r_multiplier_sum: k1 = -1 requires quadrature");
    double acc = 0.0;
    if (k1 > -1) {
        for (int r = 0; r <= k1; ++r) {
            const int a = k - k1 + r;
            acc += (a <= 0 ? 1.0 : 0.0) - (a >= 1 ? 1.0 : 0.0);
        }
        return acc / (1 + k1);
    }
    for (int r = 1; r <= -1 - k1; ++r) {
        const int a = k - k1 - r;
        acc += (a <= 0 ? 1.0 : 0.0) - (a >= 1 ? 1.0 : 0.0);
    }
    return -acc / (1 + k1);
}

// Cache of the k1 = -1 values. After symmetrising the defining integral these
// reduce to I(k,-1) = -(1/2pi) int_0^pi beta sin(k beta)/sin^2(beta/2) dbeta,
// a smooth integrand handled by adaptive quadrature.
class RMultiplier {
public:
    explicit RMultiplier(int k_max) : k_max_(k_max), neg1_(static_cast<std::size_t>(k_max) + 1) {
        for (int k = 0; k <= k_max; ++k) {
            const auto f = [k](double b) {
                if (b < 1e-8)
                    return 4.0 * k;
                const double s = std::sin(0.5 * b);
                return b * std::sin(k * b) / (s * s);
            };
            // depth floor resolves the sin(k beta) oscillation before the
            // error estimate is trusted
            const int min_depth = 3 + static_cast<int>(std::ceil(std::log2(k + 2.0)));
            neg1_[static_cast<std::size_t>(k)] =
                -adaptive_simpson(f, 0.0, pi, 1e-13, 48, min_depth) / two_pi;
        }
    }

    int k_max() const { return k_max_; }

    double value(int k, int k1) const {
        if (k1 != -1)
            return r_multiplier_sum(k, k1);
        const int a = std::abs(k);
        if (a > k_max_)
            throw std::out_of_range("RMultiplier: |k| exceeds cached range");
        const double v = neg1_[static_cast<std::size_t>(a)];
        return k >= 0 ? v : -v;
    }

private:
    int k_max_;
    std::vector<double> neg1_;
};

// Multiplier path: Rhat(f)(k) = sum_{k1} fhat(k-k1) thetahat(k1) I(k,k1).
inline ComplexSpectrum apply_r(const SpectralField& theta, const SpectralField& f,
                               const RMultiplier& table) {
    const int n = std::max(theta.n_modes(), f.n_modes());
    ComplexSpectrum out(n);
    for (int k = -n; k <= n; ++k) {
        complex acc{};
        for (int k1 = -theta.n_modes(); k1 <= theta.n_modes(); ++k1) {
            if (std::abs(k - k1) > f.n_modes())
                continue;
            const complex t = theta.coeff(k1);
            if (t == complex{})
                continue;
            acc += f.coeff(k - k1) * t * table.value(k, k1);
        }
        out.set_coeff(k, acc);
    }
    return out;
}

inline ComplexSpectrum apply_r(const BubbleState& state, const SpectralField& f) {
    const int n = std::max(state.theta.n_modes(), f.n_modes());
    RMultiplier table(2 * n);
    return apply_r(state.theta, f, table);
}

// Physical-space evaluation of R, the cross-check twin of the multiplier
// path. With g(beta) = f(a-b) * b^2/(1-e^{-ib})^2 * M(a,b) the operator is
// pv int g(beta)/beta, evaluated by pole subtraction
//   int (g(beta) - g(0))/beta dbeta
// (the 1/beta principal value vanishes on the symmetric interval) and
// composite Gauss-Legendre on [-pi,0], [0,pi]. g is analytic but not
// periodic, so an equispaced rule would lose accuracy here.
inline ComplexSpectrum apply_r_quadrature(const SpectralField& theta, const SpectralField& f,
                                          int targets = 0, int gl_order = 48) {
    const int n = std::max(theta.n_modes(), f.n_modes());
    int size = targets > 0 ? targets : std::max(4 * n + 2, 64);
    if (size % 2 != 0)
        ++size;
    const auto grid_a = grid_points(size);
    const int kt = theta.n_modes();

    // psi_k(beta) = (1 - e^{-i(1+k)beta})/(i(1+k)beta), equal to 1 at k = -1;
    // M(a,b) = sum_k thetahat(k) e^{ika} psi_k(b).
    const auto psi = [](int k, double beta) -> complex {
        if (k == -1)
            return complex{1.0, 0.0};
        const double q = (1.0 + k) * beta;
        if (std::abs(q) < 1e-6)
            return complex{1.0 - q * q / 6.0, -0.5 * q};
        return (1.0 - std::polar(1.0, -q)) / complex{0.0, q};
    };
    // beta^2/(1 - e^{-i beta})^2, smooth on (-2pi, 2pi), -1 at beta = 0.
    const auto b2 = [](double beta) -> complex {
        if (std::abs(beta) < 1e-6)
            return complex{-1.0 + beta * beta * 5.0 / 12.0, -beta};
        const complex den = 1.0 - std::polar(1.0, -beta);
        return beta * beta / (den * den);
    };

    // Panel count scales with the largest oscillation frequency of the
    // integrand so the rule stays in its geometric-convergence regime.
    const GaussRule gl = gauss_legendre(gl_order);
    const int panels_per_side = std::max(2, (2 * n + 4) * 4 / gl_order + 1);
    std::vector<double> beta_nodes, beta_weights;
    for (int p = -panels_per_side; p < panels_per_side; ++p) {
        const double a = pi * p / panels_per_side;
        const double b = pi * (p + 1) / panels_per_side;
        for (int q = 0; q < gl_order; ++q) {
            beta_nodes.push_back(0.5 * (b - a) * gl.nodes[static_cast<std::size_t>(q)] +
                                 0.5 * (a + b));
            beta_weights.push_back(0.5 * (b - a) * gl.weights[static_cast<std::size_t>(q)]);
        }
    }

    const auto f_cs = to_complex_spectrum(resize_band(f, n));
    const auto theta_cs = to_complex_spectrum(theta);
    std::vector<complex> r(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) {
        const double alpha = grid_a[static_cast<std::size_t>(i)];
        const complex g0 = -f_cs.eval(alpha) * theta_cs.eval(alpha);
        complex acc{};
        for (std::size_t q = 0; q < beta_nodes.size(); ++q) {
            const double beta = beta_nodes[q];
            complex m{};
            for (int k = -kt; k <= kt; ++k) {
                const complex t = theta.coeff(k);
                if (t == complex{})
                    continue;
                m += t * std::polar(1.0, k * alpha) * psi(k, beta);
            }
            const complex g = f_cs.eval(alpha - beta) * b2(beta) * m;
            acc += beta_weights[q] * (g - g0) / beta;
        }
        r[static_cast<std::size_t>(i)] = complex{0.0, 1.0} / pi * acc;
    }
    return forward_transform_complex(r, n);
}

} // namespace muskat
