#pragma once

// Physical parameter groups, the bubble state in tangent-angle/length
// variables, and the geometric functionals: curve length from the volume
// identity, enclosed area, curve reconstruction, curvature, and the
// closed-curve constraint residual.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "muskat/spectral.hpp"

namespace muskat {

// Thrown when a state leaves the admissible regime (length denominator
// nonpositive, vorticity iteration divergence, near self-intersection).
class AdmissibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PhysicalParams {
    double a_mu = 0.0;    // viscosity Atwood number, in [-1, 1]
    double a_sigma = 1.0; // surface tension group, length^3/time
    double a_rho = 0.0;   // gravity group, length/time
    double radius = 1.0;  // bubble radius from the conserved area, length

    void validate() const {
        if (std::abs(a_mu) > 1.0)
            throw std::invalid_argument("PhysicalParams: |a_mu| must be <= 1");
        if (!(a_sigma > 0.0))
            throw std::invalid_argument("PhysicalParams: a_sigma must be > 0");
        if (!(radius > 0.0))
            throw std::invalid_argument("PhysicalParams: radius must be > 0");
    }
};

// A_mu = (mu2-mu1)/(mu2+mu1), A_sigma = kappa sigma/(mu2+mu1),
// A_rho = g kappa (rho2-rho1)/(mu2+mu1).
inline PhysicalParams derive_params(double mu1, double mu2, double rho1, double rho2,
                                    double sigma, double kappa, double g, double radius) {
    if (!(mu1 + mu2 > 0.0))
        throw std::invalid_argument("derive_params: mu1 + mu2 must be > 0");
    if (!(sigma > 0.0))
        throw std::invalid_argument("derive_params: sigma must be > 0");
    if (!(kappa > 0.0))
        throw std::invalid_argument("derive_params: kappa must be > 0");
    if (!(radius > 0.0))
        throw std::invalid_argument("derive_params: radius must be > 0");
    PhysicalParams p;
    p.a_mu = (mu2 - mu1) / (mu2 + mu1);
    p.a_sigma = kappa * sigma / (mu2 + mu1);
    p.a_rho = g * kappa * (rho2 - rho1) / (mu2 + mu1);
    p.radius = radius;
    p.validate();
    return p;
}

struct BubbleState {
    double mean_angle = 0.0;   // thetahat(0), radians
    SpectralField theta;       // mean-free tangent-angle perturbation
    double length = two_pi;    // L(t)
    complex base_point{0.0, 0.0}; // tracked point z(0)
    double time = 0.0;

    void validate() const {
        if (std::abs(theta.coeff(0)) != 0.0)
            throw std::invalid_argument("BubbleState: theta must be mean-free");
        if (!(length > 0.0))
            throw std::invalid_argument("BubbleState: length must be positive");
        if (time < 0.0)
            throw std::invalid_argument("BubbleState: time must be >= 0");
    }
};

// Spectrum of E(alpha) = e^{i(alpha + mean_angle + theta(alpha))} sampled on a
// grid of the given size. Shared by the length, area, constraint, and
// Birkhoff-Rott evaluations. The spectrum of E decays at the analytic rate of
// theta, so the band can be capped below the grid Nyquist.
inline ComplexSpectrum tangent_spectrum(const SpectralField& theta, double mean_angle, int size,
                                        int band = 0) {
    const auto th = inverse_transform(theta, size);
    const auto grid = grid_points(size);
    std::vector<complex> e(th.size());
    for (std::size_t j = 0; j < th.size(); ++j)
        e[j] = std::polar(1.0, grid[j] + mean_angle + th[j]);
    if (band <= 0)
        band = size / 2 - 1;
    return forward_transform_complex(e, std::min(band, size / 2 - 1));
}

inline int default_geometry_grid(int n_modes) { return 4 * std::max(n_modes, 8); }

// L from the conserved-volume identity. With Q = e^{i(alpha+theta)} and
// P(alpha) = int_0^alpha conj(Q), this is L = 2 pi R (Im int Q P / 2pi)^{-1/2};
// the double integral is factored into single integrals through the mean-free
// antiderivative. Independent of mean_angle, which cancels between Q and P.
inline double length_from_theta(const SpectralField& theta, double mean_angle, double radius,
                                int grid = 0) {
    (void)mean_angle;
    if (!(radius > 0.0))
        throw std::invalid_argument("length_from_theta: radius must be > 0");
    const int size = grid > 0 ? grid : default_geometry_grid(theta.n_modes());
    const ComplexSpectrum q = tangent_spectrum(theta, 0.0, size);
    // g = conj(Q); ghat(k) = conj(qhat(-k)).
    ComplexSpectrum g(q.max_mode());
    for (int k = -q.max_mode(); k <= q.max_mode(); ++k)
        g.set_coeff(k, std::conj(q.coeff(-k)));
    const ComplexSpectrum ag = mean_free_antiderivative(g);
    // Im int Q * (A_g + alpha ghat(0)) dalpha, with
    // int e^{ik alpha} e^{ij alpha} = 2pi delta_{k+j} and
    // int alpha e^{ik alpha} = 2pi (-1)^k/(ik) for k != 0.
    complex qp{};
    for (int k = -q.max_mode(); k <= q.max_mode(); ++k)
        qp += q.coeff(-k) * ag.coeff(k);
    qp *= two_pi;
    complex aq{};
    for (int k = -q.max_mode(); k <= q.max_mode(); ++k) {
        if (k == 0)
            continue;
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        aq += q.coeff(k) * sgn * two_pi / complex{0.0, static_cast<double>(k)};
    }
    const double denom = (qp + g.coeff(0) * aq).imag() / two_pi;
    if (!(denom > 0.0))
        throw AdmissibilityError("length_from_theta: volume identity denominator is nonpositive; "
                                 "curve too far from a circle");
    return two_pi * radius / std::sqrt(denom);
}

// Two-sided envelope for L given a bound m on the theta norm. The upper bound
// requires (pi/2)(e^{2m}-1) < 1, i.e. m < (1/2)log(1+2/pi); above that it is
// reported as +infinity.
struct LengthEnvelope {
    double lower = 0.0;
    double upper = 0.0;
};

inline LengthEnvelope length_envelope(double theta_norm, double radius) {
    const double e = 0.5 * pi * (std::exp(2.0 * theta_norm) - 1.0);
    LengthEnvelope env;
    env.lower = two_pi * radius / std::sqrt(1.0 + e);
    env.upper = (e < 1.0) ? two_pi * radius / std::sqrt(1.0 - e)
                          : std::numeric_limits<double>::infinity();
    return env;
}

inline double admissible_norm_limit() { return 0.5 * std::log(1.0 + 2.0 / pi); }

// z(alpha_j) on the requested grid: z(0) + (L/2pi) int_0^alpha E, the integral
// split into the periodic antiderivative plus the exact linear-in-alpha mean
// term.
inline std::vector<complex> reconstruct_curve(const BubbleState& state, int size) {
    const ComplexSpectrum e = tangent_spectrum(state.theta, state.mean_angle, size);
    const ComplexSpectrum ae = mean_free_antiderivative(e);
    const auto ae_samples = inverse_transform_complex(ae, size);
    const auto grid = grid_points(size);
    const complex e0 = e.coeff(0);
    const double scale = state.length / two_pi;
    std::vector<complex> z(ae_samples.size());
    for (std::size_t j = 0; j < z.size(); ++j)
        z[j] = state.base_point + scale * (ae_samples[j] + grid[j] * e0);
    return z;
}

// V = (1/2) Im int conj(z) z_alpha dalpha on the reconstructed curve.
inline double enclosed_area(const BubbleState& state, int grid = 0) {
    const int size = grid > 0 ? grid : default_geometry_grid(state.theta.n_modes());
    const auto z = reconstruct_curve(state, size);
    const auto th = inverse_transform(state.theta, size);
    const auto pts = grid_points(size);
    const double scale = state.length / two_pi;
    CompensatedSum acc;
    for (int j = 0; j < size; ++j) {
        const complex za = scale * std::polar(1.0, pts[static_cast<std::size_t>(j)] +
                                                       state.mean_angle + th[static_cast<std::size_t>(j)]);
        acc.add((std::conj(z[static_cast<std::size_t>(j)]) * za).imag());
    }
    return 0.5 * acc.value() * (two_pi / size);
}

// K(alpha) = (2pi/L)(1 + theta_alpha); returned as the constant mean part plus
// the mean-free spectral variation.
struct Curvature {
    double mean = 0.0;        // 2pi/L
    SpectralField variation;  // (2pi/L) theta_alpha
};

inline Curvature curvature(const BubbleState& state) {
    Curvature k;
    k.mean = two_pi / state.length;
    k.variation = derivative(state.theta, 1);
    for (int j = 1; j <= k.variation.n_modes(); ++j)
        k.variation.set_coeff(j, k.mean * k.variation.coeff(j));
    return k;
}

// (1/2pi) int e^{i(alpha + mean_angle + theta)} dalpha; zero for admissible
// (closed) states.
inline complex constraint_residual(const BubbleState& state, int grid = 0) {
    const int size = grid > 0 ? grid : default_geometry_grid(state.theta.n_modes());
    const auto th = inverse_transform(state.theta, size);
    const auto pts = grid_points(size);
    complex acc{};
    for (int j = 0; j < size; ++j)
        acc += std::polar(1.0, pts[static_cast<std::size_t>(j)] + state.mean_angle +
                                   th[static_cast<std::size_t>(j)]);
    return acc / static_cast<double>(size);
}

} // namespace muskat
