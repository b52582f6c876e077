#pragma once

// Fourier representation of real 2pi-periodic fields and the spectral
// calculus built on it: periodic Hilbert transform, |k|^s multipliers,
// derivatives, the mean-free antiderivative, dealiased products, and the
// Wiener-algebra norm family.
//
// A SpectralField stores coefficients for k = 0..N only; negative modes are
// mirrored on write, so the reality constraint coeff(-k) = conj(coeff(k))
// holds structurally. ComplexSpectrum is the two-sided variant used for
// fields like e^{i(alpha+theta)} that are not conjugate-symmetric.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "muskat/numerics.hpp"

namespace muskat {

// Uniform grid alpha_j = -pi + j*(2pi/size), j = 0..size-1.
inline std::vector<double> grid_points(int size) {
    if (size <= 0)
        throw std::invalid_argument("grid_points: size must be positive");
    std::vector<double> g(static_cast<std::size_t>(size));
    const double h = two_pi / size;
    for (int j = 0; j < size; ++j)
        g[static_cast<std::size_t>(j)] = -pi + j * h;
    return g;
}

namespace detail {

// e^{-i k alpha_j} accumulated by recurrence over k; reseeded periodically to
// keep phase drift a few ulp over the whole band.
class TwiddleLadder {
public:
    explicit TwiddleLadder(const std::vector<double>& grid, double sign)
        : grid_(grid), sign_(sign), phase_(grid.size(), complex{1.0, 0.0}),
          step_(grid.size()), k_(0) {
        for (std::size_t j = 0; j < grid.size(); ++j)
            step_[j] = std::polar(1.0, sign * grid[j]);
    }
    // Phase vector for the current k; advance() moves to k+1.
    const std::vector<complex>& phases() const { return phase_; }
    void advance() {
        ++k_;
        if (k_ % 64 == 0) {
            for (std::size_t j = 0; j < grid_.size(); ++j)
                phase_[j] = std::polar(1.0, sign_ * k_ * grid_[j]);
        } else {
            for (std::size_t j = 0; j < grid_.size(); ++j)
                phase_[j] *= step_[j];
        }
    }

private:
    std::vector<double> grid_;
    double sign_;
    std::vector<complex> phase_;
    std::vector<complex> step_;
    long k_;
};

} // namespace detail

class SpectralField {
public:
    SpectralField() : n_modes_(0), c_(1, complex{}) {}

    explicit SpectralField(int n_modes) : n_modes_(n_modes) {
        if (n_modes < 0)
            throw std::invalid_argument("SpectralField: n_modes must be >= 0");
        c_.assign(static_cast<std::size_t>(n_modes) + 1, complex{});
    }

    int n_modes() const { return n_modes_; }

    complex coeff(int k) const {
        const int a = std::abs(k);
        if (a > n_modes_)
            return {};
        return k >= 0 ? c_[static_cast<std::size_t>(a)] : std::conj(c_[static_cast<std::size_t>(a)]);
    }

    // Only k >= 0 is authoritative; writes to k < 0 mirror through conjugation
    // and the zero mode is clamped to its real part.
    void set_coeff(int k, complex v) {
        const int a = std::abs(k);
        if (a > n_modes_)
            throw std::out_of_range("SpectralField::set_coeff: |k| > n_modes");
        if (k == 0)
            c_[0] = complex{v.real(), 0.0};
        else
            c_[static_cast<std::size_t>(a)] = (k > 0) ? v : std::conj(v);
    }

    void add_coeff(int k, complex v) { set_coeff(k, coeff(k) + v); }

    // Pointwise evaluation of the Fourier series at arbitrary alpha.
    double eval(double alpha) const {
        CompensatedSum s;
        for (int k = n_modes_; k >= 1; --k) {
            const complex term = c_[static_cast<std::size_t>(k)] * std::polar(1.0, k * alpha);
            s.add(2.0 * term.real());
        }
        s.add(c_[0].real());
        return s.value();
    }

    bool operator==(const SpectralField& o) const = default;

private:
    int n_modes_;
    std::vector<complex> c_; // k = 0..N
};

// Two-sided spectrum for complex-valued periodic functions; k in [-n, n].
class ComplexSpectrum {
public:
    ComplexSpectrum() : n_(0), c_(1, complex{}) {}
    explicit ComplexSpectrum(int n) : n_(n) {
        if (n < 0)
            throw std::invalid_argument("ComplexSpectrum: n must be >= 0");
        c_.assign(2 * static_cast<std::size_t>(n) + 1, complex{});
    }

    int max_mode() const { return n_; }
    complex coeff(int k) const {
        if (std::abs(k) > n_)
            return {};
        return c_[static_cast<std::size_t>(k + n_)];
    }
    void set_coeff(int k, complex v) {
        if (std::abs(k) > n_)
            throw std::out_of_range("ComplexSpectrum::set_coeff: |k| > max_mode");
        c_[static_cast<std::size_t>(k + n_)] = v;
    }

    complex eval(double alpha) const {
        complex s{};
        for (int k = -n_; k <= n_; ++k)
            s += coeff(k) * std::polar(1.0, k * alpha);
        return s;
    }

private:
    int n_;
    std::vector<complex> c_;
};

// ---------------------------------------------------------------------------
// Transforms. Convention: coeff(k) = (1/2M) sum_j samples_j e^{-ik alpha_j},
// samples_j = sum_k coeff(k) e^{ik alpha_j}.
// ---------------------------------------------------------------------------

inline SpectralField forward_transform(const std::vector<double>& samples, int n_modes) {
    const int size = static_cast<int>(samples.size());
    if (size < 2 * n_modes + 1)
        throw std::invalid_argument("forward_transform: grid too coarse for requested n_modes");
    SpectralField f(n_modes);
    const auto grid = grid_points(size);
    detail::TwiddleLadder lad(grid, -1.0);
    const double inv = 1.0 / size;
    for (int k = 0; k <= n_modes; ++k) {
        const auto& ph = lad.phases();
        complex acc{};
        for (int j = 0; j < size; ++j)
            acc += samples[static_cast<std::size_t>(j)] * ph[static_cast<std::size_t>(j)];
        f.set_coeff(k, acc * inv);
        lad.advance();
    }
    return f;
}

inline std::vector<double> inverse_transform_at(const SpectralField& f,
                                                const std::vector<double>& points) {
    std::vector<double> out(points.size(), f.coeff(0).real());
    detail::TwiddleLadder lad(points, +1.0);
    lad.advance(); // k = 1
    for (int k = 1; k <= f.n_modes(); ++k) {
        const complex ck = f.coeff(k);
        const auto& ph = lad.phases();
        for (std::size_t j = 0; j < points.size(); ++j)
            out[j] += 2.0 * (ck * ph[j]).real();
        lad.advance();
    }
    return out;
}

inline std::vector<double> inverse_transform(const SpectralField& f, int size) {
    if (size < 2 * f.n_modes() + 1)
        throw std::invalid_argument("inverse_transform: grid too coarse for field band");
    return inverse_transform_at(f, grid_points(size));
}

inline ComplexSpectrum forward_transform_complex(const std::vector<complex>& samples, int max_mode) {
    const int size = static_cast<int>(samples.size());
    if (size < 2 * max_mode + 1)
        throw std::invalid_argument("forward_transform_complex: grid too coarse");
    ComplexSpectrum f(max_mode);
    const auto grid = grid_points(size);
    detail::TwiddleLadder plus(grid, -1.0);  // e^{-ik alpha}, k >= 0 ladder
    detail::TwiddleLadder minus(grid, +1.0); // e^{+ik alpha} for negative modes
    const double inv = 1.0 / size;
    for (int k = 0; k <= max_mode; ++k) {
        const auto& php = plus.phases();
        const auto& phm = minus.phases();
        complex accp{}, accm{};
        for (int j = 0; j < size; ++j) {
            accp += samples[static_cast<std::size_t>(j)] * php[static_cast<std::size_t>(j)];
            accm += samples[static_cast<std::size_t>(j)] * phm[static_cast<std::size_t>(j)];
        }
        f.set_coeff(k, accp * inv);
        if (k > 0)
            f.set_coeff(-k, accm * inv);
        plus.advance();
        minus.advance();
    }
    return f;
}

inline std::vector<complex> inverse_transform_complex(const ComplexSpectrum& f, int size) {
    std::vector<complex> out(static_cast<std::size_t>(size), f.coeff(0));
    const auto grid = grid_points(size);
    detail::TwiddleLadder plus(grid, +1.0);
    detail::TwiddleLadder minus(grid, -1.0);
    plus.advance();
    minus.advance();
    for (int k = 1; k <= f.max_mode(); ++k) {
        const complex cp = f.coeff(k), cm = f.coeff(-k);
        const auto& php = plus.phases();
        const auto& phm = minus.phases();
        for (int j = 0; j < size; ++j)
            out[static_cast<std::size_t>(j)] += cp * php[static_cast<std::size_t>(j)] +
                                                cm * phm[static_cast<std::size_t>(j)];
        plus.advance();
        minus.advance();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spectral operators.
// ---------------------------------------------------------------------------

// Periodic Hilbert transform: multiplier -i sgn(k); annihilates constants.
inline SpectralField hilbert(const SpectralField& f) {
    SpectralField out(f.n_modes());
    for (int k = 1; k <= f.n_modes(); ++k)
        out.set_coeff(k, complex{0.0, -1.0} * f.coeff(k));
    return out;
}

// Lambda^s: multiplier |k|^s. s = 1 coincides with H(d/dalpha).
inline SpectralField lambda_pow(const SpectralField& f, double s) {
    if (s < 0.0)
        throw std::invalid_argument("lambda_pow: s must be >= 0");
    SpectralField out(f.n_modes());
    if (s == 0.0)
        out.set_coeff(0, f.coeff(0));
    for (int k = 1; k <= f.n_modes(); ++k)
        out.set_coeff(k, std::pow(static_cast<double>(k), s) * f.coeff(k));
    return out;
}

inline SpectralField derivative(const SpectralField& f, int order = 1) {
    if (order <= 0)
        throw std::invalid_argument("derivative: order must be positive");
    SpectralField out(f.n_modes());
    for (int k = 1; k <= f.n_modes(); ++k) {
        complex m{1.0, 0.0};
        for (int p = 0; p < order; ++p)
            m *= complex{0.0, static_cast<double>(k)};
        out.set_coeff(k, m * f.coeff(k));
    }
    return out;
}

// alpha |-> int_0^alpha f - (alpha/2pi) int_{-pi}^{pi} f. The zero mode
// sum_{j!=0} (i/j) fhat(j) makes the result the exact periodic antiderivative
// part, vanishing at alpha = 0.
inline SpectralField mean_free_antiderivative(const SpectralField& f) {
    SpectralField out(f.n_modes());
    CompensatedSum zero;
    for (int k = f.n_modes(); k >= 1; --k) {
        const complex ck = f.coeff(k);
        out.set_coeff(k, complex{0.0, -1.0 / k} * ck);
        // (i/k) fhat(k) + (-i/k) conj(fhat(k)) = -(2/k) Im fhat(k)
        zero.add(-2.0 / k * ck.imag());
    }
    out.set_coeff(0, complex{zero.value(), 0.0});
    return out;
}

inline ComplexSpectrum mean_free_antiderivative(const ComplexSpectrum& f) {
    ComplexSpectrum out(f.max_mode());
    complex zero{};
    for (int k = f.max_mode(); k >= 1; --k) {
        out.set_coeff(k, complex{0.0, -1.0 / k} * f.coeff(k));
        out.set_coeff(-k, complex{0.0, 1.0 / k} * f.coeff(-k));
        zero += complex{0.0, 1.0 / k} * (f.coeff(k) - f.coeff(-k));
    }
    out.set_coeff(0, zero);
    return out;
}

// High-frequency cut-off J_N: keeps |k| <= n_cut.
inline SpectralField truncate(const SpectralField& f, int n_cut) {
    if (n_cut < 0)
        throw std::invalid_argument("truncate: n_cut must be >= 0");
    SpectralField out(f.n_modes());
    for (int k = 0; k <= std::min(n_cut, f.n_modes()); ++k)
        out.set_coeff(k, f.coeff(k));
    return out;
}

// Resize the stored band (content outside the new band is dropped).
inline SpectralField resize_band(const SpectralField& f, int n_modes) {
    SpectralField out(n_modes);
    for (int k = 0; k <= std::min(n_modes, f.n_modes()); ++k)
        out.set_coeff(k, f.coeff(k));
    return out;
}

// Pointwise product computed on a dealiasing grid of size >= 2(2N+1), then
// truncated back to the common band.
inline SpectralField convolve(const SpectralField& f, const SpectralField& g) {
    const int n = std::max(f.n_modes(), g.n_modes());
    int size = 2 * (2 * n + 1);
    if (size % 2 != 0)
        ++size;
    const auto fs = inverse_transform(resize_band(f, n), size);
    const auto gs = inverse_transform(resize_band(g, n), size);
    std::vector<double> prod(fs.size());
    for (std::size_t j = 0; j < fs.size(); ++j)
        prod[j] = fs[j] * gs[j];
    return forward_transform(prod, n);
}

// ---------------------------------------------------------------------------
// Norms.
// ---------------------------------------------------------------------------

// nu(t) = nu0 * t/(1+t); the exponential weight scale of the analytic norms.
struct AnalyticWeight {
    double nu0 = 0.0;
    double t = 0.0;
    double nu() const {
        if (nu0 < 0.0 || t < 0.0)
            throw std::invalid_argument("AnalyticWeight: nu0 and t must be >= 0");
        return nu0 * t / (1.0 + t);
    }
};

// Wiener-algebra family: sum_{k!=0} e^{nu|k|} |k|^s |fhat(k)|, with the k = 0
// term included only for s = 0. Accumulated in descending |k| with
// compensated summation.
inline double wiener_norm(const SpectralField& f, double s,
                          std::optional<AnalyticWeight> w = std::nullopt) {
    if (s < 0.0)
        throw std::invalid_argument("wiener_norm: s must be >= 0");
    const double nu = w ? w->nu() : 0.0;
    CompensatedSum acc;
    for (int k = f.n_modes(); k >= 1; --k)
        acc.add(2.0 * std::exp(nu * k) * std::pow(static_cast<double>(k), s) * std::abs(f.coeff(k)));
    if (s == 0.0)
        acc.add(std::abs(f.coeff(0)));
    return acc.value();
}

// b(n,s) from the n-fold product inequality: 1 for s <= 1, n^{s-1} above.
inline double product_weight(int n, double s) {
    return (s <= 1.0) ? 1.0 : std::pow(static_cast<double>(n), s - 1.0);
}

// ---------------------------------------------------------------------------
// Helpers connecting the two spectrum types.
// ---------------------------------------------------------------------------

inline ComplexSpectrum to_complex_spectrum(const SpectralField& f) {
    ComplexSpectrum out(f.n_modes());
    for (int k = -f.n_modes(); k <= f.n_modes(); ++k)
        out.set_coeff(k, f.coeff(k));
    return out;
}

// Real part of a complex-spectrum function as a real field:
// Re(c)(k) = (c(k) + conj(c(-k)))/2.
inline SpectralField real_part(const ComplexSpectrum& c, int n_modes) {
    SpectralField out(n_modes);
    for (int k = 0; k <= std::min(n_modes, c.max_mode()); ++k)
        out.set_coeff(k, 0.5 * (c.coeff(k) + std::conj(c.coeff(-k))));
    return out;
}

// Imaginary part as a real field: Im(c)(k) = (c(k) - conj(c(-k)))/(2i).
inline SpectralField imag_part(const ComplexSpectrum& c, int n_modes) {
    SpectralField out(n_modes);
    for (int k = 0; k <= std::min(n_modes, c.max_mode()); ++k)
        out.set_coeff(k, (c.coeff(k) - std::conj(c.coeff(-k))) / complex{0.0, 2.0});
    return out;
}

} // namespace muskat
