#pragma once

// Small numerical utilities shared across the library: compensated summation,
// adaptive quadrature for smooth integrands, least-squares line fits, and a
// handful of slowly-converging constants evaluated once.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace muskat {

inline constexpr double pi = std::numbers::pi_v<double>;
inline constexpr double two_pi = 2.0 * std::numbers::pi_v<double>;

using complex = std::complex<double>;

// Neumaier variant of Kahan summation; the running compensation also catches
// the case where the next term is larger than the running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth, int force_split) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0)
        throw std::runtime_error("adaptive_simpson: recursion depth exhausted");
    if (force_split <= 0 && std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1,
                                force_split - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1,
                                force_split - 1);
}

} // namespace detail

// Adaptive Simpson rule for smooth real integrands. min_depth forces that
// many subdivision levels before the error estimate may accept, guarding
// against spurious agreement on oscillatory integrands.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-12, int max_depth = 48,
                        int min_depth = 2) {
    if (!(b > a))
        return 0.0;
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth, min_depth);
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
// Legendre recurrence.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussRule gauss_legendre(int n) {
    if (n < 2 || n > 64)
        throw std::invalid_argument("gauss_legendre: order out of range");
    GaussRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        r.nodes[static_cast<std::size_t>(i)] = x;
        r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares y = slope*x + intercept.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two samples");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    out.r_squared = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return out;
}

// Catalan's constant evaluated by its defining alternating series
// sum (-1)^n/(2n+1)^2, summed in pairs until the tail drops below 1e-13.
inline double catalan_constant() {
    static const double value = [] {
        CompensatedSum s;
        for (long n = 0;; n += 2) {
            const double a = 1.0 / ((2.0 * n + 1.0) * (2.0 * n + 1.0));
            const double b = 1.0 / ((2.0 * n + 3.0) * (2.0 * n + 3.0));
            s.add(a - b);
            if (a < 1e-13)
                break;
        }
        return s.value();
    }();
    return value;
}

} // namespace muskat
