#pragma once

// The banded upper-triangular change of basis S, S^{-1} that diagonalizes the
// linearized mode system, residual checks for the inverse and for the
// conjugated system, and the uniform l^1 operator-norm bound C_S built from
// the modified Bessel function I_3.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "muskat/linear.hpp"

namespace muskat {

// Modified Bessel function of the first kind, order 3, by its power series
// (z/2)^3 sum_j (z/2)^{2j} / (j!(j+3)!), summed to relative 1e-14.
inline double bessel_i3(double z) {
    if (z < 0.0)
        throw std::invalid_argument("bessel_i3: z must be >= 0");
    const double q = 0.25 * z * z; // (z/2)^2
    double term = 1.0 / 6.0;
    double sum = term;
    for (int j = 0; j < 400; ++j) {
        term *= q / ((j + 1.0) * (j + 4.0));
        sum += term;
        if (term < 1e-16 * sum)
            break;
    }
    const double half = 0.5 * z;
    return half * half * half * sum;
}

namespace detail {

// sum_j y^j / (j!(j+3)!) = I_3(2 sqrt(y)) / y^{3/2}, finite at y = 0.
inline double bessel_i3_ratio(double y) {
    double term = 1.0 / 6.0;
    double sum = term;
    for (int j = 0; j < 400; ++j) {
        term *= y / ((j + 1.0) * (j + 4.0));
        sum += term;
        if (term < 1e-16 * sum)
            break;
    }
    return sum;
}

} // namespace detail

// C_S = max{ 1 + (1/4)(1-A_mu) x (3/4 - log 2),
//            6 I_3(2 sqrt((1+A_mu) x)) / ((1+A_mu) x)^{3/2} },  x = |A_rho| R^2 / A_sigma.
// The second argument tends to 1 as (1+A_mu) x -> 0.
inline double cs_bound(const PhysicalParams& p) {
    p.validate();
    const double x = std::abs(p.a_rho) * p.radius * p.radius / p.a_sigma;
    const double first = 1.0 + 0.25 * (1.0 - p.a_mu) * x * (0.75 - std::log(2.0));
    const double second = 6.0 * detail::bessel_i3_ratio((1.0 + p.a_mu) * x);
    return std::max(first, second);
}

// Dense storage of the truncated transforms on modes 1..N; entries are zero
// below the diagonal apart from the (2,1) slots.
class TriangularTransform {
public:
    TriangularTransform(int n_modes, const LinearCoefficients& coeffs) : n_(n_modes) {
        if (n_modes < 3)
            throw std::invalid_argument("TriangularTransform: n_modes must be >= 3");
        if (static_cast<int>(coeffs.a.size()) <= n_modes)
            throw std::invalid_argument("TriangularTransform: coefficients cover too few modes");
        if (!(coeffs.a_of(2) > 0.0))
            throw std::invalid_argument("TriangularTransform: a(2) must be positive");
        s_.assign(static_cast<std::size_t>(n_ + 1) * (n_ + 1), complex{});
        s_inv_.assign(static_cast<std::size_t>(n_ + 1) * (n_ + 1), complex{});

        for (int k = 1; k <= n_; ++k) {
            at(s_, k, k) = complex{1.0, 0.0};
            at(s_inv_, k, k) = complex{1.0, 0.0};
        }
        at(s_, 2, 1) = coeffs.c1 / coeffs.a_of(2);
        at(s_inv_, 2, 1) = -coeffs.c1 / coeffs.a_of(2);

        // Running products along each row; entries decay factorially and are
        // snapped to zero once below the normal range.
        for (int k = 2; k <= n_; ++k) {
            complex run{1.0, 0.0};
            for (int j = k + 1; j <= n_; ++j) {
                run *= -coeffs.b_of(j - 1) / (coeffs.a_of(k) - coeffs.a_of(j));
                if (std::abs(run) < 1e-300)
                    run = complex{};
                at(s_inv_, k, j) = run;
            }
        }
        for (int j = 3; j <= n_; ++j) {
            complex run{1.0, 0.0};
            for (int k = j - 1; k >= 2; --k) {
                run *= coeffs.b_of(k) / (coeffs.a_of(k) - coeffs.a_of(j));
                if (std::abs(run) < 1e-300)
                    run = complex{};
                at(s_, k, j) = run;
            }
        }
    }

    int n_modes() const { return n_; }
    complex s(int k, int j) const { return at(s_, k, j); }
    complex s_inv(int k, int j) const { return at(s_inv_, k, j); }

    // Columns unaffected by truncation bias; tests stay inside this block.
    int interior() const { return n_ - std::max(4, n_ / 16); }

    // l^1 -> l^1 operator norms: max column sums of absolute values.
    struct L1Norms {
        double s = 0.0;
        double s_inv = 0.0;
    };
    L1Norms l1_norms() const {
        L1Norms out;
        for (int j = 1; j <= n_; ++j) {
            double cs = 0.0, ci = 0.0;
            for (int k = 1; k <= n_; ++k) {
                cs += std::abs(s(k, j));
                ci += std::abs(s_inv(k, j));
            }
            out.s = std::max(out.s, cs);
            out.s_inv = std::max(out.s_inv, ci);
        }
        return out;
    }

    // Apply the transforms to mode vectors indexed 1..N.
    std::vector<complex> apply_s_inv(const std::vector<complex>& z) const { return mat_vec(s_inv_, z); }
    std::vector<complex> apply_s(const std::vector<complex>& y) const { return mat_vec(s_, y); }

private:
    complex& at(std::vector<complex>& m, int k, int j) {
        return m[static_cast<std::size_t>(k) * (n_ + 1) + j];
    }
    const complex& at(const std::vector<complex>& m, int k, int j) const {
        return m[static_cast<std::size_t>(k) * (n_ + 1) + j];
    }
    std::vector<complex> mat_vec(const std::vector<complex>& m, const std::vector<complex>& v) const {
        if (static_cast<int>(v.size()) != n_ + 1)
            throw std::invalid_argument("TriangularTransform: vector must be indexed 0..N");
        std::vector<complex> out(v.size(), complex{});
        for (int k = 1; k <= n_; ++k) {
            complex acc{};
            for (int j = 1; j <= n_; ++j)
                acc += at(m, k, j) * v[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(k)] = acc;
        }
        return out;
    }

    int n_;
    std::vector<complex> s_, s_inv_;
};

inline TriangularTransform build_transform(const LinearCoefficients& coeffs, int n_modes) {
    return TriangularTransform(n_modes, coeffs);
}

// max |(S S^{-1} - I)_{k,m}| over the interior block.
inline double verify_inverse(const TriangularTransform& t) {
    const int ni = t.interior();
    double worst = 0.0;
    for (int k = 1; k <= ni; ++k) {
        for (int m = 1; m <= ni; ++m) {
            complex acc{};
            for (int j = 1; j <= t.n_modes(); ++j)
                acc += t.s(k, j) * t.s_inv(j, m);
            if (k == m)
                acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

// max |(S^{-1} M S - diag(-a))_{k,m}| over the interior block, with M the
// truncated linear system matrix.
inline double verify_diagonalizes(const TriangularTransform& t, const LinearCoefficients& coeffs) {
    const int n = t.n_modes();
    std::vector<complex> m(static_cast<std::size_t>(n + 1) * (n + 1), complex{});
    const auto idx = [n](int k, int j) { return static_cast<std::size_t>(k) * (n + 1) + j; };
    for (int k = 1; k <= n; ++k) {
        m[idx(k, k)] = complex{-coeffs.a_of(k), 0.0};
        if (k + 1 <= n)
            m[idx(k, k + 1)] = coeffs.b_of(k);
    }
    m[idx(2, 1)] = coeffs.c1;

    // P = S^{-1} (M S)
    std::vector<complex> ms(m.size(), complex{});
    for (int k = 1; k <= n; ++k)
        for (int j = 1; j <= n; ++j) {
            complex acc{};
            for (int l = 1; l <= n; ++l)
                acc += m[idx(k, l)] * t.s(l, j);
            ms[idx(k, j)] = acc;
        }
    const int ni = t.interior();
    double worst = 0.0;
    for (int k = 1; k <= ni; ++k)
        for (int j = 1; j <= ni; ++j) {
            complex acc{};
            for (int l = 1; l <= n; ++l)
                acc += t.s_inv(k, l) * ms[idx(l, j)];
            if (k == j)
                acc += coeffs.a_of(k);
            worst = std::max(worst, std::abs(acc));
        }
    return worst;
}

} // namespace muskat
