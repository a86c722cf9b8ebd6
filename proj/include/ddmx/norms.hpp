#ifndef DDMX_NORMS_HPP
#define DDMX_NORMS_HPP

#include <cmath>
#include <limits>

#include "ddmx/field.hpp"
#include "ddmx/operators.hpp"

namespace ddmx {

/// Torus integral by the grid quadrature (L/N)^2 * sum, fixed sequential
/// summation order for run-to-run determinism.
inline double integral(const ScalarField& f) {
    if (f.is_zero()) return 0.0;
    double acc = 0.0;
    for (double v : f.values()) acc += v;
    return f.grid().cell_area() * acc;
}

namespace detail {

/// Plancherel sum  L^2 * sum_k w(|k|) |f_hat|^2  with half-plane weights.
template <typename Weight>
double spectral_sum(const ScalarField& f, Weight&& w) {
    const Grid& g = f.grid();
    const auto s = f.spectral();
    const int cols = g.spectral_cols();
    double acc = 0.0;
    for (int ix = 0; ix < g.n(); ++ix)
        for (int j = 0; j < cols; ++j) {
            const auto c = s[static_cast<size_t>(ix) * cols + j];
            const double mag2 = c.real() * c.real() + c.imag() * c.imag();
            if (mag2 == 0.0) continue;
            acc += g.column_weight(j) * w(ix, j) * mag2;
        }
    return g.length() * g.length() * acc;
}

} // namespace detail

/** Squared Sobolev norm: homogeneous sum |k|^{2s}|f_hat|^2 or inhomogeneous
 * (1+|k|^2)^s, scaled so s = 0 reproduces the physical L^2 quadrature norm.
 */
inline double sobolev_norm_sq(const ScalarField& f, double s, bool homogeneous = false) {
    if (s < -2.0) throw std::invalid_argument("sobolev_norm: s must be >= -2");
    if (f.is_zero()) return 0.0;
    const Grid& g = f.grid();
    if (homogeneous) {
        if (s < 0.0 && std::abs(f.mean()) > 0.0)
            throw constraint_error(
                "sobolev_norm: homogeneous norm with s < 0 needs a zero-mean field");
        return detail::spectral_sum(f, [&](int ix, int j) {
            const double k2 = g.k_squared(ix, j);
            if (k2 == 0.0) return s == 0.0 ? 1.0 : 0.0;
            return std::pow(k2, s);
        });
    }
    return detail::spectral_sum(
        f, [&](int ix, int j) { return std::pow(1.0 + g.k_squared(ix, j), s); });
}

inline double sobolev_norm(const ScalarField& f, double s, bool homogeneous = false) {
    return std::sqrt(sobolev_norm_sq(f, s, homogeneous));
}

inline double sobolev_norm_sq(const VectorField3& v, double s, bool homogeneous = false) {
    return sobolev_norm_sq(v.c1(), s, homogeneous) + sobolev_norm_sq(v.c2(), s, homogeneous) +
           sobolev_norm_sq(v.c3(), s, homogeneous);
}

inline double sobolev_norm(const VectorField3& v, double s, bool homogeneous = false) {
    return std::sqrt(sobolev_norm_sq(v, s, homogeneous));
}

inline double l2_norm(const ScalarField& f) { return sobolev_norm(f, 0.0); }
inline double l2_norm(const VectorField3& v) { return sobolev_norm(v, 0.0); }

/// L^p norm for p in {2, 4, inf}; p = 2, 4 by grid quadrature, p = inf by
/// the sample maximum.  Set oversampled to evaluate on the x2 zero-padded
/// grid (verification mode).
inline double lp_norm(const ScalarField& f, double p, bool oversampled = false) {
    if (oversampled) return lp_norm(oversample(f, 2), p, false);
    if (f.is_zero()) return 0.0;
    const auto v = f.values();
    if (p == 2.0) {
        double acc = 0.0;
        for (double x : v) acc += x * x;
        return std::sqrt(f.grid().cell_area() * acc);
    }
    if (p == 4.0) {
        double acc = 0.0;
        for (double x : v) {
            const double x2 = x * x;
            acc += x2 * x2;
        }
        return std::pow(f.grid().cell_area() * acc, 0.25);
    }
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    throw std::invalid_argument("lp_norm: p must be 2, 4 or inf");
}

inline double linf_norm(const ScalarField& f) {
    return lp_norm(f, std::numeric_limits<double>::infinity());
}

inline double linf_norm(const VectorField3& v) {
    if (v.is_zero()) return 0.0;
    const auto a = v.c1().values(), b = v.c2().values(), c = v.c3().values();
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i]));
    return m;
}

inline double l4_norm(const ScalarField& f) { return lp_norm(f, 4.0); }

inline double l4_norm(const VectorField3& v) {
    if (v.is_zero()) return 0.0;
    const auto a = v.c1().values(), b = v.c2().values(), c = v.c3().values();
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double m2 = a[i] * a[i] + b[i] * b[i] + c[i] * c[i];
        acc += m2 * m2;
    }
    return std::pow(v.grid().cell_area() * acc, 0.25);
}

} // namespace ddmx

#endif
