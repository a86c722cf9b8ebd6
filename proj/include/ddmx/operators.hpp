#ifndef DDMX_OPERATORS_HPP
#define DDMX_OPERATORS_HPP

#include <complex>
#include <functional>
#include <sstream>
#include <vector>

#include "ddmx/field.hpp"

namespace ddmx {

namespace detail {

/// Apply a per-mode multiplier f(ix, j) to the spectrum of a field.
template <typename Mult>
ScalarField apply_multiplier(const ScalarField& f, Mult&& m) {
    if (f.is_zero()) return ScalarField::zero(f.grid());
    const Grid& g = f.grid();
    const auto s = f.spectral();
    std::vector<std::complex<double>> out(s.size());
    const int cols = g.spectral_cols();
    for (int ix = 0; ix < g.n(); ++ix)
        for (int j = 0; j < cols; ++j) {
            const size_t idx = static_cast<size_t>(ix) * cols + j;
            out[idx] = m(ix, j) * s[idx];
        }
    return ScalarField::from_spectral(g, std::move(out));
}

inline ScalarField ddx1(const ScalarField& f) {
    const Grid& g = f.grid();
    return apply_multiplier(f, [&g](int ix, int j) {
        (void)j;
        return std::complex<double>(0.0, g.k1_deriv(ix));
    });
}
inline ScalarField ddx2(const ScalarField& f) {
    const Grid& g = f.grid();
    return apply_multiplier(f, [&g](int ix, int j) {
        (void)ix;
        return std::complex<double>(0.0, g.k2_deriv(j));
    });
}

} // namespace detail

/// (d1 f, d2 f, 0), spectral derivatives.
inline VectorField3 gradient3(const ScalarField& f) {
    return VectorField3(detail::ddx1(f), detail::ddx2(f), ScalarField::zero(f.grid()));
}

/// d1 v1 + d2 v2; the third component never enters.
inline ScalarField divergence2(const VectorField3& v) {
    return add(detail::ddx1(v.c1()), detail::ddx2(v.c2()));
}

/// 2D-restricted curl: (d2 v3, -d1 v3, d1 v2 - d2 v1).
inline VectorField3 curl3(const VectorField3& v) {
    return VectorField3(detail::ddx2(v.c3()), scale(detail::ddx1(v.c3()), -1.0),
                        add(detail::ddx1(v.c2()), scale(detail::ddx2(v.c1()), -1.0)));
}

/// Multiplication by -|k|^2 per mode (Nyquist included).
inline ScalarField laplacian(const ScalarField& f) {
    const Grid& g = f.grid();
    return detail::apply_multiplier(
        f, [&g](int ix, int j) { return std::complex<double>(-g.k_squared(ix, j), 0.0); });
}

/** Friedrichs frequency cutoff J_n.
 *
 * The radius is measured in units of the fundamental wavenumber 2*pi/L:
 * J_n keeps exactly the modes in the closed lattice ball m1^2 + m2^2 <= n^2
 * and zeroes all others.  The multiplier is exactly 0 or 1, so J_n is
 * idempotent bit-for-bit and commutes exactly with every constant-
 * coefficient operator above.
 */
struct CutoffOperator {
    double radius;

    explicit CutoffOperator(double n) : radius(n) {
        if (!(n > 0.0)) throw std::invalid_argument("CutoffOperator: radius must be positive");
    }

    bool keeps(const Grid& g, int ix, int j) const {
        return static_cast<double>(g.lattice_radius_sq(ix, j)) <= radius * radius;
    }
};

inline ScalarField apply_cutoff(const CutoffOperator& op, const ScalarField& f) {
    const Grid& g = f.grid();
    return detail::apply_multiplier(f, [&](int ix, int j) {
        return std::complex<double>(op.keeps(g, ix, j) ? 1.0 : 0.0, 0.0);
    });
}

inline VectorField3 apply_cutoff(const CutoffOperator& op, const VectorField3& v) {
    return VectorField3(apply_cutoff(op, v.c1()), apply_cutoff(op, v.c2()),
                        apply_cutoff(op, v.c3()));
}

/** Curl-free electric field with div E = rho: E = grad(laplacian^{-1} rho),
 * embedded as (E1, E2, 0).  Requires zero total charge (torus solvability).
 */
inline VectorField3 solve_gauss_electric(const ScalarField& rho) {
    const Grid& g = rho.grid();
    const double m = rho.is_zero() ? 0.0 : rho.mean();
    double linf = 0.0;
    if (!rho.is_zero())
        for (double v : rho.values()) linf = std::max(linf, std::abs(v));
    if (std::abs(m) > 1e-12 * std::max(1.0, linf)) {
        std::ostringstream os;
        os << "solve_gauss_electric: rho has nonzero mean " << m
           << "; zero total charge is required on the torus";
        throw constraint_error(os.str());
    }
    if (rho.is_zero()) return VectorField3::zero(g);

    const auto s = rho.spectral();
    const int cols = g.spectral_cols();
    std::vector<std::complex<double>> e1(s.size()), e2(s.size());
    for (int ix = 0; ix < g.n(); ++ix)
        for (int j = 0; j < cols; ++j) {
            const size_t idx = static_cast<size_t>(ix) * cols + j;
            const double ksq = g.k_squared_deriv(ix, j);
            if (ksq == 0.0) {
                e1[idx] = e2[idx] = 0.0;
                continue;
            }
            // E_hat = -i k rho_hat / |k|^2
            const std::complex<double> base = s[idx] / ksq;
            e1[idx] = std::complex<double>(0.0, -g.k1_deriv(ix)) * base;
            e2[idx] = std::complex<double>(0.0, -g.k2_deriv(j)) * base;
        }
    return VectorField3(ScalarField::from_spectral(g, std::move(e1)),
                        ScalarField::from_spectral(g, std::move(e2)), ScalarField::zero(g));
}

/** Zero-padded resample onto a grid with factor*N points (same L).
 * Used by the verification quadratures; the source Nyquist row/column is
 * dropped, so callers should pass fields band-limited below Nyquist.
 */
inline ScalarField oversample(const ScalarField& f, int factor = 2) {
    if (factor < 1) throw std::invalid_argument("oversample: factor must be >= 1");
    const Grid& g = f.grid();
    if (factor == 1) return f;
    const Grid fine(g.n() * factor, g.length());
    if (f.is_zero()) return ScalarField::zero(fine);
    const auto s = f.spectral();
    std::vector<std::complex<double>> out(static_cast<size_t>(fine.size_spectral()),
                                          std::complex<double>(0.0, 0.0));
    const int cols = g.spectral_cols(), fine_cols = fine.spectral_cols();
    for (int ix = 0; ix < g.n(); ++ix) {
        const int m1 = g.mode1(ix);
        if (std::abs(m1) >= g.n() / 2) continue;
        const int fix = m1 >= 0 ? m1 : m1 + fine.n();
        for (int j = 0; j < g.n() / 2; ++j)
            out[static_cast<size_t>(fix) * fine_cols + j] =
                s[static_cast<size_t>(ix) * cols + j];
    }
    return ScalarField::from_spectral(fine, std::move(out));
}

inline VectorField3 oversample(const VectorField3& v, int factor = 2) {
    return VectorField3(oversample(v.c1(), factor), oversample(v.c2(), factor),
                        oversample(v.c3(), factor));
}

} // namespace ddmx

#endif
