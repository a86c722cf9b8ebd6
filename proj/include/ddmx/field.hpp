#ifndef DDMX_FIELD_HPP
#define DDMX_FIELD_HPP

#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "ddmx/errors.hpp"
#include "ddmx/fft.hpp"
#include "ddmx/grid.hpp"

namespace ddmx {

/** Real scalar field on a periodic grid.
 *
 * A field is an immutable value holding the physical samples and/or the
 * half-plane Fourier coefficients; whichever representation is missing is
 * computed on first access and cached.  Construction validates finiteness
 * and enforces the Hermitian symmetry of real data (DC and Nyquist columns
 * symmetrized, Nyquist coefficients kept real).
 */
class ScalarField {
public:
    static ScalarField from_physical(const Grid& g, std::vector<double> values) {
        if (static_cast<int>(values.size()) != g.size_physical())
            throw std::invalid_argument("ScalarField: physical size mismatch");
        bool zero = true;
        for (double v : values) {
            if (!std::isfinite(v)) throw numeric_error("ScalarField: non-finite sample");
            if (v != 0.0) zero = false;
        }
        ScalarField f(g, zero);
        f.phys_ = std::move(values);
        f.has_phys_ = true;
        if (zero) f.fill_zero_spectral();
        return f;
    }

    static ScalarField from_spectral(const Grid& g, std::vector<std::complex<double>> coeffs) {
        if (static_cast<int>(coeffs.size()) != g.size_spectral())
            throw std::invalid_argument("ScalarField: spectral size mismatch");
        hermitian_project(g, coeffs);
        bool zero = true;
        for (const auto& c : coeffs) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw numeric_error("ScalarField: non-finite coefficient");
            if (c != std::complex<double>(0.0, 0.0)) zero = false;
        }
        ScalarField f(g, zero);
        f.spec_ = std::move(coeffs);
        f.has_spec_ = true;
        if (zero) f.fill_zero_physical();
        return f;
    }

    static ScalarField zero(const Grid& g) {
        ScalarField f(g, true);
        f.fill_zero_physical();
        f.fill_zero_spectral();
        return f;
    }

    const Grid& grid() const { return grid_; }
    bool is_zero() const { return zero_; }

    std::span<const double> values() const {
        ensure_physical();
        return phys_;
    }
    std::span<const std::complex<double>> spectral() const {
        ensure_spectral();
        return spec_;
    }

    double value(int ix, int iy) const { return values()[static_cast<size_t>(ix) * grid_.n() + iy]; }
    std::complex<double> coeff(int ix, int j) const {
        return spectral()[static_cast<size_t>(ix) * grid_.spectral_cols() + j];
    }
    /// Mean value over the torus (the DC coefficient).
    double mean() const { return spectral()[0].real(); }

    /// Enforce f(-m) = conj(f(m)) on the columns that carry both halves
    /// (m2 = 0 and m2 = N/2) and keep DC/Nyquist entries real.
    static void hermitian_project(const Grid& g, std::vector<std::complex<double>>& c) {
        const int n = g.n(), cols = g.spectral_cols();
        for (int j : {0, n / 2}) {
            for (int ix = 1; ix < n / 2; ++ix) {
                const size_t a = static_cast<size_t>(ix) * cols + j;
                const size_t b = static_cast<size_t>(n - ix) * cols + j;
                const std::complex<double> avg = 0.5 * (c[a] + std::conj(c[b]));
                c[a] = avg;
                c[b] = std::conj(avg);
            }
            c[static_cast<size_t>(0) * cols + j] =
                std::complex<double>(c[static_cast<size_t>(0) * cols + j].real(), 0.0);
            c[static_cast<size_t>(n / 2) * cols + j] =
                std::complex<double>(c[static_cast<size_t>(n / 2) * cols + j].real(), 0.0);
        }
    }

private:
    explicit ScalarField(const Grid& g, bool zero) : grid_(g), zero_(zero) {}

    void fill_zero_physical() const {
        phys_.assign(static_cast<size_t>(grid_.size_physical()), 0.0);
        has_phys_ = true;
    }
    void fill_zero_spectral() const {
        spec_.assign(static_cast<size_t>(grid_.size_spectral()), std::complex<double>(0.0, 0.0));
        has_spec_ = true;
    }
    void ensure_physical() const {
        if (has_phys_) return;
        phys_.resize(static_cast<size_t>(grid_.size_physical()));
        detail::fft_plans(grid_.n()).backward(spec_.data(), phys_.data());
        has_phys_ = true;
    }
    void ensure_spectral() const {
        if (has_spec_) return;
        spec_.resize(static_cast<size_t>(grid_.size_spectral()));
        detail::fft_plans(grid_.n()).forward(phys_.data(), spec_.data());
        has_spec_ = true;
    }

    Grid grid_;
    bool zero_ = false;
    mutable std::vector<double> phys_;
    mutable std::vector<std::complex<double>> spec_;
    mutable bool has_phys_ = false;
    mutable bool has_spec_ = false;
};

/// R^3-valued field over the 2D grid: three scalar components on one grid.
class VectorField3 {
public:
    VectorField3(ScalarField c1, ScalarField c2, ScalarField c3)
        : c1_(std::move(c1)), c2_(std::move(c2)), c3_(std::move(c3)) {
        if (c1_.grid() != c2_.grid() || c1_.grid() != c3_.grid())
            throw std::invalid_argument("VectorField3: components on different grids");
    }

    static VectorField3 zero(const Grid& g) {
        return VectorField3(ScalarField::zero(g), ScalarField::zero(g), ScalarField::zero(g));
    }

    const Grid& grid() const { return c1_.grid(); }
    const ScalarField& c1() const { return c1_; }
    const ScalarField& c2() const { return c2_; }
    const ScalarField& c3() const { return c3_; }
    const ScalarField& component(int i) const {
        switch (i) {
            case 0: return c1_;
            case 1: return c2_;
            default: return c3_;
        }
    }
    bool is_zero() const { return c1_.is_zero() && c2_.is_zero() && c3_.is_zero(); }

private:
    ScalarField c1_, c2_, c3_;
};

/// Pointwise product on the physical grid.
inline ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
    if (a.grid() != b.grid()) throw std::invalid_argument("pointwise_product: grid mismatch");
    if (a.is_zero() || b.is_zero()) return ScalarField::zero(a.grid());
    const auto va = a.values();
    const auto vb = b.values();
    std::vector<double> out(va.size());
    for (size_t i = 0; i < va.size(); ++i) out[i] = va[i] * vb[i];
    return ScalarField::from_physical(a.grid(), std::move(out));
}

inline ScalarField scale(const ScalarField& a, double s) {
    if (a.is_zero() || s == 0.0) return ScalarField::zero(a.grid());
    const auto sa = a.spectral();
    std::vector<std::complex<double>> out(sa.begin(), sa.end());
    for (auto& c : out) c *= s;
    return ScalarField::from_spectral(a.grid(), std::move(out));
}

inline ScalarField add(const ScalarField& a, const ScalarField& b) {
    if (a.grid() != b.grid()) throw std::invalid_argument("add: grid mismatch");
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const auto sa = a.spectral();
    const auto sb = b.spectral();
    std::vector<std::complex<double>> out(sa.size());
    for (size_t i = 0; i < sa.size(); ++i) out[i] = sa[i] + sb[i];
    return ScalarField::from_spectral(a.grid(), std::move(out));
}

/// a + s*b in spectral space.
inline ScalarField axpy(const ScalarField& a, double s, const ScalarField& b) {
    if (a.grid() != b.grid()) throw std::invalid_argument("axpy: grid mismatch");
    if (b.is_zero() || s == 0.0) return a;
    if (a.is_zero()) return scale(b, s);
    const auto sa = a.spectral();
    const auto sb = b.spectral();
    std::vector<std::complex<double>> out(sa.size());
    for (size_t i = 0; i < sa.size(); ++i) out[i] = sa[i] + s * sb[i];
    return ScalarField::from_spectral(a.grid(), std::move(out));
}

inline VectorField3 scale(const VectorField3& v, double s) {
    return VectorField3(scale(v.c1(), s), scale(v.c2(), s), scale(v.c3(), s));
}
inline VectorField3 add(const VectorField3& a, const VectorField3& b) {
    return VectorField3(add(a.c1(), b.c1()), add(a.c2(), b.c2()), add(a.c3(), b.c3()));
}
inline VectorField3 axpy(const VectorField3& a, double s, const VectorField3& b) {
    return VectorField3(axpy(a.c1(), s, b.c1()), axpy(a.c2(), s, b.c2()),
                        axpy(a.c3(), s, b.c3()));
}
inline VectorField3 pointwise_scale(const ScalarField& s, const VectorField3& v) {
    return VectorField3(pointwise_product(s, v.c1()), pointwise_product(s, v.c2()),
                        pointwise_product(s, v.c3()));
}

} // namespace ddmx

#endif
