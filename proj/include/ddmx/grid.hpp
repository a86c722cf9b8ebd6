#ifndef DDMX_GRID_HPP
#define DDMX_GRID_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "ddmx/errors.hpp"

namespace ddmx {

/** Uniform periodic grid on the square torus [0, L)^2.
 *
 * Physical samples sit at x = (ix, iy) * L/N and are stored row-major with
 * ix slowest.  The spectral representation is the FFTW half-plane layout:
 * index (ix, j) carries the integer mode (m1, m2) with m1 = ix for
 * ix <= N/2 and ix - N otherwise, m2 = j in [0, N/2]; the missing m2 < 0
 * half is implied by Hermitian symmetry of real fields.
 *
 * Wavenumbers come in two flavours:
 *   - k1(), k2(): physical wavenumbers (2*pi/L)*m used by norms and by the
 *     Laplacian/heat factor, Nyquist included.
 *   - k1_deriv(), k2_deriv(): the same but with the Nyquist mode zeroed,
 *     used by every odd-order derivative so that derivatives of real
 *     fields stay real.
 */
class Grid {
public:
    Grid(int points_per_axis, double domain_length)
        : n_(points_per_axis), length_(domain_length) {
        if (n_ < 8 || n_ % 2 != 0)
            throw config_error("grid: points_per_axis must be even and >= 8, got " +
                               std::to_string(n_));
        if (!(length_ > 0.0) || !std::isfinite(length_))
            throw config_error("grid: domain_length must be positive and finite");
    }

    int n() const { return n_; }
    double length() const { return length_; }
    double dx() const { return length_ / n_; }
    /// Quadrature weight of one grid cell, (L/N)^2.
    double cell_area() const { return dx() * dx(); }
    double fundamental() const { return 2.0 * pi / length_; }

    int size_physical() const { return n_ * n_; }
    int spectral_cols() const { return n_ / 2 + 1; }
    int size_spectral() const { return n_ * spectral_cols(); }

    /// Signed integer mode along axis 1 for spectral row ix (Nyquist = +N/2).
    int mode1(int ix) const { return ix <= n_ / 2 ? ix : ix - n_; }
    /// Integer mode along axis 2 for spectral column j (half plane, 0..N/2).
    int mode2(int j) const { return j; }

    double k1(int ix) const { return fundamental() * mode1(ix); }
    double k2(int j) const { return fundamental() * mode2(j); }
    double k1_deriv(int ix) const { return ix == n_ / 2 ? 0.0 : k1(ix); }
    double k2_deriv(int j) const { return j == n_ / 2 ? 0.0 : k2(j); }

    /// |k|^2 with the Nyquist mode included (even-order operators).
    double k_squared(int ix, int j) const {
        const double a = k1(ix), b = k2(j);
        return a * a + b * b;
    }
    /// |k|^2 built from the odd-derivative convention (Nyquist zeroed).
    double k_squared_deriv(int ix, int j) const {
        const double a = k1_deriv(ix), b = k2_deriv(j);
        return a * a + b * b;
    }
    /// Squared integer lattice radius m1^2 + m2^2 (cutoff-ball metric).
    long lattice_radius_sq(int ix, int j) const {
        const long m1 = mode1(ix), m2 = mode2(j);
        return m1 * m1 + m2 * m2;
    }

    /// Largest physical |k| present on the grid (corner mode).
    double k_max() const {
        const double kn = fundamental() * (n_ / 2);
        return kn * std::sqrt(2.0);
    }

    /// Multiplicity of column j in half-plane sums (interior columns count
    /// for their Hermitian mirror as well).
    double column_weight(int j) const { return (j == 0 || j == n_ / 2) ? 1.0 : 2.0; }

    double x1(int ix) const { return dx() * ix; }
    double x2(int iy) const { return dx() * iy; }

    bool operator==(const Grid& o) const { return n_ == o.n_ && length_ == o.length_; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    static constexpr double pi = 3.14159265358979323846;

private:
    int n_;
    double length_;
};

} // namespace ddmx

#endif
