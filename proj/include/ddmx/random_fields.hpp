#ifndef DDMX_RANDOM_FIELDS_HPP
#define DDMX_RANDOM_FIELDS_HPP

#include <cstdint>
#include <random>

#include "ddmx/norms.hpp"
#include "ddmx/operators.hpp"

namespace ddmx {

/** Band-limited random scalar field.
 *
 * Coefficients are drawn in a fixed half-plane order (mode magnitudes
 * kmin..kmax in the lattice metric) with a mild 1/(1+|m|) falloff, then
 * Hermitian-projected and rescaled to the requested L-infinity amplitude.
 * Everything is a pure function of (grid, band, seed).
 */
inline ScalarField random_band_limited(const Grid& g, int kmin_lattice, int kmax_lattice,
                                       std::uint64_t seed, double amplitude = 1.0,
                                       bool zero_mean = true) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int cols = g.spectral_cols();
    std::vector<std::complex<double>> c(static_cast<size_t>(g.size_spectral()),
                                        std::complex<double>(0.0, 0.0));
    const long lo = static_cast<long>(kmin_lattice) * kmin_lattice;
    const long hi = static_cast<long>(kmax_lattice) * kmax_lattice;
    for (int ix = 0; ix < g.n(); ++ix)
        for (int j = 0; j < cols; ++j) {
            const long r2 = g.lattice_radius_sq(ix, j);
            if (r2 < lo || r2 > hi) continue;
            const double re = gauss(rng), im = gauss(rng);
            const double fall = 1.0 / (1.0 + std::sqrt(static_cast<double>(r2)));
            c[static_cast<size_t>(ix) * cols + j] = fall * std::complex<double>(re, im);
        }
    if (zero_mean) c[0] = 0.0;
    ScalarField f = ScalarField::from_spectral(g, std::move(c));
    const double m = linf_norm(f);
    if (m == 0.0 || amplitude == 0.0) return ScalarField::zero(g);
    return scale(f, amplitude / m);
}

/// Divergence-free random vector field: in-plane part from a stream
/// function, plus an unconstrained third component.
inline VectorField3 random_divergence_free(const Grid& g, int kmax_lattice, std::uint64_t seed,
                                           double amplitude = 1.0) {
    ScalarField psi = random_band_limited(g, 1, kmax_lattice, seed, 1.0);
    ScalarField e3 = random_band_limited(g, 1, kmax_lattice, seed + 1, amplitude);
    VectorField3 grad = gradient3(psi);
    VectorField3 v(grad.c2(), scale(grad.c1(), -1.0), e3);
    const double m = linf_norm(v);
    if (m == 0.0) return VectorField3::zero(g);
    return scale(v, amplitude / m);
}

/// curl3 of a random band-limited vector potential; div of the result
/// vanishes identically (div curl = 0 spectrally).
inline VectorField3 random_solenoidal(const Grid& g, int kmax_lattice, std::uint64_t seed,
                                      double amplitude = 1.0) {
    VectorField3 a(random_band_limited(g, 1, kmax_lattice, seed, 1.0),
                   random_band_limited(g, 1, kmax_lattice, seed + 1, 1.0),
                   random_band_limited(g, 1, kmax_lattice, seed + 2, 1.0));
    VectorField3 b = curl3(a);
    const double m = linf_norm(b);
    if (m == 0.0) return VectorField3::zero(g);
    return scale(b, amplitude / m);
}

} // namespace ddmx

#endif
