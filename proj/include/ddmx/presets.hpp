#ifndef DDMX_PRESETS_HPP
#define DDMX_PRESETS_HPP

#include "ddmx/config.hpp"
#include "ddmx/dynamics.hpp"
#include "ddmx/integrator.hpp"
#include "ddmx/random_fields.hpp"

namespace ddmx {

namespace detail {

inline ScalarField zero_mean(const ScalarField& f) {
    auto c = std::vector<std::complex<double>>(f.spectral().begin(), f.spectral().end());
    c[0] = 0.0;
    return ScalarField::from_spectral(f.grid(), std::move(c));
}

inline ScalarField normalized_l2(const ScalarField& f, double target) {
    const double n = l2_norm(f);
    if (n == 0.0) return f;
    return scale(f, target / n);
}

inline VectorField3 normalized_l2(const VectorField3& v, double target) {
    const double n = l2_norm(v);
    if (n == 0.0) return v;
    return scale(v, target / n);
}

template <typename F>
ScalarField sampled(const Grid& g, F&& f) {
    std::vector<double> v(static_cast<size_t>(g.size_physical()));
    for (int ix = 0; ix < g.n(); ++ix)
        for (int iy = 0; iy < g.n(); ++iy)
            v[static_cast<size_t>(ix) * g.n() + iy] = f(g.x1(ix), g.x2(iy));
    return ScalarField::from_physical(g, std::move(v));
}

/// Periodic analogue of a Gaussian bump: exp((cos(2 pi (x-c)/L) - 1)/w^2)
/// is entire in cos, so its spectrum decays superexponentially and no
/// wrap-around mismatch leaks into high wavenumbers.
inline double periodic_bump(double x, double c, double length, double w) {
    const double th = 2.0 * Grid::pi * (x - c) / length;
    return std::exp((std::cos(th) - 1.0) / (w * w));
}

/// Deterministic divergence-free field from fixed low lattice modes.
inline VectorField3 preset_transverse_e(const Grid& g) {
    const double L = g.length();
    auto u = [L](double x) { return 2.0 * Grid::pi * x / L; };
    ScalarField psi = sampled(g, [&](double x, double y) {
        return std::sin(u(x)) * std::cos(2 * u(y)) + 0.4 * std::cos(3 * u(x)) * std::sin(u(y));
    });
    ScalarField e3 = sampled(g, [&](double x, double y) {
        return 0.5 * std::cos(u(x)) * std::sin(2 * u(y));
    });
    VectorField3 grad = gradient3(psi);
    return VectorField3(grad.c2(), scale(grad.c1(), -1.0), e3);
}

inline VectorField3 preset_magnetic(const Grid& g) {
    const double L = g.length();
    auto u = [L](double x) { return 2.0 * Grid::pi * x / L; };
    VectorField3 potential(
        sampled(g, [&](double x, double y) { return 0.3 * std::sin(2 * u(x)) * std::cos(u(y)); }),
        sampled(g, [&](double x, double y) { return 0.5 * std::cos(u(x)) * std::sin(3 * u(y)); }),
        sampled(g, [&](double x, double y) { return std::sin(u(x)) * std::sin(u(y)); }));
    return curl3(potential);
}

} // namespace detail

/// IntegratorConfig implied by a run configuration; the heat_only preset
/// runs the decoupled linear flow.
inline IntegratorConfig integrator_config_from(const RunConfig& c) {
    IntegratorConfig ic;
    ic.dt = c.dt;
    ic.t_end = c.t_end;
    ic.cutoff_radius = c.cutoff_n;
    ic.cfl_safety = c.cfl_safety;
    ic.record_every = c.record_every;
    ic.linear_only = c.preset == "heat_only";
    return ic;
}

/** Preset initial data.  Every preset produces an exactly zero-mean rho,
 * E = solve_gauss_electric(rho) plus a divergence-free part, and B as a
 * curl (div B = 0 identically); when a cutoff is configured all fields are
 * projected by J_n.  Field L^2 norms are fixed constants so the reference
 * scenarios stay inside the step-size and balance-residual budgets.
 */
inline State build_initial_state(const RunConfig& cfg) {
    validate_config(cfg);
    const Grid g(cfg.grid_n, cfg.domain_length);
    const double L = cfg.domain_length;

    ScalarField rho = ScalarField::zero(g);
    VectorField3 e_free = VectorField3::zero(g);
    VectorField3 b = VectorField3::zero(g);

    if (cfg.preset == "dipole") {
        rho = detail::sampled(g, [&](double x, double y) {
            return std::sin(2.0 * Grid::pi * x / L) *
                   detail::periodic_bump(y, L / 2, L, 2.0 * Grid::pi * 0.15);
        });
        rho = detail::normalized_l2(detail::zero_mean(rho), 0.35);
        e_free = detail::normalized_l2(detail::preset_transverse_e(g), 0.35);
        b = detail::normalized_l2(detail::preset_magnetic(g), 0.35);
    } else if (cfg.preset == "gaussian_pair") {
        const double w = 2.0 * Grid::pi / 24.0;
        rho = detail::sampled(g, [&](double x, double y) {
            const double bump_y = detail::periodic_bump(y, L / 2, L, w);
            return (detail::periodic_bump(x, 0.375 * L, L, w) -
                    detail::periodic_bump(x, 0.625 * L, L, w)) *
                   bump_y;
        });
        rho = detail::normalized_l2(detail::zero_mean(rho), 0.35);
        b = detail::normalized_l2(detail::preset_magnetic(g), 0.25);
    } else if (cfg.preset == "band_limited_random") {
        const int band = std::max(2, cfg.grid_n / 8);
        rho = detail::normalized_l2(random_band_limited(g, 1, band, cfg.seed, 1.0), 0.35);
        e_free = detail::normalized_l2(random_divergence_free(g, band, cfg.seed + 1), 0.35);
        b = detail::normalized_l2(random_solenoidal(g, band, cfg.seed + 2), 0.35);
    } else if (cfg.preset == "maxwell_only") {
        e_free = detail::normalized_l2(detail::preset_transverse_e(g), 0.5);
        b = detail::normalized_l2(detail::preset_magnetic(g), 0.5);
    } else if (cfg.preset == "heat_only") {
        auto u = [L](double x) { return 2.0 * Grid::pi * x / L; };
        rho = detail::sampled(g, [&](double x, double y) {
            return std::sin(3 * u(x)) * std::cos(2 * u(y)) +
                   0.6 * std::sin(u(x)) * std::sin(5 * u(y)) + 0.3 * std::cos(4 * u(x));
        });
        rho = detail::normalized_l2(detail::zero_mean(rho), 0.5);
        return make_state(std::move(rho), VectorField3::zero(g), VectorField3::zero(g));
    } else {
        throw config_error("build_initial_state: unknown preset '" + cfg.preset + "'");
    }

    VectorField3 e = rho.is_zero() ? e_free : add(solve_gauss_electric(rho), e_free);
    State s = make_state(std::move(rho), std::move(e), std::move(b));
    if (cfg.cutoff_n) {
        const CutoffOperator jn(*cfg.cutoff_n);
        s = State{apply_cutoff(jn, s.rho), apply_cutoff(jn, s.E), apply_cutoff(jn, s.B), s.time};
    }
    return s;
}

} // namespace ddmx

#endif
