#ifndef DDMX_DYNAMICS_HPP
#define DDMX_DYNAMICS_HPP

#include <optional>

#include "ddmx/norms.hpp"
#include "ddmx/operators.hpp"

namespace ddmx {

/// The advanced triple (rho, E, B).  Also reused as the shape of time
/// derivatives, where the invariants below do not apply.
struct State {
    ScalarField rho;
    VectorField3 E;
    VectorField3 B;
    double time = 0.0;

    const Grid& grid() const { return rho.grid(); }
};

/// Validating constructor for evolution states: one shared grid and zero
/// total charge (torus Gauss-law compatibility).  Decoupled fixtures that
/// need to sidestep the constraints build the aggregate directly.
inline State make_state(ScalarField rho, VectorField3 e, VectorField3 b, double time = 0.0) {
    if (rho.grid() != e.grid() || rho.grid() != b.grid())
        throw std::invalid_argument("make_state: fields on different grids");
    const double m = rho.is_zero() ? 0.0 : rho.mean();
    if (std::abs(m) > 1e-12 * std::max(1.0, linf_norm(rho)))
        throw constraint_error("make_state: rho must have zero mean on the torus (mean = " +
                               std::to_string(m) + ")");
    return State{std::move(rho), std::move(e), std::move(b), time};
}

namespace detail {

/// Sequential quadrature of a pointwise expression over the grid.
template <typename F>
double quad(const Grid& g, F&& f) {
    double acc = 0.0;
    const int np = g.size_physical();
    for (int i = 0; i < np; ++i) acc += f(i);
    return g.cell_area() * acc;
}

} // namespace detail

/// j = rho E - grad rho, with J_n applied to the whole expression when a
/// cutoff is active (the cutoff system's current).
inline VectorField3 current_density(const State& s,
                                    const std::optional<CutoffOperator>& cutoff = {}) {
    VectorField3 j = axpy(pointwise_scale(s.rho, s.E), -1.0, gradient3(s.rho));
    if (cutoff) j = apply_cutoff(*cutoff, j);
    return j;
}

/// Linear-in-state part of the right-hand side:
/// (J_n lap rho, curl B + J_n grad rho, -curl E).
inline State rhs_linear_part(const State& s, const std::optional<CutoffOperator>& cutoff = {}) {
    ScalarField drho = laplacian(s.rho);
    VectorField3 grad_rho = gradient3(s.rho);
    if (cutoff) {
        drho = apply_cutoff(*cutoff, drho);
        grad_rho = apply_cutoff(*cutoff, grad_rho);
    }
    return State{std::move(drho), add(curl3(s.B), grad_rho), scale(curl3(s.E), -1.0), s.time};
}

/// Quadratic part: (-J_n div(rho E), -J_n(rho E), 0).
inline State rhs_quadratic_part(const State& s,
                                const std::optional<CutoffOperator>& cutoff = {}) {
    VectorField3 rho_e = pointwise_scale(s.rho, s.E);
    if (cutoff) rho_e = apply_cutoff(*cutoff, rho_e);
    return State{scale(divergence2(rho_e), -1.0), scale(rho_e, -1.0),
                 VectorField3::zero(s.grid()), s.time};
}

/** Full semi-discrete right-hand side of the (cutoff) system:
 *  (d rho, d E, d B) = (J_n lap rho - J_n div(rho E), curl B - j, -curl E),
 * J_n = identity when no cutoff is given.  div(dE) - d rho vanishes
 * identically, so both Gauss laws are transported by construction.
 */
inline State rhs(const State& s, const std::optional<CutoffOperator>& cutoff = {}) {
    if (cutoff && cutoff->radius > s.grid().n() / 2)
        throw config_error("rhs: cutoff radius exceeds the Nyquist mode");
    const State lin = rhs_linear_part(s, cutoff);
    const State quad = rhs_quadratic_part(s, cutoff);
    return State{add(lin.rho, quad.rho), add(lin.E, quad.E), lin.B, s.time};
}

struct GaussResiduals {
    double e_residual; // ||div E - rho||_L2
    double b_residual; // ||div B||_L2
};

inline GaussResiduals gauss_residuals(const State& s) {
    const ScalarField div_e = divergence2(s.E);
    return GaussResiduals{l2_norm(axpy(div_e, -1.0, s.rho)), l2_norm(divergence2(s.B))};
}

/** Terms of the L^2 balance law
 *  d/dt [ (||rho||^2 + ||E||^2 + ||B||^2)/2 ] + ||grad rho||^2
 *      = I1 + I2 + I3 + I4,
 * with the integration-by-parts closed forms reported alongside for
 * cross-checking (exact up to quadrature on band-limited states).
 */
struct EnergyReport {
    double l2_rho_sq = 0.0;
    double l2_E_sq = 0.0;
    double l2_B_sq = 0.0;
    double grad_rho_l2_sq = 0.0;
    double i1 = 0.0; // -int rho (E . grad rho)
    double i2 = 0.0; // -int rho^3
    double i3 = 0.0; // -int rho |E|^2
    double i4 = 0.0; //  int E . grad rho
    double i1_closed = 0.0; //  int rho^3 / 2
    double i4_closed = 0.0; // -int rho^2
    double cubic_integral = 0.0;   // int rho^3
    double rho_e_sq_integral = 0.0; // int rho |E|^2
    double identity_residual = 0.0; // assembled by the verifier

    double energy() const { return 0.5 * (l2_rho_sq + l2_E_sq + l2_B_sq); }
    double source_sum() const { return i1 + i2 + i3 + i4; }
};

inline EnergyReport energy_identity_terms(const State& s) {
    EnergyReport r;
    r.l2_rho_sq = sobolev_norm_sq(s.rho, 0.0);
    r.l2_E_sq = sobolev_norm_sq(s.E, 0.0);
    r.l2_B_sq = sobolev_norm_sq(s.B, 0.0);
    r.grad_rho_l2_sq = sobolev_norm_sq(s.rho, 1.0, true);
    if (s.rho.is_zero()) return r;

    const Grid& g = s.grid();
    const auto rho = s.rho.values();
    const auto e1 = s.E.c1().values(), e2 = s.E.c2().values(), e3 = s.E.c3().values();
    const ScalarField gx_f = detail::ddx1(s.rho), gy_f = detail::ddx2(s.rho);
    const auto gx = gx_f.values(), gy = gy_f.values();

    r.i1 = -detail::quad(g, [&](int i) { return rho[i] * (e1[i] * gx[i] + e2[i] * gy[i]); });
    r.cubic_integral = detail::quad(g, [&](int i) { return rho[i] * rho[i] * rho[i]; });
    r.i2 = -r.cubic_integral;
    r.rho_e_sq_integral = detail::quad(
        g, [&](int i) { return rho[i] * (e1[i] * e1[i] + e2[i] * e2[i] + e3[i] * e3[i]); });
    r.i3 = -r.rho_e_sq_integral;
    r.i4 = detail::quad(g, [&](int i) { return e1[i] * gx[i] + e2[i] * gy[i]; });
    r.i1_closed = 0.5 * r.cubic_integral;
    r.i4_closed = -detail::quad(g, [&](int i) { return rho[i] * rho[i]; });
    return r;
}

/** Terms of the H^1 balance law
 *  d/dt [ ||grad F||^2 / 2 ] + ||grad^2 rho||^2 = J1 + .. + J6,
 * where ||grad F||^2 = int (|grad rho|^2 + |grad E|^2 + |grad B|^2).
 */
struct H1Report {
    double grad_f_l2_sq = 0.0;
    double hess_rho_l2_sq = 0.0;
    double j1 = 0.0; //  int grad^2 rho : grad E
    double j2 = 0.0; // -int (grad rho o E) : grad E
    double j3 = 0.0; // -int rho |grad E|^2
    double j4 = 0.0; // -int (grad E . grad rho) . grad rho
    double j5 = 0.0; // -int (E . grad^2 rho) . grad rho
    double j6 = 0.0; // -2 int rho |grad rho|^2

    double source_sum() const { return j1 + j2 + j3 + j4 + j5 + j6; }
};

inline H1Report h1_balance_terms(const State& s) {
    H1Report r;
    r.grad_f_l2_sq = sobolev_norm_sq(s.rho, 1.0, true) + sobolev_norm_sq(s.E, 1.0, true) +
                     sobolev_norm_sq(s.B, 1.0, true);
    r.hess_rho_l2_sq = sobolev_norm_sq(s.rho, 2.0, true);
    if (s.rho.is_zero()) return r; // every source term carries rho or grad rho

    const Grid& g = s.grid();
    const auto rho = s.rho.values();
    const auto e1 = s.E.c1().values(), e2 = s.E.c2().values(), e3 = s.E.c3().values();
    const ScalarField gx_f = detail::ddx1(s.rho), gy_f = detail::ddx2(s.rho);
    const ScalarField hxx_f = detail::ddx1(gx_f), hxy_f = detail::ddx2(gx_f),
                      hyy_f = detail::ddx2(gy_f);
    const auto gx = gx_f.values(), gy = gy_f.values();
    const auto hxx = hxx_f.values(), hxy = hxy_f.values(), hyy = hyy_f.values();

    // Jacobian of E: de[a][c] = d_a E_c.
    const ScalarField d1e1 = detail::ddx1(s.E.c1()), d1e2 = detail::ddx1(s.E.c2()),
                      d1e3 = detail::ddx1(s.E.c3());
    const ScalarField d2e1 = detail::ddx2(s.E.c1()), d2e2 = detail::ddx2(s.E.c2()),
                      d2e3 = detail::ddx2(s.E.c3());
    const auto a11 = d1e1.values(), a12 = d1e2.values(), a13 = d1e3.values();
    const auto a21 = d2e1.values(), a22 = d2e2.values(), a23 = d2e3.values();

    r.j1 = detail::quad(g, [&](int i) {
        return hxx[i] * a11[i] + hxy[i] * a12[i] + hxy[i] * a21[i] + hyy[i] * a22[i];
    });
    r.j2 = -detail::quad(g, [&](int i) {
        const double row1 = e1[i] * a11[i] + e2[i] * a12[i] + e3[i] * a13[i];
        const double row2 = e1[i] * a21[i] + e2[i] * a22[i] + e3[i] * a23[i];
        return gx[i] * row1 + gy[i] * row2;
    });
    r.j3 = -detail::quad(g, [&](int i) {
        const double je = a11[i] * a11[i] + a12[i] * a12[i] + a13[i] * a13[i] +
                          a21[i] * a21[i] + a22[i] * a22[i] + a23[i] * a23[i];
        return rho[i] * je;
    });
    r.j4 = -detail::quad(g, [&](int i) {
        const double b1 = a11[i] * gx[i] + a12[i] * gy[i];
        const double b2 = a21[i] * gx[i] + a22[i] * gy[i];
        return b1 * gx[i] + b2 * gy[i];
    });
    r.j5 = -detail::quad(g, [&](int i) {
        const double b1 = e1[i] * hxx[i] + e2[i] * hxy[i];
        const double b2 = e1[i] * hxy[i] + e2[i] * hyy[i];
        return b1 * gx[i] + b2 * gy[i];
    });
    r.j6 = -2.0 * detail::quad(g, [&](int i) { return rho[i] * (gx[i] * gx[i] + gy[i] * gy[i]); });
    return r;
}

/// L^2 norm of the entropy flux H = grad sqrt(rho) - E sqrt(rho) / 2.
/// Defined only for strictly positive rho.
struct EntropyFlux {
    double h_l2;
};

inline EntropyFlux entropy_flux(const State& s) {
    const auto rho = s.rho.values();
    double mn = rho.empty() ? 0.0 : rho[0];
    for (double v : rho) mn = std::min(mn, v);
    if (!(mn > 0.0))
        throw constraint_error("entropy_flux: rho must be strictly positive (min = " +
                               std::to_string(mn) + ")");
    std::vector<double> sq(rho.size());
    for (size_t i = 0; i < rho.size(); ++i) sq[i] = std::sqrt(rho[i]);
    const ScalarField sqrt_rho = ScalarField::from_physical(s.grid(), std::move(sq));
    const VectorField3 h = axpy(gradient3(sqrt_rho), -0.5, pointwise_scale(sqrt_rho, s.E));
    return EntropyFlux{l2_norm(h)};
}

} // namespace ddmx

#endif
