#ifndef DDMX_LITTLEWOOD_PALEY_HPP
#define DDMX_LITTLEWOOD_PALEY_HPP

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "ddmx/norms.hpp"
#include "ddmx/operators.hpp"

namespace ddmx {

/** Radial partition of unity for the dyadic decomposition.
 *
 * chi is a polynomial smoothstep, identically 1 on |xi| <= 1/2 and 0 on
 * |xi| >= 1; phi(xi) = chi(xi/2) - chi(xi) is supported on the ring
 * 1/2 <= |xi| <= 2.  The smoothstep degree is a constructor parameter so
 * the profile is named and reproducible: degree 1 is the C^1 cubic
 * 3t^2 - 2t^3, degree 2 (default) the C^2 quintic 6t^5 - 15t^4 + 10t^3.
 *
 * The kernels h = F^{-1}phi, h~ = F^{-1}chi are never materialized; blocks
 * act as spectral multipliers phi(2^{-q}|k|), chi(2^{-q}|k|) on the grid's
 * physical wavenumbers.
 */
class DyadicFilterBank {
public:
    explicit DyadicFilterBank(int smoothstep_degree = 2) : degree_(smoothstep_degree) {
        if (degree_ < 1 || degree_ > 2)
            throw std::invalid_argument("DyadicFilterBank: smoothstep degree must be 1 or 2");
    }

    int smoothstep_degree() const { return degree_; }
    const char* profile_name() const {
        return degree_ == 1 ? "smoothstep-cubic-c1" : "smoothstep-quintic-c2";
    }

    double chi(double r) const {
        r = std::abs(r);
        if (r <= 0.5) return 1.0;
        if (r >= 1.0) return 0.0;
        const double t = (r - 0.5) / 0.5;
        return 1.0 - smoothstep(t);
    }

    double phi(double r) const { return chi(r / 2.0) - chi(r); }

    /// chi(2^{-q} r); the scaling by an exact power of two keeps the
    /// telescoping sum chi + sum_q phi(2^{-q} .) exact in floating point.
    double chi_scaled(int q, double r) const { return chi(std::ldexp(r, -q)); }
    double phi_scaled(int q, double r) const { return phi(std::ldexp(r, -q)); }

private:
    double smoothstep(double t) const {
        if (degree_ == 1) return t * t * (3.0 - 2.0 * t);
        return t * t * t * (t * (t * 6.0 - 15.0) + 10.0);
    }
    int degree_;
};

/// Smallest Q with chi(2^{-(Q+1)} |k|) = 1 for every grid wavenumber, i.e.
/// 2^Q >= max |k|; decompositions up to this Q reconstruct exactly.
inline int q_max_for_grid(const Grid& g) {
    int q = 1;
    while (std::ldexp(1.0, q) < g.k_max()) ++q;
    return q;
}

/// Dyadic block Delta_q u = F^{-1}(phi(2^{-q} xi) F u).  Rings beyond the
/// grid's wavenumber range give an (empty-band) zero field, not an error.
inline ScalarField block(const ScalarField& u, int q, const DyadicFilterBank& bank) {
    if (q < 0) throw std::invalid_argument("block: q must be >= 0");
    const Grid& g = u.grid();
    if (std::ldexp(0.5, q) > g.k_max()) return ScalarField::zero(g);
    return detail::apply_multiplier(u, [&](int ix, int j) {
        return std::complex<double>(bank.phi_scaled(q, std::sqrt(g.k_squared(ix, j))), 0.0);
    });
}

/// Low-pass S_q u = F^{-1}(chi(2^{-q} xi) F u).
inline ScalarField low_pass(const ScalarField& u, int q, const DyadicFilterBank& bank) {
    const Grid& g = u.grid();
    return detail::apply_multiplier(u, [&](int ix, int j) {
        return std::complex<double>(bank.chi_scaled(q, std::sqrt(g.k_squared(ix, j))), 0.0);
    });
}

/// S_1 u plus the blocks Delta_q u for q = 1..q_max.
struct DyadicDecomposition {
    ScalarField low;
    std::vector<ScalarField> blocks; // blocks[i] = Delta_{i+1} u
    int q_max;
};

inline DyadicDecomposition decompose(const ScalarField& u, const DyadicFilterBank& bank) {
    const int qm = q_max_for_grid(u.grid());
    DyadicDecomposition d{low_pass(u, 1, bank), {}, qm};
    d.blocks.reserve(qm);
    for (int q = 1; q <= qm; ++q) d.blocks.push_back(block(u, q, bank));
    return d;
}

inline ScalarField reconstruct(const DyadicDecomposition& d) {
    ScalarField acc = d.low;
    for (const auto& b : d.blocks) acc = add(acc, b);
    return acc;
}

/// The three right-hand terms of the L^infinity interpolation chain:
/// ||u||_inf <= C (||u||_2 + N ||grad u||_2 + 2^{-N} ||grad^2 u||_2).
struct LinfBoundReport {
    double lhs;
    std::array<double, 3> rhs_terms;
    double rhs_sum() const { return rhs_terms[0] + rhs_terms[1] + rhs_terms[2]; }
};

inline LinfBoundReport linf_interpolation_bound(const ScalarField& u, int trunc_n) {
    LinfBoundReport r;
    r.lhs = linf_norm(u);
    const double l2 = l2_norm(u);
    const double grad = sobolev_norm(u, 1.0, true);
    const double hess = sobolev_norm(u, 2.0, true);
    r.rhs_terms = {l2, trunc_n * grad, std::ldexp(hess, -trunc_n)};
    return r;
}

/// N = round(log(e + ||grad^2 u|| / ||grad u||) / log 2), clamped to
/// [1, q_max]; the degenerate grad = 0 case returns 1.
inline int optimal_truncation_from_norms(double grad_l2, double hess_l2, int q_max) {
    if (!(grad_l2 > 0.0)) return 1;
    const double n = std::round(std::log(std::exp(1.0) + hess_l2 / grad_l2) / std::log(2.0));
    return std::min(q_max, std::max(1, static_cast<int>(n)));
}

inline int optimal_truncation(const ScalarField& u) {
    return optimal_truncation_from_norms(sobolev_norm(u, 1.0, true), sobolev_norm(u, 2.0, true),
                                         q_max_for_grid(u.grid()));
}

/** Both sides of the time-integrated logarithmic bound
 *   int_0^T ||rho||_inf dt  <=  C0^{1/2} T^{1/2}
 *       + C T^{1/2} ||grad rho||_{L2,t,x} log(e + ||grad^2 rho|| / ||grad rho||),
 * evaluated from per-step trajectory scalars with trapezoidal quadrature.
 */
struct LogBoundReport {
    double lhs;
    double rhs;
    double grad_l2tx;
    double hess_l2tx;
};

inline double trapezoid(std::span<const double> t, std::span<const double> f) {
    double acc = 0.0;
    for (size_t i = 1; i < t.size(); ++i) acc += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
    return acc;
}

inline LogBoundReport trajectory_log_bound(std::span<const double> times,
                                           std::span<const double> linf_rho,
                                           std::span<const double> grad_rho_l2,
                                           std::span<const double> hess_rho_l2, double c0,
                                           double c_log) {
    if (times.empty()) throw std::invalid_argument("trajectory_log_bound: empty trajectory");
    const double horizon = times.back() - times.front();
    LogBoundReport r;
    r.lhs = trapezoid(times, linf_rho);
    std::vector<double> g2(times.size()), h2(times.size());
    for (size_t i = 0; i < times.size(); ++i) {
        g2[i] = grad_rho_l2[i] * grad_rho_l2[i];
        h2[i] = hess_rho_l2[i] * hess_rho_l2[i];
    }
    r.grad_l2tx = std::sqrt(trapezoid(times, g2));
    r.hess_l2tx = std::sqrt(trapezoid(times, h2));
    const double log_term =
        r.grad_l2tx > 0.0
            ? r.grad_l2tx * std::log(std::exp(1.0) + r.hess_l2tx / r.grad_l2tx)
            : 0.0;
    r.rhs = std::sqrt(c0 * horizon) + c_log * std::sqrt(horizon) * log_term;
    return r;
}

} // namespace ddmx

#endif
