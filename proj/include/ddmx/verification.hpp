#ifndef DDMX_VERIFICATION_HPP
#define DDMX_VERIFICATION_HPP

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ddmx/integrator.hpp"
#include "ddmx/littlewood_paley.hpp"
#include "ddmx/random_fields.hpp"

namespace ddmx {

/// Outcome of one verification check.  margin >= 0 means the check passed
/// with that much room (same units as lhs/rhs).
struct CheckReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool passed = false;
    std::optional<double> calibration_constant;
    std::string note;
};

/// C0 = C_cal * (||rho0||^2 + ||B0||^2 + ||E0||^2 + 1).
struct GrowthConstants {
    double c_cal = 1.0;
    double c0 = 1.0;

    static GrowthConstants from_initial(const State& s, double c_cal) {
        GrowthConstants g;
        g.c_cal = c_cal;
        g.c0 = c_cal * (sobolev_norm_sq(s.rho, 0.0) + sobolev_norm_sq(s.B, 0.0) +
                        sobolev_norm_sq(s.E, 0.0) + 1.0);
        return g;
    }
    static GrowthConstants from_row(const DiagnosticsRow& r, double c_cal) {
        GrowthConstants g;
        g.c_cal = c_cal;
        g.c0 = c_cal * (r.l2_rho * r.l2_rho + r.l2_b * r.l2_b + r.l2_e * r.l2_e + 1.0);
        return g;
    }
};

/** Exact L^2 balance of the run, two assertions under one report:
 *  (a) the central-difference rate d/dt energy + ||grad rho||^2 - sum(I)
 *      stays below tol at every interior record point;
 *  (b) the bounded-energy form with the signed cubic terms tracked on the
 *      left: energy(t) + int ||grad rho||^2 + int (int rho^3 / 2
 *      + int rho |E|^2) never exceeds energy(0) + tol.
 *  lhs is the worst balance rate, rhs = tol; the note carries (b).
 */
inline CheckReport check_energy_identity(const TrajectoryRecord& traj, double tol) {
    const auto& rows = traj.rows;
    if (rows.size() < 2)
        throw std::invalid_argument("check_energy_identity: trajectory has fewer than 2 records");
    double max_rate = 0.0;
    for (size_t i = 1; i + 1 < rows.size(); ++i) {
        const double dedt =
            (rows[i + 1].energy - rows[i - 1].energy) / (rows[i + 1].t - rows[i - 1].t);
        const double res = dedt + rows[i].grad_rho_l2 * rows[i].grad_rho_l2 -
                           rows[i].er.source_sum();
        max_rate = std::max(max_rate, std::abs(res));
    }
    double max_bound_violation = -std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
        const double tracked =
            r.energy + r.dissipation_integral + r.signed_terms_integral;
        max_bound_violation = std::max(max_bound_violation, tracked - rows.front().energy);
    }
    CheckReport rep;
    rep.name = "energy_identity";
    rep.lhs = max_rate;
    rep.rhs = tol;
    rep.margin = std::min(tol - max_rate, tol - max_bound_violation);
    rep.passed = rep.margin >= 0.0;
    std::ostringstream os;
    os << "bound_excess=" << max_bound_violation
       << " int_rho3=" << rows.back().cubic_time_integral
       << " int_rhoE2=" << rows.back().rho_e_sq_time_integral;
    rep.note = os.str();
    return rep;
}

/** Exponential growth bound: at every recorded t,
 *  ||rho||_{L1(0,t;H1)} + ||(E,B)(t)||_{H1}
 *      <= (1 + ||(E0,B0)||_{H1}) e^{C0 (t+1)}.
 *  Reports the tightest margin over the trajectory.
 */
inline CheckReport check_growth_bound(const TrajectoryRecord& traj,
                                      const GrowthConstants& constants) {
    const auto& rows = traj.rows;
    if (rows.empty()) throw std::invalid_argument("check_growth_bound: empty trajectory");
    const double f0_h1 = std::sqrt(rows.front().h1_e * rows.front().h1_e +
                                   rows.front().h1_b * rows.front().h1_b);
    CheckReport rep;
    rep.name = "growth_bound";
    rep.calibration_constant = constants.c_cal;
    rep.margin = std::numeric_limits<double>::infinity();
    double l1h1 = 0.0;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (i > 0)
            l1h1 += 0.5 * (rows[i].t - rows[i - 1].t) * (rows[i].h1_rho + rows[i - 1].h1_rho);
        const double f_h1 =
            std::sqrt(rows[i].h1_e * rows[i].h1_e + rows[i].h1_b * rows[i].h1_b);
        const double lhs = l1h1 + f_h1;
        const double rhs =
            (1.0 + f0_h1) * std::exp(constants.c0 * (rows[i].t - rows.front().t + 1.0));
        if (rhs - lhs < rep.margin) {
            rep.margin = rhs - lhs;
            rep.lhs = lhs;
            rep.rhs = rhs;
        }
    }
    rep.passed = rep.margin >= 0.0;
    return rep;
}

struct GnMeasurement {
    double max_ratio = 0.0;
    int excluded = 0;
};

/// ||u||_L4^2 / (||u||_L2 ||grad u||_L2) over a corpus; constant fields
/// (grad u = 0) are excluded.
inline GnMeasurement measure_gn(const std::vector<ScalarField>& corpus) {
    GnMeasurement m;
    for (const auto& u : corpus) {
        if (std::abs(u.is_zero() ? 0.0 : u.mean()) > 1e-12 * std::max(1.0, linf_norm(u)))
            throw constraint_error("measure_gn: corpus field has nonzero mean");
        const double grad = sobolev_norm(u, 1.0, true);
        if (grad == 0.0) {
            ++m.excluded;
            continue;
        }
        const double l4 = l4_norm(u);
        m.max_ratio = std::max(m.max_ratio, l4 * l4 / (l2_norm(u) * grad));
    }
    return m;
}

inline CheckReport check_gn(const std::vector<ScalarField>& corpus, double c_gn) {
    const GnMeasurement m = measure_gn(corpus);
    CheckReport rep;
    rep.name = "gn";
    rep.lhs = m.max_ratio;
    rep.rhs = c_gn;
    rep.margin = c_gn - m.max_ratio;
    rep.passed = rep.margin >= 0.0;
    rep.calibration_constant = c_gn;
    if (m.excluded > 0)
        rep.note = "excluded " + std::to_string(m.excluded) + " constant field(s)";
    return rep;
}

/// Ratio ||u||_L4^2 / (||u||_2 ||grad u||_2) of a centred Gaussian bump;
/// approaches sqrt(pi/2)/pi on a torus with sigma << L.
inline double gaussian_bump_gn_ratio(const Grid& g, double sigma) {
    std::vector<double> v(static_cast<size_t>(g.size_physical()));
    const double cx = g.length() / 2, cy = g.length() / 2;
    for (int ix = 0; ix < g.n(); ++ix)
        for (int iy = 0; iy < g.n(); ++iy) {
            const double dx = g.x1(ix) - cx, dy = g.x2(iy) - cy;
            v[static_cast<size_t>(ix) * g.n() + iy] =
                std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
        }
    ScalarField raw = ScalarField::from_physical(g, std::move(v));
    auto c = std::vector<std::complex<double>>(raw.spectral().begin(), raw.spectral().end());
    c[0] = 0.0; // zero-mean projection
    ScalarField u = ScalarField::from_spectral(g, std::move(c));
    const double l4 = l4_norm(u);
    return l4 * l4 / (l2_norm(u) * sobolev_norm(u, 1.0, true));
}

/// Randomized (a, b) sweep with a >= 1, b >= 0, boundary cases included.
inline std::vector<std::pair<double, double>> make_scalar_sweep(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ua(1.0, 1e6), ub(0.0, 1e6);
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<size_t>(count) + 2);
    out.emplace_back(1.0, 0.0);
    out.emplace_back(1.0, 1.0);
    for (int i = 0; i < count; ++i) out.emplace_back(ua(rng), ub(rng));
    return out;
}

/// sqrt(a+b) <= sqrt(a) + b and log(a+b) <= log(a) + b on every sample.
inline CheckReport check_scalar_inequalities(
    const std::vector<std::pair<double, double>>& samples) {
    CheckReport rep;
    rep.name = "scalar_inequalities";
    double worst = 0.0;
    long violations = 0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const auto [a, b] = samples[i];
        if (!(a >= 1.0) || !(b >= 0.0))
            throw constraint_error("check_scalar_inequalities: sample " + std::to_string(i) +
                                   " violates a >= 1, b >= 0 (a=" + std::to_string(a) +
                                   ", b=" + std::to_string(b) + ")");
        const double v1 = std::sqrt(a + b) - (std::sqrt(a) + b);
        const double v2 = std::log(a + b) - (std::log(a) + b);
        if (v1 > 0.0 || v2 > 0.0) ++violations;
        worst = std::max({worst, v1, v2});
    }
    rep.lhs = worst;
    rep.rhs = 0.0;
    rep.margin = -worst;
    rep.passed = violations == 0;
    rep.note = std::to_string(samples.size()) + " samples, " + std::to_string(violations) +
               " violations";
    return rep;
}

struct BernsteinMeasurement {
    double sup_linf_ratio = 0.0; // ||D_q u||_inf / (2^q ||D_q u||_2)
    double sup_grad_ratio = 0.0; // ||D_q grad u||_2 / (2^q ||D_q u||_2)
};

inline BernsteinMeasurement measure_bernstein(const std::vector<ScalarField>& corpus,
                                              const DyadicFilterBank& bank) {
    BernsteinMeasurement m;
    for (const auto& u : corpus) {
        const int qm = q_max_for_grid(u.grid());
        for (int q = 1; q <= qm; ++q) {
            ScalarField b = block(u, q, bank);
            const double l2 = l2_norm(b);
            if (l2 < 1e-300) continue;
            const double two_q = std::ldexp(1.0, q);
            m.sup_linf_ratio = std::max(m.sup_linf_ratio, linf_norm(b) / (two_q * l2));
            const double grad = sobolev_norm(b, 1.0, true);
            m.sup_grad_ratio = std::max(m.sup_grad_ratio, grad / (two_q * l2));
        }
    }
    return m;
}

inline CheckReport check_bernstein(const std::vector<ScalarField>& corpus,
                                   const DyadicFilterBank& bank, double c_linf, double c_grad) {
    const BernsteinMeasurement m = measure_bernstein(corpus, bank);
    CheckReport rep;
    rep.name = "bernstein";
    rep.lhs = m.sup_linf_ratio;
    rep.rhs = c_linf;
    rep.margin = std::min(c_linf - m.sup_linf_ratio, c_grad - m.sup_grad_ratio);
    rep.passed = rep.margin >= 0.0;
    rep.calibration_constant = c_linf;
    std::ostringstream os;
    os << "grad_ratio=" << m.sup_grad_ratio << " vs c_grad=" << c_grad;
    rep.note = os.str();
    return rep;
}

/// Largest constant needed by the per-time interpolation chain
/// ||rho||_inf <= C (||rho||_2 + N ||grad rho||_2 + 2^{-N} ||grad^2 rho||_2)
/// with N chosen by the optimized truncation, over the recorded states.
inline double measure_chain_requirement(const TrajectoryRecord& traj, int q_max) {
    double req = 0.0;
    for (const auto& r : traj.rows) {
        const int n = optimal_truncation_from_norms(r.grad_rho_l2, r.hess_rho_l2, q_max);
        const double rhs =
            r.l2_rho + n * r.grad_rho_l2 + std::ldexp(r.hess_rho_l2, -n);
        if (rhs > 0.0) req = std::max(req, r.linf_rho / rhs);
    }
    return req;
}

/** Lemma-style logarithmic control of ||rho||_{L1_t Linf_x}: asserts the
 * trajectory bound with the calibrated constant and the per-time chain
 * with the chain constant.
 */
inline CheckReport check_lp_log_bound(const TrajectoryRecord& traj, const Grid& grid,
                                      const GrowthConstants& constants, double c_chain,
                                      double c_traj) {
    const auto& rows = traj.rows;
    if (rows.empty()) throw std::invalid_argument("check_lp_log_bound: empty trajectory");
    const LogBoundReport lb = trajectory_log_bound(
        traj.times(), traj.column(&DiagnosticsRow::linf_rho),
        traj.column(&DiagnosticsRow::grad_rho_l2), traj.column(&DiagnosticsRow::hess_rho_l2),
        constants.c0, c_traj);
    const double chain_req = measure_chain_requirement(traj, q_max_for_grid(grid));
    CheckReport rep;
    rep.name = "lp_log_bound";
    rep.lhs = lb.lhs;
    rep.rhs = lb.rhs;
    rep.margin = lb.rhs - lb.lhs;
    rep.passed = rep.margin >= 0.0 && chain_req <= c_chain;
    rep.calibration_constant = c_traj;
    std::ostringstream os;
    os << "chain_req=" << chain_req << " vs c_chain=" << c_chain
       << " grad_l2tx=" << lb.grad_l2tx << " hess_l2tx=" << lb.hess_l2tx;
    rep.note = os.str();
    return rep;
}

struct ContractionResult {
    CheckReport report;
    double measured_excess_rate = 0.0; // sup_t (log(D/D0) - S)/t
    double diff_sup_l2 = 0.0;          // sup_t ||d rho||_L2
    double diff_l2h1 = 0.0;            // (int ||d rho||_H1^2 dt)^{1/2}
    std::vector<double> times;
    std::vector<double> d_rho_sq;
    std::vector<double> d_state_sq; // squared L2 distance of the full triple
    std::vector<double> s_integral; // int_0^t (||rho1||_inf + ||rho2||_inf)
};

/** Twin-run Gronwall probe: the second run starts from a zero-mean
 * perturbation of rho (Gauss law re-solved) of relative size delta, and
 * ||d rho(t)||^2 <= ||d rho(0)||^2 exp( int (||rho1||_inf + ||rho2||_inf
 * + K) dtau ) is asserted with the calibrated K.
 * lhs is the measured rate in excess of the L-infinity budget, rhs = K.
 */
inline ContractionResult contraction_probe(const State& initial, const IntegratorConfig& cfg,
                                           double delta, double k_calibrated,
                                           std::uint64_t perturbation_seed = 0xDDA7) {
    if (delta < 0.0) throw std::invalid_argument("contraction_probe: delta must be >= 0");
    std::optional<CutoffOperator> cutoff;
    if (cfg.cutoff_radius) cutoff.emplace(*cfg.cutoff_radius);

    State s1 = initial;
    if (cutoff)
        s1 = State{apply_cutoff(*cutoff, initial.rho), apply_cutoff(*cutoff, initial.E),
                   apply_cutoff(*cutoff, initial.B), initial.time};

    // zero-mean band-limited perturbation; electric field re-solved so the
    // pair stays Gauss-compatible
    State s2 = s1;
    if (delta > 0.0) {
        const int band = std::max(2, s1.grid().n() / 6);
        ScalarField pert = random_band_limited(s1.grid(), 1, band, perturbation_seed, 1.0);
        const double rho_scale = l2_norm(s1.rho);
        if (rho_scale > 0.0) {
            pert = scale(pert, delta * rho_scale / l2_norm(pert));
            if (cutoff) pert = apply_cutoff(*cutoff, pert);
            s2 = State{add(s1.rho, pert), add(s1.E, solve_gauss_electric(pert)), s1.B,
                       s1.time};
        } else {
            VectorField3 epert = random_divergence_free(s1.grid(), band, perturbation_seed, 1.0);
            const double e_scale = std::max(l2_norm(s1.E), 1.0);
            epert = scale(epert, delta * e_scale / l2_norm(epert));
            if (cutoff) epert = apply_cutoff(*cutoff, epert);
            s2 = State{s1.rho, add(s1.E, epert), s1.B, s1.time};
        }
    }

    ContractionResult res;
    const double d0 = sobolev_norm_sq(axpy(s2.rho, -1.0, s1.rho), 0.0);
    double s_upper = 0.0;          // running int (linf1 + linf2)
    double diff_h1_sq_int = 0.0;   // running int ||d rho||_H1^2
    double prev_linf_sum = linf_norm(s1.rho) + linf_norm(s2.rho);
    double prev_diff_h1_sq = sobolev_norm_sq(axpy(s2.rho, -1.0, s1.rho), 1.0);

    auto record = [&](const State& a, const State& b) {
        res.times.push_back(a.time);
        const double d = sobolev_norm_sq(axpy(b.rho, -1.0, a.rho), 0.0);
        res.d_rho_sq.push_back(d);
        const double ds = state_l2_distance(a, b);
        res.d_state_sq.push_back(ds * ds);
        res.s_integral.push_back(s_upper);
        res.diff_sup_l2 = std::max(res.diff_sup_l2, std::sqrt(d));
    };
    record(s1, s2);

    std::map<double, LinearPropagator> props;
    const double t_stop = s1.time + cfg.t_end;
    const double eps = 1e-12 * std::max(1.0, std::abs(t_stop));
    long steps = 0;
    while (s1.time < t_stop - eps) {
        double h = std::min(cfg.dt, t_stop - s1.time);
        // both runs share the step sequence of the unperturbed run
        const double bound = cfl_bound(s1, cfg);
        int halved = 0;
        while (h > bound && halved < 20) {
            h *= 0.5;
            ++halved;
        }
        if (h > bound)
            throw blowup_error(s1.time, linf_norm(s1.rho), "contraction_probe: blow-up");
        auto it = props.find(h);
        if (it == props.end())
            it = props.emplace(h, LinearPropagator(s1.grid(), h, !cfg.linear_only)).first;
        s1 = detail::lawson_rk2_step(s1, it->second, h, cutoff, cfg.linear_only);
        s2 = detail::lawson_rk2_step(s2, it->second, h, cutoff, cfg.linear_only);
        const double linf_sum = linf_norm(s1.rho) + linf_norm(s2.rho);
        s_upper += 0.5 * h * (prev_linf_sum + linf_sum);
        prev_linf_sum = linf_sum;
        const double dh1 = sobolev_norm_sq(axpy(s2.rho, -1.0, s1.rho), 1.0);
        diff_h1_sq_int += 0.5 * h * (prev_diff_h1_sq + dh1);
        prev_diff_h1_sq = dh1;
        ++steps;
        if (steps % cfg.record_every == 0 || !(s1.time < t_stop - eps)) record(s1, s2);
    }
    res.diff_l2h1 = std::sqrt(diff_h1_sq_int);

    CheckReport rep;
    rep.name = "contraction";
    rep.calibration_constant = k_calibrated;
    if (d0 == 0.0) {
        double worst = 0.0;
        for (double d : res.d_rho_sq) worst = std::max(worst, d);
        rep.lhs = worst;
        rep.rhs = 0.0;
        rep.margin = -worst;
        rep.passed = worst == 0.0;
        rep.note = "delta = 0: twin runs must be identical";
        res.measured_excess_rate = 0.0;
    } else {
        double excess = -std::numeric_limits<double>::infinity();
        for (size_t i = 1; i < res.times.size(); ++i) {
            const double t = res.times[i] - res.times.front();
            if (t <= 0.0) continue;
            const double lograt =
                res.d_rho_sq[i] > 0.0 ? std::log(res.d_rho_sq[i] / d0)
                                      : -std::numeric_limits<double>::infinity();
            excess = std::max(excess, (lograt - res.s_integral[i]) / t);
        }
        res.measured_excess_rate = excess;
        rep.lhs = excess;
        rep.rhs = k_calibrated;
        rep.margin = k_calibrated - excess;
        rep.passed = rep.margin >= 0.0;
        std::ostringstream os;
        os << "d0=" << d0 << " sup_diff_l2=" << res.diff_sup_l2
           << " diff_l2h1=" << res.diff_l2h1;
        rep.note = os.str();
    }
    res.report = rep;
    return res;
}

/// Fixed corpus of zero-mean band-limited fields for the inequality checks.
inline std::vector<ScalarField> make_field_corpus(const Grid& g, int count, int band,
                                                  std::uint64_t master_seed) {
    std::vector<ScalarField> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(random_band_limited(g, 1, band, master_seed + static_cast<size_t>(i), 1.0));
    return out;
}

/// Largest H^s smoothing ratio ||J_n u||_{H^s} / ((1 + k_n)^s ||u||_{L2})
/// over a corpus, radii and exponents (k_n is the physical cutoff radius).
inline double measure_cutoff_smoothing(const std::vector<ScalarField>& corpus,
                                       const std::vector<double>& radii,
                                       const std::vector<double>& exponents) {
    double sup = 0.0;
    for (const auto& u : corpus) {
        const double l2 = l2_norm(u);
        if (l2 == 0.0) continue;
        for (double n : radii) {
            const ScalarField cut = apply_cutoff(CutoffOperator(n), u);
            const double kn = u.grid().fundamental() * n;
            for (double s : exponents)
                sup = std::max(sup, sobolev_norm(cut, s) / (std::pow(1.0 + kn, s) * l2));
        }
    }
    return sup;
}

} // namespace ddmx

#endif
