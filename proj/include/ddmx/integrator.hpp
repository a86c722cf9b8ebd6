#ifndef DDMX_INTEGRATOR_HPP
#define DDMX_INTEGRATOR_HPP

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "ddmx/dynamics.hpp"

namespace ddmx {

struct IntegratorConfig {
    double dt = 2e-3;
    double t_end = 1.0;
    std::optional<double> cutoff_radius; // lattice units, <= floor(N/3) for de-aliasing
    double cfl_safety = 0.9;
    int record_every = 1;
    /// Decoupled fixtures: evolve by the uncoupled linear flow only
    /// (pure heat for rho, pure Maxwell rotation for (E,B), no remainder).
    bool linear_only = false;
    /// Keep full field states at record times (needed by converge).
    bool keep_states = false;
};

/** Exact per-mode flow of the linear part
 *    d rho = lap rho,   d E = curl B + grad rho,   d B = -curl E.
 *
 * rho decays by the heat factor e^{-|k|^2 dt}; the transverse (E, B) pair
 * rotates unitarily at frequency |k| (the H^s isometry of the sourceless
 * Maxwell flow); the longitudinal E component absorbs the grad rho Duhamel
 * integral, which is what transports div E - rho = const through the
 * split-step scheme to roundoff.  With gauss_coupling = false the
 * longitudinal term is dropped (decoupled heat x Maxwell flow).
 *
 * Odd derivatives use the Nyquist-zeroed wavenumbers, so the rotation and
 * coupling are built from the same convention as curl3/gradient3.
 */
class LinearPropagator {
public:
    LinearPropagator(const Grid& g, double dt, bool gauss_coupling = true)
        : grid_(g), dt_(dt), coupling_(gauss_coupling) {
        const int cols = g.spectral_cols();
        heat_.resize(static_cast<size_t>(g.size_spectral()));
        cosw_.resize(heat_.size());
        sinw_.resize(heat_.size());
        duhamel_.resize(heat_.size());
        for (int ix = 0; ix < g.n(); ++ix)
            for (int j = 0; j < cols; ++j) {
                const size_t idx = static_cast<size_t>(ix) * cols + j;
                const double ksq = g.k_squared(ix, j);
                const double w = std::sqrt(g.k_squared_deriv(ix, j));
                heat_[idx] = std::exp(-ksq * dt);
                cosw_[idx] = std::cos(w * dt);
                sinw_[idx] = std::sin(w * dt);
                // int_0^dt e^{-|k|^2 s} ds, with the |k| -> 0 limit = dt
                duhamel_[idx] = ksq > 0.0 ? -std::expm1(-ksq * dt) / ksq : dt;
            }
    }

    double dt() const { return dt_; }

    State apply(const State& s) const {
        if (s.grid() != grid_) throw std::invalid_argument("LinearPropagator: grid mismatch");
        const Grid& g = grid_;
        const int cols = g.spectral_cols();
        const auto rho = s.rho.spectral();
        const auto e1 = s.E.c1().spectral(), e2 = s.E.c2().spectral(), e3 = s.E.c3().spectral();
        const auto b1 = s.B.c1().spectral(), b2 = s.B.c2().spectral(), b3 = s.B.c3().spectral();

        std::vector<std::complex<double>> nr(rho.size());
        std::vector<std::complex<double>> ne1(rho.size()), ne2(rho.size()), ne3(rho.size());
        std::vector<std::complex<double>> nb1(rho.size()), nb2(rho.size()), nb3(rho.size());
        const std::complex<double> iu(0.0, 1.0);

        for (int ix = 0; ix < g.n(); ++ix)
            for (int j = 0; j < cols; ++j) {
                const size_t q = static_cast<size_t>(ix) * cols + j;
                nr[q] = heat_[q] * rho[q];

                const double k1 = g.k1_deriv(ix), k2 = g.k2_deriv(j);
                const double w = std::sqrt(k1 * k1 + k2 * k2);
                if (w == 0.0) { // no rotation, no longitudinal direction
                    ne1[q] = e1[q];
                    ne2[q] = e2[q];
                    ne3[q] = e3[q];
                    nb1[q] = b1[q];
                    nb2[q] = b2[q];
                    nb3[q] = b3[q];
                    continue;
                }
                const double a = k1 / w, b = k2 / w; // unit k, third component 0
                const std::complex<double> el = a * e1[q] + b * e2[q];
                const std::complex<double> bl = a * b1[q] + b * b2[q];
                // transverse parts
                const std::complex<double> et1 = e1[q] - el * a, et2 = e2[q] - el * b,
                                           et3 = e3[q];
                const std::complex<double> bt1 = b1[q] - bl * a, bt2 = b2[q] - bl * b,
                                           bt3 = b3[q];
                // k_hat x V = (b V3, -a V3, a V2 - b V1)
                const std::complex<double> kxb1 = b * bt3, kxb2 = -a * bt3,
                                           kxb3 = a * bt2 - b * bt1;
                const std::complex<double> kxe1 = b * et3, kxe2 = -a * et3,
                                           kxe3 = a * et2 - b * et1;

                const double c = cosw_[q], sn = sinw_[q];
                std::complex<double> el_new = el;
                if (coupling_) el_new += iu * w * duhamel_[q] * rho[q];
                ne1[q] = el_new * a + c * et1 + iu * sn * kxb1;
                ne2[q] = el_new * b + c * et2 + iu * sn * kxb2;
                ne3[q] = c * et3 + iu * sn * kxb3;
                nb1[q] = bl * a + c * bt1 - iu * sn * kxe1;
                nb2[q] = bl * b + c * bt2 - iu * sn * kxe2;
                nb3[q] = c * bt3 - iu * sn * kxe3;
            }

        return State{
            ScalarField::from_spectral(g, std::move(nr)),
            VectorField3(ScalarField::from_spectral(g, std::move(ne1)),
                         ScalarField::from_spectral(g, std::move(ne2)),
                         ScalarField::from_spectral(g, std::move(ne3))),
            VectorField3(ScalarField::from_spectral(g, std::move(nb1)),
                         ScalarField::from_spectral(g, std::move(nb2)),
                         ScalarField::from_spectral(g, std::move(nb3))),
            s.time + dt_};
    }

private:
    Grid grid_;
    double dt_;
    bool coupling_;
    std::vector<double> heat_, cosw_, sinw_, duhamel_;
};

inline State linear_propagator(const State& s, double dt, bool gauss_coupling = true) {
    if (dt < 0.0) throw std::invalid_argument("linear_propagator: dt must be >= 0");
    return LinearPropagator(s.grid(), dt, gauss_coupling).apply(s);
}

namespace detail {

inline State state_axpy(const State& s, double a, const State& d) {
    return State{axpy(s.rho, a, d.rho), axpy(s.E, a, d.E), axpy(s.B, a, d.B), s.time};
}

/// Lawson (integrating-factor) RK2: exact linear flow, remainder evaluated
/// at both endpoints.  Second order; reduces to the linear propagator when
/// the remainder vanishes.
inline State lawson_rk2_step(const State& s, const LinearPropagator& prop, double h,
                             const std::optional<CutoffOperator>& cutoff, bool linear_only) {
    if (linear_only) {
        State out = prop.apply(s);
        out.time = s.time + h;
        return out;
    }
    const State k1 = rhs_quadratic_part(s, cutoff);
    const State ustar = prop.apply(state_axpy(s, h, k1));
    const State k2 = rhs_quadratic_part(ustar, cutoff);
    State out = state_axpy(prop.apply(state_axpy(s, 0.5 * h, k1)), 0.5 * h, k2);
    out.time = s.time + h;
    return out;
}

} // namespace detail

/// Largest stable step at the current state amplitudes.
inline double cfl_bound(const State& s, const IntegratorConfig& cfg) {
    const double amp = linf_norm(s.E) + linf_norm(s.rho);
    return cfg.cfl_safety * std::min(1.0, s.grid().dx() / std::max(1.0, amp));
}

/** One time step: the configured dt is halved (up to 20 times) until it
 * satisfies the CFL bound, then a Lawson-RK2 step is taken.  Exhausting
 * the halvings reports suspected blow-up with t and ||rho||_inf.
 */
inline State step(const State& s, const IntegratorConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw config_error("step: dt must be positive");
    std::optional<CutoffOperator> cutoff;
    if (cfg.cutoff_radius) {
        if (*cfg.cutoff_radius > s.grid().n() / 2.0)
            throw config_error("step: cutoff radius exceeds the Nyquist mode");
        cutoff.emplace(*cfg.cutoff_radius);
    }
    const double bound = cfl_bound(s, cfg);
    double h = cfg.dt;
    int halvings = 0;
    while (h > bound && halvings < 20) {
        h *= 0.5;
        ++halvings;
    }
    if (h > bound)
        throw blowup_error(s.time, linf_norm(s.rho),
                           "step: CFL bound unsatisfied after 20 halvings at t = " +
                               std::to_string(s.time) +
                               ", ||rho||_inf = " + std::to_string(linf_norm(s.rho)));
    const LinearPropagator prop(s.grid(), h, !cfg.linear_only);
    return detail::lawson_rk2_step(s, prop, h, cutoff, cfg.linear_only);
}

/// One recorded diagnostics row: all balance-law terms plus the norm and
/// residual columns of the time-series CSV.
struct DiagnosticsRow {
    double t = 0.0;
    double l2_rho = 0.0, l2_e = 0.0, l2_b = 0.0;
    double h1_rho = 0.0, h1_e = 0.0, h1_b = 0.0;
    double grad_rho_l2 = 0.0, hess_rho_l2 = 0.0;
    double linf_rho = 0.0;
    double gauss_e_residual = 0.0, div_b_residual = 0.0;
    double energy = 0.0;
    double dissipation_integral = 0.0; // int_0^t ||grad rho||^2, per-step trapezoid
    EnergyReport er;
    H1Report h1;
    // extras not in the CSV contract
    double l4_rho = 0.0, l4_e = 0.0, l4_b = 0.0, linf_e = 0.0, linf_b = 0.0;
    double signed_terms_integral = 0.0; // int_0^t (int rho^3 / 2 + int rho |E|^2)
    double cubic_time_integral = 0.0;   // int_0^t int rho^3
    double rho_e_sq_time_integral = 0.0;
};

struct TrajectoryRecord {
    std::vector<DiagnosticsRow> rows;

    std::vector<double> column(double DiagnosticsRow::* f) const {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r.*f);
        return out;
    }
    std::vector<double> times() const { return column(&DiagnosticsRow::t); }
    double horizon() const { return rows.empty() ? 0.0 : rows.back().t - rows.front().t; }
};

struct BlowupInfo {
    double time;
    double linf_rho;
    std::string message;
};

struct SimulationResult {
    TrajectoryRecord traj;
    State final_state;
    std::vector<State> states; // populated when keep_states is set
    std::optional<BlowupInfo> blowup;
    long steps_taken = 0;
    int halvings = 0;
};

namespace detail {

inline DiagnosticsRow make_row(const State& s, double diss, double signed_terms, double cubic,
                               double rho_e_sq) {
    DiagnosticsRow r;
    r.t = s.time;
    r.er = energy_identity_terms(s);
    r.h1 = h1_balance_terms(s);
    r.l2_rho = std::sqrt(r.er.l2_rho_sq);
    r.l2_e = std::sqrt(r.er.l2_E_sq);
    r.l2_b = std::sqrt(r.er.l2_B_sq);
    r.h1_rho = sobolev_norm(s.rho, 1.0);
    r.h1_e = sobolev_norm(s.E, 1.0);
    r.h1_b = sobolev_norm(s.B, 1.0);
    r.grad_rho_l2 = std::sqrt(r.er.grad_rho_l2_sq);
    r.hess_rho_l2 = std::sqrt(r.h1.hess_rho_l2_sq);
    r.linf_rho = linf_norm(s.rho);
    const GaussResiduals gr = gauss_residuals(s);
    r.gauss_e_residual = gr.e_residual;
    r.div_b_residual = gr.b_residual;
    r.energy = r.er.energy();
    r.dissipation_integral = diss;
    r.l4_rho = l4_norm(s.rho);
    r.l4_e = l4_norm(s.E);
    r.l4_b = l4_norm(s.B);
    r.linf_e = linf_norm(s.E);
    r.linf_b = linf_norm(s.B);
    r.signed_terms_integral = signed_terms;
    r.cubic_time_integral = cubic;
    r.rho_e_sq_time_integral = rho_e_sq;
    return r;
}

/// Cheap per-step scalars for the running time integrals.
struct StepScalars {
    double grad_sq;
    double cubic;
    double rho_e_sq;
};

inline StepScalars step_scalars(const State& s) {
    StepScalars v{sobolev_norm_sq(s.rho, 1.0, true), 0.0, 0.0};
    if (s.rho.is_zero()) return v;
    const auto rho = s.rho.values();
    const auto e1 = s.E.c1().values(), e2 = s.E.c2().values(), e3 = s.E.c3().values();
    double c = 0.0, re = 0.0;
    for (size_t i = 0; i < rho.size(); ++i) {
        c += rho[i] * rho[i] * rho[i];
        re += rho[i] * (e1[i] * e1[i] + e2[i] * e2[i] + e3[i] * e3[i]);
    }
    v.cubic = s.grid().cell_area() * c;
    v.rho_e_sq = s.grid().cell_area() * re;
    return v;
}

} // namespace detail

/** Advance to t_end, recording diagnostics every record_every steps (plus
 * the initial and final states).  The dissipation and signed-term time
 * integrals accumulate every step by the trapezoidal rule.  When a cutoff
 * is configured the initial data is projected by J_n first.  On CFL
 * blow-up the partial trajectory is returned together with the error.
 */
inline SimulationResult simulate(const State& initial, const IntegratorConfig& cfg,
                                 const std::function<void(const State&, const DiagnosticsRow&)>&
                                     on_record = {}) {
    if (!(cfg.t_end > 0.0)) throw config_error("simulate: t_end must be positive");
    if (cfg.record_every < 1) throw config_error("simulate: record_every must be >= 1");

    std::optional<CutoffOperator> cutoff;
    if (cfg.cutoff_radius) cutoff.emplace(*cfg.cutoff_radius);

    State s = initial;
    if (cutoff) {
        s = State{apply_cutoff(*cutoff, initial.rho), apply_cutoff(*cutoff, initial.E),
                  apply_cutoff(*cutoff, initial.B), initial.time};
    }

    SimulationResult out{TrajectoryRecord{}, s, {}, {}, 0, 0};
    double diss = 0.0, signed_terms = 0.0, cubic = 0.0, rho_e_sq = 0.0;
    detail::StepScalars prev = detail::step_scalars(s);

    auto record = [&](const State& st) {
        DiagnosticsRow row = detail::make_row(st, diss, signed_terms, cubic, rho_e_sq);
        if (on_record) on_record(st, row);
        out.traj.rows.push_back(std::move(row));
        if (cfg.keep_states) out.states.push_back(st);
    };
    record(s);

    std::map<double, LinearPropagator> props;
    const double t_stop = initial.time + cfg.t_end;
    const double eps = 1e-12 * std::max(1.0, std::abs(t_stop));
    long steps = 0;

    while (s.time < t_stop - eps) {
        double h = std::min(cfg.dt, t_stop - s.time);
        const double bound = cfl_bound(s, cfg);
        int halved = 0;
        while (h > bound && halved < 20) {
            h *= 0.5;
            ++halved;
        }
        out.halvings += halved;
        if (h > bound) {
            out.blowup = BlowupInfo{s.time, linf_norm(s.rho),
                                    "CFL bound unsatisfied after 20 halvings"};
            break;
        }
        auto it = props.find(h);
        if (it == props.end())
            it = props.emplace(h, LinearPropagator(s.grid(), h, !cfg.linear_only)).first;

        State next = detail::lawson_rk2_step(s, it->second, h, cutoff, cfg.linear_only);
        const detail::StepScalars cur = detail::step_scalars(next);
        diss += 0.5 * h * (prev.grad_sq + cur.grad_sq);
        cubic += 0.5 * h * (prev.cubic + cur.cubic);
        rho_e_sq += 0.5 * h * (prev.rho_e_sq + cur.rho_e_sq);
        signed_terms += 0.5 * h * ((0.5 * prev.cubic + prev.rho_e_sq) +
                                   (0.5 * cur.cubic + cur.rho_e_sq));
        prev = cur;
        s = std::move(next);
        ++steps;
        if (steps % cfg.record_every == 0 || !(s.time < t_stop - eps)) record(s);
    }
    out.steps_taken = steps;
    out.final_state = s;
    return out;
}

/// L^2 distance between two states of the triple (rho, E, B).
inline double state_l2_distance(const State& a, const State& b) {
    const double dr = sobolev_norm_sq(axpy(a.rho, -1.0, b.rho), 0.0);
    const double de = sobolev_norm_sq(axpy(a.E, -1.0, b.E), 0.0);
    const double db = sobolev_norm_sq(axpy(a.B, -1.0, b.B), 0.0);
    return std::sqrt(dr + de + db);
}

struct FriedrichsResult {
    std::vector<SimulationResult> runs;
    /// sup over recorded times of || u_{n_i} - u_{n_{i+1}} ||_L2
    std::vector<double> pair_distances;
};

/** Run the same initial data through a sequence of cutoff radii (each
 * member projected by its own J_n) and report the pairwise sup-in-time
 * L^2 distances between consecutive members.
 */
inline FriedrichsResult friedrichs_sequence(const State& initial, const IntegratorConfig& cfg,
                                            const std::vector<double>& radii) {
    if (radii.size() < 2) throw config_error("friedrichs_sequence: need at least two radii");
    const double dealias = std::floor(initial.grid().n() / 3.0);
    for (size_t i = 0; i < radii.size(); ++i) {
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw config_error("friedrichs_sequence: radii must be strictly increasing");
        if (radii[i] > dealias)
            throw config_error("friedrichs_sequence: radius " + std::to_string(radii[i]) +
                               " violates the de-aliasing bound n <= floor(N/3) = " +
                               std::to_string(dealias));
    }
    FriedrichsResult out;
    for (double n : radii) {
        IntegratorConfig member = cfg;
        member.cutoff_radius = n;
        member.keep_states = true;
        out.runs.push_back(simulate(initial, member));
    }
    for (size_t i = 0; i + 1 < out.runs.size(); ++i) {
        const auto& a = out.runs[i].states;
        const auto& b = out.runs[i + 1].states;
        if (a.size() != b.size())
            throw constraint_error("friedrichs_sequence: record grids diverged between members");
        double sup = 0.0;
        for (size_t t = 0; t < a.size(); ++t)
            sup = std::max(sup, state_l2_distance(a[t], b[t]));
        out.pair_distances.push_back(sup);
    }
    return out;
}

} // namespace ddmx

#endif
