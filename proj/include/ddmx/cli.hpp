#ifndef DDMX_CLI_HPP
#define DDMX_CLI_HPP

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "ddmx/calibration.hpp"

namespace ddmx::cli {

/// Exit-code taxonomy: 0 ok, 1 configuration, 2 runtime/blow-up/IO,
/// 3 verification failure.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 1;
inline constexpr int exit_runtime = 2;
inline constexpr int exit_verification = 3;

namespace detail {

struct CommonOptions {
    std::string config_path;
    std::string output_dir = ".";
    std::string calibration_path = "data/calibration.csv";
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    bool calibrate_flag = false;
};

inline void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "run configuration file (key=value lines)");
    cmd->add_option("--seed", opt.seed, "override init.seed");
    cmd->add_option("--output-dir", opt.output_dir, "directory for output files");
    cmd->add_option("--calibration", opt.calibration_path, "calibration constants CSV");
    cmd->add_flag("--quiet", opt.quiet, "suppress progress output");
    cmd->add_flag("--calibrate", opt.calibrate_flag, "refresh calibration constants");
}

inline RunConfig load_config(const CommonOptions& opt) {
    RunConfig cfg;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) throw config_error("cannot open config '" + opt.config_path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        cfg = parse_config(text.str());
    }
    if (opt.seed) cfg.seed = *opt.seed;
    return cfg;
}

/// DDMX_THREADS caps intra-run parallelism.  The implementation is
/// single-threaded, so any cap >= 1 is honored; the value is still
/// validated as part of the interface.
inline void check_threads_env() {
    const char* v = std::getenv("DDMX_THREADS");
    if (!v) return;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end == v || *end != '\0' || n < 1)
        throw config_error("DDMX_THREADS must be a positive integer, got '" + std::string(v) +
                           "'");
}

inline std::filesystem::path out_path(const CommonOptions& opt, const std::string& name) {
    std::filesystem::create_directories(opt.output_dir);
    return std::filesystem::path(opt.output_dir) / name;
}

inline SimulationResult run_simulation(const RunConfig& cfg, const CommonOptions& opt) {
    const State initial = build_initial_state(cfg);
    std::function<void(const State&, const DiagnosticsRow&)> hook;
    if (!cfg.snapshot_dir.empty()) {
        std::filesystem::create_directories(cfg.snapshot_dir);
        hook = [&cfg](const State& s, const DiagnosticsRow& row) {
            char name[64];
            std::snprintf(name, sizeof(name), "snapshot_t%012.6f.ddmx", row.t);
            write_snapshot(std::filesystem::path(cfg.snapshot_dir) / name, s);
        };
    }
    SimulationResult res = simulate(initial, integrator_config_from(cfg), hook);
    const auto ts_path = std::filesystem::path(cfg.timeseries_path).is_absolute()
                             ? std::filesystem::path(cfg.timeseries_path)
                             : out_path(opt, cfg.timeseries_path);
    write_timeseries(ts_path, res.traj);
    if (!opt.quiet)
        std::cout << "wrote " << res.traj.rows.size() << " rows to " << ts_path.string()
                  << " (" << res.steps_taken << " steps)\n";
    return res;
}

inline int cmd_simulate(const CommonOptions& opt) {
    const RunConfig cfg = load_config(opt);
    const SimulationResult res = run_simulation(cfg, opt);
    if (res.blowup) {
        std::cerr << "blow-up suspected at t = " << res.blowup->time
                  << ", ||rho||_inf = " << res.blowup->linf_rho << "\n";
        return exit_runtime;
    }
    return exit_ok;
}

inline std::vector<CheckReport> run_suite(const RunConfig& cfg, const CalibrationTable& table,
                                          const CommonOptions& opt) {
    const State initial = build_initial_state(cfg);
    const IntegratorConfig ic = integrator_config_from(cfg);
    SimulationResult res = simulate(initial, ic);
    if (res.blowup)
        throw blowup_error(res.blowup->time, res.blowup->linf_rho, res.blowup->message);
    const auto ts_path = std::filesystem::path(cfg.timeseries_path).is_absolute()
                             ? std::filesystem::path(cfg.timeseries_path)
                             : out_path(opt, cfg.timeseries_path);
    write_timeseries(ts_path, res.traj);

    const Grid grid(cfg.grid_n, cfg.domain_length);
    const GrowthConstants gc = GrowthConstants::from_row(res.traj.rows.front(), 1.0);
    std::vector<CheckReport> reports;
    for (const std::string& name : cfg.verify_suite) {
        if (name == "energy_identity") {
            reports.push_back(check_energy_identity(res.traj, 1e-5));
        } else if (name == "growth_bound") {
            reports.push_back(check_growth_bound(res.traj, gc));
        } else if (name == "gn") {
            const auto corpus =
                make_field_corpus(scenarios::corpus_grid(), scenarios::corpus_count,
                                  scenarios::corpus_band, scenarios::corpus_seed);
            reports.push_back(check_gn(corpus, table.get("c_gn")));
        } else if (name == "scalar_inequalities") {
            reports.push_back(check_scalar_inequalities(make_scalar_sweep(
                scenarios::scalar_sweep_count, scenarios::scalar_sweep_seed)));
        } else if (name == "lp_log_bound") {
            reports.push_back(check_lp_log_bound(res.traj, grid, gc, table.get("c_lp_chain"),
                                                 table.get("c_lp_traj")));
        } else if (name == "contraction") {
            reports.push_back(contraction_probe(initial, ic, scenarios::contraction_delta,
                                                table.get("k_contraction"))
                                  .report);
        } else if (name == "bernstein") {
            const auto corpus =
                make_field_corpus(scenarios::corpus_grid(), scenarios::corpus_count,
                                  scenarios::corpus_band, scenarios::corpus_seed);
            reports.push_back(check_bernstein(corpus, DyadicFilterBank(),
                                              table.get("c_bernstein_linf"),
                                              table.get("c_bernstein_grad")));
        } else {
            throw config_error("unknown check '" + name + "'");
        }
    }
    return reports;
}

inline int cmd_verify(const CommonOptions& opt) {
    const RunConfig cfg = load_config(opt);
    if (cfg.calibrate || opt.calibrate_flag) {
        CalibrationTable table;
        calibrate_all(table, opt.quiet ? std::function<void(const std::string&)>{}
                                       : [](const std::string& m) {
                                             std::cout << "calibrate: " << m << "\n";
                                         });
        table.save(opt.calibration_path);
        if (!opt.quiet) std::cout << "wrote " << opt.calibration_path << "\n";
    }
    const CalibrationTable table = CalibrationTable::load(opt.calibration_path);
    const std::vector<CheckReport> reports = run_suite(cfg, table, opt);
    write_check_reports(out_path(opt, "checks.csv"), reports);
    bool all_passed = true;
    for (const auto& r : reports) {
        all_passed = all_passed && r.passed;
        if (!opt.quiet) {
            std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": lhs=" << r.lhs
                      << " rhs=" << r.rhs << " margin=" << r.margin;
            if (!r.note.empty()) std::cout << " (" << r.note << ")";
            std::cout << "\n";
        }
    }
    return all_passed ? exit_ok : exit_verification;
}

inline int cmd_lp_analyze(const CommonOptions& opt, const std::string& snapshot_path) {
    const State s = read_snapshot(snapshot_path);
    const DyadicFilterBank bank;
    std::ostringstream os;
    os << "field,q,l2,linf\n";
    const char* names[7] = {"rho", "E1", "E2", "E3", "B1", "B2", "B3"};
    const ScalarField* planes[7] = {&s.rho,     &s.E.c1(), &s.E.c2(), &s.E.c3(),
                                    &s.B.c1(), &s.B.c2(), &s.B.c3()};
    char buf[40];
    for (int p = 0; p < 7; ++p) {
        const DyadicDecomposition d = decompose(*planes[p], bank);
        auto row = [&](int q, const ScalarField& f) {
            os << names[p] << ',' << q;
            std::snprintf(buf, sizeof(buf), "%.17g", l2_norm(f));
            os << ',' << buf;
            std::snprintf(buf, sizeof(buf), "%.17g", linf_norm(f));
            os << ',' << buf << "\n";
        };
        row(0, d.low); // q = 0 row is the low pass S_1
        for (size_t i = 0; i < d.blocks.size(); ++i) row(static_cast<int>(i) + 1, d.blocks[i]);
    }
    const auto path = out_path(opt, "lp_analysis.csv");
    atomic_write(path, os.str());
    if (!opt.quiet) std::cout << "wrote " << path.string() << "\n";
    return exit_ok;
}

inline int cmd_converge(const CommonOptions& opt, std::vector<double> radii) {
    RunConfig cfg = load_config(opt);
    if (radii.empty()) radii = scenarios::converge_radii();
    cfg.cutoff_n.reset(); // per-member radii supersede any configured cutoff
    const State initial = build_initial_state(cfg);
    const FriedrichsResult fr =
        friedrichs_sequence(initial, integrator_config_from(cfg), radii);
    std::ostringstream os;
    os << "pair,n_low,n_high,sup_l2_distance\n";
    char buf[40];
    for (size_t i = 0; i < fr.pair_distances.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", fr.pair_distances[i]);
        os << i << ',' << radii[i] << ',' << radii[i + 1] << ',' << buf << "\n";
        if (!opt.quiet)
            std::cout << "|u_" << radii[i] << " - u_" << radii[i + 1]
                      << "|_sup,L2 = " << fr.pair_distances[i] << "\n";
    }
    atomic_write(out_path(opt, "converge.csv"), os.str());
    for (size_t i = 0; i + 1 < fr.pair_distances.size(); ++i)
        if (!(fr.pair_distances[i + 1] < fr.pair_distances[i])) {
            std::cerr << "converge: pairwise distances are not strictly decreasing\n";
            return exit_verification;
        }
    return exit_ok;
}

inline int cmd_calibrate(const CommonOptions& opt) {
    CalibrationTable table;
    calibrate_all(table, opt.quiet ? std::function<void(const std::string&)>{}
                                   : [](const std::string& m) {
                                         std::cout << "calibrate: " << m << "\n";
                                     });
    std::filesystem::path p(opt.calibration_path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    table.save(p);
    if (!opt.quiet) std::cout << "wrote " << p.string() << "\n";
    return exit_ok;
}

} // namespace detail

/// Entry point shared by the binary and the in-process CLI tests.
inline int run(const std::vector<std::string>& args) {
    CLI::App app{"ddmx: pseudo-spectral drift-diffusion-Maxwell simulator and verifier"};
    app.require_subcommand(1);

    detail::CommonOptions sim_opt, ver_opt, lp_opt, conv_opt, cal_opt;
    std::string snapshot_path;
    std::vector<double> radii;

    CLI::App* sim = app.add_subcommand("simulate", "advance the system and write the time series");
    detail::add_common(sim, sim_opt);
    CLI::App* ver = app.add_subcommand("verify", "run the configured check suite");
    detail::add_common(ver, ver_opt);
    CLI::App* lp = app.add_subcommand("lp-analyze", "dyadic block norms of a snapshot");
    detail::add_common(lp, lp_opt);
    lp->add_option("snapshot", snapshot_path, "DDMX snapshot file")->required();
    CLI::App* conv = app.add_subcommand("converge", "Friedrichs cutoff-sequence distances");
    detail::add_common(conv, conv_opt);
    conv->add_option("--radii", radii, "increasing cutoff radii (default 8 16 32)");
    CLI::App* cal = app.add_subcommand("calibrate", "refresh calibration constants");
    detail::add_common(cal, cal_opt);

    try {
        std::vector<const char*> argv;
        argv.push_back("ddmx");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    try {
        detail::check_threads_env();
        if (sim->parsed()) return detail::cmd_simulate(sim_opt);
        if (ver->parsed()) return detail::cmd_verify(ver_opt);
        if (lp->parsed()) return detail::cmd_lp_analyze(lp_opt, snapshot_path);
        if (conv->parsed()) return detail::cmd_converge(conv_opt, radii);
        if (cal->parsed()) return detail::cmd_calibrate(cal_opt);
        return exit_config;
    } catch (const config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_config;
    } catch (const blowup_error& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return exit_runtime;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return exit_runtime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
}

} // namespace ddmx::cli

#endif
