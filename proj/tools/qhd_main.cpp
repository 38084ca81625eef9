// qhd: command-line laboratory for the decay structure of the 1D viscous
// quantum hydrodynamics system. Subcommands: classify, symbol, check,
// linear-decay, simulate, accept.
//
// Exit codes: 0 success, 2 invalid input, 3 I/O failure, 4 accuracy failure,
// 5 solver abort.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "qhd/acceptance.hpp"
#include "qhd/io.hpp"
#include "qhd/linear_decay.hpp"
#include "qhd/oracle.hpp"
#include "qhd/propagator.hpp"
#include "qhd/quadrature.hpp"
#include "qhd/run_config.hpp"
#include "qhd/solver.hpp"
#include "qhd/symbols.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;
constexpr int kExitAccuracy = 4;
constexpr int kExitSolverAbort = 5;

struct EquilibriumFlags {
    double gamma = 2.0;
    double rho_star = 1.0;
    double m_star = 1.0;
    double mu = 1.0;
    double k = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--gamma", gamma, "adiabatic exponent (>1)");
        cmd->add_option("--rho-star", rho_star, "equilibrium density (>0)");
        cmd->add_option("--m-star", m_star, "equilibrium momentum");
        cmd->add_option("--mu", mu, "viscosity coefficient (>0)");
        cmd->add_option("--k", k, "dispersion coefficient (>0)");
    }

    qhd::EquilibriumState make() const {
        return qhd::classify_equilibrium(qhd::ModelParams(gamma, mu, k), rho_star, m_star);
    }
};

std::string d17(double v) { return qhd::format_double(v); }

int cmd_classify(const EquilibriumFlags& flags) {
    const auto eq = flags.make();
    std::printf("%s, alpha*=%s\n", qhd::to_string(eq.regime), d17(eq.alpha_star).c_str());
    std::printf("beta*=%s\n", d17(eq.beta_star).c_str());
    std::printf("p'(rho*)=%s\n", d17(eq.p_prime_star).c_str());
    if (eq.subsonic()) {
        std::printf("epsilon*=%s\n", d17(qhd::epsilon_star(eq)).c_str());
        std::printf("theta=%s\n", d17(qhd::theta(eq)).c_str());
    }
    return kExitOk;
}

// Dispersion CSV over the requested grid. The compensator column only exists
// for subsonic states; elsewhere it is emitted as nan.
int cmd_symbol(const EquilibriumFlags& flags, double xi_min, double xi_max, int points,
               bool include_zero, const std::string& out_path) {
    if (points < 1 || !(xi_min <= xi_max)) {
        throw CLI::ValidationError("--xi-min/--xi-max/--points describe an empty grid");
    }
    const auto eq = flags.make();

    std::vector<double> grid;
    if (points == 1) {
        grid.push_back(xi_min);
    } else if (xi_min > 0.0) {
        for (double v : qhd::log_spaced(xi_min, xi_max, points)) grid.push_back(v);
        const size_t n = grid.size();
        for (size_t i = 0; i < n; ++i) grid.push_back(-grid[n - 1 - i]);
        std::sort(grid.begin(), grid.end());
    } else {
        for (int i = 0; i < points; ++i) {
            grid.push_back(xi_min + (xi_max - xi_min) * i / (points - 1));
        }
    }
    if (include_zero) grid.push_back(0.0);
    std::sort(grid.begin(), grid.end());

    std::ostringstream os;
    os << "xi,alpha,re_lambda_plus,im_lambda_plus,re_lambda_minus,im_lambda_minus,"
          "min_eig_quadform,ratio_re_lambda_over_xi2\n";
    for (double xi : grid) {
        const auto roots = qhd::dispersion_roots(eq, xi);
        const double quad = eq.subsonic() ? qhd::quadratic_form_min_eig(eq, xi)
                                          : std::numeric_limits<double>::quiet_NaN();
        const double ratio = xi == 0.0 ? 0.0
                                       : std::max(roots.lambda_plus.real(),
                                                  roots.lambda_minus.real()) /
                                             (xi * xi);
        os << d17(xi) << ',' << d17(qhd::alpha(eq, xi)) << ',' << d17(roots.lambda_plus.real())
           << ',' << d17(roots.lambda_plus.imag()) << ',' << d17(roots.lambda_minus.real()) << ','
           << d17(roots.lambda_minus.imag()) << ',' << d17(quad) << ',' << d17(ratio) << '\n';
    }
    qhd::write_file_atomic(out_path, os.str());
    std::printf("wrote %zu rows to %s\n", grid.size(), out_path.c_str());
    return kExitOk;
}

int cmd_check(const EquilibriumFlags& flags, double xi_min, double xi_max, int points) {
    const auto eq = flags.make();
    const auto grid = qhd::make_scan_grid(xi_min, xi_max, points);
    const auto rep = qhd::dissipativity_scan(eq, grid);

    std::printf("regime: %s\n", qhd::to_string(eq.regime));
    std::printf("verdict: %s\n", qhd::to_string(rep.verdict));
    std::printf("max Re lambda / xi^2: %s\n", d17(rep.max_real_part_ratio).c_str());
    if (rep.verdict == qhd::DissipativityVerdict::StrictlyDissipative) {
        std::printf("omega0: %s\n", d17(rep.omega0_estimate).c_str());
    }
    if (rep.unstable_window) {
        std::printf("unstable window: (%s, %s)\n", d17(rep.unstable_window->first).c_str(),
                    d17(rep.unstable_window->second).c_str());
    }

    if (eq.subsonic()) {
        bool coupled = true;
        double min_quad = std::numeric_limits<double>::infinity();
        double sup_xik = 0.0;
        for (double xi : grid) {
            coupled = coupled && qhd::genuine_coupling_check(eq, xi);
            min_quad = std::min(min_quad, qhd::quadratic_form_min_eig(eq, xi));
            sup_xik = std::max(sup_xik,
                               std::abs(xi) * qhd::spectral_norm(qhd::compensating_symbol(eq, xi).K_hat));
        }
        const double eps = qhd::epsilon_star(eq);
        std::printf("genuine coupling on grid: %s\n", coupled ? "yes" : "NO");
        std::printf("epsilon*: %s\n", d17(eps).c_str());
        std::printf("theta: %s\n", d17(qhd::theta(eq)).c_str());
        std::printf("min eig [K^A^]^s+B* on grid: %s\n", d17(min_quad).c_str());
        std::printf("sup |xi K^| on grid: %s (closed-form limit %s)\n", d17(sup_xik).c_str(),
                    d17(eps * std::sqrt(2.0) / eq.params.k).c_str());
    }
    return kExitOk;
}

int cmd_linear_decay(const EquilibriumFlags& flags, int ell, const std::string& profile,
                     double amplitude, double width, double t_min, double t_max, int points,
                     double window_lo, double window_hi, const std::string& out_path) {
    if (ell < 0 || ell > 2) throw CLI::ValidationError("--ell must be 0, 1 or 2");
    const auto eq = flags.make();

    qhd::LineInitialData data;
    data.f1 = {qhd::profile_kind_from_string(profile), amplitude, width};
    data.f2 = {qhd::ProfileKind::Gaussian, 0.0, 1.0};

    const auto scan = qhd::dissipativity_scan(eq, qhd::make_scan_grid());
    if (scan.verdict != qhd::DissipativityVerdict::StrictlyDissipative) {
        throw std::domain_error("linear-decay requires a strictly dissipative (subsonic) state");
    }
    const double omega0 = scan.omega0_estimate;

    const auto t_grid = qhd::log_spaced(t_min, t_max, points);  // rejects degenerate grids

    std::vector<int> ells{0, 1};
    if (ell == 2) ells.push_back(2);
    std::vector<std::vector<double>> values(ells.size());
    for (size_t li = 0; li < ells.size(); ++li) {
        for (double t : t_grid) {
            const auto [n1, n0] = qhd::semigroup_norms(eq, data, t, ells[li], omega0);
            values[li].push_back(std::sqrt(n1 + n0));
        }
    }

    std::vector<qhd::DecayFit> fits;
    for (size_t li = 0; li < ells.size(); ++li) {
        fits.push_back(qhd::decay_rate_fit(t_grid, values[li], {window_lo, window_hi}, ells[li]));
    }

    std::ostringstream os;
    os << "t";
    for (int l : ells) os << ",norm_ell" << l;
    for (int l : ells) os << ",fit_ell" << l;
    os << '\n';
    for (size_t i = 0; i < t_grid.size(); ++i) {
        os << d17(t_grid[i]);
        for (size_t li = 0; li < ells.size(); ++li) os << ',' << d17(values[li][i]);
        for (size_t li = 0; li < ells.size(); ++li) {
            os << ','
               << d17(fits[li].prefactor * std::pow(1.0 + t_grid[i], -fits[li].exponent));
        }
        os << '\n';
    }
    qhd::write_file_atomic(out_path, os.str());

    const double fhat0 = qhd::profile_hat(data.f1, 0.0);
    std::printf("f_hat(0) = %s\n", d17(fhat0).c_str());
    for (size_t li = 0; li < ells.size(); ++li) {
        std::printf("ell=%d: exponent=%s prefactor=%s residual=%s (predicted %s)\n", ells[li],
                    d17(fits[li].exponent).c_str(), d17(fits[li].prefactor).c_str(),
                    d17(fits[li].residual).c_str(), d17(0.5 * ells[li] + 0.25).c_str());
    }
    std::printf("wrote %s\n", out_path.c_str());
    return kExitOk;
}

struct InitialFlags {
    double rho_amplitude = 1e-3;
    double rho_width = 10.0;
    double rho_center = -1;  // < 0: middle of the domain
    double m_amplitude = 0.0;
    double m_width = 10.0;
    double m_center = -1;
};

int cmd_simulate(const std::string& config_path, qhd::RunConfig cfg, const CLI::App* cmd,
                 const std::string& out_prefix, const InitialFlags& init) {
    // flags override file values: reparse file first, then apply set flags
    if (!config_path.empty()) {
        qhd::RunConfig from_file = qhd::parse_run_config_file(config_path);
        // flags that the user actually passed keep their command-line value
        auto keep = [&](const char* name) { return cmd->count(name) > 0; };
        if (!keep("--gamma")) cfg.gamma = from_file.gamma;
        if (!keep("--rho-star")) cfg.rho_star = from_file.rho_star;
        if (!keep("--m-star")) cfg.m_star = from_file.m_star;
        if (!keep("--mu")) cfg.mu = from_file.mu;
        if (!keep("--k")) cfg.k = from_file.k;
        if (!keep("--L")) cfg.L = from_file.L;
        if (!keep("--N")) cfg.N = from_file.N;
        if (!keep("--dt")) cfg.dt = from_file.dt;
        if (!keep("--t-end")) cfg.t_end = from_file.t_end;
        if (!keep("--output-stride")) cfg.output_stride = from_file.output_stride;
        if (!keep("--s")) cfg.s = from_file.s;
        if (!keep("--dealias")) cfg.dealias = from_file.dealias;
        if (!keep("--rho-floor")) cfg.rho_floor = from_file.rho_floor;
        if (!keep("--allow-supersonic")) cfg.allow_supersonic = from_file.allow_supersonic;
        if (!keep("--seed")) cfg.seed = from_file.seed;
    }

    const auto eq =
        qhd::classify_equilibrium(qhd::ModelParams(cfg.gamma, cfg.mu, cfg.k), cfg.rho_star,
                                  cfg.m_star);
    if (!eq.subsonic() && !cfg.allow_supersonic) {
        std::fprintf(stderr,
                     "state is %s; the decay theory covers subsonic states only. "
                     "Pass --allow-supersonic to run anyway.\n",
                     qhd::to_string(eq.regime));
        return kExitInvalid;
    }

    const qhd::Grid1D grid(cfg.L, cfg.N);
    const double rho_center = init.rho_center < 0 ? 0.5 * cfg.L : init.rho_center;
    const double m_center = init.m_center < 0 ? 0.5 * cfg.L : init.m_center;
    qhd::FieldState initial{grid,
                            qhd::gaussian_bump(grid, init.rho_amplitude, init.rho_width, rho_center),
                            qhd::gaussian_bump(grid, init.m_amplitude, init.m_width, m_center),
                            0.0};

    qhd::SolverConfig scfg;
    scfg.dt = cfg.dt;
    scfg.t_end = cfg.t_end;
    scfg.dealias = cfg.dealias;
    scfg.rho_floor = cfg.rho_floor;
    scfg.s = cfg.s;
    scfg.output_stride = cfg.output_stride;
    scfg.allow_supersonic = cfg.allow_supersonic;

    qhd::FieldState final_state = initial;
    const auto hist = qhd::run_simulation(eq, initial, scfg, &final_state);

    qhd::write_file_atomic(out_prefix + "_history.csv", qhd::history_csv(hist));
    qhd::write_file_atomic(out_prefix + "_snapshot.txt",
                           qhd::snapshot_text(eq, final_state, cfg.s));

    if (hist.aborted) {
        std::fprintf(stderr, "solver aborted at t=%s: %s\n", d17(hist.abort_time).c_str(),
                     hist.abort_reason.c_str());
        return kExitSolverAbort;
    }

    double worst_mass = 0, worst_mom = 0;
    for (size_t i = 0; i < hist.times.size(); ++i) {
        worst_mass = std::max(worst_mass, std::abs(hist.mass_defect[i]));
        worst_mom = std::max(worst_mom, std::abs(hist.momentum_defect[i]));
    }
    std::printf("G_s supremum: %s\n", d17(hist.G_s.back()).c_str());
    std::printf("max |mass defect|: %s\n", d17(worst_mass).c_str());
    std::printf("max |momentum defect|: %s\n", d17(worst_mom).c_str());
    std::printf("wrote %s_history.csv and %s_snapshot.txt\n", out_prefix.c_str(),
                out_prefix.c_str());
    return kExitOk;
}

int cmd_pointwise(const EquilibriumFlags& flags, int trials, std::uint64_t seed,
                  const std::string& out_path) {
    const auto eq = flags.make();
    const auto scan = qhd::dissipativity_scan(eq, qhd::make_scan_grid());
    if (scan.verdict != qhd::DissipativityVerdict::StrictlyDissipative) {
        throw std::domain_error("pointwise bound requires a subsonic state");
    }
    std::vector<double> t_grid{0.0};
    for (double t : qhd::log_spaced(0.01, 50.0, 40)) t_grid.push_back(t);
    const auto rep = qhd::pointwise_bound_check(eq, scan.xi_grid, t_grid, trials,
                                                scan.omega0_estimate, seed);
    nlohmann::json j{{"c_fitted", rep.c_fitted},
                     {"omega0_used", rep.omega0_used},
                     {"trials", rep.trials},
                     {"violations", rep.violations},
                     {"seed", rep.seed},
                     {"worst_xi", rep.worst_xi},
                     {"worst_t", rep.worst_t},
                     {"rng", "mt19937_64"}};
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        qhd::write_file_atomic(out_path, text);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return rep.passed() ? kExitOk : kExitAccuracy;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for 1D viscous-dispersive QHD decay structure"};
    app.require_subcommand(1);

    // classify
    auto* classify = app.add_subcommand("classify", "classify an equilibrium state");
    EquilibriumFlags cls_flags;
    cls_flags.attach(classify);

    // symbol
    auto* symbol = app.add_subcommand("symbol", "emit the dispersion/symbol CSV over a xi-grid");
    EquilibriumFlags sym_flags;
    sym_flags.attach(symbol);
    double sym_min = 1e-3, sym_max = 50.0;
    int sym_points = 2000;
    bool sym_zero = false;
    std::string sym_out = "symbol.csv";
    symbol->add_option("--xi-min", sym_min, "smallest |xi| (log grid) or left edge (linear)");
    symbol->add_option("--xi-max", sym_max, "largest |xi|");
    symbol->add_option("--points", sym_points, "points per sign");
    symbol->add_flag("--include-zero", sym_zero, "append the xi = 0 row");
    symbol->add_option("--out", sym_out, "output CSV path");

    // check
    auto* check = app.add_subcommand("check",
                                     "dissipativity / genuine coupling / compensator report");
    EquilibriumFlags chk_flags;
    chk_flags.attach(check);
    double chk_min = 1e-3, chk_max = 50.0;
    int chk_points = 2000;
    check->add_option("--xi-min", chk_min, "smallest |xi| of the scan grid");
    check->add_option("--xi-max", chk_max, "largest |xi| of the scan grid");
    check->add_option("--points", chk_points, "points per sign");

    // linear-decay
    auto* ldecay = app.add_subcommand("linear-decay",
                                      "measure semigroup decay exponents on the line");
    EquilibriumFlags ld_flags;
    ld_flags.attach(ldecay);
    int ld_ell = 0;
    std::string ld_profile = "gaussian";
    double ld_amp = 1.0, ld_width = 1.0, ld_tmin = 1.0, ld_tmax = 1000.0;
    int ld_points = 40;
    double ld_wlo = 100.0, ld_whi = 1000.0;
    std::string ld_out = "decay.csv";
    ldecay->add_option("--ell", ld_ell, "derivative order (0, 1 or 2)");
    ldecay->add_option("--profile", ld_profile, "gaussian | sech2 | box");
    ldecay->add_option("--amplitude", ld_amp, "profile amplitude");
    ldecay->add_option("--width", ld_width, "profile width");
    ldecay->add_option("--t-min", ld_tmin, "first sample time");
    ldecay->add_option("--t-max", ld_tmax, "last sample time");
    ldecay->add_option("--points", ld_points, "sample count (log-spaced)");
    ldecay->add_option("--window-lo", ld_wlo, "fit window start");
    ldecay->add_option("--window-hi", ld_whi, "fit window end");
    ldecay->add_option("--out", ld_out, "output CSV path");

    // pointwise (part of check family; kept separate for its JSON report)
    auto* pointwise = app.add_subcommand("pointwise",
                                         "Monte-Carlo check of the weighted mode decay bound");
    EquilibriumFlags pw_flags;
    pw_flags.attach(pointwise);
    int pw_trials = 1000;
    std::uint64_t pw_seed = 12345;
    std::string pw_out;
    pointwise->add_option("--trials", pw_trials, "number of (xi, t, U0) draws");
    pointwise->add_option("--seed", pw_seed, "RNG seed (mt19937_64)");
    pointwise->add_option("--out", pw_out, "write the JSON report here instead of stdout");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run the nonlinear periodic solver");
    qhd::RunConfig sim_cfg;
    std::string sim_config_path, sim_prefix = "run";
    simulate->add_option("--config", sim_config_path, "INI config file (flags override)");
    simulate->add_option("--gamma", sim_cfg.gamma, "adiabatic exponent");
    simulate->add_option("--rho-star", sim_cfg.rho_star, "equilibrium density");
    simulate->add_option("--m-star", sim_cfg.m_star, "equilibrium momentum");
    simulate->add_option("--mu", sim_cfg.mu, "viscosity");
    simulate->add_option("--k", sim_cfg.k, "dispersion coefficient");
    simulate->add_option("--L", sim_cfg.L, "domain length");
    simulate->add_option("--N", sim_cfg.N, "grid points (power of two)");
    simulate->add_option("--dt", sim_cfg.dt, "time step (<=0 for automatic)");
    simulate->add_option("--t-end", sim_cfg.t_end, "final time");
    simulate->add_option("--output-stride", sim_cfg.output_stride, "steps between diagnostics");
    simulate->add_option("--s", sim_cfg.s, "Sobolev diagnostic index (>=3)");
    simulate->add_option("--dealias", sim_cfg.dealias, "2/3-rule dealiasing on/off");
    simulate->add_option("--rho-floor", sim_cfg.rho_floor, "positivity floor (<0 for auto)");
    simulate->add_flag("--allow-supersonic", sim_cfg.allow_supersonic,
                       "run non-subsonic states anyway");
    simulate->add_option("--seed", sim_cfg.seed, "seed recorded with outputs");
    simulate->add_option("--out-prefix", sim_prefix, "prefix for history/snapshot files");
    InitialFlags sim_init;
    simulate->add_option("--rho-amplitude", sim_init.rho_amplitude, "gaussian density pulse amplitude");
    simulate->add_option("--rho-width", sim_init.rho_width, "gaussian density pulse width");
    simulate->add_option("--rho-center", sim_init.rho_center, "pulse center (<0 for L/2)");
    simulate->add_option("--m-amplitude", sim_init.m_amplitude, "gaussian momentum pulse amplitude");
    simulate->add_option("--m-width", sim_init.m_width, "gaussian momentum pulse width");
    simulate->add_option("--m-center", sim_init.m_center, "momentum pulse center (<0 for L/2)");

    // accept
    auto* accept = app.add_subcommand("accept", "run the acceptance suite");
    qhd::acceptance::Options acc_opts;
    accept->add_option("--filter", acc_opts.filter, "run only criteria whose name contains this");
    accept->add_option("--seed", acc_opts.seed, "seed for randomized criteria");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (classify->parsed()) return cmd_classify(cls_flags);
        if (symbol->parsed()) {
            return cmd_symbol(sym_flags, sym_min, sym_max, sym_points, sym_zero, sym_out);
        }
        if (check->parsed()) return cmd_check(chk_flags, chk_min, chk_max, chk_points);
        if (ldecay->parsed()) {
            return cmd_linear_decay(ld_flags, ld_ell, ld_profile, ld_amp, ld_width, ld_tmin,
                                    ld_tmax, ld_points, ld_wlo, ld_whi, ld_out);
        }
        if (pointwise->parsed()) return cmd_pointwise(pw_flags, pw_trials, pw_seed, pw_out);
        if (simulate->parsed()) {
            return cmd_simulate(sim_config_path, sim_cfg, simulate, sim_prefix, sim_init);
        }
        if (accept->parsed()) {
            const auto results = qhd::acceptance::run_acceptance(acc_opts, std::cout);
            if (results.empty()) {
                std::fprintf(stderr, "no criteria match filter '%s'\n", acc_opts.filter.c_str());
                return kExitInvalid;
            }
            return qhd::acceptance::exit_code(results);
        }
    } catch (const qhd::io_error& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return kExitIo;
    } catch (const qhd::accuracy_error& e) {
        std::fprintf(stderr, "accuracy error: %s\n", e.what());
        return kExitAccuracy;
    } catch (const qhd::solver_abort& e) {
        std::fprintf(stderr, "solver abort: %s\n", e.what());
        return kExitSolverAbort;
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitInvalid;
    }
    return kExitInvalid;
}
