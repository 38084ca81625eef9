#include "qhd/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <random>

#include "qhd/linear_decay.hpp"
#include "qhd/oracle.hpp"
#include "qhd/propagator.hpp"
#include "qhd/solver.hpp"
#include "qhd/spectral.hpp"
#include "qhd/symbols.hpp"

namespace qhd::acceptance {

namespace {

std::string fmt(const char* pattern, ...) {
    va_list args;
    va_start(args, pattern);
    char buf[512];
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

EquilibriumState random_subsonic(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ugamma(1.1, 3.0), urho(0.2, 4.0), upos(0.1, 3.0),
        ufrac(0.0, 0.9);
    while (true) {
        const ModelParams params(ugamma(rng), upos(rng), upos(rng));
        const double rho = urho(rng);
        const double sound = std::sqrt(pressure_derivative(params, rho));
        const double m = ufrac(rng) * rho * sound * (rng() % 2 ? 1.0 : -1.0);
        const auto eq = classify_equilibrium(params, rho, m);
        if (eq.regime == Regime::Subsonic) return eq;
    }
}

// Everything criteria share; heavyweight pieces are computed once on demand.
struct Context {
    std::uint64_t seed;
    EquilibriumState sub = classify_equilibrium(ModelParams(2.0, 1.0, 1.0), 1.0, 1.0);
    EquilibriumState sup = classify_equilibrium(ModelParams(2.0, 1.0, 1.0), 1.0, 2.0);

    std::optional<DissipativityReport> scan_sub_;
    std::optional<EnergyHistory> big_run_;

    explicit Context(std::uint64_t seed_) : seed(seed_) {}

    const DissipativityReport& scan_sub() {
        if (!scan_sub_) scan_sub_ = dissipativity_scan(sub, make_scan_grid());
        return *scan_sub_;
    }

    // Reference nonlinear run: L=400, N=4096, gaussian density pulse of
    // amplitude 1e-3 and width 10, to t=50 (criteria 9 and 12).
    const EnergyHistory& big_run() {
        if (!big_run_) {
            const Grid1D grid(400.0, 4096);
            FieldState st{grid, gaussian_bump(grid, 1e-3, 10.0, 200.0),
                          std::vector<double>(4096, 0.0), 0.0};
            SolverConfig cfg;
            cfg.t_end = 50.0;
            cfg.output_stride = 10;
            big_run_ = run_simulation(sub, st, cfg);
        }
        return *big_run_;
    }
};

using CriterionFn = std::function<void(Context&, CriterionResult&)>;

void c1_subsonic_dissipativity(Context& ctx, CriterionResult& r) {
    const auto& rep = ctx.scan_sub();
    const bool strict = rep.verdict == DissipativityVerdict::StrictlyDissipative;
    r.passed = strict && rep.omega0_estimate > 0.01 && rep.max_re_lambda <= 1e-12;
    r.detail = fmt("verdict=%s omega0=%.6f (>0.01) max Re lambda=%.3e (<=1e-12)",
                   to_string(rep.verdict), rep.omega0_estimate, rep.max_re_lambda);
}

void c2_supersonic_instability(Context& ctx, CriterionResult& r) {
    const auto grid = make_scan_grid();
    const auto rep = dissipativity_scan(ctx.sup, grid);

    bool unstable_small = false;
    double worst_high = -1e300;
    const double margin = 0.1;
    const double cutoff2 = 2.0 * ctx.sup.beta_star / (ctx.sup.params.k * ctx.sup.params.k);
    for (double xi : grid) {
        const double re = dispersion_roots(ctx.sup, xi).lambda_plus.real();
        if (xi > 0.0 && xi <= 1.0 && re > 0.0) unstable_small = true;
        if (xi * xi > cutoff2 + margin) worst_high = std::max(worst_high, re);
    }
    const bool found = rep.verdict == DissipativityVerdict::UnstableModesFound &&
                       rep.unstable_window.has_value();
    r.passed = found && unstable_small && worst_high < 0.0;
    const double lo = found ? rep.unstable_window->first : 0.0;
    const double hi = found ? rep.unstable_window->second : 0.0;
    r.detail = fmt("window=(%.4g, %.6g) growth in (0,1]:%s max Re lambda above cutoff=%.3e",
                   lo, hi, unstable_small ? "yes" : "no", worst_high);
}

void c3_compensator_positivity(Context& ctx, CriterionResult& r) {
    std::mt19937_64 rng(ctx.seed);
    const auto grid = make_scan_grid(1e-3, 50.0, 5000);  // 10^4 points
    double worst_slack = 1e300;
    double worst_oracle_gap = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        const auto eq = random_subsonic(rng);
        const double th = theta(eq);
        const double eps = epsilon_star(eq);
        for (size_t i = 0; i < grid.size(); ++i) {
            const double value = quadratic_form_min_eig(eq, grid[i]);
            worst_slack = std::min(worst_slack, value - (th - 1e-12));
            if (i % 97 == 0) {
                const double off = eps * eq.velocity() / std::sqrt(alpha(eq, grid[i]));
                const Mat2 q{eps, off, off, eq.params.mu - eps};
                worst_oracle_gap = std::max(
                    worst_oracle_gap, std::abs(value - oracle::min_eig_sampling_reference(q)));
            }
        }
    }
    r.passed = worst_slack >= 0.0 && worst_oracle_gap <= 1e-6;
    r.detail = fmt("min slack over 20 draws x 10^4 xi = %.3e; sampling-oracle gap=%.3e (<=1e-6)",
                   worst_slack, worst_oracle_gap);
}

void c4_vieta_identities(Context& ctx, CriterionResult& r) {
    const auto grid = make_scan_grid();
    double worst = 0.0;
    for (const auto& eq : {ctx.sub, ctx.sup}) {
        for (double xi : grid) {
            const auto roots = dispersion_roots(eq, xi);
            const double xi2a = xi * xi * alpha(eq, xi);
            const cplx sum(-eq.params.mu * xi * xi, -2.0 * xi * eq.velocity());
            const double tol = 1e-10 * std::max(1.0, std::abs(xi2a));
            const double e1 = std::abs(roots.lambda_plus * roots.lambda_minus - xi2a) / tol;
            const double e2 = std::abs(roots.lambda_plus + roots.lambda_minus - sum) / tol;
            worst = std::max({worst, e1, e2});
        }
    }
    r.passed = worst <= 1.0;
    r.detail = fmt("worst identity residual = %.3f x tolerance (subsonic+supersonic grids)", worst);
}

void c5_propagator_oracle(Context& ctx, CriterionResult& r) {
    std::mt19937_64 rng(ctx.seed + 5);
    std::uniform_real_distribution<double> uxi(-20.0, 20.0), ut(0.0, 5.0), us(0.0, 3.0);
    const double dt = 1e-4;

    // The RK4 reference must itself resolve the mode: reject draws whose
    // eigenvalues are stiff on the dt grid, so oracle truncation stays an
    // order below the comparison threshold.
    auto draw_resolvable = [&](EquilibriumState& eq, double& xi) {
        while (true) {
            eq = random_subsonic(rng);
            xi = uxi(rng);
            const auto roots = dispersion_roots(eq, xi);
            const double stiff = std::max(std::abs(roots.lambda_plus), std::abs(roots.lambda_minus));
            if (stiff * dt <= 0.02) return;
        }
    };

    double worst_entry = 0.0;
    for (int i = 0; i < 100; ++i) {
        EquilibriumState eq = ctx.sub;
        double xi = 0.0;
        draw_resolvable(eq, xi);
        const double t = std::round(ut(rng) / dt) * dt;
        const CMat2 m = mode_propagator(eq, xi, t).M;
        const Vec2c col1 = oracle::rk4_mode_reference(eq, xi, {cplx(1, 0), cplx(0, 0)}, t, dt);
        const Vec2c col2 = oracle::rk4_mode_reference(eq, xi, {cplx(0, 0), cplx(1, 0)}, t, dt);
        worst_entry = std::max({worst_entry, std::abs(m.a11 - col1[0]), std::abs(m.a21 - col1[1]),
                                std::abs(m.a12 - col2[0]), std::abs(m.a22 - col2[1])});
    }
    double worst_semigroup = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto eq = random_subsonic(rng);
        const double xi = uxi(rng), t1 = us(rng), t2 = us(rng);
        const CMat2 lhs = mode_propagator(eq, xi, t1).M * mode_propagator(eq, xi, t2).M;
        const CMat2 rhs = mode_propagator(eq, xi, t1 + t2).M;
        worst_semigroup = std::max(worst_semigroup, max_abs(lhs - rhs));
    }
    r.passed = worst_entry <= 1e-8 && worst_semigroup <= 1e-10;
    r.detail = fmt("RK4 max-entry error=%.3e (<=1e-8); composition error=%.3e (<=1e-10)",
                   worst_entry, worst_semigroup);
}

void c6_pointwise_bound(Context& ctx, CriterionResult& r) {
    const double omega0 = ctx.scan_sub().omega0_estimate;
    std::vector<double> t_grid{0.0};
    for (double t : log_spaced(0.01, 50.0, 40)) t_grid.push_back(t);
    const auto rep =
        pointwise_bound_check(ctx.sub, ctx.scan_sub().xi_grid, t_grid, 1000, omega0, ctx.seed + 6);
    r.passed = rep.passed();
    r.detail = fmt("C=%.3f (<100) violations=%d/%d omega0_used=%.4f seed=%llu", rep.c_fitted,
                   rep.violations, rep.trials, rep.omega0_used,
                   static_cast<unsigned long long>(rep.seed));
}

void c7_semigroup_rates(Context& ctx, CriterionResult& r) {
    const double omega0 = ctx.scan_sub().omega0_estimate;
    LineInitialData data;
    data.f1 = {ProfileKind::Gaussian, 1.0, 1.0};
    data.f2 = {ProfileKind::Gaussian, 0.0, 1.0};
    const auto grid = log_spaced(100.0, 1000.0, 25);

    double exps[2] = {0, 0}, residuals[2] = {0, 0};
    for (int ell : {0, 1}) {
        std::vector<double> values;
        for (double t : grid) {
            const auto [n1, n0] = semigroup_norms(ctx.sub, data, t, ell, omega0);
            values.push_back(std::sqrt(n1 + n0));
        }
        const auto fit = decay_rate_fit(grid, values, {grid.front(), grid.back()}, ell);
        exps[ell] = fit.exponent;
        residuals[ell] = fit.residual;
    }
    const bool ok0 = std::abs(exps[0] - 0.25) <= 0.05 && residuals[0] < 0.02;
    const bool ok1 = std::abs(exps[1] - 0.75) <= 0.05 && residuals[1] < 0.02;
    r.passed = ok0 && ok1;
    r.detail = fmt("ell=0: p=%.4f res=%.2e; ell=1: p=%.4f res=%.2e (targets 0.25/0.75 +-0.05)",
                   exps[0], residuals[0], exps[1], residuals[1]);
}

void c8_h1h2_bounded(Context&, CriterionResult& r) {
    std::vector<double> grid{0.0};
    for (double t : log_spaced(0.01, 1e4, 40)) grid.push_back(t);
    const auto fine = h1h2_boundedness(1.0, grid, 1e-10, 15);
    const auto coarse = h1h2_boundedness(1.0, grid, 1e-5, 9);
    const double drift1 = std::abs(fine.sup_h1 - coarse.sup_h1) / fine.sup_h1;
    const double drift2 = std::abs(fine.sup_h2 - coarse.sup_h2) / fine.sup_h2;
    r.passed = std::isfinite(fine.sup_h1) && std::isfinite(fine.sup_h2) && drift1 < 0.01 &&
               drift2 < 0.01;
    r.detail = fmt("sup H1=%.4f sup H2=%.4f; refinement drift %.2e / %.2e (<1%%)", fine.sup_h1,
                   fine.sup_h2, drift1, drift2);
}

void c9_conservation_fixed_point(Context& ctx, CriterionResult& r) {
    const auto& hist = ctx.big_run();
    double worst = 0.0;
    for (size_t i = 0; i < hist.times.size(); ++i) {
        worst = std::max({worst, std::abs(hist.mass_defect[i]), std::abs(hist.momentum_defect[i])});
    }

    // zero data must stay exactly zero over 10^4 steps
    const Grid1D grid(50.0, 256);
    FieldState zero{grid, std::vector<double>(256, 0.0), std::vector<double>(256, 0.0), 0.0};
    EtdStepper stepper(ctx.sub, grid, 0.005, true, -1);
    for (int n = 0; n < 10000; ++n) stepper.advance(zero);
    double zmax = 0.0;
    for (size_t j = 0; j < zero.rho.size(); ++j) {
        zmax = std::max({zmax, std::abs(zero.rho[j]), std::abs(zero.m[j])});
    }

    r.passed = !hist.aborted && worst <= 1e-10 && zmax == 0.0;
    r.detail = fmt("max |defect|=%.3e (<=1e-10) through t=50; zero data after 1e4 steps: max=%g",
                   worst, zmax);
}

void c10_linear_consistency(Context& ctx, CriterionResult& r) {
    const Grid1D grid(200.0, 1024);
    SpectralWorkspace ws(grid);
    const double t_final = 10.0;

    auto deviation_at = [&](double eps) {
        FieldState st{grid, gaussian_bump(grid, eps, 10.0, 100.0),
                      std::vector<double>(1024, 0.0), 0.0};
        double dt = stable_dt(ctx.sub, st);
        const long n = std::lround(std::ceil(t_final / dt));
        dt = t_final / static_cast<double>(n);
        EtdStepper stepper(ctx.sub, grid, dt, true, -1);
        FieldState cur = st;
        for (long i = 0; i < n; ++i) stepper.advance(cur);

        std::vector<cplx> sr, sm;
        ws.forward(st.rho, sr);
        ws.forward(st.m, sm);
        for (int k = 0; k <= grid.nyquist(); ++k) {
            const Vec2c v = mode_propagator(ctx.sub, grid.xi(k), t_final).M *
                            Vec2c{sr[static_cast<size_t>(k)], sm[static_cast<size_t>(k)]};
            sr[static_cast<size_t>(k)] = v[0];
            sm[static_cast<size_t>(k)] = v[1];
        }
        std::vector<double> lin_rho, lin_m;
        ws.inverse(sr, lin_rho);
        ws.inverse(sm, lin_m);

        double num = 0, den = 0;
        for (size_t j = 0; j < lin_rho.size(); ++j) {
            num += std::pow(cur.rho[j] - lin_rho[j], 2) + std::pow(cur.m[j] - lin_m[j], 2);
            den += std::pow(lin_rho[j], 2) + std::pow(lin_m[j], 2);
        }
        return std::sqrt(num / den);
    };

    const double dev = deviation_at(1e-8);
    const double dev7 = deviation_at(1e-7);
    r.passed = dev <= 1e-10;
    r.detail = fmt(
        "rel deviation=%.3e (required <=1e-10); deviation/amplitude=%.3f at 1e-8 vs %.3f at 1e-7 "
        "(amplitude-proportional: the true quadratic response, not solver error)",
        dev, dev / 1e-8, dev7 / 1e-7);
}

void c11_n2_identity_scaling(Context& ctx, CriterionResult& r) {
    const Grid1D grid(100.0, 512);
    SpectralWorkspace ws(grid);

    FieldState st{grid, gaussian_bump(grid, 0.01, 5.0, 50.0), std::vector<double>(512, 0.0), 0.0};
    for (int j = 0; j < 512; ++j) {
        st.m[static_cast<size_t>(j)] =
            0.02 * std::exp(-std::pow(grid.x(j) - 40.0, 2) / 50.0);
    }

    double worst_identity = 0.0;
    for (const auto& eq : {ctx.sub, classify_equilibrium(ModelParams(1.4, 0.5, 2.0), 2.0, -1.0)}) {
        const auto full = rhs_conservative(eq, st, ws, false, -1);
        const auto lin = rhs_linear(eq, st, ws, false);
        const auto n2 = nonlinear_remainder_n2(eq, st, ws, false, -1);
        const auto n2_x = spectral_derivative(grid, n2, 1);
        for (size_t j = 0; j < full.dm.size(); ++j) {
            worst_identity = std::max({worst_identity, std::abs(full.drho[j] - lin.drho[j]),
                                       std::abs(full.dm[j] - (lin.dm[j] + n2_x[j]))});
        }
    }

    const FieldState base{grid, gaussian_bump(grid, 1.0, 5.0, 50.0),
                          std::vector<double>(512, 0.0), 0.0};
    double scales[2] = {0, 0};
    int idx = 0;
    for (double eps : {1e-2, 1e-3}) {
        FieldState scaled = base;
        for (auto& v : scaled.rho) v *= eps;
        double mx = 0.0;
        for (double v : nonlinear_remainder_n2(ctx.sub, scaled, ws, false, -1)) {
            mx = std::max(mx, std::abs(v));
        }
        scales[idx++] = mx / (eps * eps);
    }
    const double drift = std::abs(scales[0] / scales[1] - 1.0);

    r.passed = worst_identity <= 1e-10 && drift <= 0.05;
    r.detail = fmt("identity residual=%.3e (<=1e-10); ||N2(eps u)||/eps^2 drift=%.2f%% (<=5%%)",
                   worst_identity, 100.0 * drift);
}

void c12_global_decay_envelope(Context& ctx, CriterionResult& r) {
    const auto& hist = ctx.big_run();
    if (hist.aborted || hist.times.empty()) {
        r.passed = false;
        r.detail = "reference run aborted";
        return;
    }
    const double initial_sum = hist.G_s.front();  // (1+0)^{1/4} (||rho0||_s + ||m0||_{s-1})
    const double c1_fitted = hist.G_s.back() / initial_sum;

    double g_at_5 = 0.0;
    for (size_t i = 0; i < hist.times.size(); ++i) {
        if (hist.times[i] >= 5.0) {
            g_at_5 = hist.G_s[i];
            break;
        }
    }
    const double growth = hist.G_s.back() / g_at_5;
    r.passed = c1_fitted < 50.0 && growth <= 2.0;
    r.detail = fmt("fitted C1=%.3f (<50); G_s(50)/G_s(5)=%.3f (<=2)", c1_fitted, growth);
}

struct Criterion {
    int id;
    const char* name;
    CriterionFn fn;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list{
        {1, "symbol-subsonic-dissipativity", c1_subsonic_dissipativity},
        {2, "symbol-supersonic-instability", c2_supersonic_instability},
        {3, "symbol-compensator-positivity", c3_compensator_positivity},
        {4, "symbol-vieta-identities", c4_vieta_identities},
        {5, "propagator-oracle-and-semigroup", c5_propagator_oracle},
        {6, "pointwise-decay-bound", c6_pointwise_bound},
        {7, "semigroup-algebraic-rates", c7_semigroup_rates},
        {8, "duhamel-h1h2-bounded", c8_h1h2_bounded},
        {9, "solver-conservation-fixed-point", c9_conservation_fixed_point},
        {10, "solver-linear-consistency", c10_linear_consistency},
        {11, "solver-n2-identity-scaling", c11_n2_identity_scaling},
        {12, "solver-global-decay-envelope", c12_global_decay_envelope},
    };
    return list;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const Options& opts, std::ostream& out) {
    Context ctx(opts.seed);
    std::vector<CriterionResult> results;
    for (const auto& crit : criteria()) {
        if (!opts.filter.empty() &&
            std::string(crit.name).find(opts.filter) == std::string::npos &&
            std::to_string(crit.id) != opts.filter) {
            continue;
        }
        CriterionResult res;
        res.id = crit.id;
        res.name = crit.name;
        const auto start = std::chrono::steady_clock::now();
        try {
            crit.fn(ctx, res);
        } catch (const std::exception& e) {
            res.passed = false;
            res.detail = std::string("exception: ") + e.what();
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out << fmt("[%2d] %s  %-32s %s  [%.2fs]\n", res.id, res.passed ? "PASS" : "FAIL",
                   res.name.c_str(), res.detail.c_str(), res.seconds);
        out.flush();
        results.push_back(std::move(res));
    }
    return results;
}

int exit_code(const std::vector<CriterionResult>& results) {
    if (results.empty()) return 1;
    for (const auto& r : results) {
        if (!r.passed) return 1;
    }
    return 0;
}

}  // namespace qhd::acceptance
