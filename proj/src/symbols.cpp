#include "qhd/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qhd {

namespace {

void require_subsonic(const EquilibriumState& eq, const char* op) {
    if (!eq.subsonic()) {
        throw unsupported_regime(std::string(op) + ": requires a subsonic equilibrium state (got " +
                                 to_string(eq.regime) + ")");
    }
}

}  // namespace

const char* to_string(DissipativityVerdict v) {
    return v == DissipativityVerdict::StrictlyDissipative ? "StrictlyDissipative"
                                                          : "UnstableModesFound";
}

ConstantMatrices constant_matrices(const EquilibriumState& eq) {
    const double u = eq.velocity();
    ConstantMatrices m;
    m.A_star = Mat2{0, 1, eq.alpha_star, 2 * u};
    m.B_star = Mat2::diag(0, eq.params.mu);
    m.C_star = Mat2{0, 0, 0.5 * eq.params.k * eq.params.k, 0};
    return m;
}

double alpha(const EquilibriumState& eq, double xi) {
    const double k = eq.params.k;
    return eq.alpha_star + 0.5 * k * k * xi * xi;
}

DispersionRoots dispersion_roots(const EquilibriumState& eq, double xi) {
    if (xi == 0.0) return {cplx(0, 0), cplx(0, 0)};  // lambda^2 = 0
    const double mu = eq.params.mu;
    const double k = eq.params.k;
    const double u = eq.velocity();
    const double xi2 = xi * xi;

    // lambda^2 + c1 lambda + c0 = 0 with c1 = mu xi^2 + 2 i xi u and
    // c0 = xi^2 alpha(xi). The discriminant c1^2 - 4 c0 expands exactly to
    // a + i b below (p' = u^2 + alpha*).
    const double a = xi2 * (xi2 * (mu * mu - 2 * k * k) - 4 * eq.p_prime_star);
    const double b = 4 * mu * xi2 * xi * u;
    const cplx base(-0.5 * mu * xi2, -xi * u);

    const cplx c1(mu * xi2, 2 * xi * u);
    const double c0 = xi2 * alpha(eq, xi);
    const double scale = std::norm(c1) + 4 * std::abs(c0);
    if (std::hypot(a, b) <= 1e-14 * scale) {
        // Double (or nearly double) root; returning the exact double root
        // avoids catastrophic cancellation in the propagator.
        return {base, base};
    }

    const cplx half_sqrt_disc = 0.5 * std::sqrt(cplx(a, b));  // principal branch, Re >= 0
    return {base + half_sqrt_disc, base - half_sqrt_disc};
}

std::pair<double, double> transport_eigenvalues(const EquilibriumState& eq, double xi) {
    require_subsonic(eq, "transport_eigenvalues");
    const double u = eq.velocity();
    const double a = alpha(eq, xi);
    const double r = std::sqrt(u * u + a * a);
    return {u - r, u + r};
}

bool genuine_coupling_check(const EquilibriumState& eq, double xi) {
    if (xi == 0.0) throw std::domain_error("genuine_coupling_check: xi must be nonzero");
    // ker B~(xi) is spanned by (1,0); (rho S + A~)(1,0) = (rho alpha, alpha)
    // never vanishes iff alpha(xi) != 0. Positivity also keeps nu-+ real,
    // simple and non-coalescing (constant multiplicity).
    const double a = alpha(eq, xi);
    if (!(a > 0.0)) return false;
    const double u = eq.velocity();
    const double gap = 2 * std::sqrt(u * u + a * a);
    return gap > 0.0;
}

double epsilon_star(const EquilibriumState& eq) {
    require_subsonic(eq, "epsilon_star");
    const double mu = eq.params.mu;
    const double r2 = eq.rho_star * eq.rho_star;
    return 0.5 * mu * eq.alpha_star * r2 / (eq.alpha_star * r2 + 2 * eq.m_star * eq.m_star);
}

double theta(const EquilibriumState& eq) { return 0.5 * epsilon_star(eq); }

CompensatingSymbol compensating_symbol(const EquilibriumState& eq, double xi) {
    require_subsonic(eq, "compensating_symbol");
    const double eps = epsilon_star(eq);
    const double q = eps / std::sqrt(alpha(eq, xi));
    return {Mat2{0, q, -q, 0}, eps, 0.5 * eps};
}

double quadratic_form_min_eig(const EquilibriumState& eq, double xi) {
    require_subsonic(eq, "quadratic_form_min_eig");
    const double eps = epsilon_star(eq);
    const double mu = eq.params.mu;
    const double off = eps * eq.velocity() / std::sqrt(alpha(eq, xi));
    const Mat2 q{eps, off, off, mu - eps};  // [K^ A^]^s + B*
    const double value = sym_eigenvalues(q)[0];
    const double th = 0.5 * eps;
    if (value < th - 1e-12) {
        throw std::logic_error("quadratic_form_min_eig: positivity bound violated (constants bug): value=" +
                               std::to_string(value) + " theta=" + std::to_string(th));
    }
    return value;
}

SymbolEval symbol_eval(const EquilibriumState& eq, double xi) {
    require_subsonic(eq, "symbol_eval");

    SymbolEval ev;
    ev.xi = xi;
    ev.alpha = alpha(eq, xi);

    const ConstantMatrices cm = constant_matrices(eq);
    const double xi2 = xi * xi;
    const double u = eq.velocity();
    const double sqrt_a = std::sqrt(ev.alpha);

    ev.A_xi = cm.A_star + xi2 * cm.C_star;
    ev.B_xi = xi2 * cm.B_star;
    ev.S = Mat2::diag(ev.alpha, 1.0);
    ev.A_tilde = ev.S * ev.A_xi;  // [[0, alpha],[alpha, 2u]]
    ev.B_tilde = ev.B_xi;
    ev.A_hat = Mat2{0, sqrt_a, sqrt_a, 2 * u};
    ev.B_hat = ev.B_xi;
    ev.K_hat = compensating_symbol(eq, xi).K_hat;

    const DispersionRoots roots = dispersion_roots(eq, xi);
    ev.lambda_plus = roots.lambda_plus;
    ev.lambda_minus = roots.lambda_minus;
    return ev;
}

std::vector<double> make_scan_grid(double lo, double hi, int n_per_sign) {
    if (!(lo > 0.0) || !(hi > lo) || n_per_sign < 2) {
        throw std::domain_error("make_scan_grid: need 0 < lo < hi and at least 2 points per sign");
    }
    std::vector<double> grid;
    grid.reserve(2 * static_cast<size_t>(n_per_sign));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n_per_sign; ++i) {
        const double t = static_cast<double>(i) / (n_per_sign - 1);
        grid.push_back(std::exp(llo + t * (lhi - llo)));
    }
    const size_t n = grid.size();
    for (size_t i = 0; i < n; ++i) grid.push_back(-grid[n - 1 - i]);
    // negatives descend from -lo; put the whole grid in ascending order
    std::sort(grid.begin(), grid.end());
    return grid;
}

namespace {

double re_lambda_plus(const EquilibriumState& eq, double xi) {
    return dispersion_roots(eq, xi).lambda_plus.real();
}

// Refine a sign change of Re lambda+ on [lo, hi] down to ~1e-12 relative.
double bisect_sign_change(const EquilibriumState& eq, double lo, double hi) {
    double flo = re_lambda_plus(eq, lo);
    for (int i = 0; i < 100 && (hi - lo) > 1e-12 * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = re_lambda_plus(eq, mid);
        if ((flo > 0) == (fmid > 0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

DissipativityReport dissipativity_scan(const EquilibriumState& eq,
                                       const std::vector<double>& xi_grid) {
    if (xi_grid.empty()) throw std::domain_error("dissipativity_scan: empty grid");
    for (double xi : xi_grid) {
        if (xi == 0.0) throw std::domain_error("dissipativity_scan: grid must exclude xi = 0");
    }

    DissipativityReport rep;
    rep.xi_grid = xi_grid;
    double max_ratio = -std::numeric_limits<double>::infinity();
    double max_re = -std::numeric_limits<double>::infinity();
    for (double xi : xi_grid) {
        const DispersionRoots r = dispersion_roots(eq, xi);
        const double re_p = r.lambda_plus.real();
        const double re_m = r.lambda_minus.real();
        max_ratio = std::max(max_ratio, std::max(re_p, re_m) / (xi * xi));
        max_re = std::max(max_re, std::max(re_p, re_m));
    }
    rep.max_real_part_ratio = max_ratio;
    rep.max_re_lambda = max_re;

    if (max_ratio < 0.0) {
        rep.verdict = DissipativityVerdict::StrictlyDissipative;
        rep.omega0_estimate = -max_ratio;
        return rep;
    }

    rep.verdict = DissipativityVerdict::UnstableModesFound;
    rep.omega0_estimate = 0.0;

    // Bracket the unstable window on the positive side, walking up from the
    // smallest grid point (the instability lives at small xi).
    std::vector<double> pos;
    for (double xi : xi_grid)
        if (xi > 0) pos.push_back(xi);
    std::sort(pos.begin(), pos.end());

    double lo = 0.0, hi = 0.0;
    bool in_window = false, found = false;
    double prev = pos.empty() ? 0.0 : pos.front();
    bool prev_unstable = !pos.empty() && re_lambda_plus(eq, pos.front()) > 0;
    if (prev_unstable) {
        lo = 0.0;  // unstable already at the smallest resolved xi
        in_window = found = true;
    }
    for (size_t i = 1; i < pos.size(); ++i) {
        const bool unstable = re_lambda_plus(eq, pos[i]) > 0;
        if (!in_window && !prev_unstable && unstable) {
            lo = bisect_sign_change(eq, prev, pos[i]);
            in_window = found = true;
        } else if (in_window && prev_unstable && !unstable) {
            hi = bisect_sign_change(eq, prev, pos[i]);
            in_window = false;
            break;
        }
        prev = pos[i];
        prev_unstable = unstable;
    }
    if (found) {
        if (in_window) hi = pos.back();  // window extends past the grid
        rep.unstable_window = std::make_pair(lo, hi);
    }
    return rep;
}

}  // namespace qhd
