#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qhd/oracle.hpp"
#include "qhd/symbols.hpp"

using namespace qhd;

namespace {

EquilibriumState default_subsonic() {
    return classify_equilibrium(ModelParams(2.0, 1.0, 1.0), 1.0, 1.0);
}

EquilibriumState default_supersonic() {
    return classify_equilibrium(ModelParams(2.0, 1.0, 1.0), 1.0, 2.0);
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

}  // namespace

TEST_CASE("constant matrices") {
    const auto eq0 = classify_equilibrium(ModelParams(2.0, 1.0, 1.0), 1.0, 0.0);
    const auto cm = constant_matrices(eq0);
    CHECK(cm.A_star.a11 == 0.0);
    CHECK(cm.A_star.a12 == 1.0);
    CHECK(cm.A_star.a21 == 2.0);
    CHECK(cm.A_star.a22 == 0.0);  // 2 m*/rho* = 0
    CHECK(cm.B_star.a11 == 0.0);
    CHECK(cm.B_star.a22 == 1.0);
    CHECK(cm.C_star.a21 == 0.5);
    CHECK(cm.C_star.a12 == 0.0);

    const auto cm1 = constant_matrices(default_subsonic());
    CHECK(cm1.A_star.a21 == doctest::Approx(1.0).epsilon(1e-15));  // 2 - 1
    CHECK(cm1.A_star.a22 == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("alpha symbol") {
    const auto eq = default_subsonic();
    CHECK(alpha(eq, 0.0) == eq.alpha_star);

    // alpha* = 1.75: gamma=2, rho*=1 gives p'=2; m* = 0.5 gives m*^2/rho*^2 = 0.25
    const auto eq175 = classify_equilibrium(ModelParams(2.0, 1.0, 1.0), 1.0, 0.5);
    CHECK(eq175.alpha_star == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(alpha(eq175, 2.0) == doctest::Approx(3.75).epsilon(1e-15));

    for (double xi : {0.1, 1.0, 7.3}) CHECK(alpha(eq, xi) == alpha(eq, -xi));
}

TEST_CASE("symbol_eval populates the symmetrized and rescaled pairs") {
    const auto eq = default_subsonic();

    SUBCASE("xi = 0 collapses to the constant matrices") {
        const auto ev = symbol_eval(eq, 0.0);
        const auto cm = constant_matrices(eq);
        CHECK(ev.A_xi.a21 == cm.A_star.a21);
        CHECK(ev.B_xi.a22 == 0.0);
        CHECK(ev.lambda_plus == cplx(0, 0));
    }

    SUBCASE("structure at xi = 1") {
        const auto ev = symbol_eval(eq, 1.0);
        CHECK(ev.alpha == doctest::Approx(1.5).epsilon(1e-15));
        // A~ = [[0, alpha],[alpha, 2u]]
        CHECK(ev.A_tilde.a11 == 0.0);
        CHECK(ev.A_tilde.a12 == doctest::Approx(1.5).epsilon(1e-15));
        CHECK(ev.A_tilde.a21 == doctest::Approx(1.5).epsilon(1e-15));
        CHECK(ev.A_tilde.a22 == doctest::Approx(2.0).epsilon(1e-15));
        // A^ = [[0, sqrt(alpha)],[sqrt(alpha), 2u]]
        CHECK(ev.A_hat.a12 == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
        CHECK(ev.A_hat.a21 == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
        CHECK(ev.A_hat.a22 == doctest::Approx(2.0).epsilon(1e-15));
    }

    SUBCASE("invariants across a grid") {
        for (double xi : {-20.0, -2.0, -0.3, 0.5, 3.0, 40.0}) {
            const auto ev = symbol_eval(eq, xi);
            CHECK(ev.alpha >= eq.alpha_star);
            CHECK(ev.S.a11 > 0.0);  // positive definite diag(alpha, 1)
            CHECK(ev.A_tilde.a12 == ev.A_tilde.a21);
            CHECK(ev.B_tilde.a12 == ev.B_tilde.a21);
            CHECK(ev.B_tilde.a22 >= 0.0);
            CHECK(ev.K_hat.a12 == -ev.K_hat.a21);  // skew
            CHECK(ev.K_hat.a11 == 0.0);
        }
    }

    SUBCASE("non-subsonic states are rejected") {
        CHECK_THROWS_AS(symbol_eval(default_supersonic(), 1.0), unsupported_regime);
        const auto sonic = classify_equilibrium(ModelParams(2.0, 1.0, 1.0), 1.0, std::sqrt(2.0));
        CHECK_THROWS_AS(symbol_eval(sonic, 1.0), unsupported_regime);
    }
}

TEST_CASE("transport eigenvalues") {
    const auto eq0 = classify_equilibrium(ModelParams(2.0, 1.0, 1.0), 1.0, 0.0);
    const auto [lo0, hi0] = transport_eigenvalues(eq0, 0.7);
    CHECK(hi0 == doctest::Approx(alpha(eq0, 0.7)).epsilon(1e-15));
    CHECK(lo0 == doctest::Approx(-alpha(eq0, 0.7)).epsilon(1e-15));

    // u = 1, alpha = 1.5 at xi = 1 for the default state
    const auto eq = default_subsonic();
    const auto [lo, hi] = transport_eigenvalues(eq, 1.0);
    CHECK(hi == doctest::Approx(1.0 + std::sqrt(3.25)).epsilon(1e-15));
    CHECK(lo == doctest::Approx(1.0 - std::sqrt(3.25)).epsilon(1e-15));

    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto draw = random_subsonic(rng);
        for (double xi : {0.01, 1.0, 15.0}) {
            const auto [a, b] = transport_eigenvalues(draw, xi);
            CHECK(a < 0.0);
            CHECK(0.0 < b);
        }
    }
}

TEST_CASE("genuine coupling") {
    const auto eq = default_subsonic();
    CHECK(genuine_coupling_check(eq, 1.0));
    CHECK_THROWS_AS(genuine_coupling_check(eq, 0.0), std::domain_error);

    for (int j = -3; j <= 3; ++j) {
        for (double frac : {1.0, 2.0, 5.0}) {
            const double xi = frac * std::pow(10.0, j);
            CHECK(genuine_coupling_check(eq, xi));
            CHECK(genuine_coupling_check(eq, -xi));
            const auto [lo, hi] = transport_eigenvalues(eq, xi);
            CHECK(hi - lo > 0.0);  // eigenvalues never coalesce
        }
    }

    // supersonic: alpha changes sign at xi^2 = 2 beta*/k^2 and coupling fails below
    const auto sup = default_supersonic();
    const double xi_c = std::sqrt(2.0 * sup.beta_star) / sup.params.k;
    CHECK(alpha(sup, 0.99 * xi_c) < 0.0);
    CHECK(alpha(sup, 1.01 * xi_c) > 0.0);
    CHECK_FALSE(genuine_coupling_check(sup, 0.99 * xi_c));
    CHECK(genuine_coupling_check(sup, 1.01 * xi_c));
}

TEST_CASE("compensating symbol") {
    // gamma=2, rho*=1, m*=0, mu=1: alpha*=2, eps* = 0.5, theta = 0.25
    const auto eq0 = classify_equilibrium(ModelParams(2.0, 1.0, 1.0), 1.0, 0.0);
    const auto cs = compensating_symbol(eq0, 0.0);
    CHECK(cs.epsilon_star == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cs.theta == doctest::Approx(0.25).epsilon(1e-15));

    const auto eq = default_subsonic();
    for (double xi : {-30.0, -1.0, 0.0, 0.5, 12.0}) {
        const auto k = compensating_symbol(eq, xi).K_hat;
        CHECK(k.a11 == 0.0);
        CHECK(k.a22 == 0.0);
        CHECK(k.a12 == -k.a21);
        CHECK(spectral_norm(k) <= epsilon_star(eq) / std::sqrt(eq.alpha_star) + 1e-15);
    }

    // sup over xi of |xi K^| approaches eps* sqrt(2)/k from below
    const double closed_form = epsilon_star(eq) * std::sqrt(2.0) / eq.params.k;
    double sup = 0;
    for (double xi = 0.5; xi < 2e4; xi *= 1.3) {
        sup = std::max(sup, std::abs(xi) * spectral_norm(compensating_symbol(eq, xi).K_hat));
    }
    CHECK(sup <= closed_form + 1e-12);
    CHECK(sup == doctest::Approx(closed_form).epsilon(1e-4));

    CHECK_THROWS_AS(compensating_symbol(default_supersonic(), 1.0), unsupported_regime);
}

TEST_CASE("quadratic form positivity") {
    const auto eq0 = classify_equilibrium(ModelParams(2.0, 1.0, 1.0), 1.0, 0.0);
    CHECK(quadratic_form_min_eig(eq0, 3.0) == doctest::Approx(0.5).epsilon(1e-15));

    const auto eq = default_subsonic();
    const double th = theta(eq);
    for (double xi : {0.0, 0.1, -0.1, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0}) {
        CHECK(quadratic_form_min_eig(eq, xi) >= th - 1e-12);
    }

    // off-diagonal dies as |xi| grows: limit is min(eps*, mu - eps*)
    const double limit = std::min(epsilon_star(eq), eq.params.mu - epsilon_star(eq));
    CHECK(quadratic_form_min_eig(eq, 1e6) == doctest::Approx(limit).epsilon(1e-6));

    // closed form vs dense angular sampling
    std::mt19937_64 rng(11);
    for (int i = 0; i < 25; ++i) {
        const auto draw = random_subsonic(rng);
        std::uniform_real_distribution<double> uxi(-20.0, 20.0);
        const double xi = uxi(rng);
        const double eps = epsilon_star(draw);
        const double off = eps * draw.velocity() / std::sqrt(alpha(draw, xi));
        const Mat2 q{eps, off, off, draw.params.mu - eps};
        CHECK(std::abs(quadratic_form_min_eig(draw, xi) -
                       oracle::min_eig_sampling_reference(q)) <= 1e-6);
    }
}

TEST_CASE("dispersion roots") {
    const auto eq = default_subsonic();

    SUBCASE("xi = 0 degenerates to the zero polynomial") {
        const auto r = dispersion_roots(eq, 0.0);
        CHECK(r.lambda_plus == cplx(0, 0));
        CHECK(r.lambda_minus == cplx(0, 0));
    }

    SUBCASE("Vieta identities on the scan grid") {
        const auto grid = make_scan_grid();
        for (double xi : grid) {
            const auto r = dispersion_roots(eq, xi);
            const double xi2a = xi * xi * alpha(eq, xi);
            const cplx sum_expected(-eq.params.mu * xi * xi, -2.0 * xi * eq.velocity());
            const double tol = 1e-10 * std::max(1.0, std::abs(xi2a));
            CHECK(std::abs(r.lambda_plus * r.lambda_minus - xi2a) <= tol);
            CHECK(std::abs(r.lambda_plus + r.lambda_minus - sum_expected) <= tol);
        }
    }

    SUBCASE("supersonic growth at small xi") {
        const auto sup = default_supersonic();
        CHECK(dispersion_roots(sup, 0.1).lambda_plus.real() > 0.0);
    }

    SUBCASE("m*=0 gives xi-symmetric real parts") {
        const auto eq0 = classify_equilibrium(ModelParams(2.0, 1.0, 1.0), 1.0, 0.0);
        for (double xi : {0.2, 1.7, 9.0}) {
            const auto a = dispersion_roots(eq0, xi);
            const auto b = dispersion_roots(eq0, -xi);
            CHECK(a.lambda_plus.real() == doctest::Approx(b.lambda_plus.real()).epsilon(1e-14));
            CHECK(a.lambda_minus.real() == doctest::Approx(b.lambda_minus.real()).epsilon(1e-14));
        }
    }

    SUBCASE("exactly degenerate discriminant collapses to the double root") {
        // m*=0 makes b=0; a vanishes at xi^2 = 4 p'/(mu^2 - 2 k^2)
        const auto eqd = classify_equilibrium(ModelParams(2.0, 3.0, 1.0), 1.0, 0.0);
        const double xi_d = std::sqrt(4.0 * eqd.p_prime_star / (9.0 - 2.0));
        const auto r = dispersion_roots(eqd, xi_d);
        CHECK(std::abs(r.lambda_plus - r.lambda_minus) <= 1e-10);
        CHECK(r.lambda_plus.real() ==
              doctest::Approx(-0.5 * 3.0 * xi_d * xi_d).epsilon(1e-12));
    }

    SUBCASE("labeling: lambda_plus has the larger real part") {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 200; ++i) {
            const auto draw = random_subsonic(rng);
            std::uniform_real_distribution<double> uxi(-50.0, 50.0);
            const auto r = dispersion_roots(draw, uxi(rng));
            CHECK(r.lambda_plus.real() >= r.lambda_minus.real() - 1e-14);
        }
    }
}

TEST_CASE("roots agree with the companion-matrix oracle") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uxi(-50.0, 50.0), um(-3.0, 3.0), urho(0.2, 4.0),
        ugamma(1.1, 3.0), upos(0.1, 3.0);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const ModelParams params(ugamma(rng), upos(rng), upos(rng));
        const auto eq = classify_equilibrium(params, urho(rng), um(rng));
        if (eq.regime == Regime::Sonic) continue;
        const double xi = uxi(rng);
        const auto r = dispersion_roots(eq, xi);
        const cplx c1(params.mu * xi * xi, 2.0 * xi * eq.velocity());
        const cplx c0(xi * xi * alpha(eq, xi), 0.0);
        auto [o1, o2] = oracle::polynomial_roots_companion(c0, c1);
        if (o1.real() < o2.real()) std::swap(o1, o2);
        const double scale = std::max(1.0, std::max(std::abs(o1), std::abs(o2)));
        CHECK(std::abs(r.lambda_plus - o1) <= 1e-10 * scale);
        CHECK(std::abs(r.lambda_minus - o2) <= 1e-10 * scale);
        ++checked;
    }
    CHECK(checked > 900);
}

TEST_CASE("similarity invariance of the spectrum") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uxi(-50.0, 50.0);
    for (int i = 0; i < 100; ++i) {
        const auto eq = random_subsonic(rng);
        const double xi = uxi(rng);
        const auto ev = symbol_eval(eq, xi);

        auto eig = [](const CMat2& m) {
            auto [r1, r2] = oracle::polynomial_roots_companion(m.det(), -m.trace());
            if (r1.real() < r2.real()) std::swap(r1, r2);
            return std::make_pair(r1, r2);
        };

        const cplx ixi(0, xi);
        const CMat2 gen_u = cplx(-1, 0) * (ixi * CMat2::from_real(ev.A_xi) + CMat2::from_real(ev.B_xi));
        const CMat2 gen_v = cplx(-1, 0) * (ixi * CMat2::from_real(ev.A_hat) + CMat2::from_real(ev.B_hat));

        const auto [u1, u2] = eig(gen_u);
        const auto [v1, v2] = eig(gen_v);
        const double scale = std::max(1.0, std::abs(ev.lambda_plus));
        CHECK(std::abs(u1 - ev.lambda_plus) <= 1e-10 * scale);
        CHECK(std::abs(u2 - ev.lambda_minus) <= 1e-10 * scale);
        CHECK(std::abs(v1 - ev.lambda_plus) <= 1e-10 * scale);
        CHECK(std::abs(v2 - ev.lambda_minus) <= 1e-10 * scale);
    }
}

TEST_CASE("supersonic small-xi expansion matches brute-force root signs") {
    const auto sup = default_supersonic();
    const double mu = sup.params.mu, k = sup.params.k;
    for (double xi : {1e-3, 1e-2}) {
        const double a = xi * xi * (xi * xi * (mu * mu - 2 * k * k) - 4 * sup.p_prime_star);
        const double b = 4 * mu * xi * xi * xi * sup.velocity();
        const double lhs = a + std::hypot(a, b) - 2 * mu * mu * std::pow(xi, 4);
        CHECK(lhs > 0.0);  // instability indicator at small xi
        CHECK(dispersion_roots(sup, xi).lambda_plus.real() > 0.0);
    }
}

TEST_CASE("dissipativity scan") {
    SUBCASE("grid construction") {
        const auto grid = make_scan_grid(1e-3, 50.0, 100);
        CHECK(grid.size() == 200);
        CHECK(std::abs(grid.front()) == doctest::Approx(50.0));
        CHECK(grid.back() == doctest::Approx(50.0));
        for (double xi : grid) CHECK(xi != 0.0);
    }

    SUBCASE("zero in the grid is rejected") {
        CHECK_THROWS_AS(dissipativity_scan(default_subsonic(), {1.0, 0.0}), std::domain_error);
    }

    SUBCASE("default subsonic state is strictly dissipative") {
        const auto rep = dissipativity_scan(default_subsonic(), make_scan_grid());
        CHECK(rep.verdict == DissipativityVerdict::StrictlyDissipative);
        CHECK(rep.omega0_estimate > 0.01);
        CHECK(rep.max_re_lambda <= 1e-12);
        // xi -> 0 limit of -Re lambda+/xi^2 is mu(1 - u/sqrt(p'))/2
        const double limit = 0.5 * (1.0 - 1.0 / std::sqrt(2.0));
        CHECK(rep.omega0_estimate == doctest::Approx(limit).epsilon(2e-3));
    }

    SUBCASE("supersonic state exposes the low-frequency window") {
        const auto rep = dissipativity_scan(default_supersonic(), make_scan_grid());
        CHECK(rep.verdict == DissipativityVerdict::UnstableModesFound);
        REQUIRE(rep.unstable_window.has_value());
        const auto [lo, hi] = *rep.unstable_window;
        CHECK(lo == 0.0);  // unstable from the smallest resolved wavenumber
        // upper edge sits exactly at xi = sqrt(2 beta*)/k = 2
        CHECK(hi == doctest::Approx(2.0).epsilon(1e-6));
    }
}
