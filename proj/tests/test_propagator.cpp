#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qhd/linear_decay.hpp"
#include "qhd/oracle.hpp"
#include "qhd/propagator.hpp"
#include "qhd/symbols.hpp"

using namespace qhd;

namespace {

EquilibriumState default_subsonic() {
    return classify_equilibrium(ModelParams(2.0, 1.0, 1.0), 1.0, 1.0);
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

double max_entry_error(const CMat2& a, const CMat2& b) { return max_abs(a - b); }

}  // namespace

TEST_CASE("propagator trivial limits") {
    const auto eq = default_subsonic();
    CHECK(max_entry_error(mode_propagator(eq, 3.0, 0.0).M, CMat2::identity()) == 0.0);
    CHECK(max_entry_error(mode_propagator(eq, 0.0, 7.5).M, CMat2::identity()) == 0.0);
    CHECK_THROWS_AS(mode_propagator(eq, 1.0, -0.1), std::domain_error);
}

TEST_CASE("propagator matches the RK4 oracle") {
    const auto eq = default_subsonic();

    SUBCASE("single pinned case") {
        const Vec2c u0{cplx(1, 0), cplx(0, 0)};
        const Vec2c exact = mode_propagator(eq, 1.0, 0.7).M * u0;
        const Vec2c ref = oracle::rk4_mode_reference(eq, 1.0, u0, 0.7, 1e-4);
        CHECK(std::abs(exact[0] - ref[0]) <= 1e-8);
        CHECK(std::abs(exact[1] - ref[1]) <= 1e-8);
    }

    SUBCASE("random draws") {
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> uxi(-20.0, 20.0), ut(0.0, 5.0);
        double worst = 0;
        int used = 0;
        while (used < 25) {
            const auto draw = random_subsonic(rng);
            const double xi = uxi(rng);
            // keep only draws the dt=1e-4 oracle can resolve
            const auto roots = dispersion_roots(draw, xi);
            if (std::max(std::abs(roots.lambda_plus), std::abs(roots.lambda_minus)) * 1e-4 > 0.02) {
                continue;
            }
            ++used;
            const double t = std::round(ut(rng) / 1e-4) * 1e-4;
            const CMat2 m = mode_propagator(draw, xi, t).M;
            for (const Vec2c& u0 : {Vec2c{cplx(1, 0), cplx(0, 0)}, Vec2c{cplx(0, 0), cplx(1, 0)}}) {
                const Vec2c a = m * u0;
                const Vec2c b = oracle::rk4_mode_reference(draw, xi, u0, t, 1e-4);
                worst = std::max({worst, std::abs(a[0] - b[0]), std::abs(a[1] - b[1])});
            }
        }
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("semigroup composition") {
    const auto eq = default_subsonic();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uxi(-20.0, 20.0), ut(0.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double xi = uxi(rng), t1 = ut(rng), t2 = ut(rng);
        const CMat2 m1 = mode_propagator(eq, xi, t1).M;
        const CMat2 m2 = mode_propagator(eq, xi, t2).M;
        const CMat2 m12 = mode_propagator(eq, xi, t1 + t2).M;
        CHECK(max_entry_error(m1 * m2, m12) <= 1e-10);
    }

    // near the degenerate discriminant the confluent branch must still compose
    const auto eqd = classify_equilibrium(ModelParams(2.0, 3.0, 1.0), 1.0, 0.0);
    const double xi_d = std::sqrt(4.0 * eqd.p_prime_star / 7.0);
    for (double t : {0.3, 1.1}) {
        const CMat2 half = mode_propagator(eqd, xi_d, 0.5 * t).M;
        const CMat2 full = mode_propagator(eqd, xi_d, t).M;
        CHECK(max_entry_error(half * half, full) <= 1e-10);
    }
}

TEST_CASE("spectral radius tracks the dispersion roots") {
    const auto eq = default_subsonic();
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uxi(-10.0, 10.0), ut(0.1, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double xi = uxi(rng), t = ut(rng);
        const CMat2 m = mode_propagator(eq, xi, t).M;
        auto [e1, e2] = oracle::polynomial_roots_companion(m.det(), -m.trace());
        const double rho_m = std::max(std::abs(e1), std::abs(e2));
        const auto roots = dispersion_roots(eq, xi);
        const double expected = std::max(std::exp(t * roots.lambda_plus.real()),
                                         std::exp(t * roots.lambda_minus.real()));
        CHECK(rho_m == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("evolve_mode") {
    const auto eq = default_subsonic();

    SUBCASE("zero data stays zero") {
        const ModeState z{2.0, {cplx(0, 0), cplx(0, 0)}};
        const ModeState out = evolve_mode(eq, z, 4.0);
        CHECK(norm2(out.U_hat) == 0.0);
    }

    SUBCASE("two-leg evolution equals one leg") {
        const ModeState start{1.3, {cplx(0.4, 0.2), cplx(-0.7, 0.9)}};
        const ModeState two = evolve_mode(eq, evolve_mode(eq, start, 0.8), 1.9);
        const ModeState one = evolve_mode(eq, start, 2.7);
        CHECK(std::abs(two.U_hat[0] - one.U_hat[0]) <= 1e-10);
        CHECK(std::abs(two.U_hat[1] - one.U_hat[1]) <= 1e-10);
    }

    SUBCASE("per-mode exponential decay at the scanned rate") {
        const auto rep = dissipativity_scan(eq, make_scan_grid());
        REQUIRE(rep.verdict == DissipativityVerdict::StrictlyDissipative);
        const ModeState start{2.0, {cplx(1, 0), cplx(0, 0)}};
        const ModeState out = evolve_mode(eq, start, 5.0);
        const double bound = 10.0 * std::exp(-rep.omega0_estimate * 4.0 * 5.0);
        CHECK(norm2(out.U_hat) <= bound);
    }
}

TEST_CASE("mode energy of the compensated estimate") {
    const auto eq = default_subsonic();

    SUBCASE("delta = 0 reduces to the plain norm") {
        const Vec2c v{cplx(0.3, 0.5), cplx(-0.2, 0.7)};
        CHECK(lembee_energy(eq, 1.7, v, 0.0) ==
              doctest::Approx(std::norm(v[0]) + std::norm(v[1])).epsilon(1e-15));
    }

    SUBCASE("first basis vector pairs to zero with the skew symbol") {
        const Vec2c v{cplx(1, 0), cplx(0, 0)};
        for (double xi : {-3.0, 0.4, 8.0}) {
            for (double delta : {0.1, 0.5, 2.0}) {
                CHECK(lembee_energy(eq, xi, v, delta) == doctest::Approx(1.0).epsilon(1e-15));
            }
        }
    }

    SUBCASE("equivalence with |V|^2 for admissible delta") {
        const double dmax = lembee_delta_max(eq);
        std::mt19937_64 rng(29);
        std::normal_distribution<double> gauss;
        std::uniform_real_distribution<double> uxi(-40.0, 40.0);
        for (int i = 0; i < 500; ++i) {
            const Vec2c v{cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng))};
            const double n2 = std::norm(v[0]) + std::norm(v[1]);
            const double e = lembee_energy(eq, uxi(rng), v, dmax);
            CHECK(e >= 0.5 * n2 - 1e-12);
            CHECK(e <= 1.5 * n2 + 1e-12);
        }
    }

    SUBCASE("energy is non-increasing along the evolved rescaled mode") {
        const double delta = lembee_delta_monotone(eq);
        std::mt19937_64 rng(31);
        std::normal_distribution<double> gauss;
        for (double xi : {0.2, 1.0, 5.0, 20.0}) {
            const double sqrt_alpha = std::sqrt(alpha(eq, xi));
            for (int trial = 0; trial < 10; ++trial) {
                const Vec2c u0{cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng))};
                double prev = std::numeric_limits<double>::infinity();
                for (double t = 0.0; t <= 3.0; t += 0.05) {
                    const Vec2c u = mode_propagator(eq, xi, t).M * u0;
                    const Vec2c v{sqrt_alpha * u[0], u[1]};  // V = S^(1/2) U
                    const double e = lembee_energy(eq, xi, v, delta);
                    CHECK(e <= prev * (1.0 + 1e-12) + 1e-300);
                    prev = e;
                }
            }
        }
    }
}

TEST_CASE("pointwise weighted decay bound") {
    const auto eq = default_subsonic();
    const auto rep = dissipativity_scan(eq, make_scan_grid());
    REQUIRE(rep.omega0_estimate > 0.0);

    std::vector<double> t_grid{0.0};
    for (double t : log_spaced(0.01, 50.0, 40)) t_grid.push_back(t);

    const auto pw = pointwise_bound_check(eq, rep.xi_grid, t_grid, 1000, rep.omega0_estimate, 4242);
    CHECK(pw.trials == 1000);
    CHECK(pw.violations == 0);
    CHECK(pw.c_fitted < 100.0);
    CHECK(pw.c_fitted >= 1.0 - 1e-12);  // t=0 draws give ratio 1
    CHECK(pw.passed());
}
