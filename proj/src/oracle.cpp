#include "qhd/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "qhd/symbols.hpp"

namespace qhd::oracle {

std::ostream& operator<<(std::ostream& os, const OracleReport& rep) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-32s cases=%-6d max_error=%.3e tolerance=%.3e %s",
                  rep.name.c_str(), rep.cases, rep.max_error, rep.tolerance,
                  rep.passed() ? "PASS" : "FAIL");
    return os << buf;
}

Vec2c rk4_mode_reference(const EquilibriumState& eq, double xi, const Vec2c& u0, double t,
                         double dt) {
    if (!(dt > 0.0) || dt > 1e-3) throw std::domain_error("rk4_mode_reference: need 0 < dt <= 1e-3");
    const double steps_real = t / dt;
    const long steps = std::lround(steps_real);
    if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * std::max(1.0, steps_real)) {
        throw std::domain_error("rk4_mode_reference: t must be an integer multiple of dt");
    }

    // Generator assembled from the defining matrices, not from the dispersion
    // roots, to keep this path independent of the closed-form propagator.
    const ConstantMatrices cm = constant_matrices(eq);
    const double xi2 = xi * xi;
    const Mat2 a_xi = cm.A_star + xi2 * cm.C_star;
    const Mat2 b_xi = xi2 * cm.B_star;
    const cplx i_xi(0.0, xi);
    const CMat2 gen = cplx(-1, 0) * (i_xi * CMat2::from_real(a_xi) + CMat2::from_real(b_xi));

    Vec2c u = u0;
    for (long n = 0; n < steps; ++n) {
        const Vec2c k1 = gen * u;
        const Vec2c k2 = gen * Vec2c{u[0] + 0.5 * dt * k1[0], u[1] + 0.5 * dt * k1[1]};
        const Vec2c k3 = gen * Vec2c{u[0] + 0.5 * dt * k2[0], u[1] + 0.5 * dt * k2[1]};
        const Vec2c k4 = gen * Vec2c{u[0] + dt * k3[0], u[1] + dt * k3[1]};
        u[0] += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        u[1] += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    }
    return u;
}

std::pair<cplx, cplx> polynomial_roots_companion(cplx c0, cplx c1) {
    if (c0 == cplx(0, 0)) return {-c1, cplx(0, 0)};
    const cplx s = std::sqrt(c1 * c1 - 4.0 * c0);
    // pick the sign that adds magnitudes instead of cancelling
    const cplx q = (std::real(std::conj(c1) * s) >= 0.0) ? -0.5 * (c1 + s) : -0.5 * (c1 - s);
    if (q == cplx(0, 0)) return {cplx(0, 0), cplx(0, 0)};
    return {q, c0 / q};
}

std::vector<double> finite_difference_reference(std::span<const double> field, int order,
                                                double h) {
    const long n = static_cast<long>(field.size());
    if (n < 5) throw std::domain_error("finite_difference_reference: need at least 5 points");
    if (order < 1 || order > 3) throw std::domain_error("finite_difference_reference: order in {1,2,3}");

    auto at = [&](long j) { return field[static_cast<size_t>(((j % n) + n) % n)]; };
    std::vector<double> out(static_cast<size_t>(n));
    for (long j = 0; j < n; ++j) {
        double v = 0;
        switch (order) {
            case 1:  // 4th order centered
                v = (-at(j + 2) + 8 * at(j + 1) - 8 * at(j - 1) + at(j - 2)) / (12 * h);
                break;
            case 2:  // 4th order centered
                v = (-at(j + 2) + 16 * at(j + 1) - 30 * at(j) + 16 * at(j - 1) - at(j - 2)) /
                    (12 * h * h);
                break;
            case 3:  // 2nd order centered
                v = (at(j + 2) - 2 * at(j + 1) + 2 * at(j - 1) - at(j - 2)) / (2 * h * h * h);
                break;
        }
        out[static_cast<size_t>(j)] = v;
    }
    return out;
}

double min_eig_sampling_reference(const Mat2& m) {
    constexpr int samples = 10000;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double phi = 2.0 * M_PI * i / samples;
        const double c = std::cos(phi), s = std::sin(phi);
        const double q = m.a11 * c * c + (m.a12 + m.a21) * c * s + m.a22 * s * s;
        best = std::min(best, q);
    }
    return best;
}

}  // namespace qhd::oracle
