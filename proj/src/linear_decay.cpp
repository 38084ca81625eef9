#include "qhd/linear_decay.hpp"

#include <algorithm>
#include <cmath>

#include "qhd/propagator.hpp"
#include "qhd/quadrature.hpp"

namespace qhd {

ProfileKind profile_kind_from_string(const std::string& name) {
    if (name == "gaussian") return ProfileKind::Gaussian;
    if (name == "sech2") return ProfileKind::Sech2;
    if (name == "box") return ProfileKind::Box;
    throw std::domain_error("unknown profile '" + name + "' (expected gaussian, sech2 or box)");
}

const char* to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::Gaussian: return "gaussian";
        case ProfileKind::Sech2: return "sech2";
        case ProfileKind::Box: return "box";
    }
    return "?";
}

double profile_hat(const LineProfile& p, double xi) {
    if (p.amplitude == 0.0) return 0.0;
    const double w = p.width;
    const double sqrt_2pi = std::sqrt(2.0 * M_PI);
    switch (p.kind) {
        case ProfileKind::Gaussian:
            return p.amplitude * w * std::exp(-0.5 * w * w * xi * xi);
        case ProfileKind::Sech2: {
            const double z = 0.5 * M_PI * w * xi;
            if (std::abs(z) < 1e-8) return p.amplitude * 2.0 * w / sqrt_2pi;
            if (std::abs(z) > 700.0) return 0.0;
            return p.amplitude * M_PI * w * w * xi / (sqrt_2pi * std::sinh(z));
        }
        case ProfileKind::Box: {
            if (std::abs(xi) < 1e-12) return p.amplitude * 2.0 * w / sqrt_2pi;
            return p.amplitude * 2.0 * std::sin(w * xi) / (sqrt_2pi * xi);
        }
    }
    return 0.0;
}

namespace {

// Truncation radius: the evolved spectrum dies at least like
// e^{-2 omega0 xi^2 t}, so sqrt(30/(omega0 t)) caps the tail by ~e^{-60};
// never below 10 so short times rely on the data's own spectral decay.
double truncation_radius(double t, double omega0) {
    double r = 10.0;
    if (t > 0.0) r = std::max(r, std::sqrt(30.0 / (omega0 * t)));
    return r;
}

}  // namespace

std::pair<double, double> semigroup_norms(const EquilibriumState& eq, const LineInitialData& data,
                                          double t, int ell, double omega0) {
    if (ell < 0) throw std::domain_error("semigroup_norms: ell must be nonnegative");
    if (t < 0.0) throw std::domain_error("semigroup_norms: t must be nonnegative");
    if (!(omega0 > 0.0)) throw std::domain_error("semigroup_norms: omega0 must be positive");

    const double radius = truncation_radius(t, omega0);

    auto evolved = [&](double xi) -> Vec2c {
        const Vec2c f{cplx(profile_hat(data.f1, xi), 0), cplx(profile_hat(data.f2, xi), 0)};
        if (t == 0.0) return f;
        return mode_propagator(eq, xi, t).M * f;
    };

    // Integrands are even in xi (real initial data, conjugate symmetry), so
    // integrate the half line and double.
    auto comp1 = [&](double xi) {
        const Vec2c u = evolved(xi);
        return std::pow(xi, 2 * ell) * (1.0 + xi * xi) * std::norm(u[0]);
    };
    auto comp0 = [&](double xi) {
        const Vec2c u = evolved(xi);
        return std::pow(xi, 2 * ell) * std::norm(u[1]);
    };

    const double n1 = 2.0 * integrate_checked(comp1, 0.0, radius, 1e-8, "semigroup_norms[norm1]");
    const double n0 = 2.0 * integrate_checked(comp0, 0.0, radius, 1e-8, "semigroup_norms[norm0]");

    // Crude tail majorant: integrand at the cut times the cut radius. Guards
    // against data whose weighted spectrum is not actually integrable (e.g. a
    // box profile has no H^1 tail at t = 0).
    const double tail = (std::abs(comp1(radius)) + std::abs(comp0(radius))) * radius;
    const double total = n1 + n0;
    if (total > 0.0 && tail > 1e-12 * total) {
        throw accuracy_error("semigroup_norms: spectral tail beyond the truncation radius is not negligible");
    }
    return {n1, n0};
}

DecayFit decay_rate_fit(const std::vector<double>& times, const std::vector<double>& values,
                        std::pair<double, double> window, int ell) {
    if (times.size() != values.size()) {
        throw std::domain_error("decay_rate_fit: times and values must have equal length");
    }

    DecayFit fit;
    fit.ell = ell;
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] < window.first || times[i] > window.second) continue;
        if (!(values[i] > 0.0)) throw std::domain_error("decay_rate_fit: values must be positive");
        fit.times.push_back(times[i]);
        fit.values.push_back(values[i]);
    }
    if (fit.times.size() < 10) {
        throw std::domain_error("decay_rate_fit: fit window must contain at least 10 samples");
    }

    // OLS of log v = log C - p log(1+t)
    const size_t n = fit.times.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log1p(fit.times[i]);
        const double y = std::log(fit.values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;

    fit.exponent = -slope;
    fit.prefactor = std::exp(intercept);

    double worst = 0;
    for (size_t i = 0; i < n; ++i) {
        const double model = fit.prefactor * std::pow(1.0 + fit.times[i], -fit.exponent);
        worst = std::max(worst, std::abs(model / fit.values[i] - 1.0));
    }
    fit.residual = worst;
    return fit;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        throw std::domain_error("log_spaced: need 0 < lo < hi and n >= 2");
    }
    std::vector<double> out;
    out.reserve(static_cast<size_t>(n));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i) {
        out.push_back(std::exp(llo + (lhi - llo) * i / (n - 1)));
    }
    return out;
}

}  // namespace qhd
