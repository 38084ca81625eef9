#include "qhd/model.hpp"

#include <cmath>

namespace qhd {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Subsonic: return "Subsonic";
        case Regime::Sonic: return "Sonic";
        case Regime::Supersonic: return "Supersonic";
    }
    return "?";
}

ModelParams::ModelParams(double gamma_, double mu_, double k_)
    : gamma(gamma_), mu(mu_), k(k_) {
    if (!(gamma > 1.0)) throw std::domain_error("ModelParams: gamma must satisfy gamma > 1");
    if (!(mu > 0.0)) throw std::domain_error("ModelParams: mu must be positive");
    if (!(k > 0.0)) throw std::domain_error("ModelParams: k must be positive");
}

double pressure(const ModelParams& params, double rho) {
    if (!(rho > 0.0)) throw std::domain_error("pressure: density must be positive");
    return std::pow(rho, params.gamma);
}

double pressure_derivative(const ModelParams& params, double rho) {
    if (!(rho > 0.0)) throw std::domain_error("pressure_derivative: density must be positive");
    return params.gamma * std::pow(rho, params.gamma - 1.0);
}

EquilibriumState classify_equilibrium(const ModelParams& params, double rho_star, double m_star) {
    if (!(rho_star > 0.0)) throw std::domain_error("classify_equilibrium: rho_star must be positive");

    const double pp = pressure_derivative(params, rho_star);
    const double u = m_star / rho_star;
    const double alpha = pp - u * u;

    // Sonic states sit on a degeneracy of the symmetrizer; classify a thin
    // band around alpha* = 0 as Sonic instead of silently dividing by it.
    const double tol = 1e-12 * std::max(1.0, pp);
    Regime regime;
    if (std::abs(alpha) <= tol) {
        regime = Regime::Sonic;
    } else if (alpha > 0.0) {
        regime = Regime::Subsonic;
    } else {
        regime = Regime::Supersonic;
    }

    return EquilibriumState{params, rho_star, m_star, pp, alpha, -alpha, regime};
}

}  // namespace qhd
