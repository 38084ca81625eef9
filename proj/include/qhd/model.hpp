#pragma once

#include <stdexcept>
#include <string>

namespace qhd {

// Thrown when an operation requires a subsonic state but gets a sonic or
// supersonic one (the symmetrizer is only positive definite below the
// sound speed).
class unsupported_regime : public std::domain_error {
public:
    explicit unsupported_regime(const std::string& what) : std::domain_error(what) {}
};

enum class Regime { Subsonic, Sonic, Supersonic };

const char* to_string(Regime r);

// Physical parameters of the barotropic model: p(rho) = rho^gamma with
// gamma > 1, viscosity mu > 0, dispersion coefficient k > 0.
struct ModelParams {
    double gamma;
    double mu;
    double k;

    ModelParams(double gamma_, double mu_, double k_);
};

// A constant equilibrium (rho*, m*) together with every derived constant the
// rest of the code needs. All fields are computed once at construction so
// that every consumer sees bit-identical values.
struct EquilibriumState {
    ModelParams params;
    double rho_star;      // > 0
    double m_star;
    double p_prime_star;  // gamma * rho*^(gamma-1)
    double alpha_star;    // p'(rho*) - m*^2/rho*^2
    double beta_star;     // -alpha_star
    Regime regime;

    double velocity() const { return m_star / rho_star; }
    bool subsonic() const { return regime == Regime::Subsonic; }
};

double pressure(const ModelParams& params, double rho);             // rho^gamma
double pressure_derivative(const ModelParams& params, double rho);  // gamma rho^(gamma-1)

// Classifies (rho*, m*) by the sign of alpha* = p'(rho*) - m*^2/rho*^2.
// States with |alpha*| <= 1e-12 * max(1, p'(rho*)) count as Sonic; they are
// rejected by every operation that needs the symmetrizer.
EquilibriumState classify_equilibrium(const ModelParams& params, double rho_star, double m_star);

}  // namespace qhd
