#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qhd/mat2.hpp"
#include "qhd/model.hpp"

namespace qhd {

// Constant coefficient matrices of the linearized system
//   U_t + A* U_x = B* U_xx + C* U_xxx.
struct ConstantMatrices {
    Mat2 A_star;  // [[0, 1], [alpha*, 2 m*/rho*]]
    Mat2 B_star;  // diag(0, mu)
    Mat2 C_star;  // [[0, 0], [k^2/2, 0]]
};

ConstantMatrices constant_matrices(const EquilibriumState& eq);

// alpha(xi) = alpha* + k^2 xi^2 / 2. Positive for every xi iff subsonic.
double alpha(const EquilibriumState& eq, double xi);

struct DispersionRoots {
    cplx lambda_plus;   // larger real part (larger imaginary part on ties)
    cplx lambda_minus;
};

// Roots of lambda^2 + (mu xi^2 + 2 i xi m*/rho*) lambda + xi^2 alpha(xi) = 0,
// valid in every regime. Principal branch of the discriminant square root;
// nearly vanishing discriminants collapse both roots onto the double root.
DispersionRoots dispersion_roots(const EquilibriumState& eq, double xi);

// Eigenvalues nu-+ = m*/rho* +- sqrt(m*^2/rho*^2 + alpha(xi)^2) of the
// symmetrized transport symbol; returned ordered nu_minus < nu_plus.
std::pair<double, double> transport_eigenvalues(const EquilibriumState& eq, double xi);

// True iff no kernel vector of B~ is annihilated by rho S + A~ for any real
// rho, which for this system reduces to alpha(xi) > 0, plus the constant
// multiplicity check (nu-+ real and distinct).
bool genuine_coupling_check(const EquilibriumState& eq, double xi);

struct CompensatingSymbol {
    Mat2 K_hat;           // (eps*/sqrt(alpha(xi))) [[0,1],[-1,0]]
    double epsilon_star;  // mu alpha* rho*^2 / (2 (alpha* rho*^2 + 2 m*^2))
    double theta;         // eps*/2
};

double epsilon_star(const EquilibriumState& eq);  // subsonic only
double theta(const EquilibriumState& eq);         // eps*/2

CompensatingSymbol compensating_symbol(const EquilibriumState& eq, double xi);

// Smaller eigenvalue of [K^ A^]^s + B*; guaranteed >= theta for subsonic
// states, asserted here (value < theta - 1e-12 signals a constants bug).
double quadratic_form_min_eig(const EquilibriumState& eq, double xi);

// Everything the symbol analysis produces at one wavenumber.
struct SymbolEval {
    double xi;
    double alpha;
    Mat2 A_xi;     // A* + xi^2 C*              (odd part)
    Mat2 B_xi;     // xi^2 B*                   (even part)
    Mat2 S;        // diag(alpha(xi), 1)        (symbol symmetrizer)
    Mat2 A_tilde;  // S A(xi), symmetric
    Mat2 B_tilde;  // S B(xi) = B(xi)
    Mat2 A_hat;    // S^1/2 A S^-1/2 = [[0, sqrt(alpha)],[sqrt(alpha), 2m*/rho*]]
    Mat2 B_hat;    // xi^2 B*
    Mat2 K_hat;    // compensating symbol
    cplx lambda_plus;
    cplx lambda_minus;
};

SymbolEval symbol_eval(const EquilibriumState& eq, double xi);  // subsonic only

enum class DissipativityVerdict { StrictlyDissipative, UnstableModesFound };

const char* to_string(DissipativityVerdict v);

struct DissipativityReport {
    std::vector<double> xi_grid;
    double max_real_part_ratio = 0;  // sup over grid of max(Re lambda+-)/xi^2
    double max_re_lambda = 0;        // sup over grid of Re lambda+
    double omega0_estimate = 0;      // -max_real_part_ratio when that is negative
    DissipativityVerdict verdict = DissipativityVerdict::StrictlyDissipative;
    std::optional<std::pair<double, double>> unstable_window;  // xi > 0 side
};

// Log-spaced grid |xi| in [lo, hi], n points per sign, both signs, ascending.
std::vector<double> make_scan_grid(double lo = 1e-3, double hi = 50.0, int n_per_sign = 2000);

// Scans Re lambda+-(xi)/xi^2 over the grid. Grids containing 0 are rejected.
// When unstable modes are found the positive-xi window is bracketed by
// bisection on the sign of Re lambda+.
DissipativityReport dissipativity_scan(const EquilibriumState& eq,
                                       const std::vector<double>& xi_grid);

}  // namespace qhd
