#pragma once

#include <utility>
#include <vector>

#include "qhd/model.hpp"

namespace qhd {

// Initial data on the whole line, given through a closed-form Fourier
// transform so the algebraic decay rates are not masked by a torus
// spectral gap.
enum class ProfileKind { Gaussian, Sech2, Box };

ProfileKind profile_kind_from_string(const std::string& name);
const char* to_string(ProfileKind k);

struct LineProfile {
    ProfileKind kind = ProfileKind::Gaussian;
    double amplitude = 0;
    double width = 1;
};

// Fourier transform (symmetric convention, 1/sqrt(2 pi)) of the profile:
//   Gaussian A e^{-x^2/(2w^2)}   -> A w e^{-w^2 xi^2/2}
//   Sech2    A sech^2(x/w)       -> A pi w^2 xi / (sqrt(2 pi) sinh(pi w xi / 2))
//   Box      A 1_{|x|<=w}        -> 2 A sin(w xi) / (sqrt(2 pi) xi)
double profile_hat(const LineProfile& p, double xi);

struct LineInitialData {
    LineProfile f1;  // density component
    LineProfile f2;  // momentum component
};

// Weighted Plancherel norms of the evolved linear solution:
//   norm1 = int xi^{2 ell} (1 + xi^2) |U1(xi,t)|^2 dxi
//   norm0 = int xi^{2 ell} |U2(xi,t)|^2 dxi
// by adaptive quadrature on |xi| <= Xi(t), with the truncation radius chosen
// from omega0 so the discarded tail is negligible. Throws accuracy_error if
// the quadrature cannot certify 1e-8 relative accuracy or the tail estimate
// is not negligible.
std::pair<double, double> semigroup_norms(const EquilibriumState& eq, const LineInitialData& data,
                                          double t, int ell, double omega0);

struct DecayFit {
    int ell = 0;
    std::vector<double> times;   // fit window samples
    std::vector<double> values;  // norm samples on the window
    double exponent = 0;         // p in v ~ C (1+t)^{-p}
    double prefactor = 0;        // C
    double residual = 0;         // max relative deviation of the fit on the window
};

// Ordinary least squares of log v against log(1+t) on the window. The window
// must contain at least 10 samples and every value must be positive.
DecayFit decay_rate_fit(const std::vector<double>& times, const std::vector<double>& values,
                        std::pair<double, double> window, int ell = 0);

std::vector<double> log_spaced(double lo, double hi, int n);

}  // namespace qhd
