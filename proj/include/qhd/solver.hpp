#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qhd/model.hpp"
#include "qhd/spectral.hpp"

namespace qhd {

// Raised when a run loses positivity of the total density or produces
// non-finite values; carries the abort time for diagnostics.
class solver_abort : public std::runtime_error {
public:
    solver_abort(const std::string& what, double t) : std::runtime_error(what), t_abort(t) {}
    double t_abort;
};

// Perturbation fields on a periodic grid at one instant.
struct FieldState {
    Grid1D grid;
    std::vector<double> rho;  // density perturbation
    std::vector<double> m;    // momentum perturbation
    double t = 0;
};

struct SolverConfig {
    double dt = 0;               // <= 0: pick automatically from the CFL bound
    double t_end = 50;
    bool dealias = true;         // 2/3 rule on transforms entering products
    double rho_floor = -1;       // < 0: defaults to 1e-6 * rho*
    int s = 3;                   // Sobolev index for diagnostics (s >= 3)
    int output_stride = 10;      // steps between diagnostics
    bool allow_supersonic = false;
};

struct RhsResult {
    std::vector<double> drho;
    std::vector<double> dm;
};

// Full conservative right-hand side: mass flux, momentum flux with pressure,
// linear viscosity and the Bohm term in its conservative form
// (k^2/2) (rho_tot (ln rho_tot)_xx)_x.
RhsResult rhs_conservative(const EquilibriumState& eq, const FieldState& state,
                           SpectralWorkspace& ws, bool dealias, double rho_floor);

// Linearization around the equilibrium applied spectrally (A*, B*, C*).
RhsResult rhs_linear(const EquilibriumState& eq, const FieldState& state, SpectralWorkspace& ws,
                     bool dealias);

// Closed-form quadratic remainder N2, evaluated cancellation-free:
//   N2 = -(m - u* rho)^2/rho_tot - [p(rho_tot) - p(rho*) - p'(rho*) rho]
//        - (k^2/2) rho_x^2 / rho_tot,
// so that rhs_conservative = rhs_linear + d_x (0, N2).
std::vector<double> nonlinear_remainder_n2(const EquilibriumState& eq, const FieldState& state,
                                           SpectralWorkspace& ws, bool dealias, double rho_floor);

// Explicit-nonlinearity CFL bound: 0.5 h / max(|u| + sqrt(p'(rho))) capped by
// 0.1/mu. Only the forcing is explicit; the linear flow is exact.
double stable_dt(const EquilibriumState& eq, const FieldState& state);

// Second-order exponential integrator: exact per-mode linear flow plus a
// midpoint correction of the spectral forcing (0, d_x N2).
class EtdStepper {
public:
    EtdStepper(const EquilibriumState& eq, const Grid1D& grid, double dt, bool dealias,
               double rho_floor);
    ~EtdStepper();
    EtdStepper(const EtdStepper&) = delete;
    EtdStepper& operator=(const EtdStepper&) = delete;

    double dt() const { return dt_; }
    void advance(FieldState& state);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    double dt_;
};

// One step with a throwaway stepper (tests and small drivers).
FieldState step(const EquilibriumState& eq, const FieldState& state, const SolverConfig& config);

struct EnergyHistory {
    int s = 3;
    std::vector<double> times;
    std::vector<double> sobolev_rho;      // ||rho||_{s+1}
    std::vector<double> sobolev_m;        // ||m||_s
    std::vector<double> E_s;              // running sup of the squared pair
    std::vector<double> F_s;              // trapezoid integral of the dissipation
    std::vector<double> Q_s;              // E_s + F_s
    std::vector<double> G_s;              // running sup of (1+t)^{1/4}(||rho||_s + ||m||_{s-1})
    std::vector<double> mass_defect;
    std::vector<double> momentum_defect;
    bool aborted = false;
    std::string abort_reason;
    double abort_time = 0;
};

// When final_state is non-null it receives the fields at t_end, or at the
// abort time for aborted runs (the diagnostic snapshot).
EnergyHistory run_simulation(const EquilibriumState& eq, const FieldState& initial,
                             const SolverConfig& config, FieldState* final_state = nullptr);

// Gaussian initial bump A exp(-(x-c)^2 / (2 w^2)) with periodic min-image
// distance.
std::vector<double> gaussian_bump(const Grid1D& grid, double amplitude, double width,
                                  double center);

// Duhamel convolution kernels whose uniform boundedness closes the nonlinear
// decay argument. h1 uses the exponential kernel with rate c1; h2 the
// (1+t-z)^{-3/4}(1+z)^{-1/2} kernel.
struct H1H2Report {
    double sup_h1 = 0;
    double sup_h2 = 0;
    std::vector<double> t;
    std::vector<double> h1;
    std::vector<double> h2;
};

H1H2Report h1h2_boundedness(double c1, std::span<const double> t_grid, double quad_rel_tol = 1e-10,
                            int quad_max_depth = 15);

}  // namespace qhd
