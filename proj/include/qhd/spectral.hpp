#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qhd/mat2.hpp"

namespace qhd {

// Periodic grid x_j = j L / N with wavenumbers xi_k = 2 pi k / L.
struct Grid1D {
    double L;
    int N;

    Grid1D(double L_, int N_);

    double dx() const { return L / N; }
    double x(int j) const { return j * L / N; }
    double xi(int k) const { return 2.0 * M_PI * k / L; }
    int nyquist() const { return N / 2; }
    int num_modes() const { return N / 2 + 1; }  // stored half-spectrum (real fields)
};

// Real-to-complex transforms for one grid size, with the normalization
//   f_hat_k = (1/N) sum_j f(x_j) e^{-i xi_k x_j},
// so inverse(forward(f)) = f. Owns its FFTW plans; not copyable. Plan
// creation is serialized internally (FFTW planner is not thread-safe).
class SpectralWorkspace {
public:
    explicit SpectralWorkspace(const Grid1D& grid);
    ~SpectralWorkspace();
    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    const Grid1D& grid() const { return grid_; }

    // spectrum has N/2+1 entries (k = 0 .. N/2)
    void forward(std::span<const double> field, std::vector<cplx>& spectrum);
    void inverse(std::span<const cplx> spectrum, std::vector<double>& field);

private:
    Grid1D grid_;
    void* plan_fwd_;
    void* plan_inv_;
    double* real_buf_;
    void* cplx_buf_;
};

// Zeroes modes with |k| > N/3 in place (2/3 dealiasing rule).
void apply_dealias_mask(const Grid1D& grid, std::vector<cplx>& spectrum);

// Multiplies by (i xi_k)^n in place; the Nyquist mode is zeroed for odd n
// (its imaginary part has no real-field counterpart).
void apply_derivative(const Grid1D& grid, std::vector<cplx>& spectrum, int order);

// n-th spectral derivative of a real periodic field.
std::vector<double> spectral_derivative(const Grid1D& grid, std::span<const double> field,
                                        int order);

// H^s norm via the discrete Plancherel sum L sum_k (1+xi_k^2)^s |f_hat_k|^2,
// which converges to the continuum integral for resolved, localized fields.
double sobolev_norm(const Grid1D& grid, std::span<const double> field, double s);
double sobolev_norm_from_spectrum(const Grid1D& grid, std::span<const cplx> spectrum, double s);

}  // namespace qhd
