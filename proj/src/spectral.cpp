#include "qhd/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace qhd {

namespace {
std::mutex planner_mutex;
}

Grid1D::Grid1D(double L_, int N_) : L(L_), N(N_) {
    if (!(L > 0.0)) throw std::domain_error("Grid1D: L must be positive");
    if (N < 64 || (N & (N - 1)) != 0) {
        throw std::domain_error("Grid1D: N must be a power of two with N >= 64");
    }
}

SpectralWorkspace::SpectralWorkspace(const Grid1D& grid) : grid_(grid) {
    std::lock_guard<std::mutex> lock(planner_mutex);
    real_buf_ = fftw_alloc_real(static_cast<size_t>(grid.N));
    fftw_complex* cbuf = fftw_alloc_complex(static_cast<size_t>(grid.N / 2 + 1));
    cplx_buf_ = cbuf;
    plan_fwd_ = fftw_plan_dft_r2c_1d(grid.N, real_buf_, cbuf, FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_c2r_1d(grid.N, cbuf, real_buf_, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_inv_) throw std::runtime_error("SpectralWorkspace: FFTW plan creation failed");
}

SpectralWorkspace::~SpectralWorkspace() {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
    fftw_free(real_buf_);
    fftw_free(static_cast<fftw_complex*>(cplx_buf_));
}

void SpectralWorkspace::forward(std::span<const double> field, std::vector<cplx>& spectrum) {
    const int n = grid_.N;
    if (static_cast<int>(field.size()) != n) {
        throw std::invalid_argument("SpectralWorkspace::forward: field length mismatch");
    }
    for (int j = 0; j < n; ++j) real_buf_[j] = field[static_cast<size_t>(j)];
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    auto* cbuf = static_cast<fftw_complex*>(cplx_buf_);
    spectrum.resize(static_cast<size_t>(n / 2 + 1));
    const double inv_n = 1.0 / n;
    for (int k = 0; k <= n / 2; ++k) {
        spectrum[static_cast<size_t>(k)] = cplx(cbuf[k][0] * inv_n, cbuf[k][1] * inv_n);
    }
}

void SpectralWorkspace::inverse(std::span<const cplx> spectrum, std::vector<double>& field) {
    const int n = grid_.N;
    if (static_cast<int>(spectrum.size()) != n / 2 + 1) {
        throw std::invalid_argument("SpectralWorkspace::inverse: spectrum length mismatch");
    }
    auto* cbuf = static_cast<fftw_complex*>(cplx_buf_);
    for (int k = 0; k <= n / 2; ++k) {
        cbuf[k][0] = spectrum[static_cast<size_t>(k)].real();
        cbuf[k][1] = spectrum[static_cast<size_t>(k)].imag();
    }
    fftw_execute(static_cast<fftw_plan>(plan_inv_));
    field.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) field[static_cast<size_t>(j)] = real_buf_[j];
}

void apply_dealias_mask(const Grid1D& grid, std::vector<cplx>& spectrum) {
    const int cutoff = grid.N / 3;
    for (int k = cutoff + 1; k <= grid.nyquist(); ++k) {
        spectrum[static_cast<size_t>(k)] = cplx(0, 0);
    }
}

void apply_derivative(const Grid1D& grid, std::vector<cplx>& spectrum, int order) {
    if (order < 0) throw std::domain_error("apply_derivative: order must be nonnegative");
    if (order == 0) return;
    for (int k = 0; k <= grid.nyquist(); ++k) {
        const double xin = std::pow(grid.xi(k), order);  // xi >= 0 on the half spectrum
        cplx factor;
        switch (order % 4) {  // exact powers of i, no complex pow phase error
            case 0: factor = cplx(xin, 0); break;
            case 1: factor = cplx(0, xin); break;
            case 2: factor = cplx(-xin, 0); break;
            default: factor = cplx(0, -xin); break;
        }
        spectrum[static_cast<size_t>(k)] *= factor;
    }
    if (order % 2 == 1) spectrum[static_cast<size_t>(grid.nyquist())] = cplx(0, 0);
}

std::vector<double> spectral_derivative(const Grid1D& grid, std::span<const double> field,
                                        int order) {
    SpectralWorkspace ws(grid);
    std::vector<cplx> spec;
    ws.forward(field, spec);
    apply_derivative(grid, spec, order);
    std::vector<double> out;
    ws.inverse(spec, out);
    return out;
}

double sobolev_norm_from_spectrum(const Grid1D& grid, std::span<const cplx> spectrum, double s) {
    double sum = 0;
    for (int k = 0; k <= grid.nyquist(); ++k) {
        const double xi = grid.xi(k);
        const double w = std::pow(1.0 + xi * xi, s);
        const double mag2 = std::norm(spectrum[static_cast<size_t>(k)]);
        const double mult = (k == 0 || k == grid.nyquist()) ? 1.0 : 2.0;  // conjugate pairs
        sum += mult * w * mag2;
    }
    return std::sqrt(grid.L * sum);
}

double sobolev_norm(const Grid1D& grid, std::span<const double> field, double s) {
    SpectralWorkspace ws(grid);
    std::vector<cplx> spec;
    ws.forward(field, spec);
    return sobolev_norm_from_spectrum(grid, spec, s);
}

}  // namespace qhd
