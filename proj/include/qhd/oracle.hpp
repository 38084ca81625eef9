#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qhd/mat2.hpp"
#include "qhd/model.hpp"

// Brute-force references, each algorithmically independent of the closed-form
// or spectral path it certifies. They may be orders of magnitude slower.
namespace qhd::oracle {

struct OracleReport {
    std::string name;
    double max_error = 0;
    double tolerance = 0;
    int cases = 0;

    bool passed() const { return max_error <= tolerance; }
};

std::ostream& operator<<(std::ostream& os, const OracleReport& rep);

// Classical RK4 on U' = -(i xi A(xi) + B(xi)) U. Requires dt <= 1e-3 and
// t an integer multiple of dt.
Vec2c rk4_mode_reference(const EquilibriumState& eq, double xi, const Vec2c& u0, double t,
                         double dt);

// Roots of lambda^2 + c1 lambda + c0 = 0, computing the larger-magnitude
// root first and recovering the other from the product (Kahan).
std::pair<cplx, cplx> polynomial_roots_companion(cplx c0, cplx c1);

// Centered finite differences with periodic indexing: 4th order for
// n = 1, 2 and 2nd order for n = 3.
std::vector<double> finite_difference_reference(std::span<const double> field, int order,
                                                double h);

// Minimum of y^T M y over 10^4 unit vectors y(phi); agrees with the
// closed-form eigenvalue to ~1e-6 for O(1) matrices.
double min_eig_sampling_reference(const Mat2& m_symmetric);

}  // namespace qhd::oracle
