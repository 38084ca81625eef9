#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace qhd {

// Raised when an adaptive integral cannot meet its error target.
class accuracy_error : public std::runtime_error {
public:
    explicit accuracy_error(const std::string& what) : std::runtime_error(what) {}
};

struct QuadResult {
    double value = 0;
    double error_estimate = 0;
};

// Adaptive Gauss-Kronrod (15-point) panels on [a, b].
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol = 1e-10, int max_depth = 15);

// Same, but throws accuracy_error when the estimated relative error exceeds
// rel_limit (used where the contract demands a hard accuracy guarantee).
double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         double rel_limit, const char* what, double rel_tol = 1e-10,
                         int max_depth = 15);

}  // namespace qhd
