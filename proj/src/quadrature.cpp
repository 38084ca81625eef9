#include "qhd/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace qhd {

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, int max_depth) {
    using boost::math::quadrature::gauss_kronrod;
    QuadResult r;
    double l1 = 0;
    r.value = gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, rel_tol, &r.error_estimate,
                                                   &l1);
    return r;
}

double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         double rel_limit, const char* what, double rel_tol, int max_depth) {
    const QuadResult r = integrate_adaptive(f, a, b, rel_tol, max_depth);
    const double scale = std::max(std::abs(r.value), 1e-300);
    if (!(std::isfinite(r.value)) || r.error_estimate / scale > rel_limit) {
        throw accuracy_error(std::string(what) + ": quadrature error estimate " +
                             std::to_string(r.error_estimate / scale) + " exceeds limit " +
                             std::to_string(rel_limit));
    }
    return r.value;
}

}  // namespace qhd
