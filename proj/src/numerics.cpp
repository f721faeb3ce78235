#include "polykin/numerics.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace polykin::numerics {

double beta_fn(double a, double b)
{
    return boost::math::beta(a, b);
}

double log_beta_fn(double a, double b)
{
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

// tanh_sinh hands out xc = a - x on the left half and b - x on the right
// half; turn that into the pair (x, 1 - x) for the unit interval.
inline std::pair<double, double> unit_pair(double x, double xc)
{
    if (xc <= 0.0) return {x, 1.0 - x};
    return {1.0 - xc, xc};
}

// Separate instances for the outer and inner passes of the iterated rule:
// tanh_sinh refines its abscissa tables lazily, so one object must not be
// re-entered from its own integrand (nor shared between threads).
boost::math::quadrature::tanh_sinh<double>& integrator(int depth)
{
    thread_local boost::math::quadrature::tanh_sinh<double> outer(15);
    thread_local boost::math::quadrature::tanh_sinh<double> inner(15);
    return depth == 0 ? outer : inner;
}

QuadratureResult integrate_unit_at(const UnitIntegrand& f, double rel_tol, int depth)
{
    double err = 0.0;
    double l1 = 0.0;
    auto g = [&](double x, double xc) {
        auto [a, ac] = unit_pair(x, xc);
        return f(a, ac);
    };
    const double v = integrator(depth).integrate(g, 0.0, 1.0, rel_tol, &err, &l1);
    return {v, err * std::abs(v)};
}

}  // namespace

QuadratureResult integrate_unit(const UnitIntegrand& f, double rel_tol, int level)
{
    return integrate_unit_at(f, rel_tol, level == 0 ? 0 : 1);
}

QuadratureResult integrate_unit_square(const UnitSquareIntegrand& f, double rel_tol)
{
    double worst = 0.0;
    auto outer = [&](double r, double rc) {
        auto inner = integrate_unit_at([&](double R, double Rc) { return f(r, rc, R, Rc); }, rel_tol * 0.1, 1);
        if (inner.value != 0.0) worst = std::max(worst, inner.error_estimate / std::abs(inner.value));
        return inner.value;
    };
    auto res = integrate_unit_at(outer, rel_tol, 0);
    res.error_estimate += worst * std::abs(res.value);
    return res;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol)
{
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol);
}

double integrate_to_infinity(const std::function<double(double)>& f, double a, double rel_tol)
{
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, std::numeric_limits<double>::infinity(), 15, rel_tol);
}

}  // namespace polykin::numerics
