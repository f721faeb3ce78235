#pragma once

#include <functional>

namespace polykin::numerics {

/// Euler Beta function B(a, b) for a, b > 0.
double beta_fn(double a, double b);
double log_beta_fn(double a, double b);

/// Integrand on [0, 1] that also receives the accurately computed
/// complement 1 - x, so endpoint singularities of the form (1 - x)^p stay
/// resolvable close to x = 1.
using UnitIntegrand = std::function<double(double x, double one_minus_x)>;
using UnitSquareIntegrand =
    std::function<double(double r, double one_minus_r, double R, double one_minus_R)>;

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive double-exponential quadrature over [0, 1]; integrable endpoint
/// singularities are fine. `level` must be 1 for a call made from inside
/// the integrand of a level-0 call (one rule object per nesting level).
QuadratureResult integrate_unit(const UnitIntegrand& f, double rel_tol = 1e-12, int level = 0);

/// Iterated adaptive quadrature over [0, 1]^2 (outer variable r, inner R).
QuadratureResult integrate_unit_square(const UnitSquareIntegrand& f, double rel_tol = 1e-11);

/// Adaptive Gauss-Kronrod on [a, b] for smooth integrands.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12);

/// Integral over [a, inf) for smooth integrands with decaying tails.
double integrate_to_infinity(const std::function<double(double)>& f, double a, double rel_tol = 1e-12);

}  // namespace polykin::numerics
