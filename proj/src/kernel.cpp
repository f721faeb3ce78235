#include "polykin/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "polykin/numerics.hpp"
#include "polykin/random.hpp"

namespace polykin {

using numerics::beta_fn;

AngularModel AngularModel::constant()
{
    AngularModel a;
    a.b_ = [](double) { return 1.0; };
    a.sup_ = 1.0;
    a.l1_ = 2.0 * std::numbers::pi;
    a.constant_ = true;
    a.name_ = "constant";
    return a;
}

AngularModel AngularModel::custom(std::function<double(double)> b, double sup_b, std::string name)
{
    if (!b) throw std::invalid_argument("AngularModel: empty angular function");
    if (!(sup_b > 0.0) || !std::isfinite(sup_b))
        throw std::domain_error("AngularModel: majorant must be positive and finite");
    AngularModel a;
    a.b_ = std::move(b);
    a.sup_ = sup_b;
    a.constant_ = false;
    a.name_ = std::move(name);
    auto f = a.b_;
    a.l1_ = 2.0 * std::numbers::pi * numerics::integrate([&](double x) { return f(x); }, 0.0, 1.0, 1e-12);
    if (!(a.l1_ > 0.0)) throw std::domain_error("AngularModel: angular kernel has zero mass");
    return a;
}

double AngularModel::operator()(double cos_theta) const
{
    if (cos_theta < 0.0) return 0.0;
    return b_(cos_theta);
}

Vec3 AngularModel::sample(const Vec3& axis, Rng& rng) const
{
    if (constant_) return rng.hemisphere(axis);
    // dsigma = dx dphi with x = cos(theta), so x is uniform under b = const.
    double x;
    do {
        x = rng.uniform();
    } while (rng.uniform() * sup_ > b_(x));
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    // orthonormal frame around axis
    const Vec3 helper = std::abs(axis.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    Vec3 e1 = helper - axis * dot(helper, axis);
    e1 *= 1.0 / norm(e1);
    const Vec3 e2{axis.y * e1.z - axis.z * e1.y, axis.z * e1.x - axis.x * e1.z, axis.x * e1.y - axis.y * e1.x};
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    return axis * x + e1 * (s * std::cos(phi)) + e2 * (s * std::sin(phi));
}

double n_alpha(double alpha)
{
    return 2.0 * std::exp(std::lgamma(2.0 * alpha + 3.5) - 2.0 * std::lgamma(alpha + 1.0)) / std::sqrt(std::numbers::pi);
}

double d_alpha_mass(double alpha)
{
    return beta_fn(alpha + 1.0, alpha + 1.0) * beta_fn(1.5, 2.0 * alpha + 2.0);
}

KernelParams::KernelParams(double alpha, double zeta, double K, double eta, double eta_f, double omega,
                           AngularModel angular)
    : alpha_(alpha), zeta_(zeta), K_(K), eta_(eta), eta_f_(eta_f), omega_(omega), angular_(std::move(angular))
{
    if (!(alpha > -1.0)) throw std::domain_error("KernelParams: alpha must be > -1");
    if (!(zeta > 0.0 && zeta <= 2.0)) throw std::domain_error("KernelParams: zeta must lie in (0, 2]");
    // K = 0 is accepted: it switches collisions off entirely.
    if (!(K >= 0.0) || !std::isfinite(K)) throw std::domain_error("KernelParams: K must be non-negative");
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::domain_error("KernelParams: eta must be non-negative");
    if (!(eta_f >= 0.0) || !std::isfinite(eta_f)) throw std::domain_error("KernelParams: eta_f must be non-negative");
    if (!(omega >= 0.0 && omega <= 1.0)) throw std::domain_error("KernelParams: omega must lie in [0, 1]");
    n_alpha_ = polykin::n_alpha(alpha);
    a_R_ = beta_fn(alpha + 1.0, alpha + 1.0) * beta_fn(0.5 * (zeta + 3.0), 2.0 * alpha + 2.0);
    a_r_ = beta_fn(alpha + 1.0 + 0.5 * zeta, alpha + 1.0) * beta_fn(1.5, 2.0 * alpha + 2.0 + 0.5 * zeta);
}

KernelParams KernelParams::with_K(double K) const
{
    return KernelParams(alpha_, zeta_, K, eta_, eta_f_, omega_, angular_);
}

KernelParams KernelParams::with_omega(double omega) const
{
    return KernelParams(alpha_, zeta_, K_, eta_, eta_f_, omega, angular_);
}

double d_alpha_weight(double r, double R, double alpha)
{
    if (!(r >= 0.0 && r <= 1.0) || !(R >= 0.0 && R <= 1.0))
        throw std::domain_error("d_alpha_weight: r and R must lie in [0, 1]");
    if (R == 0.0) return 0.0;
    return std::pow(r * (1.0 - r), alpha) * std::pow(1.0 - R, 2.0 * alpha + 1.0) * std::sqrt(R);
}

double evaluate_physical_kernel(const PairState& p, double r, double R, const KernelParams& kp, double m)
{
    if (!(r >= 0.0 && r <= 1.0) || !(R >= 0.0 && R <= 1.0))
        throw std::domain_error("evaluate_physical_kernel: r and R must lie in [0, 1]");
    const double hz = 0.5 * kp.zeta();
    const double trans = std::pow(R * norm2(p.u()), hz);
    const double internal = kp.eta() * (std::pow(r * (1.0 - R) * p.I / m, hz) +
                                        std::pow((1.0 - r) * (1.0 - R) * p.Is / m, hz));
    return kp.K() * kp.n_alpha() * (trans + internal);
}

double evaluate_frozen_kernel(const PairState& p, const KernelParams& kp, double m)
{
    const double E = p.energy(m);
    if (E <= 0.0) return 0.0;
    const double z = kp.zeta();
    const double u2 = norm2(p.u());
    double value = std::pow(u2, z) / std::pow(4.0 * E / m, 0.5 * z);
    if (kp.eta_f() > 0.0)
        value += kp.eta_f() * (std::pow(p.I, z) + std::pow(p.Is, z)) / std::pow(m * E, 0.5 * z);
    return kp.K() * value;
}

std::array<double, 3> exchange_rate_terms(const PairState& p, const KernelParams& kp, double m)
{
    const double hz = 0.5 * kp.zeta();
    const double pref = kp.angular().l1_norm() * kp.K() * kp.n_alpha();
    return {pref * std::pow(norm2(p.u()), hz) * kp.a_R(),
            pref * kp.eta() * std::pow(p.I / m, hz) * kp.a_r(),
            pref * kp.eta() * std::pow(p.Is / m, hz) * kp.a_r()};
}

double pair_rate_physical(const PairState& p, const KernelParams& kp, double m)
{
    const auto t = exchange_rate_terms(p, kp, m);
    return t[0] + t[1] + t[2];
}

double pair_rate_frozen(const PairState& p, const KernelParams& kp, double m)
{
    return 4.0 * std::numbers::pi * evaluate_frozen_kernel(p, kp, m);
}

SandwichBounds sandwich_bounds(const KernelParams& kp)
{
    const double hz = 0.5 * kp.zeta();
    const double pref = kp.K() * kp.n_alpha();
    const double eta = kp.eta();
    const double third = std::pow(3.0, -hz);
    SandwichBounds s;
    s.upper = [=](double r, double R) {
        return pref * (std::pow(4.0 * R, hz) + eta * std::pow(r * (1.0 - R), hz) +
                       eta * std::pow((1.0 - r) * (1.0 - R), hz));
    };
    s.lower = [=](double r, double R) {
        return pref * third *
               std::min({std::pow(4.0 * R, hz), eta * std::pow(r * (1.0 - R), hz),
                         eta * std::pow((1.0 - r) * (1.0 - R), hz)});
    };
    return s;
}

double kappa_from(const std::function<double(double, double)>& btilde, double alpha, const AngularModel& angular)
{
    auto f = [&](double r, double rc, double R, double Rc) {
        if (R == 0.0) return 0.0;
        return btilde(r, R) * std::pow(r * rc, alpha) * std::pow(Rc, 2.0 * alpha + 1.0) * std::sqrt(R);
    };
    return angular.l1_norm() * numerics::integrate_unit_square(f, 1e-10).value;
}

namespace {

/// kappa of the lower sandwich. The min{} makes the integrand kinked, which
/// stalls the iterated double-exponential rule, so the square is split at
/// the kinks: by the r <-> 1 - r symmetry only r < 1/2 is integrated (there
/// the r term is the smaller internal one), and for fixed r the R term wins
/// below R* = c r / (4 + c r), c = eta^{2/zeta}.
double kappa_lower(const KernelParams& kp)
{
    const double a = kp.alpha(), hz = 0.5 * kp.zeta();
    const double c = std::pow(kp.eta(), 1.0 / hz);
    auto outer = [&](double t, double) {
        const double r = 0.5 * t, rc = 1.0 - r;
        const double wr = std::pow(r * rc, a);
        const double Rs = c * r / (4.0 + c * r);
        const double Rsc = 4.0 / (4.0 + c * r);
        // R in [0, R*]: R = R* x
        const double low = numerics::integrate_unit(
                               [&](double x, double) {
                                   const double R = Rs * x;
                                   if (R == 0.0) return 0.0;
                                   return std::pow(4.0 * R, hz) * std::pow(1.0 - R, 2.0 * a + 1.0) * std::sqrt(R);
                               },
                               1e-12, 1)
                               .value * Rs;
        // R in [R*, 1]: 1 - R = (1 - R*)(1 - x)
        const double high = numerics::integrate_unit(
                                [&](double x, double xc) {
                                    const double Rc = Rsc * xc;
                                    const double R = Rs + Rsc * x;
                                    if (Rc == 0.0) return 0.0;
                                    return kp.eta() * std::pow(r * Rc, hz) * std::pow(Rc, 2.0 * a + 1.0) * std::sqrt(R);
                                },
                                1e-12, 1)
                                .value * Rsc;
        return wr * (low + high);
    };
    // 2 (symmetry) * 1/2 (dr = dt / 2)
    const double integral = numerics::integrate_unit(outer, 1e-11, 0).value;
    return kp.angular().l1_norm() * kp.K() * kp.n_alpha() * std::pow(3.0, -hz) * integral;
}

}  // namespace

KappaBounds kappa_bounds(const KernelParams& kp)
{
    const auto s = sandwich_bounds(kp);
    KappaBounds k;
    k.ub = kappa_from(s.upper, kp.alpha(), kp.angular());
    k.lb_degenerate = kp.eta() == 0.0;
    k.lb = k.lb_degenerate ? 0.0 : kappa_lower(kp);
    return k;
}

double rho_q(double alpha, double zeta, double q)
{
    if (!(q >= 1.0)) throw std::domain_error("rho_q: q must be >= 1");
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double a = alpha + 1.0 - (1.0 + 0.5 * zeta) * inv_q;
    const double b = 2.0 * alpha + 2.0 - inv_q;
    if (!(a > 0.0) || !(b > 0.0)) return std::numeric_limits<double>::infinity();
    return beta_fn(a, alpha + 1.0) * beta_fn(1.5, b);
}

double rho_q_by_quadrature(double alpha, double zeta, double q, double rel_tol)
{
    if (!(q >= 1.0)) throw std::domain_error("rho_q_by_quadrature: q must be >= 1");
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double er = alpha - (1.0 + 0.5 * zeta) * inv_q;
    const double eR = 2.0 * alpha + 1.0 - inv_q;
    auto f = [&](double r, double rc, double R, double Rc) {
        if (R == 0.0) return 0.0;
        return std::pow(r, er) * std::pow(rc, alpha) * std::pow(Rc, eR) * std::sqrt(R);
    };
    return numerics::integrate_unit_square(f, rel_tol).value;
}

BracketSandwich bracket_sandwich(const PairState& p, double zeta, double m)
{
    const double L = std::pow(2.0, -zeta) * std::min(1.0, std::pow(2.0, 1.0 - zeta));
    const double b = std::pow(1.0 + 0.5 * norm2(p.v) + p.I / m, 0.5 * zeta);
    const double bs = std::pow(1.0 + 0.5 * norm2(p.vs) + p.Is / m, 0.5 * zeta);
    const double e = std::pow(p.energy(m) / m, 0.5 * zeta);
    return {e - (L * b - bs), b + bs - e};
}

}  // namespace polykin
