#include "polykin/core.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "polykin/numerics.hpp"
#include "polykin/random.hpp"

namespace polykin {

Species::Species(double m, double alpha) : m_(m), alpha_(alpha)
{
    if (!(m > 0.0) || !std::isfinite(m)) throw std::domain_error("Species: mass must be positive and finite");
    if (!(alpha > -1.0) || !std::isfinite(alpha)) throw std::domain_error("Species: alpha must be > -1");
}

Ensemble::Ensemble(Species species, std::vector<Particle> particles, double n, Units units)
    : species_(species), particles_(std::move(particles)), n_(n), units_(units)
{
    if (!(n > 0.0) || !std::isfinite(n)) throw std::domain_error("Ensemble: number density must be positive");
    if (particles_.empty()) throw std::domain_error("Ensemble: at least one particle required");
    for (std::size_t i = 0; i < particles_.size(); ++i) {
        const auto& p = particles_[i];
        if (!is_finite(p.v) || !std::isfinite(p.I) || p.I < 0.0)
            throw std::domain_error("Ensemble: particle " + std::to_string(i) + " has an invalid state");
    }
    initial_ = conserved_totals(*this);
}

double lebesgue_bracket(const Vec3& v, double I, double m)
{
    if (!(I >= 0.0)) throw std::domain_error("lebesgue_bracket: internal energy must be non-negative");
    if (!(m > 0.0)) throw std::domain_error("lebesgue_bracket: mass must be positive");
    return std::sqrt(1.0 + 0.5 * norm2(v) + I / m);
}

double l1_moment(const Ensemble& ens, double k)
{
    const double ks[] = {k};
    return l1_moments(ens, ks).front();
}

std::vector<double> l1_moments(const Ensemble& ens, std::span<const double> ks)
{
    for (double k : ks)
        if (!(k >= 0.0)) throw std::domain_error("l1_moment: order must be non-negative");
    const double m = ens.species().m();
    std::vector<double> sums(ks.size(), 0.0);
    for (const auto& p : ens.particles()) {
        // <v,I>^k = (<v,I>^2)^{k/2}
        const double b2 = 1.0 + 0.5 * norm2(p.v) + p.I / m;
        const double lb = std::log(b2);
        for (std::size_t j = 0; j < ks.size(); ++j) sums[j] += ks[j] == 0.0 ? 1.0 : std::exp(0.5 * ks[j] * lb);
    }
    const double scale = ens.weight() * m;
    for (auto& s : sums) s *= scale;
    return sums;
}

ConservedTotals conserved_totals(const Ensemble& ens)
{
    const double m = ens.species().m();
    Vec3 mom;
    double energy = 0.0;
    for (const auto& p : ens.particles()) {
        mom += p.v;
        energy += 0.5 * m * norm2(p.v) + p.I;
    }
    const double w = ens.weight();
    return {ens.number_density() * m, mom * (w * m), energy * w};
}

double maxwellian_density(const Vec3& v, double I, const MaxwellianParams& params, const Species& sp, const Units& units)
{
    if (!(params.T > 0.0)) throw std::domain_error("maxwellian_density: temperature must be positive");
    if (!(I >= 0.0)) throw std::domain_error("maxwellian_density: internal energy must be non-negative");
    const double m = sp.m();
    const double a = sp.alpha();
    const double kT = units.kB * params.T;
    const double c2 = norm2(v - params.U);
    // log-space keeps the SI prefactors (kT ~ 1e-21) in range
    const double log_pref = std::log(params.rho / m) - (a + 1.0) * std::log(kT) - std::lgamma(a + 1.0) +
                            1.5 * std::log(m / (2.0 * std::numbers::pi * kT));
    if (I == 0.0) {
        if (a > 0.0) return 0.0;
        if (a < 0.0) return std::numeric_limits<double>::infinity();
        return std::exp(log_pref - 0.5 * m * c2 / kT);
    }
    return std::exp(log_pref + a * std::log(I) - (0.5 * m * c2 + I) / kT);
}

Ensemble sample_maxwellian(const MaxwellianParams& params, const Species& sp, std::size_t N, std::uint64_t seed,
                           const Units& units)
{
    if (N < 1) throw std::domain_error("sample_maxwellian: N must be >= 1");
    if (!(params.T > 0.0)) throw std::domain_error("sample_maxwellian: temperature must be positive");
    if (!(params.rho > 0.0)) throw std::domain_error("sample_maxwellian: density must be positive");
    Rng rng(seed);
    const double kT = units.kB * params.T;
    const double sv = std::sqrt(kT / sp.m());
    std::vector<Particle> ps(N);
    for (auto& p : ps) {
        p.v = params.U + Vec3{sv * rng.normal(), sv * rng.normal(), sv * rng.normal()};
        p.I = kT * rng.gamma(sp.alpha() + 1.0);
    }
    return Ensemble(sp, std::move(ps), params.rho / sp.m(), units);
}

double maxwellian_l1_moment(const MaxwellianParams& params, const Species& sp, double k, const Units& units)
{
    if (!(params.T > 0.0)) throw std::domain_error("maxwellian_l1_moment: temperature must be positive");
    const double m = sp.m();
    const double a1 = sp.alpha() + 1.0;
    const double theta = units.kB * params.T / m;  // velocity variance per axis
    const double s = std::sqrt(theta);
    const double Ua = norm(params.U);
    const double p = 0.5 * k;
    // E[(A + B mu)^p] over mu uniform on [-1, 1]
    auto angular = [&](double A, double B) {
        if (B <= 1e-9 * A) return std::pow(A, p);
        return (std::pow(A + B, p + 1.0) - std::pow(A - B, p + 1.0)) / (2.0 * B * (p + 1.0));
    };
    // I/m = theta * g with g ~ Gamma(alpha+1); substitute g = t^{1/(alpha+1)}
    // so the density becomes exp(-g) / Gamma(alpha + 2) dt, smooth at 0.
    const double log_g2 = std::lgamma(a1 + 1.0);
    auto over_speed = [&](double g) {
        auto f = [&](double x) {  // x = c / s
            const double c = s * x;
            const double A = 1.0 + 0.5 * (Ua * Ua + c * c) + theta * g;
            const double B = Ua * c;
            return std::sqrt(2.0 / std::numbers::pi) * x * x * std::exp(-0.5 * x * x) * angular(A, B);
        };
        return numerics::integrate_to_infinity(f, 0.0, 1e-11);
    };
    auto outer = [&](double t) {
        const double g = std::pow(t, 1.0 / a1);
        return std::exp(-g - log_g2) * over_speed(g);
    };
    return params.rho * numerics::integrate_to_infinity(outer, 0.0, 1e-10);
}

double thermal_energy_per_particle(const Ensemble& ens)
{
    const double m = ens.species().m();
    Vec3 mean;
    for (const auto& p : ens.particles()) mean += p.v;
    mean *= 1.0 / static_cast<double>(ens.size());
    double e = 0.0;
    for (const auto& p : ens.particles()) e += 0.5 * m * norm2(p.v - mean) + p.I;
    return e / static_cast<double>(ens.size());
}

double equilibrium_temperature(const Ensemble& ens)
{
    return thermal_energy_per_particle(ens) / ((ens.species().alpha() + 2.5) * ens.units().kB);
}

MaxwellianParams matched_maxwellian(const Ensemble& ens)
{
    const auto tot = conserved_totals(ens);
    return {tot.mass, tot.momentum * (1.0 / tot.mass), equilibrium_temperature(ens)};
}

}  // namespace polykin
