#include "polykin/collision.hpp"

#include <cmath>
#include <stdexcept>

#include "polykin/random.hpp"

namespace polykin {

namespace {

constexpr double kUnitTolerance = 1e-10;

void require_unit(const Vec3& sigma, const char* what)
{
    if (!(std::abs(norm2(sigma) - 1.0) <= kUnitTolerance))
        throw std::domain_error(std::string(what) + ": sigma must be a unit vector");
}

}  // namespace

Vec3 relative_direction(const PairState& p)
{
    const Vec3 u = p.u();
    const double n = norm(u);
    if (n == 0.0) return {0.0, 0.0, 1.0};
    return u * (1.0 / n);
}

CollisionOutcome apply_exchange_collision(const PairState& p, const Vec3& sigma, double r, double R, double m)
{
    require_unit(sigma, "apply_exchange_collision");
    if (!(r >= 0.0 && r <= 1.0) || !(R >= 0.0 && R <= 1.0))
        throw std::domain_error("apply_exchange_collision: r and R must lie in [0, 1]");
    const double E = p.energy(m);
    const Vec3 V = (p.v + p.vs) * 0.5;
    const Vec3 dv = sigma * std::sqrt(R * E / m);
    const double internal = (1.0 - R) * E;
    CollisionOutcome out;
    out.v = V + dv;
    out.vs = V - dv;
    out.I = r * internal;
    out.Is = (1.0 - r) * internal;
    out.sigma = sigma;
    out.r = r;
    out.R = R;
    out.frozen = false;
    return out;
}

CollisionOutcome apply_frozen_collision(const PairState& p, const Vec3& sigma, double /*m*/)
{
    require_unit(sigma, "apply_frozen_collision");
    const Vec3 V = (p.v + p.vs) * 0.5;
    const Vec3 dv = sigma * (0.5 * norm(p.u()));
    CollisionOutcome out;
    out.v = V + dv;
    out.vs = V - dv;
    out.I = p.I;
    out.Is = p.Is;
    out.sigma = sigma;
    out.frozen = true;
    return out;
}

ExchangeParameters sample_energy_split(const std::array<double, 3>& weights, double alpha, double zeta, Rng& rng)
{
    const double total = weights[0] + weights[1] + weights[2];
    if (!(total > 0.0)) throw std::domain_error("sample_energy_split: all mixture weights vanish");
    const double a1 = alpha + 1.0;
    const double hz = 0.5 * zeta;
    ExchangeParameters out;
    const double pick = rng.uniform() * total;
    if (pick < weights[0]) {
        out.term = 0;
        out.R = rng.beta(hz + 1.5, 2.0 * a1);
        out.r = rng.beta(a1, a1);
    } else {
        // the I_* term is the mirror image r -> 1 - r of the I term
        out.term = pick < weights[0] + weights[1] ? 1 : 2;
        const double x = rng.beta(a1 + hz, a1);
        out.R = rng.beta(1.5, 2.0 * a1 + hz);
        out.r = out.term == 1 ? x : 1.0 - x;
    }
    return out;
}

ExchangeParameters sample_exchange_parameters(const PairState& p, const KernelParams& kp, double m, Rng& rng)
{
    const auto w = exchange_rate_terms(p, kp, m);
    if (!(w[0] + w[1] + w[2] > 0.0))
        throw std::domain_error("sample_exchange_parameters: pair has zero exchange rate");
    auto out = sample_energy_split(w, kp.alpha(), kp.zeta(), rng);
    out.sigma = kp.angular().sample(relative_direction(p), rng);
    return out;
}

std::optional<CollisionOutcome> collide(const PairState& p, const KernelParams& kp, double m, double w_exchange,
                                        double w_frozen, Rng& rng)
{
    const double we = kp.omega() * w_exchange;
    const double wf = (1.0 - kp.omega()) * w_frozen;
    if (!(we + wf > 0.0)) return std::nullopt;
    if (wf == 0.0 || rng.uniform() * (we + wf) < we) {
        const auto ex = sample_exchange_parameters(p, kp, m, rng);
        return apply_exchange_collision(p, ex.sigma, ex.r, ex.R, m);
    }
    // frozen kernel has no angular dependence: sigma uniform on the sphere
    return apply_frozen_collision(p, rng.unit_vector(), m);
}

std::optional<CollisionOutcome> collide(const PairState& p, const KernelParams& kp, double m, Rng& rng)
{
    return collide(p, kp, m, pair_rate_physical(p, kp, m), pair_rate_frozen(p, kp, m), rng);
}

}  // namespace polykin
