#pragma once

#include <array>
#include <optional>

#include "polykin/kernel.hpp"
#include "polykin/vec3.hpp"

namespace polykin {

class Rng;

/// Post-collision states together with the collision parameters that
/// produced them.
///
/// The particle method never evaluates the ratio (I I_* / I' I'_*)^alpha of
/// the strong form of the gain term. Particles represent f against dv dI,
/// and a collision event realizes the weak form, where only B b d_alpha
/// appears: sampling (sigma, r, R) with density proportional to
/// B b d_alpha and applying the collision rules is exactly the bilinear
/// weak form with test functions evaluated at the post-collision states.
struct CollisionOutcome {
    Vec3 v;
    Vec3 vs;
    double I = 0.0;
    double Is = 0.0;
    Vec3 sigma;
    double r = 0.0;
    double R = 0.0;
    bool frozen = false;
};

struct ExchangeParameters {
    Vec3 sigma;
    double r = 0.0;
    double R = 0.0;
    /// Which kernel term was drawn: 0 translational, 1 the I-term, 2 the I_*-term.
    int term = 0;
};

/// Unit relative direction u / |u|, or (0, 0, 1) when u = 0.
Vec3 relative_direction(const PairState& p);

/// Borgnakke-Larsen rules:
///   v' = V + sqrt(R E / m) sigma,  v'_* = V - sqrt(R E / m) sigma,
///   I' = r (1 - R) E,  I'_* = (1 - r)(1 - R) E,  V = (v + v_*) / 2.
CollisionOutcome apply_exchange_collision(const PairState& p, const Vec3& sigma, double r, double R, double m);

/// Elastic collision that keeps both internal energies:
///   v' = V + |u| sigma / 2,  v'_* = V - |u| sigma / 2.
CollisionOutcome apply_frozen_collision(const PairState& p, const Vec3& sigma, double m);

/// Exact composition sampling of (sigma, r, R) from B b d_alpha.
/// Throws std::domain_error when the pair's exchange rate is zero.
ExchangeParameters sample_exchange_parameters(const PairState& p, const KernelParams& kp, double m, Rng& rng);

/// Draws (r, R) from the mixture sum_i weights[i] * term_i(r, R) d_alpha
/// with term_0 = R^{zeta/2}, term_1 = (r (1-R))^{zeta/2},
/// term_2 = ((1-r)(1-R))^{zeta/2}; each component is a product of Beta laws.
/// Returns the component index in `term`; sigma is left unset.
ExchangeParameters sample_energy_split(const std::array<double, 3>& weights, double alpha, double zeta, Rng& rng);

/// Picks exchange with probability omega W_ex / (omega W_ex + (1 - omega) W_fr),
/// frozen otherwise; std::nullopt when both weighted rates vanish.
std::optional<CollisionOutcome> collide(const PairState& p, const KernelParams& kp, double m, Rng& rng);

/// Same, with the two rates already known (the solver computes them for the
/// acceptance test).
std::optional<CollisionOutcome> collide(const PairState& p, const KernelParams& kp, double m, double w_exchange,
                                        double w_frozen, Rng& rng);

}  // namespace polykin
