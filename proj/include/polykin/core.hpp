#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polykin/units.hpp"
#include "polykin/vec3.hpp"

namespace polykin {

/// One simulated molecule: velocity [m/s] and internal energy [J].
struct Particle {
    Vec3 v;
    double I = 0.0;
};

/// Molecular mass m > 0 and internal-structure exponent alpha > -1.
/// The internal-energy density of states is proportional to I^alpha.
class Species {
public:
    Species(double m, double alpha);

    double m() const { return m_; }
    double alpha() const { return alpha_; }

private:
    double m_;
    double alpha_;
};

struct ConservedTotals {
    double mass = 0.0;
    Vec3 momentum;
    double energy = 0.0;
};

/// Particle population representing a space-homogeneous gas with number
/// density n. Every particle carries the same statistical weight n / N.
///
/// Conserved totals are recorded when the ensemble is built; the solver is
/// the only writer of the particle array.
class Ensemble {
public:
    Ensemble(Species species, std::vector<Particle> particles, double n, Units units = Units::si());

    const Species& species() const { return species_; }
    const Units& units() const { return units_; }
    double number_density() const { return n_; }
    std::size_t size() const { return particles_.size(); }
    /// n / N
    double weight() const { return n_ / static_cast<double>(particles_.size()); }

    std::span<const Particle> particles() const { return particles_; }
    std::span<Particle> particles_mut() { return particles_; }

    const ConservedTotals& initial_totals() const { return initial_; }

private:
    Species species_;
    std::vector<Particle> particles_;
    double n_;
    Units units_;
    ConservedTotals initial_;
};

struct MaxwellianParams {
    double rho = 0.0;  ///< mass density [kg/m^3]
    Vec3 U;            ///< bulk velocity [m/s]
    double T = 0.0;    ///< temperature [K]
};

/// <v, I> = sqrt(1 + |v|^2 / 2 + I / m).
double lebesgue_bracket(const Vec3& v, double I, double m);

/// Empirical L^1_k moment (n m / N) sum_i <v_i, I_i>^k.
double l1_moment(const Ensemble& ens, double k);

/// Same moment for several orders in one pass over the particles.
std::vector<double> l1_moments(const Ensemble& ens, std::span<const double> ks);

ConservedTotals conserved_totals(const Ensemble& ens);

/// Polyatomic Maxwellian
///   rho / (m (k_B T)^{alpha+1} Gamma(alpha+1)) (m / (2 pi k_B T))^{3/2}
///     I^alpha exp(-(m |v - U|^2 / 2 + I) / (k_B T)).
double maxwellian_density(const Vec3& v, double I, const MaxwellianParams& params, const Species& sp,
                          const Units& units = Units::si());

/// Draws N particles from the Maxwellian: Gaussian velocities around U with
/// per-axis variance k_B T / m, I ~ Gamma(alpha + 1, k_B T). The ensemble
/// number density is rho / m.
Ensemble sample_maxwellian(const MaxwellianParams& params, const Species& sp, std::size_t N,
                           std::uint64_t seed, const Units& units = Units::si());

/// Exact L^1_k moment of the Maxwellian (rho times the mean of <v,I>^k),
/// computed by quadrature.
double maxwellian_l1_moment(const MaxwellianParams& params, const Species& sp, double k,
                            const Units& units = Units::si());

/// Mean-velocity-frame energy per particle, (1/N) sum (m |v - U|^2 / 2 + I).
double thermal_energy_per_particle(const Ensemble& ens);

/// Temperature of the Maxwellian carrying the ensemble's mass, momentum and
/// energy: T = e / ((alpha + 5/2) k_B).
double equilibrium_temperature(const Ensemble& ens);

/// Maxwellian with the same mass, momentum and energy as the ensemble.
MaxwellianParams matched_maxwellian(const Ensemble& ens);

}  // namespace polykin
