#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polykin/core.hpp"
#include "polykin/kernel.hpp"
#include "polykin/stats.hpp"

namespace polykin {

class Rng;

struct SolverConfig {
    /// Time step; 0 selects it so that about `collisions_per_step` collisions
    /// happen per particle and step.
    double dt = 0.0;
    double t_end = 1.0;
    std::uint64_t seed = 1;
    std::size_t record_every = 1;
    std::vector<double> moment_orders{2.0, 3.0, 4.0, 6.0};
    double majorant_safety = 1.1;
    double collisions_per_step = 0.1;
    /// 1 is bit-reproducible; more threads split each step over random
    /// disjoint particle groups.
    unsigned threads = 1;
    bool track_entropy = true;
};

struct CollisionCounters {
    std::uint64_t attempted = 0;
    std::uint64_t accepted = 0;
    std::uint64_t exchange = 0;
    std::uint64_t frozen = 0;

    CollisionCounters& operator+=(const CollisionCounters& o);
};

struct TimeSeriesRecord {
    double t = 0.0;
    double mass = 0.0;
    Vec3 momentum;
    double energy = 0.0;
    std::vector<double> moments;  ///< L^1_k for SolverConfig::moment_orders
    double entropy = 0.0;
    CollisionCounters counters;  ///< cumulative since t = 0
    double temperature_translational = 0.0;
    double temperature_internal = 0.0;
    double stress_anisotropy = 0.0;
};

/// Raised when a candidate pair's rate exceeds the per-step majorant.
class MajorantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised on non-finite particle states or invalid initial data.
class NumericalAbort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-pair majorant of omega W_ex + (1 - omega) W_fr over the current ensemble.
///
/// With c the mean velocity, Q_v = max |v - c|^2 / 2 and Q_I = max I / m,
/// every pair has |u|^2 <= 8 Q_v and I / m <= Q_I, so
///   W_ex <= ||b|| K N_alpha ((8 Q_v)^{zeta/2} A_R + 2 eta A_r Q_I^{zeta/2}),
///   W_fr <= 4 pi K ((8 Q_v)^{zeta/2} + 2 eta_f Q_I^{zeta/2}).
/// The result is multiplied by `safety`.
double pair_rate_majorant(const Ensemble& ens, const KernelParams& kp, double safety);

/// omega W_ex + (1 - omega) W_fr for one pair.
double pair_rate_mixed(const PairState& p, const KernelParams& kp, double m);

/// One time step of length dt with majorant (null-collision) pair selection.
///
/// The number of candidates has mean (n/N) N (N-1)/2 W_maj dt (integer part
/// plus a Bernoulli draw for the fraction); each candidate is accepted with
/// probability W / W_maj and dispatched through `collide`.
CollisionCounters step(Ensemble& ens, const KernelParams& kp, const SolverConfig& cfg, double dt, Rng& rng);

/// Checks that initial data has positive mass, finite energy and a finite
/// L^1_{2+} moment; throws NumericalAbort otherwise.
void validate_initial_data(const Ensemble& ens);

/// dt giving `collisions_per_step` expected collisions per particle, from
/// the mean mixed rate over sampled pairs.
double auto_time_step(const Ensemble& ens, const KernelParams& kp, double collisions_per_step, Rng& rng);

struct EquilibriumDiagnostics {
    double temperature = 0.0;  ///< from the conserved energy
    MaxwellianParams matched;
    std::vector<double> moment_orders;
    std::vector<double> maxwellian_moments;
    std::vector<double> moment_relative_mismatch;  ///< empirical / Maxwellian - 1
    stats::TestResult velocity_test;    ///< against N(U, k_B T / m)
    stats::TestResult internal_test;    ///< against Gamma(alpha + 1, k_B T)
    double entropy_maxwellian = 0.0;
};

struct RunResult {
    std::vector<TimeSeriesRecord> records;
    EquilibriumDiagnostics equilibrium;
    double dt = 0.0;
    std::size_t steps = 0;
    /// max relative drift of momentum (relative to sqrt(2 m E) scale) and energy over the run
    double momentum_drift = 0.0;
    double energy_drift = 0.0;
};

TimeSeriesRecord make_record(const Ensemble& ens, double t, const CollisionCounters& counters,
                             const SolverConfig& cfg);

/// Runs to t_end, recording every `record_every` steps (records at step 0
/// and at multiples of record_every).
RunResult run(Ensemble& ens, const KernelParams& kp, const SolverConfig& cfg);

EquilibriumDiagnostics equilibrium_diagnostics(const Ensemble& ens, std::span<const double> moment_orders);

enum class RelaxationKind { StressDeviator, EnergyImbalance };

struct RelaxationFit {
    double rate = 0.0;  ///< 1/s
    double r2 = 0.0;
    std::size_t points = 0;
    bool reliable = false;  ///< r2 >= 0.9
};

/// Log-linear fit of |signal(t)| over the leading records while the signal
/// stays above `floor_fraction` of its initial magnitude. The stress signal
/// is the normal-stress anisotropy; the energy signal is
/// (T_tr - T_int) / (T_tr + T_int).
RelaxationFit relaxation_rates(const std::vector<TimeSeriesRecord>& records, RelaxationKind which,
                               double floor_fraction = 0.1);

}  // namespace polykin
