#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polykin/core.hpp"
#include "polykin/kernel.hpp"
#include "polykin/stats.hpp"

namespace polykin {

class Rng;

// ---------------------------------------------------------------------------
// Entropy and equilibrium tests
// ---------------------------------------------------------------------------

/// Histogram estimate of int f log(f I^{-alpha}) dv dI.
///
/// Velocities are taken isotropic around the mean velocity, so the density
/// is binned in (speed, I) with ceil(N^{1/3}) cells per axis spanning the
/// 99.9% quantile on each axis; the last cell on each axis is stretched to
/// the sample maximum. Speed cells have the exact shell volume
/// (4 pi / 3)(c_hi^3 - c_lo^3); I^{-alpha} is taken at the cell center.
double empirical_entropy(const Ensemble& ens);

/// Closed-form int M log(M I^{-alpha}) for the Maxwellian.
double maxwellian_entropy(const MaxwellianParams& params, const Species& sp, const Units& units = Units::si());

/// Pooled velocity components (v - mean) / sqrt(k_B T / m) against N(0, 1).
stats::TestResult velocity_gaussian_test(const Ensemble& ens, double T, std::size_t bins = 50);
/// I against Gamma(alpha + 1, k_B T).
stats::TestResult internal_gamma_test(const Ensemble& ens, double T, std::size_t bins = 50);

/// m <|v - mean|^2> / (3 k_B)
double translational_temperature(const Ensemble& ens);
/// <I> / ((alpha + 1) k_B)
double internal_temperature(const Ensemble& ens);
/// (P_xx - (P_yy + P_zz) / 2) / p with P the mean-frame pressure tensor.
double stress_anisotropy(const Ensemble& ens);

// ---------------------------------------------------------------------------
// Energy identity
// ---------------------------------------------------------------------------

/// Residuals of the bracket-energy decomposition of an exchange collision:
///   <v',I'>^2   = E<> (s/2 + r (1-s) + lambda Vhat . sigma)
///   <v'_*,I'_*>^2 = E<> (s/2 + (1-r)(1-s) - lambda Vhat . sigma)
/// with E<> = <v,I>^2 + <v_*,I_*>^2, s = 1 - (1-R) E / (m E<>), V = (v+v_*)/2,
/// together with |lambda| <= s/2 and the upper bounds
///   <v',I'>^2 <= E<> (r (1-s) + s/2 (1 + |Vhat . sigma|)) and its mirror.
///
/// lambda is solved from the first line when |Vhat . sigma| is not tiny and
/// otherwise taken from its closed form sqrt(R E / m) |V| / E<>.
struct EnergyIdentityResidual {
    double s = 0.0;
    double lambda = 0.0;
    /// relative residuals of the two representation lines (should be ~0)
    double line1 = 0.0;
    double line2 = 0.0;
    /// s/2 - |lambda|, relative to E<> (should be >= 0)
    double lambda_margin = 0.0;
    /// bound minus left-hand side, relative to E<> (should be >= 0)
    double bound1_margin = 0.0;
    double bound2_margin = 0.0;
    /// |<v',I'>^2 + <v'_*,I'_*>^2 - E<>| / E<>
    double bracket_energy = 0.0;
    /// V = 0, Vhat replaced by (0, 0, 1)
    bool degenerate_V = false;

    /// True when every residual is within `tol`.
    bool ok(double tol = 1e-10) const;
};

EnergyIdentityResidual energy_identity_check(const PairState& p, const Vec3& sigma, double r, double R, double m);

// ---------------------------------------------------------------------------
// Averaging operator and Povzner constants
// ---------------------------------------------------------------------------

struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

/// kappa^{ub} in closed form for the default upper sandwich:
/// ||b|| K N_alpha (4^{zeta/2} A_R + 2 eta A_r).
double kappa_ub_closed_form(const KernelParams& kp);

/// Monte-Carlo estimate of
///   S_k = int (<v',I'>^k + <v'_*,I'_*>^k) b btilde^{ub} d_alpha dsigma dR dr,
/// sampling (sigma, r, R) from b btilde^{ub} d_alpha / kappa^{ub}.
McEstimate averaging_operator_Sk(const PairState& p, double k, const KernelParams& kp, double m, std::size_t n_mc,
                                 Rng& rng);

/// S_k / (E<>)^{k/2} for several k from a single sample set.
std::vector<McEstimate> averaging_ratio_profile(const PairState& p, std::span<const double> ks,
                                                const KernelParams& kp, double m, std::size_t n_mc, Rng& rng);

/// Settings of the state distribution used for the empirical sup in C_k:
/// brackets log-uniform on [bracket_min, bracket_max], isotropic velocity
/// directions and a uniform split of <v,I>^2 - 1 between |v|^2/2 and I/m.
struct StateSampling {
    double bracket_min = 1.0;
    double bracket_max = 1e3;
};

std::vector<PairState> sample_pair_states(std::size_t count, const StateSampling& cfg, double m, Rng& rng);

struct CkEstimate {
    double k = 0.0;
    double value = 0.0;  ///< empirical sup over sampled states
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t argmax_state = 0;
};

struct AveragingReport {
    std::vector<CkEstimate> ck;
    double kappa_lb = 0.0;
    double kappa_ub = 0.0;
    /// smallest tested k with ci_high(C_k) < kappa_lb
    std::optional<double> k_star;
    /// C_k non-increasing across the tested k (on the empirical sequence)
    bool monotone = false;
    /// L from the bracket sandwich
    double L = 0.0;
    /// (k, A~_k = (L/2)(kappa_lb - C_k)) for k >= k*
    std::vector<std::pair<double, double>> A_tilde;
    /// (k, D~_k = 2^{k/2 + 2} kappa_ub) for k > 2
    std::vector<std::pair<double, double>> D_tilde;
    std::size_t n_states = 0;
    std::size_t n_mc = 0;
    bool low_sample_warning = false;
};

/// Empirical C_k = sup over `states` of S_k / (E<>)^{k/2}. Each state uses
/// its own deterministic random stream, so the same samples serve every k
/// and the estimate is reproducible for a fixed seed. The CI is a
/// percentile bootstrap over the Monte-Carlo draws at the maximizing state.
AveragingReport empirical_Ck(std::span<const double> ks, const KernelParams& kp, double m,
                             std::span<const PairState> states, std::size_t n_mc, std::uint64_t seed,
                             unsigned threads = 1);

}  // namespace polykin
