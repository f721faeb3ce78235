#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "polykin/vec3.hpp"

namespace polykin {

class Rng;

/// Angular part b(u_hat . sigma) of the collision kernel, supported on the
/// hemisphere u_hat . sigma >= 0.
///
/// A user-supplied b is taken as already symmetrized onto the hemisphere;
/// nothing here folds b(-x) back in.
class AngularModel {
public:
    /// b = 1 on the hemisphere; ||b||_{L^1} = 2 pi.
    static AngularModel constant();
    /// Bounded b on [0, 1] with majorant `sup_b` used for rejection sampling.
    static AngularModel custom(std::function<double(double)> b, double sup_b, std::string name);

    double operator()(double cos_theta) const;
    /// 2 pi * int_0^1 b(x) dx
    double l1_norm() const { return l1_; }
    double sup() const { return sup_; }
    bool is_constant() const { return constant_; }
    const std::string& name() const { return name_; }

    /// sigma on the hemisphere around `axis` with density proportional to b.
    Vec3 sample(const Vec3& axis, Rng& rng) const;

private:
    AngularModel() = default;

    std::function<double(double)> b_;
    double sup_ = 1.0;
    double l1_ = 0.0;
    bool constant_ = true;
    std::string name_ = "constant";
};

/// Collision-kernel parameters for the exchange (Borgnakke-Larsen) kernel
///   K N_alpha [ R^{zeta/2} |u|^zeta + eta (r (1-R) I / m)^{zeta/2}
///               + eta ((1-r)(1-R) I_* / m)^{zeta/2} ]
/// and its frozen counterpart with weight eta_f, mixed with factor omega.
class KernelParams {
public:
    KernelParams(double alpha, double zeta, double K, double eta, double eta_f, double omega,
                 AngularModel angular = AngularModel::constant());

    double alpha() const { return alpha_; }
    double zeta() const { return zeta_; }
    double K() const { return K_; }
    double eta() const { return eta_; }
    double eta_f() const { return eta_f_; }
    double omega() const { return omega_; }
    const AngularModel& angular() const { return angular_; }

    /// 2 Gamma(2 alpha + 7/2) / (sqrt(pi) Gamma(alpha + 1)^2); makes N_alpha d_alpha a probability measure.
    double n_alpha() const { return n_alpha_; }
    /// int R^{zeta/2} d_alpha dr dR = B(alpha+1, alpha+1) B((zeta+3)/2, 2 alpha + 2)
    double a_R() const { return a_R_; }
    /// int (r (1-R))^{zeta/2} d_alpha dr dR = B(alpha+1+zeta/2, alpha+1) B(3/2, 2 alpha + 2 + zeta/2)
    double a_r() const { return a_r_; }

    KernelParams with_K(double K) const;
    KernelParams with_omega(double omega) const;

private:
    double alpha_, zeta_, K_, eta_, eta_f_, omega_;
    AngularModel angular_;
    double n_alpha_ = 0.0;
    double a_R_ = 0.0;
    double a_r_ = 0.0;
};

/// Colliding pair before the collision.
struct PairState {
    Vec3 v;
    Vec3 vs;
    double I = 0.0;
    double Is = 0.0;

    Vec3 u() const { return v - vs; }
    /// E = m |u|^2 / 4 + I + I_*
    double energy(double m) const { return 0.25 * m * norm2(u()) + I + Is; }
};

/// r^alpha (1-r)^alpha (1-R)^{2 alpha + 1} sqrt(R)
double d_alpha_weight(double r, double R, double alpha);
/// int_{[0,1]^2} d_alpha = B(alpha+1, alpha+1) B(3/2, 2 alpha + 2)
double d_alpha_mass(double alpha);
double n_alpha(double alpha);

/// sigma-independent part of the exchange kernel at (r, R).
double evaluate_physical_kernel(const PairState& p, double r, double R, const KernelParams& kp, double m);

/// K [ |u|^{2 zeta} / (4E/m)^{zeta/2} + eta_f (I^zeta + I_*^zeta) / (m E)^{zeta/2} ]; 0 at E = 0.
double evaluate_frozen_kernel(const PairState& p, const KernelParams& kp, double m);

/// Closed-form integrals of the three exchange-kernel terms against
/// b d_alpha over (sigma, r, R): translational, I-term, I_*-term.
std::array<double, 3> exchange_rate_terms(const PairState& p, const KernelParams& kp, double m);

/// Total exchange rate W_ex = int B b d_alpha dsigma dR dr (sum of the three terms).
double pair_rate_physical(const PairState& p, const KernelParams& kp, double m);

/// Frozen rate W_fr = int_{S^2} B^f dsigma = 4 pi B^f.
double pair_rate_frozen(const PairState& p, const KernelParams& kp, double m);

/// Lower/upper sandwich functions in (r, R):
///   ub = K N_alpha [ (4R)^{zeta/2} + eta (r(1-R))^{zeta/2} + eta ((1-r)(1-R))^{zeta/2} ]
///   lb = K N_alpha 3^{-zeta/2} min{ (4R)^{zeta/2}, eta (r(1-R))^{zeta/2}, eta ((1-r)(1-R))^{zeta/2} }
/// so that lb (E/m)^{zeta/2} <= B <= ub (E/m)^{zeta/2} pointwise.
struct SandwichBounds {
    std::function<double(double r, double R)> lower;
    std::function<double(double r, double R)> upper;
};
SandwichBounds sandwich_bounds(const KernelParams& kp);

struct KappaBounds {
    double lb = 0.0;
    double ub = 0.0;
    /// Set when the lower sandwich degenerates (eta = 0).
    bool lb_degenerate = false;
};

/// kappa = ||b||_{L^1} * int_{[0,1]^2} btilde(r, R) d_alpha dr dR.
double kappa_from(const std::function<double(double, double)>& btilde, double alpha, const AngularModel& angular);
KappaBounds kappa_bounds(const KernelParams& kp);

/// Integrability constant with the upper sandwich normalized to 1:
///   rho_q = int r^{-(1+zeta/2)/q} (1-R)^{-1/q} d_alpha dr dR
///         = B(alpha+1-(1+zeta/2)/q, alpha+1) B(3/2, 2 alpha + 2 - 1/q).
/// Returns +infinity where the integral diverges.
double rho_q(double alpha, double zeta, double q);
/// The same constant by direct 2D quadrature (independent check of the closed form).
double rho_q_by_quadrature(double alpha, double zeta, double q, double rel_tol = 1e-10);

/// Margins of the bracket sandwich
///   L <v,I>^zeta - <v_*,I_*>^zeta <= (E/m)^{zeta/2} <= <v,I>^zeta + <v_*,I_*>^zeta,
/// with L = 2^{-zeta} min{1, 2^{1-zeta}}. Both margins are >= 0 when the
/// inequality holds.
struct BracketSandwich {
    double lower_margin = 0.0;
    double upper_margin = 0.0;
};
BracketSandwich bracket_sandwich(const PairState& p, double zeta, double m);

}  // namespace polykin
