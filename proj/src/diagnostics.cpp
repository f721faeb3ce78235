#include "polykin/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "polykin/collision.hpp"
#include "polykin/random.hpp"

namespace polykin {

namespace {

Vec3 mean_velocity(const Ensemble& ens)
{
    Vec3 c;
    for (const auto& p : ens.particles()) c += p.v;
    return c * (1.0 / static_cast<double>(ens.size()));
}

double quantile_of(std::vector<double> xs, double q)
{
    const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(xs.size() - 1)));
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(idx), xs.end());
    return xs[idx];
}

}  // namespace

double empirical_entropy(const Ensemble& ens)
{
    const std::size_t N = ens.size();
    if (N == 0) throw std::invalid_argument("empirical_entropy: empty ensemble");
    const Vec3 c = mean_velocity(ens);
    std::vector<double> speed(N), internal(N);
    for (std::size_t i = 0; i < N; ++i) {
        speed[i] = norm(ens.particles()[i].v - c);
        internal[i] = ens.particles()[i].I;
    }
    const auto bins = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(N)) - 1e-9));
    const double s_max = *std::max_element(speed.begin(), speed.end());
    const double i_max = *std::max_element(internal.begin(), internal.end());
    double s_top = quantile_of(speed, 0.999);
    double i_top = quantile_of(internal, 0.999);
    if (!(s_top > 0.0)) s_top = s_max > 0.0 ? s_max : 1.0;
    if (!(i_top > 0.0)) i_top = i_max > 0.0 ? i_max : 1.0;
    const double ds = s_top / static_cast<double>(bins);
    const double dI = i_top / static_cast<double>(bins);

    std::vector<double> counts(bins * bins, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        const auto a = std::min(bins - 1, static_cast<std::size_t>(speed[i] / ds));
        const auto b = std::min(bins - 1, static_cast<std::size_t>(internal[i] / dI));
        counts[a * bins + b] += 1.0;
    }
    const double n = ens.number_density();
    const double alpha = ens.species().alpha();
    double H = 0.0;
    for (std::size_t a = 0; a < bins; ++a) {
        const double c_lo = a * ds;
        const double c_hi = a + 1 == bins ? std::max(s_max, (a + 1) * ds) : (a + 1) * ds;
        const double shell = 4.0 * std::numbers::pi / 3.0 * (c_hi * c_hi * c_hi - c_lo * c_lo * c_lo);
        for (std::size_t b = 0; b < bins; ++b) {
            const double cnt = counts[a * bins + b];
            if (cnt == 0.0) continue;
            const double I_lo = b * dI;
            const double I_hi = b + 1 == bins ? std::max(i_max, (b + 1) * dI) : (b + 1) * dI;
            const double I_c = 0.5 * (I_lo + I_hi);
            const double frac = cnt / static_cast<double>(N);
            const double f = n * frac / (shell * (I_hi - I_lo));
            H += n * frac * (std::log(f) - alpha * std::log(I_c));
        }
    }
    return H;
}

double maxwellian_entropy(const MaxwellianParams& params, const Species& sp, const Units& units)
{
    const double n = params.rho / sp.m();
    const double kT = units.kB * params.T;
    const double a1 = sp.alpha() + 1.0;
    return n * (std::log(n) - 1.5 * std::log(2.0 * std::numbers::pi * kT / sp.m()) - 1.5 - a1 -
                std::lgamma(a1) - a1 * std::log(kT));
}

stats::TestResult velocity_gaussian_test(const Ensemble& ens, double T, std::size_t bins)
{
    const Vec3 c = mean_velocity(ens);
    const double scale = 1.0 / std::sqrt(ens.units().kB * T / ens.species().m());
    std::vector<double> z;
    z.reserve(3 * ens.size());
    for (const auto& p : ens.particles()) {
        const Vec3 w = (p.v - c) * scale;
        z.push_back(w.x);
        z.push_back(w.y);
        z.push_back(w.z);
    }
    return stats::chi_square_gof(z, stats::normal_quantile, bins);
}

stats::TestResult internal_gamma_test(const Ensemble& ens, double T, std::size_t bins)
{
    const double kT = ens.units().kB * T;
    const double shape = ens.species().alpha() + 1.0;
    std::vector<double> xs;
    xs.reserve(ens.size());
    for (const auto& p : ens.particles()) xs.push_back(p.I / kT);
    return stats::chi_square_gof(xs, [shape](double q) { return boost::math::gamma_p_inv(shape, q); }, bins);
}

double translational_temperature(const Ensemble& ens)
{
    const Vec3 c = mean_velocity(ens);
    double s = 0.0;
    for (const auto& p : ens.particles()) s += norm2(p.v - c);
    return ens.species().m() * s / (3.0 * static_cast<double>(ens.size()) * ens.units().kB);
}

double internal_temperature(const Ensemble& ens)
{
    double s = 0.0;
    for (const auto& p : ens.particles()) s += p.I;
    return s / (static_cast<double>(ens.size()) * (ens.species().alpha() + 1.0) * ens.units().kB);
}

double stress_anisotropy(const Ensemble& ens)
{
    const Vec3 c = mean_velocity(ens);
    double xx = 0.0, yy = 0.0, zz = 0.0;
    for (const auto& p : ens.particles()) {
        const Vec3 w = p.v - c;
        xx += w.x * w.x;
        yy += w.y * w.y;
        zz += w.z * w.z;
    }
    const double pressure = (xx + yy + zz) / 3.0;
    if (pressure == 0.0) return 0.0;
    return (xx - 0.5 * (yy + zz)) / pressure;
}

// ---------------------------------------------------------------------------

bool EnergyIdentityResidual::ok(double tol) const
{
    return line1 <= tol && line2 <= tol && bracket_energy <= tol && lambda_margin >= -tol && bound1_margin >= -tol &&
           bound2_margin >= -tol && s >= -tol && s <= 1.0 + tol;
}

EnergyIdentityResidual energy_identity_check(const PairState& p, const Vec3& sigma, double r, double R, double m)
{
    const auto post = apply_exchange_collision(p, sigma, r, R, m);
    auto b2 = [m](const Vec3& v, double I) { return 1.0 + 0.5 * norm2(v) + I / m; };
    const double Ebr = b2(p.v, p.I) + b2(p.vs, p.Is);
    const double bp1 = b2(post.v, post.I);
    const double bp2 = b2(post.vs, post.Is);
    const double E = p.energy(m);

    EnergyIdentityResidual res;
    res.s = 1.0 - (1.0 - R) * E / (m * Ebr);
    const Vec3 V = (p.v + p.vs) * 0.5;
    const double Vn = norm(V);
    Vec3 Vhat{0.0, 0.0, 1.0};
    if (Vn > 0.0) Vhat = V * (1.0 / Vn);
    else res.degenerate_V = true;
    const double c = dot(Vhat, sigma);
    const double lambda_closed = std::sqrt(R * E / m) * Vn / Ebr;
    res.lambda = std::abs(c) > 1e-3 ? (bp1 / Ebr - 0.5 * res.s - r * (1.0 - res.s)) / c : lambda_closed;

    const double s = res.s;
    res.line1 = std::abs(Ebr * (0.5 * s + r * (1.0 - s) + res.lambda * c) - bp1) / Ebr;
    res.line2 = std::abs(Ebr * (0.5 * s + (1.0 - r) * (1.0 - s) - res.lambda * c) - bp2) / Ebr;
    res.lambda_margin = 0.5 * s - std::abs(res.lambda);
    const double spread = 0.5 * s * (1.0 + std::abs(c));
    res.bound1_margin = (Ebr * (r * (1.0 - s) + spread) - bp1) / Ebr;
    res.bound2_margin = (Ebr * ((1.0 - r) * (1.0 - s) + spread) - bp2) / Ebr;
    res.bracket_energy = std::abs(bp1 + bp2 - Ebr) / Ebr;
    return res;
}

// ---------------------------------------------------------------------------

double kappa_ub_closed_form(const KernelParams& kp)
{
    return kp.angular().l1_norm() * kp.K() * kp.n_alpha() *
           (std::pow(4.0, 0.5 * kp.zeta()) * kp.a_R() + 2.0 * kp.eta() * kp.a_r());
}

namespace {

/// Per-draw contributions x^{k/2} + y^{k/2} for every k, where x and y are
/// the post-collision brackets squared over E<>. Calls `sink(j, value)`.
template <class Sink>
void averaging_draws(const PairState& p, std::span<const double> ks, const KernelParams& kp, double m,
                     std::size_t n_mc, Rng& rng, Sink&& sink)
{
    const double hz = 0.5 * kp.zeta();
    const std::array<double, 3> weights{std::pow(4.0, hz) * kp.a_R(), kp.eta() * kp.a_r(), kp.eta() * kp.a_r()};
    auto b2 = [m](const Vec3& v, double I) { return 1.0 + 0.5 * norm2(v) + I / m; };
    const double Ebr = b2(p.v, p.I) + b2(p.vs, p.Is);
    const Vec3 axis = relative_direction(p);

    bool integer_orders = true;
    int kmax = 0;
    for (double k : ks) {
        if (k != std::floor(k) || k < 0.0 || k > 400.0) integer_orders = false;
        kmax = std::max(kmax, static_cast<int>(k));
    }
    std::vector<double> px(kmax + 1), py(kmax + 1);

    for (std::size_t i = 0; i < n_mc; ++i) {
        const auto ex = sample_energy_split(weights, kp.alpha(), kp.zeta(), rng);
        const Vec3 sigma = kp.angular().sample(axis, rng);
        const auto post = apply_exchange_collision(p, sigma, ex.r, ex.R, m);
        const double x = b2(post.v, post.I) / Ebr;
        const double y = b2(post.vs, post.Is) / Ebr;
        if (integer_orders) {
            const double sx = std::sqrt(x), sy = std::sqrt(y);
            px[0] = py[0] = 1.0;
            for (int j = 1; j <= kmax; ++j) {
                px[j] = px[j - 1] * sx;
                py[j] = py[j - 1] * sy;
            }
            for (std::size_t j = 0; j < ks.size(); ++j) {
                const auto k = static_cast<int>(ks[j]);
                sink(i, j, px[k] + py[k]);
            }
        } else {
            for (std::size_t j = 0; j < ks.size(); ++j)
                sink(i, j, std::pow(x, 0.5 * ks[j]) + std::pow(y, 0.5 * ks[j]));
        }
    }
}

}  // namespace

std::vector<McEstimate> averaging_ratio_profile(const PairState& p, std::span<const double> ks,
                                                const KernelParams& kp, double m, std::size_t n_mc, Rng& rng)
{
    if (n_mc < 2) throw std::invalid_argument("averaging_ratio_profile: need at least two draws");
    const double kub = kappa_ub_closed_form(kp);
    std::vector<double> sum(ks.size(), 0.0), sum2(ks.size(), 0.0);
    averaging_draws(p, ks, kp, m, n_mc, rng, [&](std::size_t, std::size_t j, double v) {
        sum[j] += v;
        sum2[j] += v * v;
    });
    std::vector<McEstimate> out(ks.size());
    const double n = static_cast<double>(n_mc);
    for (std::size_t j = 0; j < ks.size(); ++j) {
        const double mean = sum[j] / n;
        const double var = std::max(0.0, (sum2[j] / n - mean * mean) * n / (n - 1.0));
        out[j] = {kub * mean, kub * std::sqrt(var / n)};
    }
    return out;
}

McEstimate averaging_operator_Sk(const PairState& p, double k, const KernelParams& kp, double m, std::size_t n_mc,
                                 Rng& rng)
{
    const double ks[] = {k};
    auto est = averaging_ratio_profile(p, ks, kp, m, n_mc, rng).front();
    auto b2 = [m](const Vec3& v, double I) { return 1.0 + 0.5 * norm2(v) + I / m; };
    const double scale = std::pow(b2(p.v, p.I) + b2(p.vs, p.Is), 0.5 * k);
    return {est.value * scale, est.stderr_ * scale};
}

std::vector<PairState> sample_pair_states(std::size_t count, const StateSampling& cfg, double m, Rng& rng)
{
    if (!(cfg.bracket_min >= 1.0) || !(cfg.bracket_max >= cfg.bracket_min))
        throw std::domain_error("sample_pair_states: need 1 <= bracket_min <= bracket_max");
    const double log_lo = std::log(cfg.bracket_min);
    const double log_span = std::log(cfg.bracket_max) - log_lo;
    auto one = [&](Vec3& v, double& I) {
        const double b = std::exp(log_lo + log_span * rng.uniform());
        const double e = b * b - 1.0;
        const double f = rng.uniform();
        v = rng.unit_vector() * std::sqrt(2.0 * f * e);
        I = m * (1.0 - f) * e;
    };
    std::vector<PairState> out(count);
    for (auto& s : out) {
        one(s.v, s.I);
        one(s.vs, s.Is);
    }
    return out;
}

AveragingReport empirical_Ck(std::span<const double> ks, const KernelParams& kp, double m,
                             std::span<const PairState> states, std::size_t n_mc, std::uint64_t seed,
                             unsigned threads)
{
    if (states.empty()) throw std::invalid_argument("empirical_Ck: no states supplied");
    if (ks.empty()) throw std::invalid_argument("empirical_Ck: no moment orders supplied");
    const Rng base(seed);
    const std::size_t nk = ks.size();
    std::vector<double> ratio(states.size() * nk, 0.0);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Rng rng = base.split(i);
            const auto prof = averaging_ratio_profile(states[i], ks, kp, m, n_mc, rng);
            for (std::size_t j = 0; j < nk; ++j) ratio[i * nk + j] = prof[j].value;
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1) {
        work(0, states.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (states.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk, e = std::min(states.size(), b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }

    AveragingReport rep;
    const auto kb = kappa_bounds(kp);
    rep.kappa_lb = kb.lb;
    rep.kappa_ub = kappa_ub_closed_form(kp);
    rep.n_states = states.size();
    rep.n_mc = n_mc;
    rep.low_sample_warning = states.size() < 100 || n_mc < 10000;
    rep.L = std::pow(2.0, -kp.zeta()) * std::min(1.0, std::pow(2.0, 1.0 - kp.zeta()));

    for (std::size_t j = 0; j < nk; ++j) {
        CkEstimate c;
        c.k = ks[j];
        for (std::size_t i = 0; i < states.size(); ++i)
            if (ratio[i * nk + j] > c.value) {
                c.value = ratio[i * nk + j];
                c.argmax_state = i;
            }
        rep.ck.push_back(c);
    }

    // Percentile bootstrap of the mean at the maximizing state, replaying
    // that state's random stream.
    constexpr std::size_t kBoot = 200;
    std::vector<double> draws(n_mc);
    for (auto& c : rep.ck) {
        Rng rng = base.split(c.argmax_state);
        const double k_single[] = {c.k};
        averaging_draws(states[c.argmax_state], k_single, kp, m, n_mc, rng,
                        [&](std::size_t i, std::size_t, double v) { draws[i] = v; });
        Rng boot = base.split(states.size() + static_cast<std::uint64_t>(&c - rep.ck.data()));
        std::vector<double> means(kBoot);
        for (auto& mean : means) {
            double s = 0.0;
            for (std::size_t i = 0; i < n_mc; ++i) s += draws[boot.below(n_mc)];
            mean = rep.kappa_ub * s / static_cast<double>(n_mc);
        }
        std::sort(means.begin(), means.end());
        c.ci_low = means[static_cast<std::size_t>(0.025 * (kBoot - 1))];
        c.ci_high = means[static_cast<std::size_t>(std::ceil(0.975 * (kBoot - 1)))];
    }

    rep.monotone = true;
    for (std::size_t j = 1; j < nk; ++j)
        if (ks[j] > ks[j - 1] && rep.ck[j].value > rep.ck[j - 1].value * (1.0 + 1e-12)) rep.monotone = false;

    for (const auto& c : rep.ck)
        if (rep.kappa_lb > 0.0 && c.ci_high < rep.kappa_lb && (!rep.k_star || c.k < *rep.k_star)) rep.k_star = c.k;
    for (const auto& c : rep.ck) {
        if (rep.k_star && c.k >= *rep.k_star) rep.A_tilde.emplace_back(c.k, 0.5 * rep.L * (rep.kappa_lb - c.value));
        if (c.k > 2.0) rep.D_tilde.emplace_back(c.k, std::pow(2.0, 0.5 * c.k + 2.0) * rep.kappa_ub);
    }
    return rep;
}

}  // namespace polykin
