#include "polykin/dsmc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "polykin/collision.hpp"
#include "polykin/diagnostics.hpp"
#include "polykin/random.hpp"

namespace polykin {

CollisionCounters& CollisionCounters::operator+=(const CollisionCounters& o)
{
    attempted += o.attempted;
    accepted += o.accepted;
    exchange += o.exchange;
    frozen += o.frozen;
    return *this;
}

double pair_rate_majorant(const Ensemble& ens, const KernelParams& kp, double safety)
{
    const double m = ens.species().m();
    Vec3 c;
    for (const auto& p : ens.particles()) c += p.v;
    c *= 1.0 / static_cast<double>(ens.size());
    double qv = 0.0, qi = 0.0;
    for (const auto& p : ens.particles()) {
        qv = std::max(qv, 0.5 * norm2(p.v - c));
        qi = std::max(qi, p.I / m);
    }
    const double hz = 0.5 * kp.zeta();
    const double trans = std::pow(8.0 * qv, hz);
    const double internal = std::pow(qi, hz);
    const double w_ex =
        kp.angular().l1_norm() * kp.K() * kp.n_alpha() * (trans * kp.a_R() + 2.0 * kp.eta() * kp.a_r() * internal);
    const double w_fr = 4.0 * std::numbers::pi * kp.K() * (trans + 2.0 * kp.eta_f() * internal);
    return safety * (kp.omega() * w_ex + (1.0 - kp.omega()) * w_fr);
}

double pair_rate_mixed(const PairState& p, const KernelParams& kp, double m)
{
    double w = 0.0;
    if (kp.omega() > 0.0) w += kp.omega() * pair_rate_physical(p, kp, m);
    if (kp.omega() < 1.0) w += (1.0 - kp.omega()) * pair_rate_frozen(p, kp, m);
    return w;
}

namespace {

std::string describe_pair(const PairState& p)
{
    std::ostringstream os;
    os.precision(17);
    os << "v=(" << p.v.x << "," << p.v.y << "," << p.v.z << ") I=" << p.I << " v*=(" << p.vs.x << "," << p.vs.y
       << "," << p.vs.z << ") I*=" << p.Is;
    return os.str();
}

/// Collides candidate pairs drawn from `idx` (all particles when empty).
CollisionCounters collide_group(std::span<Particle> particles, std::span<const std::size_t> idx,
                                double expected_candidates, double w_maj, const KernelParams& kp, double m, Rng& rng)
{
    CollisionCounters cnt;
    const std::size_t n = idx.empty() ? particles.size() : idx.size();
    if (n < 2 || !(expected_candidates > 0.0)) return cnt;
    const double whole = std::floor(expected_candidates);
    auto candidates = static_cast<std::uint64_t>(whole);
    if (rng.uniform() < expected_candidates - whole) ++candidates;

    const bool need_ex = kp.omega() > 0.0;
    const bool need_fr = kp.omega() < 1.0;
    for (std::uint64_t c = 0; c < candidates; ++c) {
        std::size_t a = rng.below(n);
        std::size_t b = rng.below(n - 1);
        if (b >= a) ++b;
        if (!idx.empty()) {
            a = idx[a];
            b = idx[b];
        }
        Particle& pa = particles[a];
        Particle& pb = particles[b];
        const PairState pair{pa.v, pb.v, pa.I, pb.I};
        const double we = need_ex ? pair_rate_physical(pair, kp, m) : 0.0;
        const double wf = need_fr ? pair_rate_frozen(pair, kp, m) : 0.0;
        const double w = kp.omega() * we + (1.0 - kp.omega()) * wf;
        ++cnt.attempted;
        if (w > w_maj) {
            std::ostringstream os;
            os.precision(17);
            os << "pair rate " << w << " exceeds majorant " << w_maj << " for " << describe_pair(pair);
            throw MajorantViolation(os.str());
        }
        if (rng.uniform() * w_maj >= w) continue;
        const auto out = collide(pair, kp, m, we, wf, rng);
        if (!out) continue;
        if (!is_finite(out->v) || !is_finite(out->vs) || !std::isfinite(out->I) || !std::isfinite(out->Is))
            throw NumericalAbort("non-finite post-collision state from " + describe_pair(pair));
        pa.v = out->v;
        pa.I = out->I;
        pb.v = out->vs;
        pb.I = out->Is;
        ++cnt.accepted;
        if (out->frozen) ++cnt.frozen;
        else ++cnt.exchange;
    }
    return cnt;
}

}  // namespace

CollisionCounters step(Ensemble& ens, const KernelParams& kp, const SolverConfig& cfg, double dt, Rng& rng)
{
    const std::size_t N = ens.size();
    if (N < 2) throw std::domain_error("step: need at least two particles");
    if (!(dt > 0.0)) throw std::domain_error("step: dt must be positive");
    if (!(cfg.majorant_safety >= 1.0)) throw std::domain_error("step: majorant_safety must be >= 1");
    const double w_maj = pair_rate_majorant(ens, kp, cfg.majorant_safety);
    if (!(w_maj > 0.0)) return {};
    const double m = ens.species().m();
    const double weight = ens.weight();
    auto particles = ens.particles_mut();
    const auto Nd = static_cast<double>(N);

    const unsigned threads = std::max(1u, cfg.threads);
    if (threads == 1 || N < 4 * static_cast<std::size_t>(threads)) {
        const double expected = weight * 0.5 * Nd * (Nd - 1.0) * w_maj * dt;
        return collide_group(particles, {}, expected, w_maj, kp, m, rng);
    }

    // Random disjoint groups; rates inside a group are rescaled by
    // (N - 1) / (N_g - 1) so every particle keeps its collision frequency.
    std::vector<std::size_t> perm(N);
    for (std::size_t i = 0; i < N; ++i) perm[i] = i;
    for (std::size_t i = N - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    const std::uint64_t key = rng.below(std::numeric_limits<std::uint64_t>::max());
    std::vector<CollisionCounters> results(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t b = N * t / threads, e = N * (t + 1) / threads;
        pool.emplace_back([&, t, b, e] {
            std::span<const std::size_t> idx(perm.data() + b, e - b);
            const double ng = static_cast<double>(e - b);
            const double expected = weight * 0.5 * ng * (Nd - 1.0) * w_maj * dt;
            Rng local(key, t);
            results[t] = collide_group(particles, idx, expected, w_maj, kp, m, local);
        });
    }
    for (auto& th : pool) th.join();
    CollisionCounters total;
    for (const auto& r : results) total += r;
    return total;
}

void validate_initial_data(const Ensemble& ens)
{
    const auto tot = conserved_totals(ens);
    if (!(tot.mass > 0.0)) throw NumericalAbort("initial data: mass must be positive");
    if (!std::isfinite(tot.energy)) throw NumericalAbort("initial data: energy is not finite");
    const double m2plus = l1_moment(ens, 2.5);
    if (!std::isfinite(m2plus)) throw NumericalAbort("initial data: L1_{2+} moment is not finite");
}

double auto_time_step(const Ensemble& ens, const KernelParams& kp, double collisions_per_step, Rng& rng)
{
    const std::size_t N = ens.size();
    if (N < 2) throw std::domain_error("auto_time_step: need at least two particles");
    const double m = ens.species().m();
    const std::size_t samples = std::min<std::size_t>(4000, N * (N - 1) / 2);
    double sum = 0.0;
    const auto ps = ens.particles();
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t a = rng.below(N);
        std::size_t b = rng.below(N - 1);
        if (b >= a) ++b;
        sum += pair_rate_mixed({ps[a].v, ps[b].v, ps[a].I, ps[b].I}, kp, m);
    }
    const double mean_rate = sum / static_cast<double>(samples);
    const double nu = ens.weight() * static_cast<double>(N - 1) * mean_rate;
    if (!(nu > 0.0)) return std::numeric_limits<double>::infinity();
    return collisions_per_step / nu;
}

TimeSeriesRecord make_record(const Ensemble& ens, double t, const CollisionCounters& counters, const SolverConfig& cfg)
{
    TimeSeriesRecord r;
    r.t = t;
    const auto tot = conserved_totals(ens);
    r.mass = tot.mass;
    r.momentum = tot.momentum;
    r.energy = tot.energy;
    r.moments = l1_moments(ens, cfg.moment_orders);
    r.entropy = cfg.track_entropy ? empirical_entropy(ens) : 0.0;
    r.counters = counters;
    r.temperature_translational = translational_temperature(ens);
    r.temperature_internal = internal_temperature(ens);
    r.stress_anisotropy = stress_anisotropy(ens);
    return r;
}

EquilibriumDiagnostics equilibrium_diagnostics(const Ensemble& ens, std::span<const double> moment_orders)
{
    EquilibriumDiagnostics d;
    d.matched = matched_maxwellian(ens);
    d.temperature = d.matched.T;
    d.moment_orders.assign(moment_orders.begin(), moment_orders.end());
    const auto empirical = l1_moments(ens, moment_orders);
    for (std::size_t j = 0; j < moment_orders.size(); ++j) {
        const double mm = maxwellian_l1_moment(d.matched, ens.species(), moment_orders[j], ens.units());
        d.maxwellian_moments.push_back(mm);
        d.moment_relative_mismatch.push_back(empirical[j] / mm - 1.0);
    }
    d.velocity_test = velocity_gaussian_test(ens, d.temperature);
    d.internal_test = internal_gamma_test(ens, d.temperature);
    d.entropy_maxwellian = maxwellian_entropy(d.matched, ens.species(), ens.units());
    return d;
}

RunResult run(Ensemble& ens, const KernelParams& kp, const SolverConfig& cfg)
{
    if (ens.size() < 2) throw std::domain_error("run: need at least two particles");
    if (!(cfg.t_end > 0.0)) throw std::domain_error("run: t_end must be positive");
    if (cfg.dt < 0.0) throw std::domain_error("run: dt must be positive (or 0 for automatic)");
    if (cfg.record_every < 1) throw std::domain_error("run: record_every must be >= 1");
    validate_initial_data(ens);

    Rng rng(cfg.seed);
    RunResult res;
    std::size_t steps;
    if (cfg.dt > 0.0) {
        res.dt = cfg.dt;
        steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    } else {
        Rng probe = rng.split(0xD7);
        const double dt = auto_time_step(ens, kp, cfg.collisions_per_step, probe);
        steps = std::isfinite(dt) ? static_cast<std::size_t>(std::ceil(cfg.t_end / dt - 1e-9)) : 1;
        steps = std::max<std::size_t>(steps, 1);
        res.dt = cfg.t_end / static_cast<double>(steps);
    }
    res.steps = steps;

    const auto initial = conserved_totals(ens);
    const double p_scale = std::sqrt(2.0 * initial.mass * std::abs(initial.energy));
    auto track = [&](const TimeSeriesRecord& r) {
        if (initial.energy != 0.0)
            res.energy_drift = std::max(res.energy_drift, std::abs(r.energy - initial.energy) / std::abs(initial.energy));
        if (p_scale > 0.0)
            res.momentum_drift = std::max(res.momentum_drift, norm(r.momentum - initial.momentum) / p_scale);
    };

    CollisionCounters counters;
    res.records.push_back(make_record(ens, 0.0, counters, cfg));
    for (std::size_t s = 1; s <= steps; ++s) {
        const double t_prev = (s - 1) * res.dt;
        const double dt = std::min(res.dt, cfg.t_end - t_prev);
        counters += step(ens, kp, cfg, dt > 0.0 ? dt : res.dt, rng);
        if (s % cfg.record_every == 0) {
            res.records.push_back(make_record(ens, std::min(s * res.dt, cfg.t_end), counters, cfg));
            track(res.records.back());
        }
    }
    const auto final_totals = conserved_totals(ens);
    TimeSeriesRecord last;
    last.energy = final_totals.energy;
    last.momentum = final_totals.momentum;
    track(last);
    res.equilibrium = equilibrium_diagnostics(ens, cfg.moment_orders);
    return res;
}

RelaxationFit relaxation_rates(const std::vector<TimeSeriesRecord>& records, RelaxationKind which,
                               double floor_fraction)
{
    auto signal = [which](const TimeSeriesRecord& r) {
        if (which == RelaxationKind::StressDeviator) return r.stress_anisotropy;
        const double sum = r.temperature_translational + r.temperature_internal;
        return sum > 0.0 ? (r.temperature_translational - r.temperature_internal) / sum : 0.0;
    };
    RelaxationFit fit;
    if (records.size() < 3) return fit;
    const double y0 = std::abs(signal(records.front()));
    if (y0 == 0.0) return fit;
    std::vector<double> xs, ys;
    for (const auto& r : records) {
        const double y = std::abs(signal(r));
        if (y < floor_fraction * y0 || y == 0.0) break;
        xs.push_back(r.t);
        ys.push_back(std::log(y));
    }
    fit.points = xs.size();
    if (xs.size() < 3) return fit;
    const auto lf = stats::least_squares(xs, ys);
    fit.rate = -lf.slope;
    fit.r2 = lf.r2;
    fit.reliable = lf.r2 >= 0.9;
    return fit;
}

}  // namespace polykin
