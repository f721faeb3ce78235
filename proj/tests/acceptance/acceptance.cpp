// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../common/sampler_oracle.hpp"
#include "polykin/collision.hpp"
#include "polykin/config.hpp"
#include "polykin/diagnostics.hpp"
#include "polykin/dsmc.hpp"
#include "polykin/io.hpp"
#include "polykin/kernel.hpp"
#include "polykin/random.hpp"
#include "polykin/stats.hpp"
#include "polykin/transport.hpp"
#include "polykin/verify.hpp"

using namespace polykin;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body)
{
    const auto t0 = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    bool pass = out.pass;
    if (secs > budget_s) {
        pass = false;
        out.detail += " [over time budget " + std::to_string(budget_s) + " s]";
    }
    if (!pass) ++failures;
    std::printf("%s %d %s (%.2f s): %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), secs, out.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

// -- 1 ----------------------------------------------------------------------
Outcome tables()
{
    const auto rep = transport::reproduce_tables();
    std::size_t deltas = 0, pbars = 0;
    std::string failing;
    for (const auto& c : rep.cells) {
        (c.quantity == "delta" ? deltas : pbars) += 1;
        if (!c.pass) {
            failing += " " + c.gas + "/" + c.pressure + "/" + c.scenario + "/" + c.quantity + " computed " +
                       io::format_number(c.computed) + " vs " + io::format_number(c.expected) + ";";
        }
    }
    const bool complete = deltas == 10 && pbars == 18;
    std::string detail = std::to_string(rep.n_pass) + "/" + std::to_string(rep.cells.size()) + " cells within " +
                         io::format_number(rep.tolerance);
    if (!complete) detail += " (expected 10 delta + 18 p_bar cells)";
    if (!failing.empty()) detail += "; outside tolerance:" + failing;
    return {complete && rep.all_pass(), detail};
}

// -- 2 ----------------------------------------------------------------------
Outcome rho_q_oracle()
{
    struct Point {
        double alpha, zeta, q;
    };
    std::vector<Point> grid{{0.0, 1.0, 2.0}};
    const double alphas[] = {-0.0304, 0.0, 0.0901, 0.3, 0.75, 1.5};
    const double zetas[] = {0.254, 0.5329, 1.0, 1.6, 2.0};
    const double qs[] = {1.5, 2.0, 3.0, 6.0};
    for (double a : alphas)
        for (double z : zetas)
            for (double q : qs) {
                if (grid.size() >= 50) break;
                // finite region, kept a little away from the divergence boundary
                if (a + 1.0 - (1.0 + z / 2.0) / q < 0.05 || 2.0 * a + 2.0 - 1.0 / q < 0.05) continue;
                grid.push_back({a, z, q});
            }
    double worst = 0.0;
    for (const auto& p : grid) {
        const double closed = rho_q(p.alpha, p.zeta, p.q);
        const double quad = rho_q_by_quadrature(p.alpha, p.zeta, p.q, 1e-11);
        worst = std::max(worst, std::abs(closed - quad) / std::abs(closed));
    }
    const double half_pi = rho_q(0.0, 1.0, 2.0);
    const bool ok = grid.size() == 50 && worst <= 1e-8 && std::abs(half_pi - std::numbers::pi / 2) <= 1e-14;
    return {ok, std::to_string(grid.size()) + " points, worst relative difference " + fmt("%.3g", worst) +
                    ", rho_2(0,1) - pi/2 = " + fmt("%.3g", half_pi - std::numbers::pi / 2)};
}

// -- 3 / 4 --------------------------------------------------------------------
Outcome suite(const std::string& name)
{
    verify::SuiteOptions opt;
    opt.samples = 1000000;
    const auto res = verify::run_suite(name, opt);
    std::string detail;
    const auto& r = res.report;
    if (name == "collision") {
        detail = "max momentum error " + r.value("max_momentum_error", nlohmann::json(-1)).dump() +
                 ", max energy error " + r.value("max_energy_error", nlohmann::json(-1)).dump() +
                 ", frozen |u| max rel error " + r.value("max_frozen_speed_error", nlohmann::json(-1)).dump() +
                 ", frozen I changed " + r.value("frozen_internal_energy_changed", nlohmann::json(-1)).dump();
    } else {
        detail = r.dump();
        if (detail.size() > 300) detail = detail.substr(0, 300) + "...";
    }
    return {res.passed, detail};
}

Outcome povzner()
{
    verify::SuiteOptions opt;
    opt.samples = 1000000;
    const auto ident = verify::run_suite("energy-identity", opt);
    const auto avg = verify::run_suite("averaging", opt);
    const auto& a = avg.report;
    std::string detail = std::string("energy identity ") + (ident.passed ? "ok" : "violated") +
                         " on 1e6 states; C_k monotone " + a.value("monotone", nlohmann::json(false)).dump() +
                         ", k* " + a.value("k_star", nlohmann::json(nullptr)).dump() + ", kappa_lb " +
                         a.value("kappa_lb", nlohmann::json(nullptr)).dump();
    return {ident.passed && avg.passed, detail};
}

// -- 5 ----------------------------------------------------------------------
Outcome equilibration()
{
    config::RunConfig rc;
    rc.initial.N = 100000;
    rc.initial.seed = 17;
    rc.initial.variant = config::BimodalIC{};
    auto ens = config::build_ensemble(rc);
    SolverConfig cfg;
    cfg.t_end = 2.0;
    cfg.record_every = 1;
    cfg.seed = 23;
    cfg.moment_orders = {3.0, 4.0, 6.0};
    const auto res = run(ens, KernelParams(0.0, 1.0, 1.0, 0.5, 0.5, 1.0), cfg);

    std::vector<double> h;
    for (const auto& r : res.records) h.push_back(r.entropy);
    const auto mk = stats::mann_kendall(h);
    const auto& eq = res.equilibrium;
    double worst = 0.0;
    for (double m : eq.moment_relative_mismatch) worst = std::max(worst, std::abs(m));
    const bool ok = mk.p_decreasing < 0.01 && eq.velocity_test.p_value > 0.01 && eq.internal_test.p_value > 0.01 &&
                    worst <= 0.02;
    return {ok, fmt("entropy trend p_decreasing %.3g; velocity chi2 p %.3f; internal chi2 p %.3f; ", mk.p_decreasing,
                    eq.velocity_test.p_value, eq.internal_test.p_value) +
                    fmt("worst L1_k mismatch (k=3,4,6) %.3g%%; T %.6g", 100.0 * worst, eq.temperature)};
}

// -- 6 ----------------------------------------------------------------------
Outcome frozen_limit()
{
    config::RunConfig rc;
    rc.initial.N = 20000;
    rc.initial.seed = 29;
    rc.alpha = 0.2;
    rc.initial.variant = config::BimodalIC{};
    auto ens = config::build_ensemble(rc);
    std::vector<double> I0;
    double k0 = 0.0;
    for (const auto& p : ens.particles()) {
        I0.push_back(p.I);
        k0 += 0.5 * norm2(p.v);
    }
    SolverConfig cfg;
    cfg.t_end = 3.0;
    cfg.record_every = 50;
    cfg.track_entropy = false;
    run(ens, KernelParams(0.2, 1.0, 1.0, 0.5, 0.5, 0.0), cfg);

    std::vector<double> I1;
    double k1 = 0.0;
    for (const auto& p : ens.particles()) {
        I1.push_back(p.I);
        k1 += 0.5 * norm2(p.v);
    }
    std::sort(I0.begin(), I0.end());
    std::sort(I1.begin(), I1.end());
    const bool same_I = I0 == I1;
    const double dk = std::abs(k1 - k0) / k0;
    const auto g = velocity_gaussian_test(ens, translational_temperature(ens));
    const bool ok = same_I && dk <= 1e-10 && g.p_value > 0.01;
    return {ok, std::string("internal-energy multiset ") + (same_I ? "unchanged" : "CHANGED") +
                    fmt("; kinetic energy drift %.3g; velocity chi2 p %.3f", dk, g.p_value)};
}

// -- 7 ----------------------------------------------------------------------
Outcome sampler()
{
    struct Regime {
        double alpha, zeta, eta;
    };
    const Regime regimes[] = {{-0.03, 0.6076, 0.5}, {0.0, 1.0, 0.5}, {0.0035, 0.5329, 1.0}, {0.5, 1.6, 0.25}};
    const PairState p{{0.4, -0.1, 0.2}, {-0.3, 0.5, 0.0}, 0.9, 0.15};
    Rng rng(2024);
    bool ok = true;
    std::string detail;
    for (const auto& g : regimes) {
        const KernelParams kp(g.alpha, g.zeta, 1.0, g.eta, 0.0, 1.0);
        const int n = 10;
        const auto prob = testing::energy_split_cell_probabilities(p, kp, 1.0, n);
        std::vector<double> rs, Rs;
        for (int i = 0; i < 100000; ++i) {
            const auto ex = sample_exchange_parameters(p, kp, 1.0, rng);
            rs.push_back(ex.r);
            Rs.push_back(ex.R);
        }
        const auto chi = testing::energy_split_chi_square(rs, Rs, prob, n);
        // the r-marginal on its own, from the same oracle cells
        std::vector<double> cdf_r(n + 1, 0.0);
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += prob[static_cast<std::size_t>(i) * n + j];
            cdf_r[i + 1] = cdf_r[i] + row;
        }
        std::vector<double> r_counts(n, 0.0), r_expect(n);
        for (double r : rs) r_counts[std::min(n - 1, int(r * n))] += 1.0;
        for (int i = 0; i < n; ++i) r_expect[i] = (cdf_r[i + 1] - cdf_r[i]) * rs.size();
        const auto marg = stats::chi_square_counts(r_counts, r_expect);
        ok = ok && chi.p_value > 0.01 && marg.p_value > 0.01;
        detail += fmt("alpha=%g zeta=%g: joint p %.3f, r-marginal p %.3f; ", g.alpha, g.zeta, chi.p_value,
                      marg.p_value);
    }
    return {ok, detail};
}

// -- 8 ----------------------------------------------------------------------
Outcome power_law()
{
    bool ok = true;
    std::string detail;
    for (double zeta : {0.254, 0.5329, 0.6076}) {
        transport::TransportDataset d;
        for (double T = 150.0; T <= 900.0; T += 25.0) {
            d.T.push_back(T);
            d.value.push_back(std::pow(T / 300.0, 1.0 - zeta / 2.0));
        }
        const auto fit = transport::fit_power_law(d);
        const double err = std::abs(fit.zeta - zeta);
        ok = ok && err <= 1e-6;
        detail += fmt("zeta %g -> %.10g (err %.2g); ", zeta, fit.zeta, err);
    }
    return {ok, detail};
}

// -- 9 ----------------------------------------------------------------------
Outcome determinism()
{
    auto once = [](const std::string& file) {
        config::RunConfig rc;
        rc.initial.N = 5000;
        rc.initial.seed = 31;
        rc.initial.variant = config::BimodalIC{};
        rc.kernel.omega = 0.6;
        rc.solver.t_end = 1.0;
        rc.solver.seed = 37;
        rc.solver.record_every = 3;
        auto ens = config::build_ensemble(rc);
        const auto res = run(ens, rc.kernel_params(), rc.solver);
        io::write_timeseries_csv(file, res.records, rc.solver.moment_orders);
        std::ifstream in(file, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    const auto a = once("acceptance_determinism_a.csv");
    const auto b = once("acceptance_determinism_b.csv");
    std::remove("acceptance_determinism_a.csv");
    std::remove("acceptance_determinism_b.csv");
    return {!a.empty() && a == b, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "DIFFERENT")};
}

}  // namespace

int main()
{
    criterion(1, "tables reproduction", 1.0, tables);
    criterion(2, "rho_q closed form vs quadrature", 10.0, rho_q_oracle);
    criterion(3, "collision conservation", 5.0, [] { return suite("collision"); });
    criterion(4, "energy identity and Povzner constants", 120.0, povzner);
    criterion(5, "entropy decay and equilibration", 300.0, equilibration);
    criterion(6, "frozen-limit invariance", 120.0, frozen_limit);
    criterion(7, "energy-split sampler", 30.0, sampler);
    criterion(8, "power-law fit exactness", 1.0, power_law);
    criterion(9, "determinism", 60.0, determinism);
    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
