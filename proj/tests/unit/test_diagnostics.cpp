#include <doctest.h>

#include <cmath>
#include <vector>

#include "polykin/core.hpp"
#include "polykin/diagnostics.hpp"
#include "polykin/random.hpp"

using namespace polykin;
using doctest::Approx;

namespace {

Ensemble maxwellian(std::size_t N, double n, double alpha, std::uint64_t seed, double T = 1.0)
{
    return sample_maxwellian({n * 1.0, {0.3, 0.0, -0.2}, T}, Species(1.0, alpha), N, seed, Units::nondimensional());
}

Ensemble rescaled(const Ensemble& e, double c)
{
    return Ensemble(e.species(), std::vector<Particle>(e.particles().begin(), e.particles().end()),
                    c * e.number_density(), e.units());
}

}  // namespace

TEST_CASE("entropy estimate on maxwellian samples")
{
    for (double alpha : {-0.0304, 0.0, 0.5}) {
        const auto ens = maxwellian(200000, 1.0, alpha, 1);
        const double exact = maxwellian_entropy(matched_maxwellian(ens), ens.species(), ens.units());
        const double est = empirical_entropy(ens);
        INFO("alpha " << alpha << " exact " << exact << " estimate " << est);
        CHECK(std::isfinite(est));
        CHECK(std::abs(est - exact) <= 0.05 * std::abs(exact));
    }
}

TEST_CASE("entropy estimate improves with N")
{
    const auto small = maxwellian(20000, 1.0, 0.0, 2);
    const auto large = maxwellian(40000, 1.0, 0.0, 3);
    const auto exact = [](const Ensemble& e) {
        return maxwellian_entropy(matched_maxwellian(e), e.species(), e.units());
    };
    CHECK(std::abs(empirical_entropy(large) - exact(large)) < std::abs(empirical_entropy(small) - exact(small)));
}

TEST_CASE("entropy scales like f log f under f -> c f")
{
    const auto ens = maxwellian(30000, 1.0, 0.2, 4);
    const double h = empirical_entropy(ens);
    for (double c : {0.5, 2.0, 10.0}) {
        const double hc = empirical_entropy(rescaled(ens, c));
        CHECK(hc == Approx(c * h + c * std::log(c) * ens.number_density()).epsilon(1e-10));
    }
}

TEST_CASE("entropy of non-equilibrium data exceeds the matched maxwellian value")
{
    // H-theorem: the Maxwellian minimises H at fixed mass, momentum and energy.
    Rng rng(5);
    std::vector<Particle> ps;
    for (int i = 0; i < 50000; ++i)
        ps.push_back({Vec3{rng.normal() * 0.5 + (i % 2 ? 2.0 : -2.0), rng.normal() * 0.5, rng.normal() * 0.5},
                      rng.gamma(1.0)});
    const Ensemble bi(Species(1.0, 0.0), ps, 1.0, Units::nondimensional());
    CHECK(empirical_entropy(bi) > maxwellian_entropy(matched_maxwellian(bi), bi.species(), bi.units()));
    CHECK_THROWS(empirical_entropy(Ensemble(Species(1.0, 0.0), {}, 1.0, Units::nondimensional())));
}

TEST_CASE("equilibrium goodness-of-fit tests")
{
    const auto ens = maxwellian(100000, 1.0, 0.0901, 6, 1.7);
    const double T = equilibrium_temperature(ens);
    CHECK(velocity_gaussian_test(ens, T).p_value > 0.01);
    CHECK(internal_gamma_test(ens, T).p_value > 0.01);
    CHECK(translational_temperature(ens) == Approx(1.7).epsilon(0.01));
    CHECK(internal_temperature(ens) == Approx(1.7).epsilon(0.01));
    CHECK(std::abs(stress_anisotropy(ens)) < 0.05);

    // wrong temperature is rejected
    CHECK(velocity_gaussian_test(ens, 1.2 * T).p_value < 1e-6);
    CHECK(internal_gamma_test(ens, 1.2 * T).p_value < 1e-6);
}

TEST_CASE("energy identity special cases")
{
    const double m = 1.0;
    SUBCASE("R = 1 with no internal energy conserves bracket energy")
    {
        const PairState p{{1, 2, 0}, {-0.5, 0, 1}, 0.0, 0.0};
        const auto e = energy_identity_check(p, {0, 0, 1}, 0.4, 1.0, m);
        CHECK(e.ok());
        CHECK(e.bracket_energy < 1e-14);
    }
    SUBCASE("symmetric pair: V = 0 is flagged")
    {
        const PairState p{{1, 2, 0}, {-1, -2, 0}, 0.3, 0.3};
        const auto a = energy_identity_check(p, {0, 1, 0}, 0.4, 0.5, m);
        const auto b = energy_identity_check(p, {0, -1, 0}, 0.4, 0.5, m);
        CHECK(a.degenerate_V);
        CHECK(a.ok());
        CHECK(b.ok());
        CHECK(a.lambda == Approx(0.0));
        CHECK(b.lambda == Approx(0.0));
    }
    SUBCASE("lambda term is antisymmetric under sigma -> -sigma")
    {
        const PairState p{{1, 2, 0.5}, {-0.2, 0.1, 0}, 0.3, 0.7};
        const Vec3 s = Vec3{1, -1, 2} * (1.0 / std::sqrt(6.0));
        const auto a = energy_identity_check(p, s, 0.4, 0.5, m);
        const auto b = energy_identity_check(p, -1.0 * s, 0.4, 0.5, m);
        CHECK(a.ok());
        CHECK(b.ok());
        CHECK(a.lambda == Approx(b.lambda).epsilon(1e-12));
        CHECK(a.s == Approx(b.s).epsilon(1e-14));
    }
}

TEST_CASE("energy identity holds on random states")
{
    Rng rng(7);
    const auto states = sample_pair_states(20000, StateSampling{}, 1.3, rng);
    for (const auto& p : states) {
        const auto e = energy_identity_check(p, rng.unit_vector(), rng.uniform_open(), rng.uniform_open(), 1.3);
        REQUIRE(e.ok(1e-10));
    }
}

TEST_CASE("averaging operator")
{
    const KernelParams kp(0.0, 1.0, 1.0, 0.5, 0.5, 1.0);
    const double kub = kappa_ub_closed_form(kp);
    Rng rng(8);
    const PairState p{{3, 0, 1}, {-1, 2, 0}, 4.0, 0.5};
    const double Ebr = std::pow(lebesgue_bracket(p.v, p.I, 1.0), 2) + std::pow(lebesgue_bracket(p.vs, p.Is, 1.0), 2);

    const auto s0 = averaging_operator_Sk(p, 0.0, kp, 1.0, 20000, rng);
    CHECK(s0.value == Approx(2.0 * kub).epsilon(1e-12));
    CHECK(s0.stderr_ == Approx(0.0));
    // bracket energy is conserved, so S_2 = kappa_ub E<> exactly
    const auto s2 = averaging_operator_Sk(p, 2.0, kp, 1.0, 20000, rng);
    CHECK(s2.value == Approx(kub * Ebr).epsilon(1e-10));
    CHECK(s2.value <= kub * Ebr * (1.0 + 1e-10));
}

TEST_CASE("empirical C_k: k = 0, monotone decay, k* and S_k bound")
{
    const KernelParams kp(0.0, 1.0, 1.0, 0.5, 0.5, 1.0);
    Rng rng(9);
    const auto states = sample_pair_states(60, StateSampling{}, 1.0, rng);
    std::vector<double> ks;
    for (int k = 0; k <= 40; k += 2) ks.push_back(k);
    const auto rep = empirical_Ck(ks, kp, 1.0, states, 10000, 10);
    CHECK(rep.ck.front().value == Approx(2.0 * rep.kappa_ub).epsilon(1e-12));
    CHECK(rep.monotone);
    REQUIRE(rep.k_star.has_value());
    CHECK(*rep.k_star >= 10.0);
    CHECK(*rep.k_star <= 40.0);
    CHECK(rep.low_sample_warning);
    for (const auto& c : rep.ck) CHECK(c.ci_low <= c.ci_high);
    for (const auto& [k, a] : rep.A_tilde) CHECK(a > 0.0);
    CHECK(rep.D_tilde.front().second == Approx(std::pow(2.0, 0.5 * rep.D_tilde.front().first + 2.0) * rep.kappa_ub));

    // S_k <= C_k (E<>)^{k/2} on the states used
    for (std::size_t i = 0; i < 5; ++i) {
        const auto& p = states[i];
        const double Ebr =
            std::pow(lebesgue_bracket(p.v, p.I, 1.0), 2) + std::pow(lebesgue_bracket(p.vs, p.Is, 1.0), 2);
        Rng stream = Rng(10).split(i);
        const auto prof = averaging_ratio_profile(p, ks, kp, 1.0, 10000, stream);
        for (std::size_t j = 0; j < ks.size(); ++j)
            CHECK(prof[j].value * std::pow(Ebr, ks[j] / 2) <= rep.ck[j].value * std::pow(Ebr, ks[j] / 2) * (1 + 1e-12));
    }
}

TEST_CASE("pair state sampler covers the bracket range")
{
    Rng rng(11);
    const auto states = sample_pair_states(5000, StateSampling{1.0, 1e3}, 2.0, rng);
    double lo = 1e300, hi = 0.0;
    for (const auto& p : states) {
        const double b = lebesgue_bracket(p.v, p.I, 2.0);
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    CHECK(lo >= 1.0);
    CHECK(lo < 1.1);
    CHECK(hi <= 1e3 * (1 + 1e-12));
    CHECK(hi > 5e2);
    CHECK_THROWS(sample_pair_states(1, StateSampling{0.5, 2.0}, 1.0, rng));
}
