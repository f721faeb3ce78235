#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "polykin/collision.hpp"
#include "polykin/random.hpp"
#include "polykin/stats.hpp"
#include "sampler_oracle.hpp"

using namespace polykin;
using doctest::Approx;

namespace {

PairState random_state(Rng& rng, double m)
{
    const double s = std::exp(std::log(1e-2) + rng.uniform() * std::log(1e4));
    return {Vec3{rng.normal(), rng.normal(), rng.normal()} * s, Vec3{rng.normal(), rng.normal(), rng.normal()} * s,
            m * s * s * rng.gamma(1.3), m * s * s * rng.gamma(0.7)};
}

double energy(const Vec3& v, const Vec3& vs, double I, double Is, double m)
{
    return 0.5 * m * (norm2(v) + norm2(vs)) + I + Is;
}

}  // namespace

TEST_CASE("exchange collision special cases")
{
    const auto z = apply_exchange_collision({{0, 0, 0}, {0, 0, 0}, 0.0, 0.0}, {0, 0, 1}, 0.3, 0.6, 1.0);
    CHECK(norm(z.v) == 0.0);
    CHECK(norm(z.vs) == 0.0);
    CHECK(z.I == 0.0);
    CHECK(z.Is == 0.0);

    const PairState p{{1, 2, 0}, {-1, 0, 3}, 0.8, 1.9};
    const double m = 1.6;
    const double E = p.energy(m);
    const auto full = apply_exchange_collision(p, Vec3{1, 1, 1} * (1.0 / std::sqrt(3.0)), 0.3, 1.0, m);
    CHECK(full.I == 0.0);
    CHECK(full.Is == 0.0);
    CHECK(norm(full.v - full.vs) == Approx(2.0 * std::sqrt(E / m)).epsilon(1e-14));
    CHECK(E == Approx(m * norm2(p.u()) / 4.0 + p.I + p.Is).epsilon(1e-15));
}

TEST_CASE("exchange collisions conserve momentum and energy")
{
    Rng rng(1);
    const double m = 2.3;
    for (int i = 0; i < 200000; ++i) {
        const PairState p = random_state(rng, m);
        const double r = rng.uniform(), R = rng.uniform();
        const auto o = apply_exchange_collision(p, rng.unit_vector(), r, R, m);
        const double e0 = energy(p.v, p.vs, p.I, p.Is, m);
        REQUIRE(std::abs(energy(o.v, o.vs, o.I, o.Is, m) - e0) <= 1e-12 * e0);
        REQUIRE(norm(o.v + o.vs - p.v - p.vs) <= 1e-12 * (norm(p.v) + norm(p.vs)));
        REQUIRE(o.I >= 0.0);
        REQUIRE(o.Is >= 0.0);
        REQUIRE(std::abs(o.I + o.Is - (1.0 - R) * p.energy(m)) <= 1e-15 * p.energy(m));
    }
}

TEST_CASE("frozen collision")
{
    const PairState p{{1, 2, 0}, {-1, 0, 3}, 0.8, 1.9};
    const Vec3 uhat = relative_direction(p);
    const auto same = apply_frozen_collision(p, uhat, 1.0);
    CHECK(norm(same.v - p.v) < 1e-14);
    CHECK(norm(same.vs - p.vs) < 1e-14);
    const auto swapped = apply_frozen_collision(p, -uhat, 1.0);
    CHECK(norm(swapped.v - p.vs) < 1e-14);
    CHECK(norm(swapped.vs - p.v) < 1e-14);
    CHECK(relative_direction({{1, 1, 1}, {1, 1, 1}, 0, 0}).z == 1.0);
    CHECK_THROWS(apply_frozen_collision(p, {1, 1, 0}, 1.0));

    Rng rng(2);
    for (int i = 0; i < 100000; ++i) {
        const PairState q = random_state(rng, 1.0);
        const auto o = apply_frozen_collision(q, rng.unit_vector(), 1.0);
        REQUIRE(o.I == q.I);
        REQUIRE(o.Is == q.Is);
        REQUIRE(std::abs(norm(o.v - o.vs) - norm(q.u())) <= 1e-12 * norm(q.u()));
        REQUIRE(norm(o.v + o.vs - q.v - q.vs) <= 1e-12 * (norm(q.v) + norm(q.vs)));
    }
}

TEST_CASE("micro-reversibility: the mapped parameters undo a collision")
{
    Rng rng(3);
    const double m = 0.7;
    for (int i = 0; i < 20000; ++i) {
        const PairState p = random_state(rng, m);
        const double E = p.energy(m);
        const auto o = apply_exchange_collision(p, rng.unit_vector(), rng.uniform_open(), rng.uniform_open(), m);
        const PairState post{o.v, o.vs, o.I, o.Is};
        const double r_back = p.I / (p.I + p.Is);
        const double R_back = m * norm2(p.u()) / (4.0 * E);
        const auto back = apply_exchange_collision(post, relative_direction(p), r_back, R_back, m);
        const double vs = std::sqrt(E / m);
        REQUIRE(norm(back.v - p.v) <= 1e-10 * vs);
        REQUIRE(norm(back.vs - p.vs) <= 1e-10 * vs);
        REQUIRE(std::abs(back.I - p.I) <= 1e-10 * E);
        REQUIRE(std::abs(back.Is - p.Is) <= 1e-10 * E);
    }
}

TEST_CASE("eta = 0 sampler draws product Beta laws")
{
    const double alpha = 0.3, zeta = 0.8;
    const KernelParams kp(alpha, zeta, 1.0, 0.0, 0.0, 1.0);
    const PairState p{{1, 0, 0}, {0, 1, 0}, 0.5, 0.2};
    Rng rng(4);
    std::vector<double> rs, Rs;
    for (int i = 0; i < 100000; ++i) {
        const auto ex = sample_exchange_parameters(p, kp, 1.0, rng);
        REQUIRE(ex.term == 0);
        REQUIRE(dot(ex.sigma, relative_direction(p)) >= 0.0);
        rs.push_back(ex.r);
        Rs.push_back(ex.R);
    }
    using boost::math::ibeta;
    CHECK(stats::ks_test(rs, [&](double x) { return ibeta(alpha + 1, alpha + 1, x); }).p_value > 0.01);
    CHECK(stats::ks_test(Rs, [&](double x) { return ibeta((zeta + 3) / 2, 2 * alpha + 2, x); }).p_value > 0.01);
}

TEST_CASE("small-zeta alpha = 0 limit: R ~ Beta(3/2, 2), r uniform")
{
    std::array<double, 3> w{1.0, 0.0, 0.0};
    Rng rng(15);
    std::vector<double> rs, Rs;
    for (int i = 0; i < 50000; ++i) {
        const auto s = sample_energy_split(w, 0.0, 1e-9, rng);
        rs.push_back(s.r);
        Rs.push_back(s.R);
    }
    CHECK(stats::ks_test(rs, [](double x) { return x; }).p_value > 0.01);
    CHECK(stats::ks_test(Rs, [](double x) { return boost::math::ibeta(1.5, 2.0, x); }).p_value > 0.01);
}

TEST_CASE("r and 1 - r are equally distributed when I = I_*")
{
    const KernelParams kp(0.1, 0.6, 1.0, 0.8, 0.0, 1.0);
    const PairState p{{0.3, 0, 0}, {0, -0.2, 0}, 1.5, 1.5};
    Rng rng(6);
    std::vector<double> a, b;
    for (int i = 0; i < 40000; ++i) {
        a.push_back(sample_exchange_parameters(p, kp, 1.0, rng).r);
        b.push_back(1.0 - sample_exchange_parameters(p, kp, 1.0, rng).r);
    }
    CHECK(stats::ks_two_sample(a, b).p_value > 0.01);
}

TEST_CASE("sampled (r, R) match the kernel-weighted target")
{
    Rng rng(7);
    for (double alpha : {-0.0304, 0.0, 0.0901})
        for (double zeta : {0.424, 1.0}) {
            const KernelParams kp(alpha, zeta, 1.0, 0.5, 0.0, 1.0);
            const PairState p{{0.4, -0.1, 0.2}, {-0.3, 0.5, 0.0}, 0.9, 0.15};
            const int n = 8;
            const auto prob = testing::energy_split_cell_probabilities(p, kp, 1.0, n);
            std::vector<double> rs, Rs;
            for (int i = 0; i < 50000; ++i) {
                const auto ex = sample_exchange_parameters(p, kp, 1.0, rng);
                rs.push_back(ex.r);
                Rs.push_back(ex.R);
            }
            const auto chi = testing::energy_split_chi_square(rs, Rs, prob, n);
            INFO("alpha=" << alpha << " zeta=" << zeta << " chi2=" << chi.statistic);
            CHECK(chi.p_value > 0.01);
        }
}

TEST_CASE("collide dispatch by omega")
{
    const PairState p{{1, 0, 0}, {0, 1, 0}, 0.5, 0.2};
    Rng rng(8);
    const KernelParams only_ex(0.0, 1.0, 1.0, 0.5, 0.5, 1.0);
    const KernelParams only_fr(0.0, 1.0, 1.0, 0.5, 0.5, 0.0);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE_FALSE(collide(p, only_ex, 1.0, rng)->frozen);
        const auto f = collide(p, only_fr, 1.0, rng);
        REQUIRE(f->frozen);
        REQUIRE(f->I == p.I);
        REQUIRE(f->Is == p.Is);
    }
    const KernelParams half(0.0, 1.0, 1.0, 0.5, 0.5, 0.5);
    const int n = 100000;
    int frozen = 0;
    for (int i = 0; i < n; ++i) frozen += collide(p, half, 1.0, 1.0, 1.0, rng)->frozen ? 1 : 0;
    CHECK(std::abs(frozen - n / 2) < 4.0 * std::sqrt(n * 0.25));

    const KernelParams off(0.0, 1.0, 0.0, 0.5, 0.5, 0.5);
    CHECK_FALSE(collide(p, off, 1.0, rng).has_value());
}
