#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "polykin/kernel.hpp"
#include "polykin/transport.hpp"

using namespace polykin;
using namespace polykin::transport;
using doctest::Approx;

namespace {

std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / "polykin_test_transport";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

TransportDataset synthetic(double zeta, double scale, double T0 = 300.0)
{
    TransportDataset d;
    for (double T = 100.0; T <= 1000.0; T += 50.0) {
        d.T.push_back(T);
        d.value.push_back(scale * std::pow(T / T0, 1.0 - zeta / 2.0));
    }
    return d;
}

}  // namespace

TEST_CASE("alpha and delta from the heat capacity")
{
    CHECK(alpha_from_cv(2.5035).alpha == Approx(0.0035).epsilon(1e-12));
    CHECK(alpha_from_cv(2.5035).delta == Approx(2.0070).epsilon(1e-12));
    CHECK(alpha_from_cv(2.4696).alpha == Approx(-0.0304).epsilon(1e-12));
    CHECK(alpha_from_cv(2.4696).delta == Approx(1.9392).epsilon(1e-12));
    for (double cv : {1.6, 2.0, 2.5, 3.3, 7.0}) CHECK(cv_from_alpha(alpha_from_cv(cv).alpha) == Approx(cv));
    CHECK_THROWS_AS(alpha_from_cv(1.5), std::domain_error);
    CHECK_THROWS_AS(alpha_from_cv(1.0), std::domain_error);
}

TEST_CASE("power-law fit recovers zeta from noiseless data")
{
    for (double zeta : {0.254, 0.408, 0.5329, 0.6076, 1.0, 1.7}) {
        const auto fit = fit_power_law(synthetic(zeta, 17.8));
        CHECK(std::abs(fit.zeta - zeta) < 1e-6);
        CHECK(fit.K_scale == Approx(1.0).epsilon(1e-9));
        CHECK(fit.r2 == Approx(1.0).epsilon(1e-12));
        CHECK(fit.in_range);
    }
    // explicit reference: K_scale is the fitted value at T0 over it
    const auto fit = fit_power_law(synthetic(0.5, 10.0), 300.0, 20.0);
    CHECK(fit.K_scale == Approx(0.5).epsilon(1e-9));
}

TEST_CASE("power-law fit edge cases")
{
    TransportDataset flat;
    flat.T = {200, 300, 400, 500};
    flat.value = {3, 3, 3, 3};
    const auto f = fit_power_law(flat);
    CHECK(f.zeta == Approx(2.0).epsilon(1e-12));

    // slope > 1 would give zeta < 0: clamped and flagged
    auto steep = synthetic(-0.5, 1.0);
    const auto s = fit_power_law(steep);
    CHECK_FALSE(s.in_range);
    CHECK(s.zeta > 0.0);
    CHECK(s.zeta_raw == Approx(-0.5).epsilon(1e-9));

    TransportDataset two;
    two.T = {300, 400};
    two.value = {1, 2};
    CHECK_THROWS(fit_power_law(two));

    TransportDataset bad;
    bad.T = {300, 300, 300};
    bad.value = {1, 2, 3};
    CHECK_THROWS_AS(fit_power_law(bad), std::invalid_argument);
}

TEST_CASE("power-law fit is unbiased under multiplicative noise")
{
    std::mt19937_64 gen(11);
    std::normal_distribution<double> noise(0.0, 0.01);
    double mean = 0.0;
    const int reps = 200;
    for (int i = 0; i < reps; ++i) {
        auto d = synthetic(0.6076, 5.0);
        for (auto& v : d.value) v *= std::exp(noise(gen));
        mean += fit_power_law(d).zeta / reps;
    }
    CHECK(mean == Approx(0.6076).epsilon(2e-3));
}

TEST_CASE("transport CSV reading")
{
    const auto good = scratch("n2_mu.csv");
    write(good, "T,value\n200,12.9\n300,17.9\n\n400,22.2\n");
    write(scratch("n2_mu.json"), R"({"T":"K","value":"uPa.s","pressure":"1 bar"})");
    const auto d = read_transport_csv(good, TransportKind::Viscosity);
    CHECK(d.T.size() == 3);
    CHECK(d.value[1] == 17.9);
    CHECK(d.value_unit == "uPa.s");
    CHECK(d.pressure == "1 bar");

    auto line_of = [](const std::filesystem::path& p) -> std::size_t {
        try {
            read_transport_csv(p, TransportKind::Viscosity);
        } catch (const CsvError& e) {
            return e.line();
        }
        return 0;
    };
    const auto bad_value = scratch("bad_value.csv");
    write(bad_value, "T,value\n200,1.0\n300,abc\n");
    CHECK(line_of(bad_value) == 3);

    const auto bad_header = scratch("bad_header.csv");
    write(bad_header, "temperature;value\n200,1.0\n");
    CHECK(line_of(bad_header) == 1);

    const auto negative = scratch("negative.csv");
    write(negative, "T,value\n200,1.0\n300,-2.0\n400,3\n");
    CHECK(line_of(negative) == 3);

    const auto unsorted = scratch("unsorted.csv");
    write(unsorted, "T,value\n300,1.0\n200,2.0\n400,3\n");
    CHECK(line_of(unsorted) == 3);

    const auto columns = scratch("columns.csv");
    write(columns, "T,value\n300,1.0,7\n");
    CHECK(line_of(columns) == 2);

    CHECK_THROWS(read_transport_csv(scratch("does_not_exist.csv"), TransportKind::Viscosity));
    CHECK(transport_kind_from_string("conductivity") == TransportKind::Conductivity);
    CHECK_THROWS(transport_kind_from_string("diffusivity"));
}

TEST_CASE("Prandtl number")
{
    // (alpha + 7/2) (k_B/m) mu / kappa = 1 by construction
    GasSpec unit{"x", 1.0, 2.5, 2.0, 7.0, 300.0};
    const auto r = prandtl_from_measurements(unit, UnitConvention::Nondimensional);
    CHECK(r.Pr == Approx(1.0).epsilon(1e-14));
    CHECK(r.alpha == Approx(0.0));

    GasSpec twice = unit;
    twice.mu0 = 4.0;
    CHECK(prandtl_from_measurements(twice, UnitConvention::Nondimensional).Pr == Approx(2.0));

    // nitrogen-like laboratory values
    GasSpec n2{"N2", 4.6518e-26, 2.5035, 17.89, 25.98, 300.0};
    const auto lab = prandtl_from_measurements(n2);
    CHECK(lab.Pr == Approx(0.7).epsilon(0.05));
    CHECK(lab.warnings.empty());

    // SI values passed as lab units trigger plausibility warnings
    GasSpec si = n2;
    si.mu0 = 17.89e-6;
    si.kappa0 = 25.98e-3;
    CHECK_FALSE(prandtl_from_measurements(si).warnings.empty());

    GasSpec bad = n2;
    bad.m = 0.0;
    CHECK_THROWS(prandtl_from_measurements(bad));
}

TEST_CASE("admissible p range")
{
    const auto n2 = feasible_p_range(0.0035, 0.5329);
    CHECK(n2.p_bar == Approx(4.8166).epsilon(2e-4));
    CHECK(n2.rho_q_consistent);
    REQUIRE_FALSE(n2.binding.empty());
    CHECK(n2.binding.front() == "(i)");

    // (i) only applies for alpha < zeta/2
    const auto none = feasible_p_range(0.4, 0.5);
    CHECK(std::isinf(none.p_bar));

    // p_bar from (i) is where rho_q at the conjugate exponent stops being finite
    for (double alpha : {-0.0304, 0.0, 0.0348, 0.09}) {
        for (double zeta : {0.254, 0.5329, 1.0}) {
            const auto fr = feasible_p_range(alpha, zeta);
            if (!std::isfinite(fr.p_bar)) continue;
            CHECK(fr.rho_q_consistent);
            const double below = fr.p_bar * 0.99;
            const double above = fr.p_bar * 1.01;
            CHECK(std::isfinite(rho_q(alpha, zeta, below / (below - 1.0))));
            CHECK(std::isinf(rho_q(alpha, zeta, above / (above - 1.0))));
        }
    }
}

TEST_CASE("table reproduction")
{
    const auto rep = reproduce_tables();
    CHECK(rep.cells.size() == 28);
    CHECK(rep.n_pass + rep.n_fail == rep.cells.size());
    for (const auto& c : rep.cells) {
        INFO(c.gas << " " << c.pressure << " " << c.scenario << " " << c.quantity << " computed " << c.computed
                   << " expected " << c.expected);
        CHECK(c.abs_error == Approx(std::abs(c.computed - c.expected)));
        CHECK(c.pass == (c.abs_error <= rep.tolerance));
        if (c.gas != "NO") CHECK(c.pass);
        if (!c.pass) CHECK(c.rounding_consistent);
    }
    const auto find = [&](const std::string& gas, const std::string& quantity, const std::string& scenario) {
        for (const auto& c : rep.cells)
            if (c.gas == gas && c.quantity == quantity && c.scenario == scenario && c.pressure == "low") return c;
        throw std::runtime_error("missing cell");
    };
    CHECK(find("H2", "delta", "-").computed == Approx(1.9392).epsilon(1e-9));
    CHECK(find("O2", "delta", "-").computed == Approx(2.0696).epsilon(1e-9));
    CHECK(find("N2", "p_bar", "i").pass);
    CHECK_FALSE(rep.reference.empty());
    CHECK_THROWS(reproduce_tables(scratch("missing_table.json")));
}
