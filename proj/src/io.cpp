#include "polykin/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace polykin::io {

using nlohmann::json;

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::vector<std::string> csv_header(const std::vector<double>& moment_orders)
{
    std::vector<std::string> h{"t", "mass", "px", "py", "pz", "energy"};
    for (double k : moment_orders) h.push_back("m1_k" + format_number(k));
    for (const char* c : {"entropy", "n_collisions_exchange", "n_collisions_frozen", "n_attempted", "n_accepted",
                          "temp_trans", "temp_int", "stress_aniso"})
        h.emplace_back(c);
    return h;
}

void write_timeseries_csv(std::ostream& out, const std::vector<TimeSeriesRecord>& records,
                          const std::vector<double>& moment_orders)
{
    const auto header = csv_header(moment_orders);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& r : records) {
        if (r.moments.size() != moment_orders.size())
            throw std::invalid_argument("write_timeseries_csv: record has wrong number of moments");
        out << format_number(r.t) << ',' << format_number(r.mass) << ',' << format_number(r.momentum.x) << ','
            << format_number(r.momentum.y) << ',' << format_number(r.momentum.z) << ',' << format_number(r.energy);
        for (double mk : r.moments) out << ',' << format_number(mk);
        out << ',' << format_number(r.entropy) << ',' << r.counters.exchange << ',' << r.counters.frozen << ','
            << r.counters.attempted << ',' << r.counters.accepted << ',' << format_number(r.temperature_translational)
            << ',' << format_number(r.temperature_internal) << ',' << format_number(r.stress_anisotropy) << '\n';
    }
}

void write_timeseries_csv(const std::filesystem::path& path, const std::vector<TimeSeriesRecord>& records,
                          const std::vector<double>& moment_orders)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_timeseries_csv(out, records, moment_orders);
}

namespace {

json test_json(const stats::TestResult& t)
{
    return {{"statistic", t.statistic}, {"p_value", t.p_value}, {"dof", t.dof}};
}

}  // namespace

json summary_json(const RunResult& result, const config::RunConfig& cfg)
{
    const auto& eq = result.equilibrium;
    json moments = json::array();
    for (std::size_t i = 0; i < eq.moment_orders.size(); ++i) {
        const double emp = result.records.empty() ? 0.0 : result.records.back().moments.at(i);
        moments.push_back({{"k", eq.moment_orders[i]},
                           {"empirical_final", emp},
                           {"maxwellian", eq.maxwellian_moments[i]},
                           {"relative_mismatch", eq.moment_relative_mismatch[i]}});
    }
    json out;
    out["units"] = cfg.units_name;
    out["species"] = {{"m", cfg.m}, {"alpha", cfg.alpha}};
    out["kernel"] = {{"zeta", cfg.kernel.zeta}, {"K", cfg.kernel.K},         {"eta", cfg.kernel.eta},
                     {"eta_f", cfg.kernel.eta_f}, {"omega", cfg.kernel.omega}, {"angular", cfg.kernel.angular}};
    out["solver"] = {{"dt", result.dt},       {"steps", result.steps},          {"t_end", cfg.solver.t_end},
                     {"seed", cfg.solver.seed}, {"threads", cfg.solver.threads}, {"N", cfg.initial.N}};
    out["conservation"] = {{"momentum_drift", result.momentum_drift}, {"energy_drift", result.energy_drift}};
    if (!result.records.empty()) {
        const auto& c = result.records.back().counters;
        out["collisions"] = {{"attempted", c.attempted}, {"accepted", c.accepted}, {"exchange", c.exchange},
                             {"frozen", c.frozen}};
    }
    out["equilibrium"] = {{"temperature", eq.temperature},
                          {"velocity_gaussian_test", test_json(eq.velocity_test)},
                          {"internal_gamma_test", test_json(eq.internal_test)},
                          {"entropy_maxwellian", eq.entropy_maxwellian},
                          {"entropy_final", result.records.empty() ? 0.0 : result.records.back().entropy},
                          {"moments", moments}};
    return out;
}

void write_json(const std::filesystem::path& path, const json& j)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace polykin::io
