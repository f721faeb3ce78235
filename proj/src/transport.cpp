#include "polykin/transport.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polykin/kernel.hpp"
#include "polykin/stats.hpp"
#include "polykin/units.hpp"

namespace polykin::transport {

using nlohmann::json;

AlphaDelta alpha_from_cv(double c_v_hat)
{
    if (!(c_v_hat > 1.5) || !std::isfinite(c_v_hat))
        throw std::domain_error("alpha_from_cv: c_v_hat must exceed 3/2");
    const double alpha = c_v_hat - 2.5;
    return {alpha, 2.0 * (alpha + 1.0)};
}

double cv_from_alpha(double alpha)
{
    if (!(alpha > -1.0)) throw std::domain_error("cv_from_alpha: alpha must exceed -1");
    return alpha + 2.5;
}

std::string to_string(TransportKind kind)
{
    return kind == TransportKind::Viscosity ? "viscosity" : "conductivity";
}

TransportKind transport_kind_from_string(const std::string& s)
{
    if (s == "viscosity") return TransportKind::Viscosity;
    if (s == "conductivity") return TransportKind::Conductivity;
    throw std::invalid_argument("unknown transport kind '" + s + "' (expected viscosity|conductivity)");
}

void TransportDataset::validate() const
{
    if (T.size() != value.size()) throw std::invalid_argument("transport dataset: T and value differ in length");
    for (std::size_t i = 0; i < T.size(); ++i) {
        if (!(T[i] > 0.0) || !std::isfinite(T[i]))
            throw std::invalid_argument("transport dataset: temperature must be positive (row " + std::to_string(i + 1) + ")");
        if (!(value[i] > 0.0) || !std::isfinite(value[i]))
            throw std::invalid_argument("transport dataset: value must be positive (row " + std::to_string(i + 1) + ")");
        if (i > 0 && !(T[i] > T[i - 1]))
            throw std::invalid_argument("transport dataset: T must be strictly increasing (row " + std::to_string(i + 1) + ")");
    }
}

namespace {

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r\"");
    const auto e = s.find_last_not_of(" \t\r\"");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line, const char* what)
{
    const std::string t = trim(field);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw CsvError(std::string("cannot parse ") + what + " '" + t + "'", line);
    return v;
}

}  // namespace

TransportDataset read_transport_csv(const std::filesystem::path& path, TransportKind kind)
{
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open " + path.string(), 0);
    TransportDataset ds;
    ds.kind = kind;
    ds.value_unit = kind == TransportKind::Viscosity ? "uPa.s" : "mW/m.K";

    for (const auto& side : {std::filesystem::path(path.string() + ".json"),
                             std::filesystem::path(path).replace_extension(".json")}) {
        if (!std::filesystem::exists(side)) continue;
        std::ifstream js(side);
        json meta;
        try {
            meta = json::parse(js);
        } catch (const json::exception& e) {
            throw CsvError("malformed units sidecar " + side.string() + ": " + e.what(), 0);
        }
        if (meta.contains("T") && meta["T"] != "K")
            throw CsvError("units sidecar: temperature must be in K, got " + meta["T"].dump(), 0);
        if (meta.contains("value")) ds.value_unit = meta["value"].get<std::string>();
        if (meta.contains("pressure")) ds.pressure = meta["pressure"].get<std::string>();
        break;
    }

    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        if (!header) {
            if (fields.size() != 2 || trim(fields[0]) != "T" || trim(fields[1]) != "value")
                throw CsvError("expected header 'T,value'", lineno);
            header = true;
            continue;
        }
        if (fields.size() != 2) throw CsvError("expected 2 fields, got " + std::to_string(fields.size()), lineno);
        const double T = parse_number(fields[0], lineno, "T");
        const double v = parse_number(fields[1], lineno, "value");
        if (!(T > 0.0)) throw CsvError("temperature must be positive", lineno);
        if (!(v > 0.0)) throw CsvError("value must be positive", lineno);
        if (!ds.T.empty() && !(T > ds.T.back())) throw CsvError("T must be strictly increasing", lineno);
        ds.T.push_back(T);
        ds.value.push_back(v);
    }
    if (!header) throw CsvError("missing header row 'T,value'", lineno ? 1 : 0);
    return ds;
}

PowerLawFit fit_power_law(const TransportDataset& data, double T0, std::optional<double> reference)
{
    data.validate();
    if (data.T.size() < 3) throw std::invalid_argument("fit_power_law: need at least 3 data points");
    if (!(T0 > 0.0)) throw std::invalid_argument("fit_power_law: T0 must be positive");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < data.T.size(); ++i) {
        x.push_back(std::log(data.T[i] / T0));
        y.push_back(std::log(data.value[i]));
    }
    if (x.front() == x.back()) throw std::invalid_argument("fit_power_law: degenerate data (constant T)");
    const auto lf = stats::least_squares(x, y);

    PowerLawFit fit;
    fit.points = x.size();
    fit.exponent = lf.slope;
    fit.r2 = lf.r2;
    fit.zeta_raw = 2.0 * (1.0 - lf.slope);
    fit.in_range = fit.zeta_raw > 0.0 && fit.zeta_raw <= 2.0;
    fit.zeta = std::clamp(fit.zeta_raw, 1e-6, 2.0);
    fit.fitted_at_T0 = std::exp(lf.intercept);

    if (reference) {
        fit.reference = *reference;
    } else {
        const auto& T = data.T;
        if (T0 <= T.front()) fit.reference = data.value.front();
        else if (T0 >= T.back()) fit.reference = data.value.back();
        else {
            const auto it = std::lower_bound(T.begin(), T.end(), T0);
            const std::size_t j = static_cast<std::size_t>(it - T.begin());
            if (T[j] == T0) fit.reference = data.value[j];
            else {
                const double w = std::log(T0 / T[j - 1]) / std::log(T[j] / T[j - 1]);
                fit.reference = std::exp((1.0 - w) * std::log(data.value[j - 1]) + w * std::log(data.value[j]));
            }
        }
    }
    if (!(fit.reference > 0.0)) throw std::invalid_argument("fit_power_law: reference measurement must be positive");
    fit.K_scale = fit.fitted_at_T0 / fit.reference;
    return fit;
}

PrandtlResult prandtl_from_measurements(const GasSpec& gas, UnitConvention units)
{
    if (!(gas.kappa0 > 0.0)) throw std::domain_error("prandtl: kappa0 must be positive");
    if (!(gas.mu0 > 0.0)) throw std::domain_error("prandtl: mu0 must be positive");
    if (!(gas.m > 0.0)) throw std::domain_error("prandtl: m must be positive");
    PrandtlResult res;
    res.alpha = alpha_from_cv(gas.c_v_hat).alpha;
    double kB = 1.0, mu = gas.mu0, kappa = gas.kappa0;
    if (units == UnitConvention::Lab) {
        kB = kBoltzmannSI;
        mu *= 1e-6;
        kappa *= 1e-3;
        // Typical dilute gases near room temperature sit well inside these bands;
        // values outside usually mean SI numbers were passed as lab units or vice versa.
        if (gas.mu0 < 1.0 || gas.mu0 > 1e3)
            res.warnings.push_back("mu0 = " + std::to_string(gas.mu0) + " uPa.s is outside the plausible band [1, 1000]");
        if (gas.kappa0 < 1.0 || gas.kappa0 > 1e3)
            res.warnings.push_back("kappa0 = " + std::to_string(gas.kappa0) +
                                   " mW/(m.K) is outside the plausible band [1, 1000]");
        if (gas.m < 1e-27 || gas.m > 1e-24)
            res.warnings.push_back("m = " + std::to_string(gas.m) + " kg is outside the molecular range [1e-27, 1e-24]");
    }
    res.Pr = (res.alpha + 3.5) * (kB / gas.m) * (mu / kappa);
    if (units == UnitConvention::Lab && (res.Pr < 0.3 || res.Pr > 3.0))
        res.warnings.push_back("Pr = " + std::to_string(res.Pr) + " is outside the plausible gas range [0.3, 3]");
    return res;
}

FeasiblePRange feasible_p_range(double alpha, double zeta)
{
    if (!(alpha > -1.0)) throw std::domain_error("feasible_p_range: alpha must exceed -1");
    if (!(zeta > 0.0 && zeta <= 2.0)) throw std::domain_error("feasible_p_range: zeta must lie in (0, 2]");
    const double inf = std::numeric_limits<double>::infinity();
    const double hz = 0.5 * zeta;
    FeasiblePRange out;
    PConstraint c1{"(i)", alpha < hz, alpha < hz ? (1.0 + hz) / (hz - alpha) : inf};
    PConstraint c2{"(ii)", alpha < -0.5, alpha < -0.5 ? -1.0 / (2.0 * alpha + 1.0) : inf};
    PConstraint c3{"p*alpha>-1", alpha < 0.0, alpha < 0.0 ? -1.0 / alpha : inf};
    out.constraints = {c1, c2, c3};
    for (const auto& c : out.constraints) out.p_bar = std::min(out.p_bar, c.bound);
    for (const auto& c : out.constraints)
        if (c.applies && c.bound == out.p_bar) out.binding.push_back(c.name);

    const double p_rho = std::min(c1.bound, c2.bound);
    if (std::isfinite(p_rho)) {
        auto q_of = [](double p) { return p / (p - 1.0); };
        const bool below = std::isfinite(rho_q(alpha, zeta, q_of(0.99 * p_rho)));
        const bool above = std::isfinite(rho_q(alpha, zeta, q_of(1.01 * p_rho)));
        out.rho_q_consistent = below && !above;
    }
    return out;
}

std::filesystem::path data_directory()
{
    if (const char* env = std::getenv("POLYKIN_DATA_DIR"); env && *env) return env;
#ifdef POLYKIN_DEFAULT_DATA_DIR
    return POLYKIN_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

namespace {

int printed_decimals(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    const std::string s(buf, ptr);
    const auto dot = s.find('.');
    return dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
}

double p_bar_i(double alpha, double zeta)
{
    return feasible_p_range(alpha, zeta).p_bar;
}

}  // namespace

TablesReport reproduce_tables(const std::filesystem::path& table_file, double tolerance)
{
    std::ifstream in(table_file);
    if (!in) throw std::runtime_error("cannot open table data " + table_file.string());
    const json doc = json::parse(in);
    TablesReport rep;
    rep.tolerance = tolerance;

    std::vector<std::string> gases;
    for (const auto& g : doc.at("gases")) gases.push_back(g.at("name").get<std::string>());

    bool restriction_ii_ever = false;
    for (const auto& [pressure, block] : doc.at("pressures").items()) {
        const auto& rows = block.at("rows");
        for (const auto& gas : gases) {
            if (!rows.contains(gas)) {
                rep.notes.push_back("missing row " + gas + "/" + pressure + " skipped");
                continue;
            }
            const auto& row = rows.at(gas);
            const double alpha = row.at("alpha").get<double>();
            if (alpha < -0.5) restriction_ii_ever = true;

            if (row.contains("delta") && !row.at("delta").is_null()) {
                TableCell c;
                c.gas = gas;
                c.pressure = pressure;
                c.scenario = "-";
                c.quantity = "delta";
                c.alpha = alpha;
                c.expected = row.at("delta").get<double>();
                c.computed = alpha_from_cv(cv_from_alpha(alpha)).delta;
                c.abs_error = std::abs(c.computed - c.expected);
                c.pass = c.abs_error <= tolerance;
                // delta is linear in alpha, so the rounding interval is exact.
                const double half = 0.5 * std::pow(10.0, -printed_decimals(c.expected));
                c.rounding_consistent = std::abs(c.computed - c.expected) <= 2.0 * 5e-5 + half;
                rep.cells.push_back(c);
            }
            for (const auto& [scenario, cell] : row.at("scenarios").items()) {
                if (cell.is_null()) continue;
                TableCell c;
                c.gas = gas;
                c.pressure = pressure;
                c.scenario = scenario;
                c.quantity = "p_bar";
                c.alpha = alpha;
                c.zeta = cell.at("zeta").get<double>();
                if (!cell.contains("p_bar") || cell.at("p_bar").is_null()) {
                    rep.notes.push_back("missing p_bar " + gas + "/" + pressure + "/" + scenario + " skipped");
                    continue;
                }
                c.expected = cell.at("p_bar").get<double>();
                const auto fp = feasible_p_range(c.alpha, c.zeta);
                c.computed = fp.p_bar;
                c.binding = fp.binding;
                c.abs_error = std::abs(c.computed - c.expected);
                c.pass = c.abs_error <= tolerance;
                // p_bar increases with alpha and decreases with zeta, so the
                // image of the input rounding box is an interval with these ends.
                const double ra = 0.5 * std::pow(10.0, -printed_decimals(c.alpha));
                const double rz = 0.5 * std::pow(10.0, -printed_decimals(c.zeta));
                const double lo = p_bar_i(c.alpha - ra, c.zeta + rz);
                const double hi = p_bar_i(c.alpha + ra, c.zeta - rz);
                const double half = 0.5 * std::pow(10.0, -printed_decimals(c.expected));
                c.rounding_consistent = c.expected + half >= lo && c.expected - half <= hi;
                rep.cells.push_back(c);
            }
        }
    }
    if (!restriction_ii_ever) rep.notes.push_back("restriction (ii) never binds: every tabulated alpha exceeds -1/2");

    if (doc.contains("omega_eta")) {
        for (const auto& [pressure, byp] : doc.at("omega_eta").items())
            for (const auto& [scenario, bys] : byp.items())
                for (const auto& [criterion, byc] : bys.items())
                    for (const auto& gas : gases) {
                        if (!byc.contains(gas)) continue;
                        const auto& e = byc.at(gas);
                        rep.reference.push_back({pressure, scenario, criterion, gas, e.at("eta").get<std::string>(),
                                                 e.at("omega").get<std::string>()});
                    }
    }
    for (const auto& c : rep.cells) (c.pass ? rep.n_pass : rep.n_fail)++;
    return rep;
}

TablesReport reproduce_tables()
{
    return reproduce_tables(data_directory() / "table1.json");
}

}  // namespace polykin::transport
