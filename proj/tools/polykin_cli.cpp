// polykin command-line driver: simulate, verify, transport.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "polykin/config.hpp"
#include "polykin/dsmc.hpp"
#include "polykin/io.hpp"
#include "polykin/transport.hpp"
#include "polykin/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace polykin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInvariant = 4;

json finite_or_string(double v)
{
    return std::isfinite(v) ? json(v) : json(v > 0 ? "inf" : "-inf");
}

int cmd_simulate(const std::string& config_path, unsigned threads_override, const std::string& outdir_override)
{
    config::RunConfig cfg;
    try {
        cfg = config::load_run_config(config_path);
    } catch (const config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (threads_override) cfg.solver.threads = threads_override;
    if (!outdir_override.empty()) cfg.output.directory = outdir_override;

    try {
        Ensemble ens = config::build_ensemble(cfg);
        const auto kp = cfg.kernel_params();
        const RunResult res = run(ens, kp, cfg.solver);
        fs::create_directories(cfg.output.directory);
        const auto csv = cfg.output.directory / cfg.output.csv;
        const auto summary = cfg.output.directory / cfg.output.summary;
        io::write_timeseries_csv(csv, res.records, cfg.solver.moment_orders);
        io::write_json(summary, io::summary_json(res, cfg));
        std::cout << "steps " << res.steps << ", dt " << res.dt << ", energy drift " << res.energy_drift
                  << ", momentum drift " << res.momentum_drift << '\n'
                  << "wrote " << csv.string() << " and " << summary.string() << '\n';
    } catch (const MajorantViolation& e) {
        std::cerr << "numerical abort (majorant violation): " << e.what() << '\n';
        return kExitNumerical;
    } catch (const NumericalAbort& e) {
        std::cerr << "numerical abort: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::domain_error& e) {
        std::cerr << "numerical abort: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_verify(const std::string& suite, const verify::SuiteOptions& opt, const std::string& outdir)
{
    verify::SuiteResult res;
    try {
        res = verify::run_suite(suite, opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    }
    fs::create_directories(outdir);
    const fs::path report = fs::path(outdir) / ("verify_" + suite + ".json");
    io::write_json(report, res.report);
    std::cout << res.report.dump(2) << '\n';
    if (!res.passed) {
        const fs::path dump = fs::path(outdir) / ("verify_" + suite + "_failure.json");
        io::write_json(dump, res.failing_case);
        std::cerr << "invariant failure in suite '" << suite << "'; failing case written to " << dump.string() << '\n';
        return kExitInvariant;
    }
    return kExitOk;
}

int cmd_transport_fit(const std::string& csv, const std::string& kind, double T0, double reference)
{
    try {
        const auto ds = transport::read_transport_csv(csv, transport::transport_kind_from_string(kind));
        const auto fit = transport::fit_power_law(ds, T0, reference > 0.0 ? std::optional<double>(reference)
                                                                          : std::nullopt);
        json out = {{"kind", kind},         {"points", fit.points},    {"T0", T0},
                    {"zeta", fit.zeta},     {"zeta_raw", fit.zeta_raw}, {"zeta_in_range", fit.in_range},
                    {"exponent", fit.exponent}, {"K_scale", fit.K_scale}, {"fitted_at_T0", fit.fitted_at_T0},
                    {"reference", fit.reference}, {"value_unit", ds.value_unit}, {"r2", fit.r2}};
        std::cout << out.dump(2) << '\n';
        if (!fit.in_range) std::cerr << "warning: fitted zeta " << fit.zeta_raw << " outside (0, 2]; clamped\n";
    } catch (const transport::CsvError& e) {
        std::cerr << "CSV error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

int cmd_transport_prandtl(const transport::GasSpec& gas, bool nondimensional)
{
    try {
        const auto pr = transport::prandtl_from_measurements(
            gas, nondimensional ? transport::UnitConvention::Nondimensional : transport::UnitConvention::Lab);
        std::cout << json{{"name", gas.name}, {"alpha", pr.alpha}, {"Pr", pr.Pr}, {"warnings", pr.warnings}}.dump(2)
                  << '\n';
        for (const auto& w : pr.warnings) std::cerr << "warning: " << w << '\n';
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

int cmd_transport_feasible(double alpha, double zeta)
{
    try {
        const auto fp = transport::feasible_p_range(alpha, zeta);
        json cons = json::array();
        for (const auto& c : fp.constraints)
            cons.push_back({{"name", c.name}, {"applies", c.applies}, {"bound", finite_or_string(c.bound)}});
        std::cout << json{{"alpha", alpha},
                          {"zeta", zeta},
                          {"p_bar", finite_or_string(fp.p_bar)},
                          {"binding", fp.binding},
                          {"constraints", cons},
                          {"rho_q_consistent", fp.rho_q_consistent}}
                         .dump(2)
                  << '\n';
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

int cmd_transport_tables(const std::string& data_file, const std::string& json_out)
{
    transport::TablesReport rep;
    try {
        rep = data_file.empty() ? transport::reproduce_tables() : transport::reproduce_tables(data_file);
    } catch (const std::exception& e) {
        std::cerr << "table data error: " << e.what() << '\n';
        return kExitConfig;
    }
    std::printf("%-4s %-9s %-3s %-6s %8s %8s %10s %10s %10s  %s\n", "gas", "pressure", "sc", "qty", "alpha", "zeta",
                "printed", "computed", "|error|", "result");
    json cells = json::array();
    for (const auto& c : rep.cells) {
        std::printf("%-4s %-9s %-3s %-6s %8.4f %8.4f %10.5f %10.5f %10.2e  %s%s\n", c.gas.c_str(), c.pressure.c_str(),
                    c.scenario.c_str(), c.quantity.c_str(), c.alpha, c.zeta, c.expected, c.computed, c.abs_error,
                    c.pass ? "PASS" : "FAIL",
                    c.pass ? "" : (c.rounding_consistent ? " (consistent with unrounded inputs)" : ""));
        cells.push_back({{"gas", c.gas},           {"pressure", c.pressure}, {"scenario", c.scenario},
                         {"quantity", c.quantity}, {"alpha", c.alpha},       {"zeta", c.zeta},
                         {"printed", c.expected},  {"computed", c.computed}, {"abs_error", c.abs_error},
                         {"pass", c.pass},         {"rounding_consistent", c.rounding_consistent},
                         {"binding", c.binding}});
    }
    std::printf("\nreference omega/eta columns (data only, not recomputed):\n");
    for (const auto& r : rep.reference)
        std::printf("  %-9s %-3s %-6s %-4s eta=%-8s omega=%s\n", r.pressure.c_str(), r.scenario.c_str(),
                    r.criterion.c_str(), r.gas.c_str(), r.eta.c_str(), r.omega.c_str());
    for (const auto& n : rep.notes) std::printf("note: %s\n", n.c_str());
    std::printf("\n%zu cells, %zu PASS, %zu FAIL (tolerance %.0e)\n", rep.cells.size(), rep.n_pass, rep.n_fail,
                rep.tolerance);
    if (!json_out.empty()) {
        const fs::path p(json_out);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        io::write_json(p, {{"tolerance", rep.tolerance},
                           {"n_pass", rep.n_pass},
                           {"n_fail", rep.n_fail},
                           {"cells", cells},
                           {"notes", rep.notes}});
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"polykin: polyatomic Boltzmann DSMC, verification suites and transport tools"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Run a DSMC simulation from a JSON config");
    std::string config_path, sim_outdir;
    unsigned sim_threads = 0;
    sim->add_option("config", config_path, "Run configuration (JSON)")->required();
    sim->add_option("--threads", sim_threads, "Override solver.threads (1 = bit-reproducible)");
    sim->add_option("--output-dir", sim_outdir, "Override output.directory");

    auto* ver = app.add_subcommand("verify", "Run an invariant verification suite");
    std::string suite, ver_outdir = "verify_output";
    verify::SuiteOptions vopt;
    double samples = static_cast<double>(vopt.samples);
    ver->add_option("suite", suite, "collision | averaging | kernel-constants | energy-identity")->required();
    ver->add_option("--samples", samples, "Number of random samples (accepts 1e6)");
    ver->add_option("--alpha", vopt.alpha, "Internal-energy exponent");
    ver->add_option("--zeta", vopt.zeta, "Hard-potential exponent in (0, 2]");
    ver->add_option("--eta", vopt.eta, "Internal-energy weight");
    ver->add_option("--kmax", vopt.kmax, "Largest moment order (averaging)");
    ver->add_option("--states", vopt.states, "Pair states for the empirical sup (averaging)");
    ver->add_option("--n-mc", vopt.n_mc, "Monte-Carlo draws per state (averaging)");
    ver->add_option("--threads", vopt.threads, "Worker threads");
    ver->add_option("--seed", vopt.seed, "Random seed");
    ver->add_option("--output-dir", ver_outdir, "Directory for the JSON report");

    auto* tr = app.add_subcommand("transport", "Transport-data tools");
    tr->require_subcommand(1);
    auto* fit = tr->add_subcommand("fit", "Fit value(T) = c (T/T0)^(1 - zeta/2) to a T,value CSV");
    std::string fit_csv, fit_kind = "viscosity";
    double fit_T0 = 300.0, fit_ref = 0.0;
    fit->add_option("csv", fit_csv, "Input CSV with header T,value")->required();
    fit->add_option("--kind", fit_kind, "viscosity | conductivity");
    fit->add_option("--T0", fit_T0, "Reference temperature [K]");
    fit->add_option("--reference", fit_ref, "Reference measurement for K_scale (default: measured value at T0)");

    auto* pr = tr->add_subcommand("prandtl", "Prandtl number from mu0, kappa0");
    transport::GasSpec gas;
    bool nondim = false;
    pr->add_option("--name", gas.name, "Gas label");
    pr->add_option("--m", gas.m, "Molecular mass [kg]")->required();
    pr->add_option("--cv", gas.c_v_hat, "Dimensionless specific heat c_v")->required();
    pr->add_option("--mu0", gas.mu0, "Shear viscosity at T0 [uPa.s]")->required();
    pr->add_option("--kappa0", gas.kappa0, "Thermal conductivity at T0 [mW/(m.K)]")->required();
    pr->add_flag("--nondimensional", nondim, "k_B = 1 and raw mu0, kappa0");

    auto* fp = tr->add_subcommand("feasible-p", "Upper limit of admissible p");
    double fp_alpha = 0.0, fp_zeta = 1.0;
    fp->add_option("--alpha", fp_alpha, "Internal-energy exponent")->required();
    fp->add_option("--zeta", fp_zeta, "Hard-potential exponent")->required();

    auto* tab = tr->add_subcommand("tables", "Recompute the tabulated delta and p_bar values");
    std::string tab_data, tab_json;
    tab->add_option("--data", tab_data, "Table data JSON (default: bundled data/table1.json)");
    tab->add_option("--json", tab_json, "Also write the report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*sim) return cmd_simulate(config_path, sim_threads, sim_outdir);
        if (*ver) {
            if (!(samples >= 1.0) || samples != std::floor(samples)) {
                std::cerr << "--samples must be a positive integer\n";
                return kExitConfig;
            }
            vopt.samples = static_cast<std::size_t>(samples);
            return cmd_verify(suite, vopt, ver_outdir);
        }
        if (*fit) return cmd_transport_fit(fit_csv, fit_kind, fit_T0, fit_ref);
        if (*pr) return cmd_transport_prandtl(gas, nondim);
        if (*fp) return cmd_transport_feasible(fp_alpha, fp_zeta);
        if (*tab) return cmd_transport_tables(tab_data, tab_json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}
