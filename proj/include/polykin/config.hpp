#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>

#include "polykin/core.hpp"
#include "polykin/dsmc.hpp"
#include "polykin/kernel.hpp"

namespace polykin::config {

/// Invalid configuration; the message starts with the offending field path
/// (e.g. "kernel.omega: must lie in [0, 1]").
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(field)
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct KernelConfig {
    double zeta = 1.0;
    double K = 1.0;
    double eta = 0.5;
    double eta_f = 0.5;
    double omega = 1.0;
    std::string angular = "constant";  ///< "constant" or "power"
    double angular_exponent = 1.0;     ///< b(cos t) = cos^gamma t for "power"
};

struct MaxwellianIC {
    Vec3 U;
    double T = 1.0;
};

/// Two equal Maxwellian lobes drifting at +U and -U, each at temperature T;
/// the internal energy is drawn at T_int.
struct BimodalIC {
    Vec3 U{2.0, 0.0, 0.0};
    double T = 0.5;
    double T_int = 1.0;
};

/// Gaussian velocities with per-axis temperatures, internal energy at T_int.
struct AnisotropicIC {
    Vec3 T{2.0, 0.5, 0.5};
    double T_int = 1.0;
};

/// Isotropic Maxwellian velocities at T_trans, internal energy at T_int.
struct TwoTemperatureIC {
    double T_trans = 2.0;
    double T_int = 0.5;
};

using InitialVariant = std::variant<MaxwellianIC, BimodalIC, AnisotropicIC, TwoTemperatureIC>;

struct InitialCondition {
    InitialVariant variant;
    std::size_t N = 10000;
    double n = 1.0;  ///< number density
    std::uint64_t seed = 1;
};

struct OutputConfig {
    std::filesystem::path directory = "output";
    std::string csv = "timeseries.csv";
    std::string summary = "summary.json";
};

struct RunConfig {
    Units units = Units::nondimensional();
    std::string units_name = "nondimensional";
    double m = 1.0;
    double alpha = 0.0;
    KernelConfig kernel;
    InitialCondition initial;
    SolverConfig solver;
    OutputConfig output;

    KernelParams kernel_params() const;
};

/// Parses and validates a JSON document (text). Relative output directories
/// are kept relative; the caller resolves them.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Draws the initial ensemble described by the config.
Ensemble build_ensemble(const RunConfig& cfg);

/// Bimodal helper used by tests and the config path.
Ensemble make_bimodal(const Species& sp, const BimodalIC& ic, std::size_t N, double n, std::uint64_t seed,
                      const Units& units);

}  // namespace polykin::config
