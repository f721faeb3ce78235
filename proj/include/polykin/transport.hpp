#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polykin::transport {

struct AlphaDelta {
    double alpha;
    double delta;  ///< number of internal degrees of freedom, 2(alpha + 1)
};

/// alpha = c_v - 5/2 for a polytropic gas; requires c_v > 3/2.
AlphaDelta alpha_from_cv(double c_v_hat);
double cv_from_alpha(double alpha);

enum class TransportKind { Viscosity, Conductivity };

std::string to_string(TransportKind kind);
TransportKind transport_kind_from_string(const std::string& s);

/// Raised for malformed CSV input; `line()` is 1-based (0 when not line specific).
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& what, std::size_t line)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct TransportDataset {
    std::vector<double> T;
    std::vector<double> value;
    TransportKind kind = TransportKind::Viscosity;
    std::string pressure;
    std::string value_unit;

    /// Throws std::invalid_argument unless T is strictly increasing and all values are positive.
    void validate() const;
};

/// Reads a `T,value` CSV. Units come from a sidecar JSON next to the file
/// (`<file>.json` or `<stem>.json`, e.g. {"T":"K","value":"uPa.s"}); without
/// one the conventional unit for `kind` is assumed.
TransportDataset read_transport_csv(const std::filesystem::path& path, TransportKind kind);

struct PowerLawFit {
    double zeta = 0.0;       ///< clamped into (0, 2]
    double zeta_raw = 0.0;   ///< 2 (1 - slope), unclamped
    double exponent = 0.0;   ///< fitted slope 1 - zeta/2
    double fitted_at_T0 = 0.0;
    double reference = 0.0;  ///< measurement used to normalise K_scale
    double K_scale = 0.0;
    double r2 = 0.0;
    bool in_range = true;
    std::size_t points = 0;
};

/// Least-squares fit of log(value) against log(T/T0). When `reference` is not
/// given the measured value at T0 is used (log-log interpolated if T0 is not a
/// sample point, nearest end point outside the data range).
PowerLawFit fit_power_law(const TransportDataset& data, double T0 = 300.0,
                          std::optional<double> reference = std::nullopt);

struct GasSpec {
    std::string name;
    double m = 0.0;        ///< kg (or any unit in nondimensional mode)
    double c_v_hat = 2.5;
    double mu0 = 0.0;      ///< uPa.s in lab units
    double kappa0 = 0.0;   ///< mW/(m.K) in lab units
    double T0 = 300.0;
};

enum class UnitConvention {
    Lab,             ///< SI k_B, mu0 in uPa.s, kappa0 in mW/(m.K)
    Nondimensional,  ///< k_B = 1, mu0 and kappa0 used as given
};

struct PrandtlResult {
    double Pr = 0.0;
    double alpha = 0.0;
    std::vector<std::string> warnings;
};

PrandtlResult prandtl_from_measurements(const GasSpec& gas, UnitConvention units = UnitConvention::Lab);

struct PConstraint {
    std::string name;   ///< "(i)", "(ii)" or "p*alpha>-1"
    bool applies = false;
    double bound = std::numeric_limits<double>::infinity();
};

struct FeasiblePRange {
    double p_bar = std::numeric_limits<double>::infinity();
    std::vector<PConstraint> constraints;
    std::vector<std::string> binding;
    /// Whether rho_q is finite just below and infinite just above the bound
    /// coming from (i)/(ii); true when neither applies.
    bool rho_q_consistent = true;
};

FeasiblePRange feasible_p_range(double alpha, double zeta);

/// Bundled data location: $POLYKIN_DATA_DIR if set, else the source tree's data/.
std::filesystem::path data_directory();

struct TableCell {
    std::string gas;
    std::string pressure;
    std::string scenario;   ///< "i", "ii", or "-" for the delta column
    std::string quantity;   ///< "delta" or "p_bar"
    double alpha = 0.0;
    double zeta = 0.0;
    double expected = 0.0;
    double computed = 0.0;
    double abs_error = 0.0;
    bool pass = false;
    /// Whether some (alpha, zeta) that rounds to the printed inputs reproduces
    /// the printed value to its last digit. Informational only.
    bool rounding_consistent = false;
    std::vector<std::string> binding;
};

struct ReferenceCell {
    std::string pressure, scenario, criterion, gas, eta, omega;
};

struct TablesReport {
    std::vector<TableCell> cells;
    std::vector<ReferenceCell> reference;
    std::vector<std::string> notes;
    double tolerance = 2e-3;
    std::size_t n_pass = 0;
    std::size_t n_fail = 0;
    bool all_pass() const { return n_fail == 0; }
};

TablesReport reproduce_tables(const std::filesystem::path& table_file, double tolerance = 2e-3);
TablesReport reproduce_tables();

}  // namespace polykin::transport
