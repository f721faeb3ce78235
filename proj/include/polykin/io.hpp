#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polykin/config.hpp"
#include "polykin/dsmc.hpp"

namespace polykin::io {

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double v);

/// Column order: t, mass, px, py, pz, energy, m1_k<k>..., entropy,
/// n_collisions_exchange, n_collisions_frozen, n_attempted, n_accepted,
/// temp_trans, temp_int, stress_aniso.
std::vector<std::string> csv_header(const std::vector<double>& moment_orders);

void write_timeseries_csv(std::ostream& out, const std::vector<TimeSeriesRecord>& records,
                          const std::vector<double>& moment_orders);
void write_timeseries_csv(const std::filesystem::path& path, const std::vector<TimeSeriesRecord>& records,
                          const std::vector<double>& moment_orders);

nlohmann::json summary_json(const RunResult& result, const config::RunConfig& cfg);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace polykin::io
