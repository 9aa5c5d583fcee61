#pragma once

/**
 * @file io.hpp
 * @brief Run configuration and the CSV / JSON artifact formats
 *
 * Config (JSON, every key optional):
 *   {"mu": 16, "theta": 0, "sigma": 0.16, "r": 0.01, "T": 1, "steps": 500,
 *    "strategy": "long-short", "fee": 0, "seed": 42,
 *    "value_grid": {"t_points": 5, "x_min": -0.1, "x_max": 0.1, "x_points": 41}}
 *
 * Boundary CSV: header `t,<role>...` with roles in the order exit_long, entry_long,
 * exit_short, entry_short, cost_exit; one row per grid node, ascending t.
 *
 * Value CSV: header `x\t,t=<t0>,t=<t1>,...`, then one row per x.
 *
 * Numbers are written in their shortest round-trip decimal form.
 */

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "ouspread/boundary_solver.hpp"
#include "ouspread/simulate.hpp"
#include "ouspread/value_surface.hpp"

namespace ouspread {

/// Mesh for value surface exports.
struct ValueGridSpec {
    std::size_t t_points = 5;
    double x_min = -0.1;
    double x_max = 0.1;
    std::size_t x_points = 41;
};

/// Defaults reproduce the reference setting: mu = 16, theta = 0, sigma = 0.16,
/// r = 0.01, T = 1 on 500 steps.
struct RunConfig {
    OUParams params = OUParams::reference();
    std::size_t steps = 500;
    Strategy strategy = Strategy::LongShort;
    double fee = 0.0;
    std::uint64_t seed = 42;
    std::optional<ValueGridSpec> value_grid;

    /// steps >= 2, fee >= 0, and a positive fee only with the cost-exit strategy.
    void validate() const;
};

/// Throws std::invalid_argument on malformed input or unknown keys.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);
std::string config_json(const RunConfig& cfg);

/// Shortest decimal string that parses back to exactly v; -0 is written as 0.
std::string format_number(double v);
double parse_number(std::string_view s);

std::string boundary_csv(const StrategySolution& sol);

/// Reads a boundary CSV against the parameters it was solved under. The strategy is
/// inferred from the columns; fee is only used for a cost_exit column.
StrategySolution parse_boundary_csv(std::string_view text, const OUParams& p, double fee = 0.0);

std::string value_csv(const ValueSurface& s);

/// Per-role root-search statistics.
std::string diagnostics_json(const StrategySolution& sol);

std::string report_json(const SimReport& r, double target);

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary file so a failed run never leaves a truncated artifact.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace ouspread
