// Flat key = value run configuration, shared by the config file format and
// the command-line overrides. Unknown keys are rejected; flags win over
// file values.
#pragma once
#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include "hjlab/cauchy.hpp"

namespace hjlab {

struct RunConfig {
    std::string id;
    std::optional<Scheme> scheme;
    std::optional<double> dx, cfl, horizon, x_min, x_max, c, eps, tol;
    std::optional<std::pair<double, double>> window;
    std::optional<int> snapshot_stride;
    std::optional<BoundaryPolicy> boundary;
};

// Accepted keys: id, scheme, dx, cfl, T, x_min, x_max, c, eps, tol, window,
// snapshot_stride, boundary. window is "lo,hi".
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

// Parse errors carry 1-based line numbers.
RunConfig parse_config_file(const std::filesystem::path& path);

// file values first, then overrides on top.
RunConfig merge_configs(const RunConfig& base, const RunConfig& overrides);

// Domain validation (cfl in (0,1], dx > 0, x_min < x_max, ...).
void validate_config(const RunConfig& cfg);

Scheme parse_scheme(const std::string& s);
BoundaryPolicy parse_boundary(const std::string& s);

} // namespace hjlab
