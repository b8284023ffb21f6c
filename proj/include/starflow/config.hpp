#pragma once

#include <string>
#include <vector>

#include "starflow/flow.hpp"
#include "starflow/presets.hpp"

namespace starflow {

/// One batch experiment: flow parameters, grid, initial body, output policy,
/// and the quantity/inequality sweeps tracked in the series.
struct RunConfig {
    FlowSpec flow;
    BodyPreset body;
    std::string out_dir = ".";
    int snapshot_interval = 0;  ///< snapshots every k-th series row; 0 = first/last only
    bool inequalities = false;
    std::vector<double> sweep_iotas = {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0};
    std::vector<int> sweep_ks;  ///< defaults to 0..n when empty

    bool operator==(const RunConfig&) const;
};

/// Strict flat-section key=value parser.  Unknown sections or keys, type
/// mismatches, and range violations raise ConfigError naming the key path
/// and line; every FlowSpec constraint is enforced before any compute.
///
/// Sections and keys (defaults in parentheses):
///   [flow]   ambient (euclidean), n (2), alpha (0), beta (1),
///            f (ratio(1,0)), mode (normalized), t_end (1), safety (0.5),
///            cadence (10), allow_out_of_range (false)
///   [grid]   n_theta (64), n_phi (128), n_points (256)
///   [body]   preset (sphere(1))
///   [output] dir (.), snapshot_interval (0), inequalities (false)
///   [quantities] iotas (-1,-0.5,0,0.5,1,2,3), ks (0..n)
RunConfig parse_config(const std::string& text);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace starflow
