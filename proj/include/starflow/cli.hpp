#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "starflow/config.hpp"

namespace starflow {

/// Executes one configured run: integrates the flow, writes series.csv,
/// snapshots, monitors.log and (if enabled) inequality reports at the initial
/// and final states under config.out_dir.  Returns the process exit status:
/// 0 on clean convergence or t_end, 3 with a failure.json record on a monitor
/// violation, 4 on I/O failure.
int run_command(const RunConfig& config, std::ostream& log);

/// Reads series files produced by run_command and prints per-quantity
/// monotonicity verdicts, the fitted exponential decay rate of
/// dgamma_sq_max, and the final inequality margins.
int report_command(const std::vector<std::string>& series_files, std::ostream& out);

/// Monotonicity verdict helpers shared by report_command and the test suites.
/// Tolerances: per-step violations up to step_tol * scale and cumulative
/// violations up to cum_tol * scale are absorbed, with scale = max |value|.
struct MonotonicityVerdict {
    bool non_increasing = false;
    bool non_decreasing = false;
    bool invariant = false;     ///< total drift within cum_tol * scale
    double max_step_up = 0.0;   ///< largest single-row increase
    double max_step_down = 0.0; ///< largest single-row decrease
    double total_up = 0.0, total_down = 0.0;
    double drift = 0.0;  ///< |last - first|
};

MonotonicityVerdict classify_monotonicity(const std::vector<double>& values,
                                          double step_tol = 1e-8, double cum_tol = 1e-5);

/// Least-squares fit of log(values) vs t over the trailing half of the rows
/// (positive values only).  Returns {slope, r_squared}; slope is the decay
/// exponent when negative.
std::pair<double, double> fit_log_decay(const std::vector<double>& t,
                                        const std::vector<double>& values);

}  // namespace starflow
