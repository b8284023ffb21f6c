#include "starflow/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include <json.hpp>

#include "starflow/inequalities.hpp"
#include "starflow/quantities.hpp"

namespace starflow {

namespace fs = std::filesystem;

namespace {

std::vector<QuantityKey> sweep_keys(const RunConfig& cfg)
{
    std::vector<QuantityKey> keys;
    for (int k : cfg.sweep_ks) {
        for (double iota : cfg.sweep_iotas) keys.push_back(QuantityKey::S(iota, k));
        for (double iota : cfg.sweep_iotas) keys.push_back(QuantityKey::T(iota, k));
    }
    return keys;
}

void write_failure_record(const fs::path& dir, const std::string& reason, double t, long step,
                          int node)
{
    nlohmann::json j;
    j["error"] = "monitor_violation";
    j["reason"] = reason;
    j["t"] = t;
    j["step"] = step;
    j["node"] = node;
    std::ofstream os(dir / "failure.json");
    os << j.dump(2) << "\n";
}

}  // namespace

int run_command(const RunConfig& config, std::ostream& log)
{
    RunConfig cfg = config;
    try {
        validate_flow_spec(cfg.flow);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return 2;
    }

    fs::path out_dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        log << "io error: cannot create output directory " << out_dir << "\n";
        return 4;
    }

    const SphereGrid grid = make_grid(cfg.flow);
    const Eigen::ArrayXd rho0 = build_body(cfg.body, grid);

    const std::vector<QuantityKey> keys = sweep_keys(cfg);

    // Column layout: monitor block, then one column per swept quantity key,
    // then one margin column per inequality report id.
    std::vector<std::string> margin_ids;
    if (cfg.inequalities) {
        const GeometryFields geo0 = geometry_from_rho(rho0, cfg.flow.ambient, grid);
        for (const auto& r : inequality_suite(geo0, cfg.sweep_iotas)) margin_ids.push_back(r.id);
    }

    std::ofstream monitors_log(out_dir / "monitors.log");
    QuantitySeries series;
    long snapshot_count = 0;
    long row_count = 0;

    auto write_snapshot = [&](const GeometryFields& geo, const std::string& name) {
        std::ofstream os(out_dir / name);
        write_snapshot_csv(os, geo);
    };

    FlowObserver observer = [&](const FlowState& state, const MonitorReport& m) {
        std::vector<double> row = {m.t,     0.0,     m.rho_min, m.rho_max, m.dgamma_sq_max,
                                   m.Q_min, m.Q_max, m.u_min,   m.u_max,   m.f_min,
                                   m.f_max, m.kappa_max, m.area, m.volume};
        row[1] = (cfg.flow.mode == FlowMode::Normalized)
                     ? m.t
                     : rescale_to_normalized(m.t, state.rho, cfg.flow).first;
        for (const auto& key : keys) {
            double v;
            try {
                v = evaluate(key, state.geo);
            } catch (const DomainError&) {
                v = std::numeric_limits<double>::quiet_NaN();
            }
            row.push_back(v);
        }
        if (cfg.inequalities) {
            const auto reports = inequality_suite(state.geo, cfg.sweep_iotas);
            for (const auto& r : reports)
                row.push_back(r.applicable ? r.margin
                                           : std::numeric_limits<double>::quiet_NaN());
        }
        series.rows.push_back(std::move(row));

        monitors_log << std::setprecision(12) << "t=" << m.t << " rho=[" << m.rho_min << ","
                     << m.rho_max << "] dgamma_sq_max=" << m.dgamma_sq_max << " Q=[" << m.Q_min
                     << "," << m.Q_max << "] u=[" << m.u_min << "," << m.u_max << "] f=["
                     << m.f_min << "," << m.f_max << "] kappa_max=" << m.kappa_max
                     << " area=" << m.area << " area_rate_residual=" << m.area_rate_residual
                     << "\n";

        if (cfg.snapshot_interval > 0 && row_count % cfg.snapshot_interval == 0) {
            char name[64];
            std::snprintf(name, sizeof(name), "snapshot_%06ld.csv", snapshot_count++);
            write_snapshot(state.geo, name);
        }
        ++row_count;
    };

    series.comments = {"starflow series",
                       "ambient=" + cfg.flow.ambient.name() + " n=" + std::to_string(cfg.flow.n) +
                           " alpha=" + std::to_string(cfg.flow.alpha) +
                           " beta=" + std::to_string(cfg.flow.beta) + " f=" +
                           cfg.flow.f.to_string() + " mode=" +
                           (cfg.flow.mode == FlowMode::Normalized ? "normalized" : "unnormalized"),
                       "body=" + cfg.body.to_string()};
    series.columns = {"t",     "tau",   "rho_min", "rho_max", "dgamma_sq_max",
                      "Q_min", "Q_max", "u_min",   "u_max",   "f_min",
                      "f_max", "kappa_max", "area", "volume"};
    for (const auto& key : keys) series.columns.push_back(key.to_string());
    for (const auto& id : margin_ids) series.columns.push_back("margin:" + id);

    auto flush_series = [&]() {
        std::ofstream os(out_dir / "series.csv");
        series.write_csv(os);
        return !os.fail();
    };

    try {
        const GeometryFields geo0 = geometry_from_rho(rho0, cfg.flow.ambient, grid);
        write_snapshot(geo0, "snapshot_initial.csv");
        if (cfg.inequalities) {
            std::ofstream os(out_dir / "inequalities_initial.csv");
            write_inequality_csv(os, inequality_suite(geo0, cfg.sweep_iotas));
        }

        const FlowResult result = run_flow(cfg.flow, grid, rho0, observer);

        write_snapshot(result.state.geo, "snapshot_final.csv");
        if (cfg.inequalities) {
            const auto reports = inequality_suite(result.state.geo, cfg.sweep_iotas);
            std::ofstream os(out_dir / "inequalities_final.csv");
            write_inequality_csv(os, reports);
            write_inequality_summary(log, reports);
        }
        if (!flush_series()) {
            log << "io error: failed writing series.csv\n";
            return 4;
        }
        log << "run " << (result.converged ? "converged" : "reached t_end") << " at t = "
            << std::setprecision(12) << result.state.t << " after " << result.state.step
            << " steps; rho in [" << result.final_report.rho_min << ", "
            << result.final_report.rho_max << "], dgamma_sq_max = "
            << result.final_report.dgamma_sq_max << "\n";
        return 0;
    } catch (const MonitorViolation& v) {
        flush_series();
        write_failure_record(out_dir, v.what(), v.t, v.step, v.node_index);
        log << "monitor violation: " << v.what() << " (t=" << v.t << ", step=" << v.step << ")\n";
        return 3;
    } catch (const DegeneracyError& e) {
        flush_series();
        write_failure_record(out_dir, e.what(), -1.0, -1, e.node_index);
        log << "degeneracy: " << e.what() << "\n";
        return 3;
    } catch (const std::ios_base::failure& e) {
        log << "io error: " << e.what() << "\n";
        return 4;
    }
}

MonotonicityVerdict classify_monotonicity(const std::vector<double>& values, double step_tol,
                                          double cum_tol)
{
    MonotonicityVerdict v;
    if (values.size() < 2) {
        v.non_increasing = v.non_decreasing = v.invariant = true;
        return v;
    }
    double scale = 0.0;
    for (double x : values) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) scale = 1.0;

    for (size_t i = 1; i < values.size(); ++i) {
        const double d = values[i] - values[i - 1];
        if (d > 0) {
            v.max_step_up = std::max(v.max_step_up, d);
            v.total_up += d;
        } else {
            v.max_step_down = std::max(v.max_step_down, -d);
            v.total_down += -d;
        }
    }
    v.drift = std::abs(values.back() - values.front());
    v.non_increasing = v.max_step_up <= step_tol * scale && v.total_up <= cum_tol * scale;
    v.non_decreasing = v.max_step_down <= step_tol * scale && v.total_down <= cum_tol * scale;
    v.invariant = v.drift <= cum_tol * scale && v.total_up <= cum_tol * scale &&
                  v.total_down <= cum_tol * scale;
    return v;
}

std::pair<double, double> fit_log_decay(const std::vector<double>& t,
                                        const std::vector<double>& values)
{
    std::vector<double> xs, ys;
    const size_t start = values.size() / 2;
    for (size_t i = start; i < values.size(); ++i) {
        if (values[i] > 0.0) {
            xs.push_back(t[i]);
            ys.push_back(std::log(values[i]));
        }
    }
    if (xs.size() < 3) return {0.0, 0.0};
    const size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return {0.0, 0.0};
    const double slope = (n * sxy - sx * sy) / denom;
    const double ss_tot = syy - sy * sy / n;
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (slope * xs[i] + intercept);
        ss_res += r * r;
    }
    const double r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return {slope, r2};
}

int report_command(const std::vector<std::string>& series_files, std::ostream& out)
{
    for (const auto& file : series_files) {
        std::ifstream is(file);
        if (!is) {
            out << "cannot open " << file << "\n";
            return 4;
        }
        QuantitySeries s;
        try {
            s = QuantitySeries::read_csv(is);
        } catch (const std::exception& e) {
            out << file << ": parse error: " << e.what() << "\n";
            return 2;
        }
        out << "== " << file << " (" << s.rows.size() << " rows)\n";

        const auto t = s.column("t");
        const auto dg = s.column("dgamma_sq_max");
        const auto [slope, r2] = fit_log_decay(t, dg);
        out << std::setprecision(6) << "dgamma_sq_max decay: rate = " << slope
            << " (R^2 = " << r2 << ")\n";

        for (size_t c = 0; c < s.columns.size(); ++c) {
            const std::string& name = s.columns[c];
            const bool quantity = name.rfind("S(", 0) == 0 || name.rfind("T(", 0) == 0 ||
                                  name == "area" || name == "volume" ||
                                  name.rfind("quermass", 0) == 0;
            if (!quantity) continue;
            std::vector<double> vals;
            bool has_nan = false;
            for (const auto& row : s.rows) {
                if (std::isnan(row[c])) has_nan = true;
                vals.push_back(row[c]);
            }
            if (has_nan) {
                out << "  " << name << ": not applicable (domain errors)\n";
                continue;
            }
            const MonotonicityVerdict v = classify_monotonicity(vals);
            out << "  " << name << ": ";
            if (v.invariant)
                out << "invariant";
            else if (v.non_increasing)
                out << "non-increasing";
            else if (v.non_decreasing)
                out << "non-decreasing";
            else
                out << "mixed";
            out << "  (drift " << std::setprecision(3) << v.drift << ", max step +"
                << v.max_step_up << "/-" << v.max_step_down << ")\n";
        }

        // final inequality margins, if tracked
        bool any_margin = false;
        for (size_t c = 0; c < s.columns.size(); ++c) {
            if (s.columns[c].rfind("margin:", 0) == 0) {
                if (!any_margin) out << "final inequality margins:\n";
                any_margin = true;
                const double m = s.rows.back()[c];
                out << "  " << s.columns[c].substr(7) << " = " << std::setprecision(6) << m
                    << (std::isnan(m) ? " (inapplicable)" : (m >= -1e-8 ? "" : "  VIOLATED"))
                    << "\n";
            }
        }
    }
    return 0;
}

}  // namespace starflow
