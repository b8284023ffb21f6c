#include "starflow/flow.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace starflow {

void validate_flow_spec(FlowSpec& spec)
{
    if (spec.n != 1 && spec.n != 2)
        throw ConfigError("flow: n must be 1 or 2, got " + std::to_string(spec.n));
    if (!(spec.beta > 0.0))
        throw ConfigError("flow: beta must satisfy beta > 0, got " + std::to_string(spec.beta));
    if (!(spec.safety > 0.0 && spec.safety <= 1.0))
        throw ConfigError("flow: safety must lie in (0, 1]");
    if (!(spec.t_end > 0.0)) throw ConfigError("flow: t_end must be positive");
    if (spec.cadence < 1) throw ConfigError("flow: cadence must be >= 1");

    if (spec.mode == FlowMode::Unnormalized && !spec.ambient.is_euclidean())
        throw ConfigError("flow: unnormalized mode is Euclidean-only");

    if (!spec.allow_out_of_range) {
        if (!(spec.alpha <= 0.0))
            throw ConfigError("flow: alpha must satisfy alpha <= 0 (pass allow_out_of_range to "
                              "experiment outside the guaranteed ranges)");
        if (spec.ambient.is_euclidean()) {
            if (!(spec.beta <= 1.0 - spec.alpha))
                throw ConfigError("flow: Euclidean range requires alpha <= 0 < beta <= 1 - alpha");
        } else {
            if (!(spec.beta < 1.0 - spec.alpha))
                throw ConfigError("flow: hyperbolic range requires alpha <= 0 < beta < 1 - alpha");
            if (spec.mode != FlowMode::Normalized)
                throw ConfigError("flow: hyperbolic runs must use normalized mode");
        }
    }

    // Admissibility sanity of f itself at the umbilic point.
    spec.eta = eta_of(spec.f, spec.beta, spec.n);

    if (spec.n == 2) {
        if (spec.n_theta < 16 || spec.n_phi < 32 || spec.n_phi % 2 != 0)
            throw ConfigError("flow: dim-2 grid needs n_theta >= 16 and even n_phi >= 32");
    } else {
        if (spec.n_points < 16) throw ConfigError("flow: dim-1 grid needs n_points >= 16");
    }
}

SphereGrid make_grid(const FlowSpec& spec)
{
    return spec.n == 1 ? grid_build_s1(spec.n_points) : grid_build_s2(spec.n_theta, spec.n_phi);
}

// ---------------------------------------------------------------------------
// polar filter

PolarFilter::PolarFilter(const SphereGrid& grid) : grid_(&grid)
{
    if (grid.dim == 1) {
        active_ = false;
        dphi_eff_.assign(1, grid.dphi);
        return;
    }
    const int nt = grid.n_theta, np = grid.n_phi;
    m_cut_.resize(nt);
    dphi_eff_.resize(nt);
    int max_m = 0;
    for (int i = 0; i < nt; ++i) {
        int m = static_cast<int>(std::floor(nt * grid.sin_theta(i)));
        m = std::max(2, std::min(np / 2, m));
        m_cut_[i] = m;
        dphi_eff_[i] = M_PI / m;
        if (m < np / 2) {
            active_ = true;
            max_m = std::max(max_m, m);
        }
    }
    if (!active_) return;
    cos_table_.resize(max_m + 1, np);
    sin_table_.resize(max_m + 1, np);
    for (int m = 0; m <= max_m; ++m)
        for (int j = 0; j < np; ++j) {
            cos_table_(m, j) = std::cos(m * grid.phi(j));
            sin_table_(m, j) = std::sin(m * grid.phi(j));
        }
}

void PolarFilter::apply(Eigen::ArrayXd& field) const
{
    if (!active_) return;
    const int nt = grid_->n_theta, np = grid_->n_phi;
    static thread_local Eigen::ArrayXd row, rebuilt;
    row.resize(np);
    rebuilt.resize(np);
    for (int i = 0; i < nt; ++i) {
        const int mc = m_cut_[i];
        if (mc >= np / 2) continue;
        double mean = 0.0;
        for (int j = 0; j < np; ++j) mean += field(i * np + j);
        mean /= np;
        for (int j = 0; j < np; ++j) row(j) = field(i * np + j) - mean;
        rebuilt.setZero();
        for (int m = 1; m <= mc; ++m) {
            double a = 0.0, b = 0.0;
            for (int j = 0; j < np; ++j) {
                a += row(j) * cos_table_(m, j);
                b += row(j) * sin_table_(m, j);
            }
            a *= 2.0 / np;
            b *= 2.0 / np;
            for (int j = 0; j < np; ++j)
                rebuilt(j) += a * cos_table_(m, j) + b * sin_table_(m, j);
        }
        for (int j = 0; j < np; ++j) field(i * np + j) = mean + rebuilt(j);
    }
}

// ---------------------------------------------------------------------------
// speed law

void eval_rhs(const GeometryFields& geo, const FlowSpec& spec, const PolarFilter& filter,
              RhsEval& out)
{
    const SphereGrid& g = *geo.grid;
    const int nn = g.n_nodes();
    out.speed.resize(nn);
    out.expand_speed.resize(nn);
    out.f_value.resize(nn);

    const ConeLabel cone = spec.f.cone(spec.n);
    const bool normalized = (spec.mode == FlowMode::Normalized);
    double dt_bound = std::numeric_limits<double>::infinity();

    KappaVector kap(spec.n);
    for (int idx = 0; idx < nn; ++idx) {
        for (int a = 0; a < spec.n; ++a) kap(a) = geo.kappa(idx, a);
        if (!cone_contains(kap, cone)) {
            std::ostringstream os;
            os << "curvature left the admissibility cone " << cone.to_string() << " at node "
               << idx << ": kappa = (";
            for (int a = 0; a < spec.n; ++a) os << (a ? ", " : "") << kap(a);
            os << ")";
            throw MonitorViolation(os.str(), 0.0, 0, idx);
        }
        const CurvatureEval fe = eval_curvature_function(spec.f, kap);
        const double u = geo.u(idx);
        const double fpow = std::pow(fe.value, -spec.beta);
        const double upow = std::pow(u, spec.alpha);
        const double expand = upow * fpow;
        out.f_value(idx) = fe.value;
        out.expand_speed(idx) = expand;
        out.speed(idx) = (normalized ? (expand - spec.eta * u) : expand) * geo.omega(idx);

        // local diffusion bound
        const double D =
            spec.beta * upow * std::pow(fe.value, -spec.beta - 1.0) * fe.gradient.maxCoeff();
        double lmin;
        if (g.dim == 1) {
            lmin = std::sqrt(geo.g_pp(idx)) * g.dphi;
        } else {
            const double lt = std::sqrt(geo.g_tt(idx)) * g.dtheta;
            const double lp = std::sqrt(geo.g_pp(idx)) * filter.dphi_eff(g.row_of(idx));
            lmin = std::min(lt, lp);
        }
        dt_bound = std::min(dt_bound, lmin * lmin / (2.0 * g.dim * D));
    }
    out.dt_bound = dt_bound;
}

Eigen::ArrayXd expansion_speed_field(const GeometryFields& geo, const FlowSpec& spec)
{
    const int nn = geo.n_nodes();
    Eigen::ArrayXd out(nn);
    for (int idx = 0; idx < nn; ++idx) {
        const KappaVector kap = geo.kappa_at(idx);
        const double f = eval_curvature_value(spec.f, kap);
        out(idx) = std::pow(geo.u(idx), spec.alpha) * std::pow(f, -spec.beta);
    }
    return out;
}

double dt_cfl(const GeometryFields& geo, const FlowSpec& spec, const PolarFilter& filter)
{
    RhsEval tmp;
    eval_rhs(geo, spec, filter, tmp);
    double dt = spec.safety * tmp.dt_bound;
    if (spec.mode == FlowMode::Normalized) dt = std::min(dt, spec.safety / spec.eta);
    return dt;
}

MonitorReport monitors(const FlowState& state, const FlowSpec& spec, const RhsEval& rhs,
                       const MonitorReport* previous)
{
    const GeometryFields& geo = state.geo;
    const int nn = geo.n_nodes();
    MonitorReport m;
    m.t = state.t;
    m.rho_min = geo.rho.minCoeff();
    m.rho_max = geo.rho.maxCoeff();
    m.dgamma_sq_max = geo.dgamma_sq.maxCoeff();
    m.u_min = geo.u.minCoeff();
    m.u_max = geo.u.maxCoeff();
    m.f_min = rhs.f_value.minCoeff();
    m.f_max = rhs.f_value.maxCoeff();
    m.kappa_max = geo.kappa.maxCoeff();
    m.cone_ok = true;  // eval_rhs would have thrown otherwise
    m.max_abs_speed = rhs.speed.abs().maxCoeff();

    double qmin = std::numeric_limits<double>::infinity(), qmax = 0.0;
    Eigen::ArrayXd fH(nn);
    for (int i = 0; i < nn; ++i) {
        const double Q = std::pow(geo.u(i), spec.alpha - 1.0) * std::pow(rhs.f_value(i), -spec.beta);
        qmin = std::min(qmin, Q);
        qmax = std::max(qmax, Q);
        const double total = (spec.mode == FlowMode::Normalized)
                                 ? rhs.expand_speed(i) - spec.eta * geo.u(i)
                                 : rhs.expand_speed(i);
        fH(i) = total * geo.mean_H(i);
    }
    m.Q_min = qmin;
    m.Q_max = qmax;
    m.area = surface_area(geo);
    m.volume = geo.ambient.is_euclidean() ? enclosed_volume(geo)
                                          : std::numeric_limits<double>::quiet_NaN();
    m.speed_H_integral = weighted_sum(fH, geo.measure_weight);

    if (previous && state.t > previous->t) {
        const double dA_dt = (m.area - previous->area) / (state.t - previous->t);
        const double mid = 0.5 * (m.speed_H_integral + previous->speed_H_integral);
        m.area_rate_residual = std::abs(dA_dt - mid) / m.area;
    }
    return m;
}

double step_rk2(FlowState& state, RhsEval& rhs_cache, const FlowSpec& spec,
                const PolarFilter& filter, double dt_request)
{
    static thread_local Eigen::ArrayXd rho_stage, rho_new;
    static thread_local GeometryFields geo_stage;
    static thread_local RhsEval k2, k_next;

    double dt = dt_request;
    for (int attempt = 0; attempt < 20; ++attempt) {
        try {
            rho_stage = state.rho + dt * rhs_cache.speed;
            filter.apply(rho_stage);
            geometry_from_rho(rho_stage, spec.ambient, *state.geo.grid, geo_stage);
            eval_rhs(geo_stage, spec, filter, k2);

            rho_new = state.rho + (0.5 * dt) * (rhs_cache.speed + k2.speed);
            filter.apply(rho_new);
            geometry_from_rho(rho_new, spec.ambient, *state.geo.grid, geo_stage);
            eval_rhs(geo_stage, spec, filter, k_next);
        } catch (const MonitorViolation&) {
            dt *= 0.5;
            continue;
        } catch (const DegeneracyError&) {
            dt *= 0.5;
            continue;
        } catch (const DomainError&) {
            dt *= 0.5;
            continue;
        }
        state.rho.swap(rho_new);
        std::swap(state.geo, geo_stage);
        std::swap(rhs_cache, k_next);
        state.t += dt;
        state.step += 1;
        return dt;
    }
    throw MonitorViolation("time step collapsed after 20 halvings (state left the admissibility "
                           "cone or lost star-shapedness)",
                           state.t, state.step, -1);
}

FlowResult run_flow(const FlowSpec& spec, const SphereGrid& grid, const Eigen::ArrayXd& rho0,
                    const FlowObserver& observer)
{
    FlowResult result;
    const PolarFilter filter(grid);

    FlowState& state = result.state;
    state.t = 0.0;
    state.step = 0;
    state.rho = rho0;
    filter.apply(state.rho);
    geometry_from_rho(state.rho, spec.ambient, grid, state.geo);

    RhsEval rhs;
    eval_rhs(state.geo, spec, filter, rhs);

    // checkpoints: sorted event times the integrator lands on exactly
    std::vector<double> events = spec.checkpoint_times;
    events.push_back(spec.t_end);
    std::sort(events.begin(), events.end());
    size_t next_event = 0;
    while (next_event < events.size() && events[next_event] <= 0.0) ++next_event;

    QuantitySeries& series = result.series;
    series.columns = {"t",     "tau",   "rho_min", "rho_max", "dgamma_sq_max",
                      "Q_min", "Q_max", "u_min",   "u_max",   "f_min",
                      "f_max", "kappa_max", "area", "volume"};

    MonitorReport prev_report;
    bool have_prev = false;

    auto tau_of = [&](double t) {
        if (spec.mode == FlowMode::Normalized) return t;
        return rescale_to_normalized(t, state.rho, spec).first;
    };

    auto record = [&](const MonitorReport& m) {
        series.rows.push_back({m.t, tau_of(m.t), m.rho_min, m.rho_max, m.dgamma_sq_max, m.Q_min,
                               m.Q_max, m.u_min, m.u_max, m.f_min, m.f_max, m.kappa_max, m.area,
                               m.volume});
        if (observer) observer(state, m);
    };

    auto track_overall = [&](const MonitorReport& m) {
        result.rho_min_overall = std::min(result.rho_min_overall, m.rho_min);
        result.rho_max_overall = std::max(result.rho_max_overall, m.rho_max);
        result.u_min_overall = std::min(result.u_min_overall, m.u_min);
        result.u_max_overall = std::max(result.u_max_overall, m.u_max);
        result.f_min_overall = std::min(result.f_min_overall, m.f_min);
        result.f_max_overall = std::max(result.f_max_overall, m.f_max);
        result.Q_min_overall = std::min(result.Q_min_overall, m.Q_min);
        result.Q_max_overall = std::max(result.Q_max_overall, m.Q_max);
    };

    MonitorReport m0 = monitors(state, spec, rhs, nullptr);
    result.initial_report = m0;
    result.rho_min_overall = m0.rho_min;
    result.rho_max_overall = m0.rho_max;
    result.u_min_overall = m0.u_min;
    result.u_max_overall = m0.u_max;
    result.f_min_overall = m0.f_min;
    result.f_max_overall = m0.f_max;
    result.Q_min_overall = m0.Q_min;
    result.Q_max_overall = m0.Q_max;
    record(m0);
    prev_report = m0;
    have_prev = true;

    double dgamma_prev = m0.dgamma_sq_max;

    auto converged_now = [&](const MonitorReport& m) {
        if (spec.mode != FlowMode::Normalized) return false;
        if (m.dgamma_sq_max >= spec.dgamma_tol) return false;
        const double scale = std::max(1.0, m.rho_max);
        if (m.max_abs_speed >= spec.stationary_tol * scale) return false;
        if (spec.ambient.is_euclidean() && (m.rho_max / m.rho_min - 1.0) >= spec.spread_tol)
            return false;
        return true;
    };

    if (converged_now(m0)) {
        result.converged = true;
        result.final_report = m0;
        result.limit_radius = 0.5 * (m0.rho_min + m0.rho_max);
        return result;
    }

    const long max_steps = 200'000'000L;
    while (state.t < spec.t_end && state.step < max_steps) {
        double dt = spec.safety * rhs.dt_bound;
        if (spec.mode == FlowMode::Normalized) dt = std::min(dt, spec.safety / spec.eta);
        bool at_event = false;
        if (next_event < events.size() && state.t + dt >= events[next_event] - 1e-15) {
            dt = events[next_event] - state.t;
            at_event = true;
        }

        try {
            const double dt_used = step_rk2(state, rhs, spec, filter, dt);
            if (at_event && dt_used == dt) {
                state.t = events[next_event];  // absorb accumulated round-off
                ++next_event;
            }
        } catch (MonitorViolation& v) {
            v.t = state.t;
            v.step = state.step;
            throw;
        }

        // per-step gradient-decay bookkeeping (cheap; geometry is cached)
        const double dg = state.geo.dgamma_sq.maxCoeff();
        result.max_dgamma_step_increase =
            std::max(result.max_dgamma_step_increase, dg - dgamma_prev);
        dgamma_prev = dg;

        const bool tick = (state.step % spec.cadence == 0);
        MonitorReport m = monitors(state, spec, rhs, have_prev ? &prev_report : nullptr);
        track_overall(m);
        const bool done = converged_now(m) || state.t >= spec.t_end - 1e-15;
        if (tick || done || at_event) {
            record(m);
            prev_report = m;
        }
        if (done) {
            result.converged = converged_now(m);
            result.final_report = m;
            break;
        }
    }
    if (result.series.rows.empty() || result.final_report.t != state.t) {
        MonitorReport m = monitors(state, spec, rhs, have_prev ? &prev_report : nullptr);
        result.final_report = m;
    }
    result.limit_radius = 0.5 * (result.final_report.rho_min + result.final_report.rho_max);
    return result;
}

std::pair<double, Eigen::ArrayXd> rescale_to_normalized(double t, const Eigen::ArrayXd& rho,
                                                        const FlowSpec& spec)
{
    if (!spec.ambient.is_euclidean())
        throw DomainError("rescale_to_normalized: Euclidean unnormalized runs only");
    const double s = spec.alpha + spec.beta;
    double scale, tau;
    if (std::abs(s - 1.0) <= 1e-12) {
        scale = std::exp(spec.eta * t);
        tau = t;
    } else {
        const double c = 1.0 - s;
        const double base = c * spec.eta * t + 1.0;
        if (base <= 0.0)
            throw DomainError("rescale_to_normalized: (1-alpha-beta) eta t + 1 <= 0 at t = " +
                              std::to_string(t));
        scale = std::pow(base, 1.0 / c);
        tau = std::log(base) / (c * spec.eta);
    }
    return {tau, Eigen::ArrayXd(rho / scale)};
}

}  // namespace starflow
