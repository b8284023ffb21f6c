#pragma once

#include <functional>
#include <optional>

#include "starflow/curvature.hpp"
#include "starflow/geometry.hpp"
#include "starflow/series.hpp"

namespace starflow {

enum class FlowMode { Unnormalized, Normalized };

/// Full description of one flow experiment: the radial graph evolves by
///   d rho / dt = u^alpha f^-beta * omega                     (Unnormalized)
///   d rho / dt = (u^alpha f^-beta - eta u) * omega           (Normalized)
/// with eta = f(1,...,1)^-beta, so the unit sphere is stationary under the
/// normalized Euclidean flow.
///
/// Unless allow_out_of_range is set, the exponents must satisfy
///   Euclidean:  alpha <= 0 < beta <= 1 - alpha
///   Hyperbolic: alpha <= 0 < beta <  1 - alpha, Normalized mode only.
/// Unnormalized mode is Euclidean-only in every case.
struct FlowSpec {
    Ambient ambient = Ambient::euclidean();
    int n = 2;  ///< hypersurface dimension (1 or 2)
    double alpha = 0.0;
    double beta = 1.0;
    CurvatureFunctionSpec f = CurvatureFunctionSpec::ratio(1, 0);
    FlowMode mode = FlowMode::Normalized;
    double eta = 0.0;  ///< derived by validate_flow_spec

    int n_theta = 64, n_phi = 128;  ///< dim-2 grid
    int n_points = 256;             ///< dim-1 grid

    double t_end = 1.0;
    double safety = 0.5;  ///< CFL safety factor in (0, 1]
    bool allow_out_of_range = false;
    int cadence = 10;  ///< steps between series rows

    /// Convergence thresholds for Normalized runs: the run stops once
    /// max |D gamma|^2 < dgamma_tol, the radial speed is below
    /// stationary_tol relative to the radius scale, and (Euclidean)
    /// rho_max/rho_min - 1 < spread_tol.
    double dgamma_tol = 1e-12;
    double spread_tol = 1e-10;
    double stationary_tol = 1e-12;

    /// Extra times at which the integrator lands exactly and reports a row.
    std::vector<double> checkpoint_times;
};

/// Range/consistency checks; fills in eta.  Throws ConfigError.
void validate_flow_spec(FlowSpec& spec);

/// Grid matching the spec's resolution fields.
SphereGrid make_grid(const FlowSpec& spec);

/// Longitudinal spectral cutoff applied near the poles so that the explicit
/// step is limited by the colatitude spacing instead of the polar
/// longitude-cell collapse.  Row i retains Fourier modes m <= m_cut(i) with
/// m_cut(i) = clamp(floor(n_theta * sin(theta_i)), 2, n_phi/2); rows with
/// m_cut = n_phi/2 are untouched.  Constants are preserved exactly.  The
/// effective longitude step used by the CFL bound is pi / m_cut(i).
class PolarFilter {
public:
    explicit PolarFilter(const SphereGrid& grid);
    void apply(Eigen::ArrayXd& field) const;
    double dphi_eff(int row) const { return dphi_eff_[row]; }
    bool active() const { return active_; }

private:
    const SphereGrid* grid_;
    bool active_ = false;
    std::vector<int> m_cut_;
    std::vector<double> dphi_eff_;
    Eigen::ArrayXXd cos_table_, sin_table_;  // (m, j)
};

struct MonitorReport {
    double t = 0.0;
    double rho_min = 0.0, rho_max = 0.0;
    double dgamma_sq_max = 0.0;
    double Q_min = 0.0, Q_max = 0.0;  ///< Q = u^(alpha-1) f^-beta
    double u_min = 0.0, u_max = 0.0;
    double f_min = 0.0, f_max = 0.0;
    double kappa_max = 0.0;
    bool cone_ok = true;
    double area_rate_residual = 0.0;
    double area = 0.0;
    double volume = 0.0;  ///< NaN for hyperbolic ambient
    double max_abs_speed = 0.0;
    double speed_H_integral = 0.0;  ///< integral of (total speed) * H dmu
};

struct FlowState {
    double t = 0.0;
    long step = 0;
    Eigen::ArrayXd rho;
    GeometryFields geo;
};

/// Nodewise evaluation of the speed law on a fixed geometry.
struct RhsEval {
    Eigen::ArrayXd speed;         ///< d rho/dt (includes omega factor)
    Eigen::ArrayXd expand_speed;  ///< u^alpha f^-beta (normal expansion factor)
    Eigen::ArrayXd f_value;
    double dt_bound = 0.0;  ///< min over nodes of l_min^2 / (2 dim D)
};

/// Evaluates the flow speed; throws MonitorViolation when kappa leaves the
/// admissibility cone at some node (the record names node and kappa).
void eval_rhs(const GeometryFields& geo, const FlowSpec& spec, const PolarFilter& filter,
              RhsEval& out);

/// The expansion factor u^alpha f^-beta as a field (for rate predictions).
Eigen::ArrayXd expansion_speed_field(const GeometryFields& geo, const FlowSpec& spec);

/// CFL-limited step size:  dt = safety * min_node[ l_min^2 / (2 dim D) ],
/// D = beta u^alpha f^(-beta-1) max_i df/dkappa_i, l_min the smallest
/// effective physical grid spacing at the node; Normalized mode additionally
/// caps dt at safety / eta.
double dt_cfl(const GeometryFields& geo, const FlowSpec& spec, const PolarFilter& filter);

MonitorReport monitors(const FlowState& state, const FlowSpec& spec, const RhsEval& rhs,
                       const MonitorReport* previous);

/// Heun (explicit trapezoidal) step with cone-violation backoff: if a stage
/// leaves the admissibility cone the step is retried with dt/2, at most 20
/// times.  Returns the accepted dt.
double step_rk2(FlowState& state, RhsEval& rhs_cache, const FlowSpec& spec,
                const PolarFilter& filter, double dt_request);

struct FlowResult {
    FlowState state;
    QuantitySeries series;  ///< monitor columns at cadence ticks
    bool converged = false;
    double limit_radius = 0.0;
    /// Worst per-step increase of max |D gamma|^2 over the whole run.
    double max_dgamma_step_increase = 0.0;
    /// Running extrema over every step (not just cadence ticks).
    double rho_min_overall = 0.0, rho_max_overall = 0.0;
    double u_min_overall = 0.0, u_max_overall = 0.0;
    double f_min_overall = 0.0, f_max_overall = 0.0;
    double Q_min_overall = 0.0, Q_max_overall = 0.0;
    MonitorReport initial_report, final_report;
};

using FlowObserver = std::function<void(const FlowState&, const MonitorReport&)>;

/// Integrate to t_end or until the convergence criterion fires.  The observer
/// (optional) runs at every recorded row.  Monitor violations propagate as
/// MonitorViolation.
FlowResult run_flow(const FlowSpec& spec, const SphereGrid& grid, const Eigen::ArrayXd& rho0,
                    const FlowObserver& observer = nullptr);

/// Rescaling of an Unnormalized Euclidean trajectory onto normalized time:
/// tau and rho_tilde = rho / scale(t), with
///   scale(t) = exp(eta t)                                if alpha+beta = 1
///   scale(t) = (1 + (1-alpha-beta) eta t)^{1/(1-alpha-beta)}  otherwise
/// (branch tolerance 1e-12 on |alpha+beta-1|).
std::pair<double, Eigen::ArrayXd> rescale_to_normalized(double t, const Eigen::ArrayXd& rho,
                                                        const FlowSpec& spec);

}  // namespace starflow
