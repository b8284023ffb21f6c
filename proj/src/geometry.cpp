#include "starflow/geometry.hpp"

#include <cmath>

namespace starflow {

Eigen::ArrayXd gamma_of_rho(const Eigen::ArrayXd& rho, const Ambient& ambient)
{
    const int n = static_cast<int>(rho.size());
    Eigen::ArrayXd out(n);
    for (int i = 0; i < n; ++i) {
        if (!(rho(i) > 0.0))
            throw DomainError("gamma_of_rho: rho must be positive, got " + std::to_string(rho(i)) +
                              " at node " + std::to_string(i));
        out(i) = ambient.gamma_of_rho(rho(i));
    }
    return out;
}

KappaVector principal_curvatures_1d(double h_pp, double g_pp)
{
    if (!(g_pp > 0.0)) throw DegeneracyError("metric not positive definite", -1);
    KappaVector k(1);
    k(0) = h_pp / g_pp;
    return k;
}

KappaVector principal_curvatures(double h_tt, double h_tp, double h_pp, double g_tt, double g_tp,
                                 double g_pp)
{
    const double detg = g_tt * g_pp - g_tp * g_tp;
    if (!(g_tt > 0.0) || !(detg > 0.0))
        throw DegeneracyError("metric not positive definite", -1);
    // Eigenvalues of the shape operator S = g^{-1} h.  Going through S keeps
    // the discriminant in the cancellation-free form (S00-S11)^2 + 4 S01 S10,
    // which vanishes cleanly at umbilic points instead of losing half the
    // mantissa to tr^2 - 4 det cancellation.
    const double s00 = (g_pp * h_tt - g_tp * h_tp) / detg;
    const double s01 = (g_pp * h_tp - g_tp * h_pp) / detg;
    const double s10 = (g_tt * h_tp - g_tp * h_tt) / detg;
    const double s11 = (g_tt * h_pp - g_tp * h_tp) / detg;
    const double mean = 0.5 * (s00 + s11);
    const double diff = 0.5 * (s00 - s11);
    const double disc = diff * diff + s01 * s10;  // real for g-symmetric pencils
    const double s = std::sqrt(std::max(0.0, disc));
    KappaVector k(2);
    k(0) = mean - s;
    k(1) = mean + s;
    return k;
}

void geometry_from_rho(const Eigen::ArrayXd& rho, const Ambient& ambient, const SphereGrid& grid,
                       GeometryFields& f)
{
    const int nn = grid.n_nodes();
    if (static_cast<int>(rho.size()) != nn)
        throw DomainError("geometry_from_rho: field size does not match grid");
    f.grid = &grid;
    f.ambient = ambient;
    f.rho = rho;

    f.gamma.resize(nn);
    f.phi.resize(nn);
    f.phi_prime.resize(nn);
    for (int i = 0; i < nn; ++i) {
        if (!(rho(i) > 0.0))
            throw DomainError("geometry_from_rho: rho must be positive, got " +
                              std::to_string(rho(i)) + " at node " + std::to_string(i));
        f.gamma(i) = ambient.gamma_of_rho(rho(i));
        f.phi(i) = ambient.phi(rho(i));
        f.phi_prime(i) = ambient.phi_prime(rho(i));
    }

    grad(grid, f.gamma, f.dgamma);
    hess(grid, f.gamma, f.ddgamma);
    f.dgamma_sq = norm_sq_e(grid, f.dgamma);

    f.omega = (1.0 + f.dgamma_sq).sqrt();
    f.u = f.phi / f.omega;

    const int dim = grid.dim;
    f.kappa.resize(nn, dim);
    f.mean_H.resize(nn);
    f.measure_weight.resize(nn);

    if (dim == 1) {
        f.g_pp.resize(nn);
        f.ginv_pp.resize(nn);
        f.h_pp.resize(nn);
        f.g_tt.resize(0);
        f.g_tp.resize(0);
        f.h_tt.resize(0);
        f.h_tp.resize(0);
        f.ginv_tt.resize(0);
        f.ginv_tp.resize(0);
        for (int idx = 0; idx < nn; ++idx) {
            const double gp = f.dgamma.ph(idx);
            const double phi2 = f.phi(idx) * f.phi(idx);
            const double gpp = phi2 * (1.0 + gp * gp);
            const double hpp =
                f.phi(idx) / f.omega(idx) *
                (-f.ddgamma.pp(idx) + f.phi_prime(idx) * gp * gp + f.phi_prime(idx));
            f.g_pp(idx) = gpp;
            f.ginv_pp(idx) = 1.0 / gpp;
            f.h_pp(idx) = hpp;
            if (!(gpp > 0.0) || !(f.u(idx) > 1e-12))
                throw DegeneracyError("degenerate geometry (node " + std::to_string(idx) + ")",
                                      idx);
            const double k = hpp / gpp;
            f.kappa(idx, 0) = k;
            f.mean_H(idx) = k;
            f.measure_weight(idx) = grid.weight(idx) * f.phi(idx) * f.omega(idx);
        }
        return;
    }

    f.g_tt.resize(nn);
    f.g_tp.resize(nn);
    f.g_pp.resize(nn);
    f.ginv_tt.resize(nn);
    f.ginv_tp.resize(nn);
    f.ginv_pp.resize(nn);
    f.h_tt.resize(nn);
    f.h_tp.resize(nn);
    f.h_pp.resize(nn);

    const int np = grid.n_phi;
    for (int i = 0; i < grid.n_theta; ++i) {
        const double s = grid.sin_theta(i);
        const double s2 = s * s;
        for (int j = 0; j < np; ++j) {
            const int idx = i * np + j;
            const double gt = f.dgamma.th(idx);
            const double gp = f.dgamma.ph(idx);
            const double phi = f.phi(idx);
            const double php = f.phi_prime(idx);
            const double phi2 = phi * phi;
            const double om = f.omega(idx);
            const double om2 = om * om;

            // e_ij = diag(1, sin^2), raised components gamma^i = e^{ik} gamma_k
            const double gt_up = gt;
            const double gp_up = gp / s2;

            const double g_tt = phi2 * (1.0 + gt * gt);
            const double g_tp = phi2 * gt * gp;
            const double g_pp = phi2 * (s2 + gp * gp);

            const double ginv_tt = (1.0 - gt_up * gt_up / om2) / phi2;
            const double ginv_tp = (-gt_up * gp_up / om2) / phi2;
            const double ginv_pp = (1.0 / s2 - gp_up * gp_up / om2) / phi2;

            const double h_tt = phi / om * (-f.ddgamma.tt(idx) + php * gt * gt + php);
            const double h_tp = phi / om * (-f.ddgamma.tp(idx) + php * gt * gp);
            const double h_pp = phi / om * (-f.ddgamma.pp(idx) + php * gp * gp + php * s2);

            f.g_tt(idx) = g_tt;
            f.g_tp(idx) = g_tp;
            f.g_pp(idx) = g_pp;
            f.ginv_tt(idx) = ginv_tt;
            f.ginv_tp(idx) = ginv_tp;
            f.ginv_pp(idx) = ginv_pp;
            f.h_tt(idx) = h_tt;
            f.h_tp(idx) = h_tp;
            f.h_pp(idx) = h_pp;

            const double detg = g_tt * g_pp - g_tp * g_tp;
            if (!(detg > 0.0) || !(g_tt > 0.0) || !(f.u(idx) > 1e-12) || !(om > 0.0))
                throw DegeneracyError("degenerate geometry (node " + std::to_string(idx) + ")",
                                      idx);

            const KappaVector k = principal_curvatures(h_tt, h_tp, h_pp, g_tt, g_tp, g_pp);
            f.kappa(idx, 0) = k(0);
            f.kappa(idx, 1) = k(1);
            f.mean_H(idx) = k(0) + k(1);

            // sqrt(det g) = phi^2 * omega * sin(theta); the grid weight already
            // carries the sin(theta) d theta d phi cell mass.
            f.measure_weight(idx) = grid.weight(idx) * phi2 * om;
        }
    }
}

GeometryFields geometry_from_rho(const Eigen::ArrayXd& rho, const Ambient& ambient,
                                 const SphereGrid& grid)
{
    GeometryFields f;
    geometry_from_rho(rho, ambient, grid, f);
    return f;
}

ScalarField support_function(const GeometryFields& f)
{
    return ScalarField{f.grid, f.u};
}

Eigen::Matrix2d principal_frame(const GeometryFields& f, int node)
{
    // Shape operator S = g^{-1} h in coordinates.
    const double s_tt = f.ginv_tt(node) * f.h_tt(node) + f.ginv_tp(node) * f.h_tp(node);
    const double s_tp = f.ginv_tt(node) * f.h_tp(node) + f.ginv_tp(node) * f.h_pp(node);
    const double s_pt = f.ginv_tp(node) * f.h_tt(node) + f.ginv_pp(node) * f.h_tp(node);
    const double s_pp = f.ginv_tp(node) * f.h_tp(node) + f.ginv_pp(node) * f.h_pp(node);
    const double k1 = f.kappa(node, 0), k2 = f.kappa(node, 1);

    Eigen::Matrix2d frame;
    const double scale = std::abs(k1) + std::abs(k2);
    if (std::abs(k2 - k1) <= 1e-9 * std::max(scale, 1e-30)) {
        // Umbilical: any g-orthonormal frame diagonalizes the Newton tensor.
        frame.col(0) << 1.0, 0.0;
        frame.col(1) << -f.g_tp(node) / f.g_tt(node), 1.0;
    } else {
        // Eigenvectors of S for k1, k2: rows of (S - k I) give the kernel.
        auto eigvec = [&](double k) {
            Eigen::Vector2d v;
            const double a = s_tt - k, b = s_tp, c = s_pt, d = s_pp - k;
            if (std::abs(a) + std::abs(b) >= std::abs(c) + std::abs(d))
                v << -b, a;
            else
                v << -d, c;
            if (v.norm() == 0.0) v << 1.0, 0.0;
            return v;
        };
        frame.col(0) = eigvec(k1);
        frame.col(1) = eigvec(k2);
    }
    // g-normalize columns.
    for (int c = 0; c < 2; ++c) {
        const double vt = frame(0, c), vp = frame(1, c);
        const double q = f.g_tt(node) * vt * vt + 2.0 * f.g_tp(node) * vt * vp +
                         f.g_pp(node) * vp * vp;
        frame.col(c) /= std::sqrt(q);
    }
    return frame;
}

double surface_area(const GeometryFields& f)
{
    return weighted_sum(Eigen::ArrayXd::Ones(f.n_nodes()), f.measure_weight);
}

double enclosed_volume(const GeometryFields& f)
{
    if (!f.ambient.is_euclidean())
        throw DomainError("enclosed_volume: defined for the Euclidean ambient only");
    return weighted_sum(f.u, f.measure_weight) / (f.n() + 1);
}

double minkowski_residual(const GeometryFields& f, int k)
{
    const int n = f.n();
    if (k < 1 || k > n)
        throw DomainError("minkowski_residual: k = " + std::to_string(k) + " outside [1, " +
                          std::to_string(n) + "]");
    const int nn = f.n_nodes();
    Eigen::ArrayXd lhs(nn), rhs(nn);
    for (int idx = 0; idx < nn; ++idx) {
        const KappaVector kap = f.kappa_at(idx);
        lhs(idx) = f.u(idx) * p_k(kap, k);
        rhs(idx) = f.phi_prime(idx) * p_k(kap, k - 1);
    }
    const double a = weighted_sum(lhs, f.measure_weight);
    const double b = weighted_sum(rhs, f.measure_weight);
    if (b == 0.0) throw DegeneracyError("minkowski_residual: vanishing reference integral", -1);
    return (a - b) / b;
}

double cross_check_h(const GeometryFields& f)
{
    const SphereGrid& g = *f.grid;
    const int nn = f.n_nodes();

    if (g.dim == 1) {
        // Single coordinate: Gamma^p_pp = d_p g_pp / (2 g_pp).
        Eigen::ArrayXd rho_p, rho_pp, dg_pp;
        d_phi(g, f.rho, rho_p);
        d2_phi(g, f.rho, rho_pp);
        d_phi(g, f.g_pp, dg_pp);
        double worst = 0.0;
        for (int i = 0; i < nn; ++i) {
            const double christ = 0.5 * dg_pp(i) / f.g_pp(i);
            const double cov_hess = rho_pp(i) - christ * rho_p(i);
            const double ratio = f.phi_prime(i) / f.phi(i);
            const double h_alt =
                f.omega(i) * (-cov_hess + ratio * f.g_pp(i) - ratio * rho_p(i) * rho_p(i));
            const double scale = std::abs(f.h_pp(i)) + 1e-300;
            worst = std::max(worst, std::abs(h_alt - f.h_pp(i)) / scale);
        }
        return worst;
    }

    // Metric derivatives with pole parity: g_tt, g_pp even; g_tp odd.
    Eigen::ArrayXd gtt_t, gtt_p, gtp_t, gtp_p, gpp_t, gpp_p;
    d_theta(g, f.g_tt, +1, gtt_t);
    d_phi(g, f.g_tt, gtt_p);
    d_theta(g, f.g_tp, -1, gtp_t);
    d_phi(g, f.g_tp, gtp_p);
    d_theta(g, f.g_pp, +1, gpp_t);
    d_phi(g, f.g_pp, gpp_p);

    Eigen::ArrayXd rho_t, rho_p, rho_tt, rho_pp, rho_tp_raw;
    d_theta(g, f.rho, +1, rho_t);
    d_phi(g, f.rho, rho_p);
    d2_theta(g, f.rho, +1, rho_tt);
    d2_phi(g, f.rho, rho_pp);
    Eigen::ArrayXd tmp;
    d_phi(g, f.rho, tmp);
    d_theta(g, tmp, +1, rho_tp_raw);

    double worst = 0.0;
    for (int idx = 0; idx < nn; ++idx) {
        // Christoffels of the induced metric, Gamma^k_ij = g^{kl} [ij, l].
        const double d_t[3] = {gtt_t(idx), gtp_t(idx), gpp_t(idx)};
        const double d_p[3] = {gtt_p(idx), gtp_p(idx), gpp_p(idx)};
        // First-kind symbols [ij,l] with (i,j) in {tt, tp, pp}, l in {t,p}.
        const double br_tt_t = 0.5 * d_t[0];
        const double br_tt_p = d_t[1] - 0.5 * d_p[0];
        const double br_tp_t = 0.5 * d_p[0];
        const double br_tp_p = 0.5 * d_t[2];
        const double br_pp_t = d_p[1] - 0.5 * d_t[2];
        const double br_pp_p = 0.5 * d_p[2];

        auto christ = [&](double br_t, double br_p, double inv_kt, double inv_kp) {
            return inv_kt * br_t + inv_kp * br_p;
        };
        const double G_t_tt = christ(br_tt_t, br_tt_p, f.ginv_tt(idx), f.ginv_tp(idx));
        const double G_p_tt = christ(br_tt_t, br_tt_p, f.ginv_tp(idx), f.ginv_pp(idx));
        const double G_t_tp = christ(br_tp_t, br_tp_p, f.ginv_tt(idx), f.ginv_tp(idx));
        const double G_p_tp = christ(br_tp_t, br_tp_p, f.ginv_tp(idx), f.ginv_pp(idx));
        const double G_t_pp = christ(br_pp_t, br_pp_p, f.ginv_tt(idx), f.ginv_tp(idx));
        const double G_p_pp = christ(br_pp_t, br_pp_p, f.ginv_tp(idx), f.ginv_pp(idx));

        const double cov_tt = rho_tt(idx) - G_t_tt * rho_t(idx) - G_p_tt * rho_p(idx);
        const double cov_tp = rho_tp_raw(idx) - G_t_tp * rho_t(idx) - G_p_tp * rho_p(idx);
        const double cov_pp = rho_pp(idx) - G_t_pp * rho_t(idx) - G_p_pp * rho_p(idx);

        const double ratio = f.phi_prime(idx) / f.phi(idx);
        const double h_alt_tt =
            f.omega(idx) * (-cov_tt + ratio * f.g_tt(idx) - ratio * rho_t(idx) * rho_t(idx));
        const double h_alt_tp =
            f.omega(idx) * (-cov_tp + ratio * f.g_tp(idx) - ratio * rho_t(idx) * rho_p(idx));
        const double h_alt_pp =
            f.omega(idx) * (-cov_pp + ratio * f.g_pp(idx) - ratio * rho_p(idx) * rho_p(idx));

        const double scale =
            std::abs(f.h_tt(idx)) + std::abs(f.h_tp(idx)) + std::abs(f.h_pp(idx)) + 1e-300;
        const double dev = std::max({std::abs(h_alt_tt - f.h_tt(idx)),
                                     std::abs(h_alt_tp - f.h_tp(idx)),
                                     std::abs(h_alt_pp - f.h_pp(idx))});
        worst = std::max(worst, dev / scale);
    }
    return worst;
}

}  // namespace starflow
