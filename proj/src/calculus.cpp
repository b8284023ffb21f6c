#include "starflow/calculus.hpp"

#include <cmath>

namespace starflow {

namespace {

// Value of f at colatitude row index `i` (which may be -1, -2 or
// n_theta, n_theta+1) and longitude j, applying the pole closure.
inline double at_row(const SphereGrid& g, const Eigen::ArrayXd& f, int parity, int i, int j)
{
    double sign = 1.0;
    if (i < 0) {
        i = -i - 1;
        j += g.n_phi / 2;
        sign = parity;
    } else if (i >= g.n_theta) {
        i = 2 * g.n_theta - 1 - i;
        j += g.n_phi / 2;
        sign = parity;
    }
    if (j >= g.n_phi) j -= g.n_phi;
    return sign * f(i * g.n_phi + j);
}

}  // namespace

void d_theta(const SphereGrid& g, const Eigen::ArrayXd& f, int parity, Eigen::ArrayXd& out)
{
    out.resize(g.n_nodes());
    if (g.dim == 1) {
        out.setZero();
        return;
    }
    const double c = 1.0 / (12.0 * g.dtheta);
    const int nt = g.n_theta, np = g.n_phi;
    for (int i = 0; i < nt; ++i) {
        const bool interior = (i >= 2 && i < nt - 2);
        for (int j = 0; j < np; ++j) {
            double fm2, fm1, fp1, fp2;
            if (interior) {
                fm2 = f((i - 2) * np + j);
                fm1 = f((i - 1) * np + j);
                fp1 = f((i + 1) * np + j);
                fp2 = f((i + 2) * np + j);
            } else {
                fm2 = at_row(g, f, parity, i - 2, j);
                fm1 = at_row(g, f, parity, i - 1, j);
                fp1 = at_row(g, f, parity, i + 1, j);
                fp2 = at_row(g, f, parity, i + 2, j);
            }
            out(i * np + j) = c * (8.0 * (fp1 - fm1) - (fp2 - fm2));
        }
    }
}

void d2_theta(const SphereGrid& g, const Eigen::ArrayXd& f, int parity, Eigen::ArrayXd& out)
{
    out.resize(g.n_nodes());
    if (g.dim == 1) {
        out.setZero();
        return;
    }
    const double c = 1.0 / (12.0 * g.dtheta * g.dtheta);
    const int nt = g.n_theta, np = g.n_phi;
    for (int i = 0; i < nt; ++i) {
        const bool interior = (i >= 2 && i < nt - 2);
        for (int j = 0; j < np; ++j) {
            const double f0 = f(i * np + j);
            double fm2, fm1, fp1, fp2;
            if (interior) {
                fm2 = f((i - 2) * np + j);
                fm1 = f((i - 1) * np + j);
                fp1 = f((i + 1) * np + j);
                fp2 = f((i + 2) * np + j);
            } else {
                fm2 = at_row(g, f, parity, i - 2, j);
                fm1 = at_row(g, f, parity, i - 1, j);
                fp1 = at_row(g, f, parity, i + 1, j);
                fp2 = at_row(g, f, parity, i + 2, j);
            }
            out(i * np + j) =
                c * (16.0 * ((fp1 - f0) + (fm1 - f0)) - ((fp2 - f0) + (fm2 - f0)));
        }
    }
}

void d_phi(const SphereGrid& g, const Eigen::ArrayXd& f, Eigen::ArrayXd& out)
{
    out.resize(g.n_nodes());
    const int np = g.n_phi;
    const double c = 1.0 / (12.0 * g.dphi);
    for (int i = 0; i < g.n_theta; ++i) {
        const int base = i * np;
        for (int j = 0; j < np; ++j) {
            const int jm2 = (j - 2 + np) % np, jm1 = (j - 1 + np) % np;
            const int jp1 = (j + 1) % np, jp2 = (j + 2) % np;
            out(base + j) = c * (8.0 * (f(base + jp1) - f(base + jm1)) -
                                 (f(base + jp2) - f(base + jm2)));
        }
    }
}

void d2_phi(const SphereGrid& g, const Eigen::ArrayXd& f, Eigen::ArrayXd& out)
{
    out.resize(g.n_nodes());
    const int np = g.n_phi;
    const double c = 1.0 / (12.0 * g.dphi * g.dphi);
    for (int i = 0; i < g.n_theta; ++i) {
        const int base = i * np;
        for (int j = 0; j < np; ++j) {
            const int jm2 = (j - 2 + np) % np, jm1 = (j - 1 + np) % np;
            const int jp1 = (j + 1) % np, jp2 = (j + 2) % np;
            const double f0 = f(base + j);
            out(base + j) = c * (16.0 * ((f(base + jp1) - f0) + (f(base + jm1) - f0)) -
                                 ((f(base + jp2) - f0) + (f(base + jm2) - f0)));
        }
    }
}

void grad(const SphereGrid& g, const Eigen::ArrayXd& f, GradField& out)
{
    if (g.dim == 1) {
        out.th.resize(0);
        d_phi(g, f, out.ph);
        return;
    }
    d_theta(g, f, +1, out.th);
    d_phi(g, f, out.ph);
}

GradField grad(const SphereGrid& g, const Eigen::ArrayXd& f)
{
    GradField out;
    grad(g, f, out);
    return out;
}

void hess(const SphereGrid& g, const Eigen::ArrayXd& f, HessField& out)
{
    if (g.dim == 1) {
        out.tt.resize(0);
        out.tp.resize(0);
        d2_phi(g, f, out.pp);
        return;
    }
    // Covariant Hessian on the round sphere:
    //   D_tt = f_tt
    //   D_tp = f_tp - cot(theta) f_p
    //   D_pp = f_pp + sin(theta)cos(theta) f_t
    Eigen::ArrayXd ft, fp, ftp;
    d_theta(g, f, +1, ft);
    d_phi(g, f, fp);
    d2_theta(g, f, +1, out.tt);
    d2_phi(g, f, out.pp);
    d_theta(g, fp, +1, ftp);  // d/dtheta of a phi-derivative keeps parity +1

    out.tp.resize(g.n_nodes());
    const int np = g.n_phi;
    for (int i = 0; i < g.n_theta; ++i) {
        const double cot = g.cos_theta(i) / g.sin_theta(i);
        const double sc = g.sin_theta(i) * g.cos_theta(i);
        for (int j = 0; j < np; ++j) {
            const int idx = i * np + j;
            out.tp(idx) = ftp(idx) - cot * fp(idx);
            out.pp(idx) += sc * ft(idx);
        }
    }
}

HessField hess(const SphereGrid& g, const Eigen::ArrayXd& f)
{
    HessField out;
    hess(g, f, out);
    return out;
}

double norm_sq_e(const SphereGrid& g, int node, double v_th, double v_ph)
{
    if (g.dim == 1) return v_ph * v_ph;
    const double s = g.sin_theta(g.row_of(node));
    return v_th * v_th + v_ph * v_ph / (s * s);
}

Eigen::ArrayXd norm_sq_e(const SphereGrid& g, const GradField& v)
{
    Eigen::ArrayXd out(g.n_nodes());
    if (g.dim == 1) {
        out = v.ph.square();
        return out;
    }
    const int np = g.n_phi;
    for (int i = 0; i < g.n_theta; ++i) {
        const double inv_s2 = 1.0 / (g.sin_theta(i) * g.sin_theta(i));
        for (int j = 0; j < np; ++j) {
            const int idx = i * np + j;
            out(idx) = v.th(idx) * v.th(idx) + v.ph(idx) * v.ph(idx) * inv_s2;
        }
    }
    return out;
}

double weighted_sum(const Eigen::ArrayXd& values, const Eigen::ArrayXd& weights)
{
    // Neumaier variant of Kahan summation, fixed node order.
    double sum = 0.0, comp = 0.0;
    const int n = static_cast<int>(values.size());
    for (int i = 0; i < n; ++i) {
        const double term = values(i) * weights(i);
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double quadrature_integrate(const SphereGrid& g, const Eigen::ArrayXd& density)
{
    return weighted_sum(density, g.weight);
}

}  // namespace starflow
