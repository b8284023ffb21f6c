#pragma once

#include <Eigen/Dense>

#include "starflow/ambient.hpp"
#include "starflow/calculus.hpp"
#include "starflow/grid.hpp"
#include "starflow/symfun.hpp"

namespace starflow {

/// Full extrinsic geometry of the radial graph rho over the sphere grid.
///
/// The graph variable gamma (d gamma/d rho = 1/phi) turns the induced metric
/// and second fundamental form into
///   g_ij = phi^2 (e_ij + gamma_i gamma_j)
///   h_ij = (phi/omega) (-gamma_ij + phi' gamma_i gamma_j + phi' e_ij)
/// with omega = sqrt(1 + |D gamma|^2) and support function u = phi/omega.
///
/// Tensor components are stored per node in (theta, phi) coordinates; dim 1
/// uses only the `pp` slots.  `measure_weight` is sqrt(det g) relative to the
/// grid coordinates times the coordinate cell weight, so body integrals are
/// plain weighted sums:  integral f dmu = sum_i f_i * measure_weight_i.
/// (sqrt(det g) = phi^n * omega * sqrt(det e), and the sqrt(det e) factor is
/// already inside the grid weight.)
struct GeometryFields {
    const SphereGrid* grid = nullptr;
    Ambient ambient;

    Eigen::ArrayXd rho, gamma;
    Eigen::ArrayXd phi, phi_prime;  ///< phi(rho), phi'(rho) nodewise
    GradField dgamma;
    HessField ddgamma;
    Eigen::ArrayXd dgamma_sq;  ///< |D gamma|^2_e
    Eigen::ArrayXd omega, u;

    Eigen::ArrayXd g_tt, g_tp, g_pp;
    Eigen::ArrayXd ginv_tt, ginv_tp, ginv_pp;
    Eigen::ArrayXd h_tt, h_tp, h_pp;

    Eigen::ArrayXXd kappa;  ///< (n_nodes x n), ascending per node
    Eigen::ArrayXd mean_H;
    Eigen::ArrayXd measure_weight;

    int n() const { return grid->dim; }
    int n_nodes() const { return grid->n_nodes(); }

    KappaVector kappa_at(int node) const
    {
        KappaVector k(n());
        for (int a = 0; a < n(); ++a) k(a) = kappa(node, a);
        return k;
    }
};

/// Assemble the geometry from a radial function.  Throws DomainError for
/// nonpositive rho and DegeneracyError (naming the node) when the metric is
/// numerically singular or star-shapedness is lost.
GeometryFields geometry_from_rho(const Eigen::ArrayXd& rho, const Ambient& ambient,
                                 const SphereGrid& grid);
void geometry_from_rho(const Eigen::ArrayXd& rho, const Ambient& ambient, const SphereGrid& grid,
                       GeometryFields& out);

/// Nodewise gamma with d gamma/d rho = 1/phi (log rho / log tanh(rho/2)).
Eigen::ArrayXd gamma_of_rho(const Eigen::ArrayXd& rho, const Ambient& ambient);

/// The support function u = phi/omega as a field.
ScalarField support_function(const GeometryFields& f);

/// Principal curvatures of the symmetric pencil (h, g) at one node,
/// ascending; closed form for dim <= 2.  g must be positive definite.
KappaVector principal_curvatures(double h_tt, double h_tp, double h_pp, double g_tt, double g_tp,
                                 double g_pp);
KappaVector principal_curvatures_1d(double h_pp, double g_pp);

/// g-orthonormal principal directions at a node (columns = coordinate
/// components of the frame vectors, matched to ascending kappa).  Falls back
/// to a g-orthonormalized coordinate frame at umbilical nodes.
Eigen::Matrix2d principal_frame(const GeometryFields& f, int node);

/// Relative defect of the Minkowski identity
///   integral u p_k dmu = integral phi' p_{k-1} dmu ,   1 <= k <= n.
double minkowski_residual(const GeometryFields& f, int k);

/// Rebuilds h_ij from the rho-form
///   omega^{-1} h_ij = -rho_{;ij} + (phi'/phi) g_ij - (phi'/phi) rho_i rho_j
/// (covariant derivatives of the induced metric, Christoffels assembled
/// numerically) and returns the max relative deviation from the gamma-form.
double cross_check_h(const GeometryFields& f);

/// integral of 1 dmu over the body.
double surface_area(const GeometryFields& f);

/// Euclidean enclosed volume via the divergence identity
/// V = (1/(n+1)) integral u dmu.  Throws DomainError for hyperbolic ambient.
double enclosed_volume(const GeometryFields& f);

}  // namespace starflow
