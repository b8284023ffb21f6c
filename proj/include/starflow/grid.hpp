#pragma once

#include <Eigen/Dense>

#include "starflow/errors.hpp"

namespace starflow {

/// Structured parameter grid on the unit sphere.
///
/// dim 1: uniform angles phi_j = 2*pi*j/n_phi on the circle.
/// dim 2: pole-offset latitude-longitude grid,
///        theta_i = (i + 1/2) * pi / n_theta,  phi_j = 2*pi*j / n_phi,
///        so no node sits on a pole.  n_phi must be even so the antipodal
///        longitude j + n_phi/2 exists for the pole ghost rows.
///
/// Quadrature weights integrate against the round measure; the colatitude
/// factor uses the interpolatory rule on the offset nodes (exact for zonal
/// polynomials up to degree n_theta-1, positive weights) and the longitude
/// factor is the uniform trapezoidal weight.  The weights are normalized so
/// they sum to exactly 2*pi (dim 1) or 4*pi (dim 2).
struct SphereGrid {
    int dim = 2;
    int n_theta = 1;  ///< 1 when dim == 1
    int n_phi = 0;
    double dtheta = 0.0;
    double dphi = 0.0;

    Eigen::ArrayXd theta;         ///< per row (dim 2); single zero entry for dim 1
    Eigen::ArrayXd phi;           ///< per column
    Eigen::ArrayXd sin_theta, cos_theta;
    Eigen::ArrayXd theta_weight;  ///< per-row colatitude weight (dim 2)
    Eigen::ArrayXd weight;        ///< per-node round-measure weight

    int n_nodes() const { return n_theta * n_phi; }
    int node_index(int i, int j) const { return i * n_phi + j; }
    int row_of(int node) const { return node / n_phi; }
    int col_of(int node) const { return node % n_phi; }
};

/// dim 1 grid; n_points >= 16.
SphereGrid grid_build_s1(int n_points);

/// dim 2 grid; n_theta >= 16, n_phi >= 32 and even.
SphereGrid grid_build_s2(int n_theta, int n_phi);

/// Dispatch on dim: (dim 1, n_points) or (dim 2, n_theta, n_phi).
SphereGrid grid_build(int dim, int res_a, int res_b = 0);

/// Scalar samples on a grid.
struct ScalarField {
    const SphereGrid* grid = nullptr;
    Eigen::ArrayXd data;
};

}  // namespace starflow
