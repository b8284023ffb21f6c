#pragma once

#include <Eigen/Dense>

#include "starflow/grid.hpp"

namespace starflow {

/// Covariant calculus with respect to the round metric e, using fourth-order
/// central differences.  The longitude direction is periodic; colatitude
/// stencils near the poles take ghost values from the same row shifted by
/// n_phi/2 (the antipodal meridian) with colatitude reflection.
///
/// `parity` is the sign a component picks up when continued across a pole:
/// +1 for scalars and phi-covector components, -1 for theta-covector
/// components (theta-theta and phi-phi tensor components are +1,
/// theta-phi components are -1).

void d_theta(const SphereGrid& g, const Eigen::ArrayXd& f, int parity, Eigen::ArrayXd& out);
void d_phi(const SphereGrid& g, const Eigen::ArrayXd& f, Eigen::ArrayXd& out);
void d2_theta(const SphereGrid& g, const Eigen::ArrayXd& f, int parity, Eigen::ArrayXd& out);
void d2_phi(const SphereGrid& g, const Eigen::ArrayXd& f, Eigen::ArrayXd& out);

/// Coordinate components of the covariant gradient D_i f.
/// dim 1: only `ph` is populated; `th` is zero-sized.
struct GradField {
    Eigen::ArrayXd th, ph;
};

/// Covariant Hessian components D_i D_j f (symmetric; dim 1: only `pp`).
struct HessField {
    Eigen::ArrayXd tt, tp, pp;
};

GradField grad(const SphereGrid& g, const Eigen::ArrayXd& f);
void grad(const SphereGrid& g, const Eigen::ArrayXd& f, GradField& out);

HessField hess(const SphereGrid& g, const Eigen::ArrayXd& f);
void hess(const SphereGrid& g, const Eigen::ArrayXd& f, HessField& out);

/// e^{ij} v_i v_j at one node.
double norm_sq_e(const SphereGrid& g, int node, double v_th, double v_ph);

/// Nodewise e^{ij} v_i v_j for a covector field.
Eigen::ArrayXd norm_sq_e(const SphereGrid& g, const GradField& v);

/// Weighted sum of a nodewise density against the round measure,
/// accumulated in node order with compensated (Neumaier) summation.
double quadrature_integrate(const SphereGrid& g, const Eigen::ArrayXd& density);

/// Compensated sum of elementwise product; used for body integrals where the
/// measure weight already includes the grid weight.
double weighted_sum(const Eigen::ArrayXd& values, const Eigen::ArrayXd& weights);

}  // namespace starflow
