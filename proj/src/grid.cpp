#include "starflow/grid.hpp"

#include <cmath>

namespace starflow {

SphereGrid grid_build_s1(int n_points)
{
    if (n_points < 16)
        throw ConfigError("grid: dim-1 n_points must be >= 16, got " + std::to_string(n_points));
    SphereGrid g;
    g.dim = 1;
    g.n_theta = 1;
    g.n_phi = n_points;
    g.dtheta = 0.0;
    g.dphi = 2.0 * M_PI / n_points;
    g.theta = Eigen::ArrayXd::Zero(1);
    g.sin_theta = Eigen::ArrayXd::Ones(1);
    g.cos_theta = Eigen::ArrayXd::Zero(1);
    g.theta_weight = Eigen::ArrayXd::Ones(1);
    g.phi.resize(n_points);
    for (int j = 0; j < n_points; ++j) g.phi(j) = g.dphi * j;
    g.weight = Eigen::ArrayXd::Constant(n_points, 2.0 * M_PI / n_points);
    return g;
}

SphereGrid grid_build_s2(int n_theta, int n_phi)
{
    if (n_theta < 16)
        throw ConfigError("grid: n_theta must be >= 16, got " + std::to_string(n_theta));
    if (n_phi < 32)
        throw ConfigError("grid: n_phi must be >= 32, got " + std::to_string(n_phi));
    if (n_phi % 2 != 0)
        throw ConfigError("grid: n_phi must be even for pole ghost rows, got " +
                          std::to_string(n_phi));

    SphereGrid g;
    g.dim = 2;
    g.n_theta = n_theta;
    g.n_phi = n_phi;
    g.dtheta = M_PI / n_theta;
    g.dphi = 2.0 * M_PI / n_phi;

    g.theta.resize(n_theta);
    g.sin_theta.resize(n_theta);
    g.cos_theta.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        g.theta(i) = (i + 0.5) * g.dtheta;
        g.sin_theta(i) = std::sin(g.theta(i));
        g.cos_theta(i) = std::cos(g.theta(i));
    }
    g.phi.resize(n_phi);
    for (int j = 0; j < n_phi; ++j) g.phi(j) = g.dphi * j;

    // Interpolatory colatitude weights on the offset nodes: exact for
    // cos(theta)-polynomials of degree < n_theta, all positive.
    g.theta_weight.resize(n_theta);
    const int half = n_theta / 2;
    for (int i = 0; i < n_theta; ++i) {
        double s = 0.0;
        for (int m = 1; m <= half; ++m)
            s += std::cos(2.0 * m * g.theta(i)) / (4.0 * m * m - 1.0);
        g.theta_weight(i) = (2.0 / n_theta) * (1.0 - 2.0 * s);
    }
    g.theta_weight *= 2.0 / g.theta_weight.sum();  // pin the total measure

    g.weight.resize(g.n_nodes());
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_phi; ++j) g.weight(g.node_index(i, j)) = g.theta_weight(i) * g.dphi;
    return g;
}

SphereGrid grid_build(int dim, int res_a, int res_b)
{
    if (dim == 1) return grid_build_s1(res_a);
    if (dim == 2) return grid_build_s2(res_a, res_b);
    throw ConfigError("grid: dim must be 1 or 2, got " + std::to_string(dim));
}

}  // namespace starflow
