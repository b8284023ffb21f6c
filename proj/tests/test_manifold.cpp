#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "starflow/calculus.hpp"
#include "starflow/grid.hpp"

using namespace starflow;

namespace {

Eigen::ArrayXd sample_s2(const SphereGrid& g, const std::function<double(double, double)>& f)
{
    Eigen::ArrayXd out(g.n_nodes());
    for (int i = 0; i < g.n_theta; ++i)
        for (int j = 0; j < g.n_phi; ++j) out(g.node_index(i, j)) = f(g.theta(i), g.phi(j));
    return out;
}

Eigen::ArrayXd sample_s1(const SphereGrid& g, const std::function<double(double)>& f)
{
    Eigen::ArrayXd out(g.n_phi);
    for (int j = 0; j < g.n_phi; ++j) out(j) = f(g.phi(j));
    return out;
}

double max_err(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b)
{
    return (a - b).abs().maxCoeff();
}

}  // namespace

TEST_CASE("grid construction invariants")
{
    const SphereGrid g = grid_build_s2(16, 32);
    CHECK(g.n_nodes() == 512);
    CHECK(std::abs(g.weight.sum() - 4.0 * M_PI) <= 1e-14 * 4.0 * M_PI);
    for (int i = 0; i < g.n_theta; ++i) {
        CHECK(g.theta_weight(i) > 0.0);
        CHECK(g.theta(i) > 0.0);
        CHECK(g.theta(i) < M_PI);
    }

    const SphereGrid c = grid_build_s1(64);
    CHECK(c.n_nodes() == 64);
    for (int j = 0; j < 64; ++j)
        CHECK(c.weight(j) == doctest::Approx(2.0 * M_PI / 64).epsilon(1e-15));

    CHECK_THROWS_AS(grid_build_s2(16, 33), ConfigError);  // odd n_phi
    CHECK_THROWS_AS(grid_build_s2(8, 32), ConfigError);
    CHECK_THROWS_AS(grid_build_s2(16, 16), ConfigError);
    CHECK_THROWS_AS(grid_build_s1(8), ConfigError);
}

TEST_CASE("gradient of smooth fields")
{
    // constants annihilate the stencils exactly
    const SphereGrid g = grid_build_s2(32, 64);
    const GradField zero = grad(g, Eigen::ArrayXd::Constant(g.n_nodes(), 3.7));
    CHECK(zero.th.abs().maxCoeff() == 0.0);
    CHECK(zero.ph.abs().maxCoeff() == 0.0);

    // dim 1: d/dphi cos = -sin, fourth order
    for (int N : {64, 128}) {
        const SphereGrid c = grid_build_s1(N);
        const GradField d = grad(c, sample_s1(c, [](double p) { return std::cos(p); }));
        const Eigen::ArrayXd exact = sample_s1(c, [](double p) { return -std::sin(p); });
        const double h = 2.0 * M_PI / N;
        CHECK(max_err(d.ph, exact) <= 0.2 * h * h * h * h);
    }

    // dim 2, zonal field: D_theta cos = -sin, D_phi = 0 exactly
    const GradField d = grad(g, sample_s2(g, [](double t, double) { return std::cos(t); }));
    const Eigen::ArrayXd exact = sample_s2(g, [](double t, double) { return -std::sin(t); });
    CHECK(max_err(d.th, exact) <= 1e-5);
    CHECK(d.ph.abs().maxCoeff() <= 1e-15);
}

TEST_CASE("gradient refinement order >= 3")
{
    auto field = [](double t, double p) { return std::sin(t) * std::cos(t) * std::sin(p); };
    auto d_t = [](double t, double p) { return std::cos(2.0 * t) * std::sin(p); };
    double err_coarse = 0.0, err_fine = 0.0;
    {
        const SphereGrid g = grid_build_s2(24, 48);
        err_coarse = max_err(grad(g, sample_s2(g, field)).th, sample_s2(g, d_t));
    }
    {
        const SphereGrid g = grid_build_s2(48, 96);
        err_fine = max_err(grad(g, sample_s2(g, field)).th, sample_s2(g, d_t));
    }
    CHECK(err_coarse / err_fine >= 8.0);
}

TEST_CASE("covariant hessian")
{
    const SphereGrid g = grid_build_s2(32, 64);
    const HessField zero = hess(g, Eigen::ArrayXd::Constant(g.n_nodes(), -1.2));
    CHECK(zero.tt.abs().maxCoeff() == 0.0);
    CHECK(zero.tp.abs().maxCoeff() == 0.0);
    CHECK(zero.pp.abs().maxCoeff() == 0.0);

    // eigenfunction identity: D^2 cos(theta) = -cos(theta) e
    const HessField H = hess(g, sample_s2(g, [](double t, double) { return std::cos(t); }));
    const Eigen::ArrayXd m_tt = sample_s2(g, [](double t, double) { return -std::cos(t); });
    const Eigen::ArrayXd m_pp = sample_s2(
        g, [](double t, double) { return -std::cos(t) * std::sin(t) * std::sin(t); });
    CHECK(max_err(H.tt, m_tt) <= 2e-5);
    CHECK(H.tp.abs().maxCoeff() <= 1e-12);
    CHECK(max_err(H.pp, m_pp) <= 2e-5);

    // trace on degree-1 harmonics equals -n * field
    for (auto field : {+[](double t, double p) { return std::sin(t) * std::cos(p); },
                       +[](double t, double p) { return std::sin(t) * std::sin(p); },
                       +[](double t, double) { return std::cos(t); }}) {
        const Eigen::ArrayXd f = sample_s2(g, field);
        const HessField h2 = hess(g, f);
        Eigen::ArrayXd trace(g.n_nodes());
        for (int i = 0; i < g.n_theta; ++i) {
            const double inv_s2 = 1.0 / (g.sin_theta(i) * g.sin_theta(i));
            for (int j = 0; j < g.n_phi; ++j) {
                const int idx = g.node_index(i, j);
                trace(idx) = h2.tt(idx) + inv_s2 * h2.pp(idx);
            }
        }
        CHECK(max_err(trace, -2.0 * f) <= 5e-5);
    }

    // dim 1: second derivative of cos(phi) is -cos(phi), eigenvalue -1 = -n
    const SphereGrid c = grid_build_s1(128);
    const Eigen::ArrayXd f1 = sample_s1(c, [](double p) { return std::cos(p); });
    CHECK(max_err(hess(c, f1).pp, -f1) <= 1e-6);
}

TEST_CASE("hessian refinement order >= 3")
{
    auto field = [](double t, double p) { return std::sin(t) * std::sin(t) * std::cos(2.0 * p); };
    double errs[2];
    int idx = 0;
    for (int nt : {24, 48}) {
        const SphereGrid g = grid_build_s2(nt, 2 * nt);
        const HessField H = hess(g, sample_s2(g, field));
        const Eigen::ArrayXd exact = sample_s2(
            g, [](double t, double p) { return 2.0 * std::cos(2.0 * t) * std::cos(2.0 * p); });
        errs[idx++] = max_err(H.tt, exact);
    }
    CHECK(errs[0] / errs[1] >= 8.0);
}

TEST_CASE("pole handling stays comparable to mid-latitudes")
{
    // restrictions of ambient linear functions cross the poles smoothly
    const SphereGrid g = grid_build_s2(32, 64);
    auto field = [](double t, double p) {
        return 0.3 * std::cos(t) + 0.7 * std::sin(t) * std::cos(p) -
               0.4 * std::sin(t) * std::sin(p);
    };
    auto exact_t = [](double t, double p) {
        return -0.3 * std::sin(t) + 0.7 * std::cos(t) * std::cos(p) -
               0.4 * std::cos(t) * std::sin(p);
    };
    auto exact_p = [](double t, double p) {
        return -0.7 * std::sin(t) * std::sin(p) - 0.4 * std::sin(t) * std::cos(p);
    };
    const GradField d = grad(g, sample_s2(g, field));
    const Eigen::ArrayXd et = sample_s2(g, exact_t);
    const Eigen::ArrayXd ep = sample_s2(g, exact_p);

    double pole_err = 0.0, mid_err = 0.0;
    for (int i = 0; i < g.n_theta; ++i) {
        for (int j = 0; j < g.n_phi; ++j) {
            const int idx = g.node_index(i, j);
            const double e =
                std::sqrt(norm_sq_e(g, idx, d.th(idx) - et(idx), d.ph(idx) - ep(idx)));
            if (i <= 1 || i >= g.n_theta - 2)
                pole_err = std::max(pole_err, e);
            else if (std::abs(g.theta(i) - M_PI / 2) < 0.5)
                mid_err = std::max(mid_err, e);
        }
    }
    CHECK(pole_err <= 5.0 * mid_err + 1e-14);
}

TEST_CASE("quadrature")
{
    const SphereGrid g = grid_build_s2(16, 32);
    CHECK(std::abs(quadrature_integrate(g, Eigen::ArrayXd::Ones(g.n_nodes())) - 4.0 * M_PI) <=
          1e-14 * 4.0 * M_PI);

    // zonal polynomial: exact for the interpolatory colatitude rule
    const Eigen::ArrayXd cos2 =
        sample_s2(g, [](double t, double) { return std::cos(t) * std::cos(t); });
    CHECK(quadrature_integrate(g, cos2) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-13));

    // smooth non-polynomial density: spectral accuracy at desk resolution
    const SphereGrid g64 = grid_build_s2(64, 128);
    const Eigen::ArrayXd expc =
        sample_s2(g64, [](double t, double) { return std::exp(std::cos(t)); });
    CHECK(quadrature_integrate(g64, expc) ==
          doctest::Approx(4.0 * M_PI * std::sinh(1.0)).epsilon(1e-12));

    // odd-in-longitude densities vanish
    const Eigen::ArrayXd odd = sample_s2(
        g, [](double t, double p) { return std::sin(p) * (1.0 + std::cos(t) * std::cos(t)); });
    CHECK(std::abs(quadrature_integrate(g, odd)) <= 1e-12);

    std::mt19937 gen(3);
    for (int rep = 0; rep < 20; ++rep) {
        const double a = 2.0 * (static_cast<double>(gen()) / 4294967296.0) - 1.0;
        const int m = 1 + static_cast<int>(gen() % 5);
        const Eigen::ArrayXd d = sample_s2(
            g, [&](double t, double p) { return a * std::sin(m * p) * std::exp(std::cos(t)); });
        CHECK(std::abs(quadrature_integrate(g, d)) <= 1e-12);
    }

    const SphereGrid c = grid_build_s1(64);
    CHECK(std::abs(quadrature_integrate(c, sample_s1(c, [](double p) { return std::sin(p); }))) <=
          1e-12);
    CHECK(quadrature_integrate(c, Eigen::ArrayXd::Ones(64)) ==
          doctest::Approx(2.0 * M_PI).epsilon(1e-15));
}

TEST_CASE("e-norm of covectors")
{
    const SphereGrid g = grid_build_s2(17, 32);  // odd row count puts a row on the equator
    const int eq_row = 8;
    CHECK(g.theta(eq_row) == doctest::Approx(M_PI / 2).epsilon(1e-15));
    CHECK(norm_sq_e(g, g.node_index(eq_row, 0), 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(norm_sq_e(g, g.node_index(eq_row, 0), 0.0, 0.0) == 0.0);

    // |D cos(theta)|^2 = sin^2(theta)
    const Eigen::ArrayXd f = sample_s2(g, [](double t, double) { return std::cos(t); });
    const Eigen::ArrayXd nsq = norm_sq_e(g, grad(g, f));
    const Eigen::ArrayXd exact =
        sample_s2(g, [](double t, double) { return std::sin(t) * std::sin(t); });
    CHECK(max_err(nsq, exact) <= 1e-4);
}
