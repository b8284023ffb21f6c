#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "starflow/geometry.hpp"
#include "starflow/presets.hpp"

using namespace starflow;

namespace {

// adaptive Simpson quadrature, used as the antiderivative oracle
double simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double left = (m - a) / 6.0 * (fa + 4.0 * f(lm) + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * f(rm) + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, tol / 2, depth - 1) + simpson(f, m, b, tol / 2, depth - 1);
}

GeometryFields sphere_geometry(double r, const Ambient& amb, const SphereGrid& g)
{
    return geometry_from_rho(Eigen::ArrayXd::Constant(g.n_nodes(), r), amb, g);
}

}  // namespace

TEST_CASE("gamma of rho")
{
    const SphereGrid g = grid_build_s1(32);
    const Ambient eu = Ambient::euclidean();
    CHECK(gamma_of_rho(Eigen::ArrayXd::Constant(4, 1.0), eu).abs().maxCoeff() == 0.0);
    CHECK(gamma_of_rho(Eigen::ArrayXd::Constant(4, std::exp(1.0)), eu)(0) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(gamma_of_rho(Eigen::ArrayXd::Constant(4, -0.5), eu), DomainError);

    // hyperbolic: gamma differences match the numeric antiderivative of 1/sinh
    const Ambient hy = Ambient::hyperbolic();
    const double r1 = std::asinh(1.0), r2 = 1.7;
    const double direct = hy.gamma_of_rho(r2) - hy.gamma_of_rho(r1);
    const double quad =
        simpson([](double r) { return 1.0 / std::sinh(r); }, r1, r2, 1e-13, 40);
    CHECK(direct == doctest::Approx(quad).epsilon(1e-10));
    (void)g;
}

TEST_CASE("round spheres are exact")
{
    for (int dim : {1, 2}) {
        const SphereGrid g = (dim == 1) ? grid_build_s1(64) : grid_build_s2(32, 64);
        for (double r : {0.5, 1.0, 2.0}) {
            const GeometryFields f = sphere_geometry(r, Ambient::euclidean(), g);
            CHECK((f.u - r).abs().maxCoeff() <= 1e-14 * r);
            CHECK((f.omega - 1.0).abs().maxCoeff() == 0.0);
            CHECK(f.dgamma_sq.maxCoeff() == 0.0);
            for (int a = 0; a < dim; ++a)
                CHECK((f.kappa.col(a) - 1.0 / r).abs().maxCoeff() <= 1e-13 / r);
            CHECK((f.mean_H - dim / r).abs().maxCoeff() <= 1e-13 * dim / r);
            // total measure = omega_n r^n exactly by weight construction
            const double area = surface_area(f);
            const double exact = g.weight.sum() * std::pow(r, dim);
            CHECK(area == doctest::Approx(exact).epsilon(1e-14));

            const GeometryFields fh = sphere_geometry(r, Ambient::hyperbolic(), g);
            CHECK((fh.u - std::sinh(r)).abs().maxCoeff() <= 1e-14 * std::sinh(r));
            for (int a = 0; a < dim; ++a)
                CHECK((fh.kappa.col(a) - 1.0 / std::tanh(r)).abs().maxCoeff() <= 1e-13);
        }
    }
    // unit ball volume
    const SphereGrid g = grid_build_s2(32, 64);
    CHECK(enclosed_volume(sphere_geometry(1.0, Ambient::euclidean(), g)) ==
          doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(enclosed_volume(sphere_geometry(1.0, Ambient::hyperbolic(), g)), DomainError);
}

TEST_CASE("support function bound u <= phi")
{
    const SphereGrid g = grid_build_s2(32, 64);
    const Eigen::ArrayXd rho = build_body(BodyPreset::bumpy(1.0, 0.15, 3, 5), g);
    const GeometryFields f = geometry_from_rho(rho, Ambient::euclidean(), g);
    for (int i = 0; i < g.n_nodes(); ++i) {
        CHECK(f.u(i) <= f.phi(i) + 1e-14);
        if (f.dgamma_sq(i) < 1e-30) CHECK(f.u(i) == doctest::Approx(f.phi(i)));
    }
}

TEST_CASE("ellipsoid curvatures at the axis nodes")
{
    // odd n_theta puts nodes exactly on the equator; phi_0 = 0 hits the x axis
    const double a = 1.0, b = 1.2, c = 1.5;
    double errs[2];
    int pass = 0;
    for (int nt : {33, 65}) {
        const SphereGrid g = grid_build_s2(nt, 2 * (nt - 1) + 2);
        const Eigen::ArrayXd rho = build_body(BodyPreset::ellipsoid(a, b, c), g);
        const GeometryFields f = geometry_from_rho(rho, Ambient::euclidean(), g);
        const int node = g.node_index(nt / 2, 0);  // theta = pi/2, phi = 0
        // curvatures of the x-axis point of the ellipsoid: a/b^2 and a/c^2
        const double k_lo = a / (c * c), k_hi = a / (b * b);
        errs[pass++] = std::max(std::abs(f.kappa(node, 0) - k_lo),
                                std::abs(f.kappa(node, 1) - k_hi));
    }
    CHECK(errs[0] <= 5e-4);
    CHECK(errs[1] <= 5e-5);

    // dim 1 ellipse: curvature at (a, 0) is a/b^2
    const SphereGrid c1 = grid_build_s1(256);
    const Eigen::ArrayXd rho1 = build_body(BodyPreset::ellipsoid(1.0, 1.3, 1.0), c1);
    const GeometryFields f1 = geometry_from_rho(rho1, Ambient::euclidean(), c1);
    CHECK(f1.kappa(0, 0) == doctest::Approx(1.0 / (1.3 * 1.3)).epsilon(1e-6));
}

TEST_CASE("principal curvature solver against a generic eigensolver")
{
    CHECK(principal_curvatures(1.0, 0.0, 1.0, 1.0, 0.0, 1.0)(0) == doctest::Approx(1.0));
    const KappaVector diag = principal_curvatures(2.0, 0.0, 3.0, 1.0, 0.0, 1.0);
    CHECK(diag(0) == doctest::Approx(2.0));
    CHECK(diag(1) == doctest::Approx(3.0));

    std::mt19937 gen(17);
    auto u01 = [&] { return static_cast<double>(gen()) / 4294967296.0; };
    for (int rep = 0; rep < 500; ++rep) {
        // random SPD g, random symmetric h
        const double l1 = 0.2 + 2.0 * u01(), l2 = 0.2 + 2.0 * u01(), ang = M_PI * u01();
        const double ca = std::cos(ang), sa = std::sin(ang);
        const double g_tt = ca * ca * l1 + sa * sa * l2;
        const double g_tp = ca * sa * (l1 - l2);
        const double g_pp = sa * sa * l1 + ca * ca * l2;
        const double h_tt = 4.0 * (u01() - 0.5), h_tp = 4.0 * (u01() - 0.5),
                     h_pp = 4.0 * (u01() - 0.5);
        const KappaVector mine = principal_curvatures(h_tt, h_tp, h_pp, g_tt, g_tp, g_pp);

        Eigen::Matrix2d H, G;
        H << h_tt, h_tp, h_tp, h_pp;
        G << g_tt, g_tp, g_tp, g_pp;
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> solver(H, G);
        CHECK(mine(0) == doctest::Approx(solver.eigenvalues()(0)).epsilon(1e-12).scale(1.0));
        CHECK(mine(1) == doctest::Approx(solver.eigenvalues()(1)).epsilon(1e-12).scale(1.0));
    }

    CHECK_THROWS_AS(principal_curvatures(1.0, 0.0, 1.0, -1.0, 0.0, 1.0), DegeneracyError);
}

TEST_CASE("graph identities on a bumpy body")
{
    const SphereGrid g = grid_build_s2(64, 128);
    const Eigen::ArrayXd rho = build_body(BodyPreset::bumpy(1.0, 0.1, 3, 7), g);
    const GeometryFields f = geometry_from_rho(rho, Ambient::euclidean(), g);

    // g^{ik} g_kj = delta (algebraic identity of the assembled inverse)
    for (int idx = 0; idx < g.n_nodes(); idx += 37) {
        const double d00 = f.ginv_tt(idx) * f.g_tt(idx) + f.ginv_tp(idx) * f.g_tp(idx);
        const double d01 = f.ginv_tt(idx) * f.g_tp(idx) + f.ginv_tp(idx) * f.g_pp(idx);
        const double d11 = f.ginv_tp(idx) * f.g_tp(idx) + f.ginv_pp(idx) * f.g_pp(idx);
        CHECK(d00 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d11 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(d01) <= 1e-12);
    }

    // |grad rho|_g^2 = 1 - 1/omega^2 nodewise
    GradField drho = grad(g, f.rho);
    double worst = 0.0;
    for (int idx = 0; idx < g.n_nodes(); ++idx) {
        const double lhs = f.ginv_tt(idx) * drho.th(idx) * drho.th(idx) +
                           2.0 * f.ginv_tp(idx) * drho.th(idx) * drho.ph(idx) +
                           f.ginv_pp(idx) * drho.ph(idx) * drho.ph(idx);
        const double rhs = 1.0 - 1.0 / (f.omega(idx) * f.omega(idx));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst <= 1e-6);

    // support-function gradient identity: D_i u = g^{kl} h_ik D_l Phi
    GradField du = grad(g, f.u);
    double worst_rel = 0.0;
    for (int idx = 0; idx < g.n_nodes(); ++idx) {
        const double Phi_t = f.phi(idx) * drho.th(idx);
        const double Phi_p = f.phi(idx) * drho.ph(idx);
        // (h g^{-1})_i^l D_l Phi
        const double rhs_t = f.h_tt(idx) * (f.ginv_tt(idx) * Phi_t + f.ginv_tp(idx) * Phi_p) +
                             f.h_tp(idx) * (f.ginv_tp(idx) * Phi_t + f.ginv_pp(idx) * Phi_p);
        const double rhs_p = f.h_tp(idx) * (f.ginv_tt(idx) * Phi_t + f.ginv_tp(idx) * Phi_p) +
                             f.h_pp(idx) * (f.ginv_tp(idx) * Phi_t + f.ginv_pp(idx) * Phi_p);
        const double scale = std::abs(du.th(idx)) + std::abs(du.ph(idx)) + 1e-6;
        worst_rel = std::max(
            worst_rel,
            std::max(std::abs(du.th(idx) - rhs_t), std::abs(du.ph(idx) - rhs_p)) / scale);
    }
    CHECK(worst_rel <= 1e-2);

    // refinement improves the identity defect by >= 4x
    {
        const SphereGrid g2 = grid_build_s2(128, 256);
        const Eigen::ArrayXd rho2 = build_body(BodyPreset::bumpy(1.0, 0.1, 3, 7), g2);
        const GeometryFields f2 = geometry_from_rho(rho2, Ambient::euclidean(), g2);
        GradField drho2 = grad(g2, f2.rho);
        GradField du2 = grad(g2, f2.u);
        double worst2 = 0.0;
        for (int idx = 0; idx < g2.n_nodes(); ++idx) {
            const double Phi_t = f2.phi(idx) * drho2.th(idx);
            const double Phi_p = f2.phi(idx) * drho2.ph(idx);
            const double rhs_t =
                f2.h_tt(idx) * (f2.ginv_tt(idx) * Phi_t + f2.ginv_tp(idx) * Phi_p) +
                f2.h_tp(idx) * (f2.ginv_tp(idx) * Phi_t + f2.ginv_pp(idx) * Phi_p);
            const double rhs_p =
                f2.h_tp(idx) * (f2.ginv_tt(idx) * Phi_t + f2.ginv_tp(idx) * Phi_p) +
                f2.h_pp(idx) * (f2.ginv_tp(idx) * Phi_t + f2.ginv_pp(idx) * Phi_p);
            const double scale = std::abs(du2.th(idx)) + std::abs(du2.ph(idx)) + 1e-6;
            worst2 = std::max(
                worst2,
                std::max(std::abs(du2.th(idx) - rhs_t), std::abs(du2.ph(idx) - rhs_p)) / scale);
        }
        CHECK(worst_rel / worst2 >= 4.0);
    }
}

TEST_CASE("minkowski residual")
{
    const SphereGrid g = grid_build_s2(32, 64);
    CHECK(std::abs(minkowski_residual(sphere_geometry(1.0, Ambient::euclidean(), g), 1)) <= 1e-14);
    CHECK(std::abs(minkowski_residual(sphere_geometry(1.0, Ambient::hyperbolic(), g), 1)) <=
          1e-14);

    double res_coarse = 0.0, res_fine = 0.0;
    {
        const SphereGrid gc = grid_build_s2(32, 64);
        const GeometryFields f =
            geometry_from_rho(build_body(BodyPreset::bumpy(1.0, 0.1, 3, 7), gc),
                              Ambient::euclidean(), gc);
        res_coarse = std::abs(minkowski_residual(f, 1));
    }
    {
        const SphereGrid gf = grid_build_s2(64, 128);
        const GeometryFields f =
            geometry_from_rho(build_body(BodyPreset::bumpy(1.0, 0.1, 3, 7), gf),
                              Ambient::euclidean(), gf);
        res_fine = std::abs(minkowski_residual(f, 1));
    }
    CHECK(res_fine <= 1e-5);
    CHECK(res_coarse / res_fine >= 3.5);  // order >= 2 under refinement
}

TEST_CASE("second-fundamental-form cross-check")
{
    const SphereGrid g32 = grid_build_s2(32, 64);
    CHECK(cross_check_h(sphere_geometry(1.3, Ambient::euclidean(), g32)) <= 1e-12);
    CHECK(cross_check_h(sphere_geometry(0.8, Ambient::hyperbolic(), g32)) <= 1e-12);

    double dev_coarse, dev_fine;
    {
        const GeometryFields f =
            geometry_from_rho(build_body(BodyPreset::bumpy(1.0, 0.1, 3, 7), g32),
                              Ambient::euclidean(), g32);
        dev_coarse = cross_check_h(f);
    }
    {
        const SphereGrid g64 = grid_build_s2(64, 128);
        const GeometryFields f =
            geometry_from_rho(build_body(BodyPreset::bumpy(1.0, 0.1, 3, 7), g64),
                              Ambient::euclidean(), g64);
        dev_fine = cross_check_h(f);
        CHECK(dev_fine <= 1e-3);
    }
    CHECK(dev_coarse / dev_fine >= 4.0);

    // dim 1 sanity
    const SphereGrid c = grid_build_s1(128);
    const GeometryFields f1 = geometry_from_rho(build_body(BodyPreset::bumpy(1.0, 0.1, 3, 2), c),
                                                Ambient::euclidean(), c);
    CHECK(cross_check_h(f1) <= 1e-4);
}

TEST_CASE("gauss-bonnet quadrature")
{
    const SphereGrid g = grid_build_s2(64, 128);
    for (const BodyPreset& preset :
         {BodyPreset::sphere(1.0), BodyPreset::bumpy(1.0, 0.05, 3, 11),
          BodyPreset::ellipsoid(1.0, 1.2, 1.5)}) {
        const GeometryFields f =
            geometry_from_rho(build_body(preset, g), Ambient::euclidean(), g);
        Eigen::ArrayXd sig2(g.n_nodes());
        for (int i = 0; i < g.n_nodes(); ++i) sig2(i) = f.kappa(i, 0) * f.kappa(i, 1);
        const double total = weighted_sum(sig2, f.measure_weight);
        CHECK(total == doctest::Approx(4.0 * M_PI).epsilon(1e-6));
    }
}

TEST_CASE("degeneracy reporting")
{
    const SphereGrid g = grid_build_s1(32);
    Eigen::ArrayXd rho = Eigen::ArrayXd::Constant(32, 1.0);
    rho(5) = -1.0;
    CHECK_THROWS_AS(geometry_from_rho(rho, Ambient::euclidean(), g), DomainError);
}
