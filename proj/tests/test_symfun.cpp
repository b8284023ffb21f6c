#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "starflow/curvature.hpp"
#include "starflow/symfun.hpp"

using namespace starflow;

namespace {

// Brute-force oracle: enumerate all k-subsets.
double sigma_k_bruteforce(const KappaVector& kappa, int k)
{
    const int n = static_cast<int>(kappa.size());
    if (k == 0) return 1.0;
    double total = 0.0;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        double prod = 1.0;
        for (int i : idx) prod *= kappa(i);
        total += prod;
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    return total;
}

double uniform_pm1(std::mt19937& gen)
{
    return 2.0 * (static_cast<double>(gen()) / 4294967296.0) - 1.0;
}

KappaVector random_positive(std::mt19937& gen, int n, double lo = 0.1, double hi = 3.0)
{
    KappaVector k(n);
    for (int i = 0; i < n; ++i) k(i) = lo + (hi - lo) * 0.5 * (uniform_pm1(gen) + 1.0);
    return k;
}

KappaVector kv(std::initializer_list<double> vals)
{
    KappaVector k(static_cast<int>(vals.size()));
    int i = 0;
    for (double v : vals) k(i++) = v;
    return k;
}

}  // namespace

TEST_CASE("sigma_k basics and oracle")
{
    CHECK(sigma_k(kv({2.0, -1.0, 7.0}), 0) == 1.0);
    CHECK(sigma_k(kv({1.0, 1.0, 1.0}), 2) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(sigma_k(kv({1.0, 2.0, 3.0}), 2) == doctest::Approx(11.0).epsilon(1e-15));
    CHECK(sigma_k_bruteforce(kv({1.0, 2.0, 3.0}), 2) == doctest::Approx(11.0));

    std::mt19937 gen(7);
    for (int n = 2; n <= 6; ++n) {
        for (int rep = 0; rep < 50; ++rep) {
            KappaVector k(n);
            for (int i = 0; i < n; ++i) k(i) = 3.0 * uniform_pm1(gen);
            for (int j = 0; j <= n; ++j) {
                const double ref = sigma_k_bruteforce(k, j);
                CHECK(sigma_k(k, j) ==
                      doctest::Approx(ref).epsilon(1e-12).scale(std::abs(ref) + 1.0));
            }
        }
    }
    CHECK_THROWS_AS(sigma_k(kv({1.0, 2.0}), 3), DomainError);
    CHECK_THROWS_AS(sigma_k(kv({1.0, 2.0}), -1), DomainError);
}

TEST_CASE("p_k normalization")
{
    for (int n = 1; n <= 6; ++n) {
        const KappaVector ones = KappaVector::Ones(n);
        for (int k = 0; k <= n; ++k) CHECK(p_k(ones, k) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(p_k(kv({1.0, 2.0, 3.0}), 2) == doctest::Approx(11.0 / 3.0).epsilon(1e-15));
    CHECK(p_k(kv({3.0, 4.0}), 1) == doctest::Approx(3.5).epsilon(1e-15));
}

TEST_CASE("sigma_k_partials")
{
    const KappaVector k123 = kv({1.0, 2.0, 3.0});
    const KappaVector d1 = sigma_k_partials(k123, 1);
    for (int i = 0; i < 3; ++i) CHECK(d1(i) == 1.0);
    // d sigma_2 / d kappa_1 = sigma_1(2,3) = 5
    CHECK(sigma_k_partials(k123, 2)(0) == doctest::Approx(5.0));

    // central finite-difference cross-check
    std::mt19937 gen(11);
    for (int n = 2; n <= 5; ++n) {
        KappaVector k = random_positive(gen, n);
        for (int j = 1; j <= n; ++j) {
            const KappaVector d = sigma_k_partials(k, j);
            for (int i = 0; i < n; ++i) {
                KappaVector kp = k, km = k;
                const double h = 1e-6;
                kp(i) += h;
                km(i) -= h;
                const double fd = (sigma_k(kp, j) - sigma_k(km, j)) / (2.0 * h);
                CHECK(d(i) == doctest::Approx(fd).epsilon(1e-6).scale(std::abs(fd) + 1.0));
            }
            // sum_i sigma_{j-1,i} = (n-j+1) sigma_{j-1}
            const double lhs = d.sum();
            const double rhs = (n - j + 1) * sigma_k(k, j - 1);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(std::abs(rhs) + 1.0));
        }
    }
}

TEST_CASE("cone membership")
{
    CHECK(cone_contains(kv({1.0, 1.0, 1.0}), ConeLabel::garding(3)));
    CHECK(cone_contains(kv({1.0, 1.0, 1.0}), ConeLabel::positive_cone()));
    CHECK(cone_contains(kv({-1.0, 3.0, 3.0}), ConeLabel::garding(2)));
    CHECK(cone_contains(kv({-1.0, -1.0, 5.0}), ConeLabel::garding(1)));
    CHECK_FALSE(cone_contains(kv({-1.0, -1.0, 5.0}), ConeLabel::garding(2)));
    CHECK_FALSE(cone_contains(kv({-1.0, 3.0, 3.0}), ConeLabel::positive_cone()));
    CHECK_THROWS_AS(require_in_cone(kv({-1.0, -1.0, 5.0}), ConeLabel::garding(2)),
                    AdmissibilityError);
}

TEST_CASE("symmetric-function identity ladder at random points")
{
    std::mt19937 gen(23);
    const double tol = 1e-10;
    for (int n = 2; n <= 6; ++n) {
        for (int rep = 0; rep < 200; ++rep) {
            const KappaVector k = random_positive(gen, n);
            const SigmaVector e = sigma_all(k);
            auto sig = [&](int j) { return (j < 0 || j > n) ? 0.0 : e(j); };

            for (int m = 1; m <= n; ++m) {
                const KappaVector d = sigma_k_partials(k, m);  // sigma_{m-1,i}
                double s_plain = 0.0, s_k = 0.0, s_k2 = 0.0;
                for (int i = 0; i < n; ++i) {
                    s_plain += d(i);
                    s_k += k(i) * d(i);
                    s_k2 += k(i) * k(i) * d(i);
                    // sigma_m = sigma_{m,i} + kappa_i sigma_{m-1,i}
                    KappaVector reduced(n - 1);
                    int t = 0;
                    for (int j = 0; j < n; ++j)
                        if (j != i) reduced(t++) = k(j);
                    const double sig_mi = sigma_all(reduced)(m) * ((m <= n - 1) ? 1.0 : 0.0);
                    const double lhs = (m <= n - 1) ? sig_mi + k(i) * d(i) : k(i) * d(i);
                    CHECK(lhs == doctest::Approx(sig(m)).epsilon(tol).scale(std::abs(sig(m)) + 1.0));
                }
                // sum sigma_{m-1,i} = (n-m+1) sigma_{m-1}
                CHECK(s_plain == doctest::Approx((n - m + 1) * sig(m - 1))
                                     .epsilon(tol)
                                     .scale(std::abs(sig(m - 1)) + 1.0));
                // sum kappa_i sigma_{m-1,i} = m sigma_m
                CHECK(s_k == doctest::Approx(m * sig(m)).epsilon(tol).scale(std::abs(sig(m)) + 1.0));
                // sum kappa_i^2 sigma_{m-1,i} = sigma_1 sigma_m - (m+1) sigma_{m+1}
                const double rhs = sig(1) * sig(m) - (m + 1) * sig(m + 1);
                CHECK(s_k2 == doctest::Approx(rhs).epsilon(tol).scale(std::abs(rhs) + 1.0));

                // normalized variants
                const double cm = binomial(n, m);
                double pm_euler = 0.0, pm_trace = 0.0, pm_sq = 0.0;
                for (int i = 0; i < n; ++i) {
                    pm_euler += k(i) * d(i) / cm;
                    pm_trace += d(i) / cm;
                    pm_sq += k(i) * k(i) * d(i) / cm;
                }
                const double pm = sig(m) / cm;
                const double pm1 = (m + 1 <= n) ? sig(m + 1) / binomial(n, m + 1) : 0.0;
                const double pmm1 = sig(m - 1) / binomial(n, m - 1);
                const double p1 = sig(1) / n;
                CHECK(pm_euler == doctest::Approx(m * pm).epsilon(tol).scale(std::abs(pm) + 1.0));
                CHECK(pm_trace ==
                      doctest::Approx(m * pmm1).epsilon(tol).scale(std::abs(pmm1) + 1.0));
                const double rhs_p = n * p1 * pm - (n - m) * pm1;
                CHECK(pm_sq == doctest::Approx(rhs_p).epsilon(tol).scale(std::abs(rhs_p) + 1.0));
            }
        }
    }
}

TEST_CASE("curvature function evaluation")
{
    const auto r21 = CurvatureFunctionSpec::ratio(2, 1);
    const CurvatureEval e = eval_curvature_function(r21, kv({1.0, 1.0, 1.0}));
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-15));

    const auto pm2 = CurvatureFunctionSpec::powermean(2.0);
    CHECK(eval_curvature_function(pm2, kv({3.0, 4.0})).value ==
          doctest::Approx(5.0).epsilon(1e-15));

    CHECK_THROWS_AS(eval_curvature_function(r21, kv({-1.0, -1.0, 5.0})), AdmissibilityError);
}

TEST_CASE("Euler relation and finite-difference gradients")
{
    std::mt19937 gen(31);
    std::vector<CurvatureFunctionSpec> specs = {
        CurvatureFunctionSpec::ratio(1, 0), CurvatureFunctionSpec::ratio(2, 0),
        CurvatureFunctionSpec::ratio(2, 1), CurvatureFunctionSpec::ratio(3, 1),
        CurvatureFunctionSpec::powermean(2.0), CurvatureFunctionSpec::powermean(-1.0),
        CurvatureFunctionSpec::powermean(0.5),
        CurvatureFunctionSpec::product({{CurvatureFunctionSpec::ratio(1, 0), 0.5},
                                        {CurvatureFunctionSpec::powermean(-1.0), 0.5}})};
    for (const auto& spec : specs) {
        for (int rep = 0; rep < 100; ++rep) {
            const int n = 3;
            const KappaVector k = random_positive(gen, n);
            const CurvatureEval e = eval_curvature_function(spec, k);
            CHECK(e.value > 0.0);
            for (int i = 0; i < n; ++i) CHECK(e.gradient(i) > 0.0);
            // Euler: kappa . grad f = f
            const double euler = (k.array() * e.gradient.array()).sum();
            CHECK(euler == doctest::Approx(e.value).epsilon(1e-10));
            // finite differences
            for (int i = 0; i < n; ++i) {
                KappaVector kp = k, km = k;
                const double h = 1e-6;
                kp(i) += h;
                km(i) -= h;
                const double fd = (eval_curvature_function(spec, kp).value -
                                   eval_curvature_function(spec, km).value) /
                                  (2.0 * h);
                CHECK(e.gradient(i) ==
                      doctest::Approx(fd).epsilon(1e-5).scale(std::abs(fd) + 1e-3));
            }
        }
    }
}

TEST_CASE("eta values")
{
    CHECK(eta_of(CurvatureFunctionSpec::ratio(2, 1), 1.0, 3) == doctest::Approx(1.0));
    CHECK(eta_of(CurvatureFunctionSpec::ratio(3, 0), 1.0, 3) == doctest::Approx(1.0));
    CHECK(eta_of(CurvatureFunctionSpec::ratio(2, 0), 1.0, 2) == doctest::Approx(1.0));
    CHECK(eta_of(CurvatureFunctionSpec::powermean(2.0), 1.0, 2) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(eta_of(CurvatureFunctionSpec::ratio(2, 1), 0.0, 3), DomainError);
}

TEST_CASE("concavity spot-check on concave specs")
{
    std::mt19937 gen(41);
    std::vector<CurvatureFunctionSpec> specs = {
        CurvatureFunctionSpec::ratio(1, 0), CurvatureFunctionSpec::ratio(2, 1),
        CurvatureFunctionSpec::ratio(2, 0), CurvatureFunctionSpec::powermean(-1.0),
        CurvatureFunctionSpec::powermean(0.5), CurvatureFunctionSpec::powermean(1.0)};
    for (const auto& spec : specs) {
        CHECK(spec.is_concave());
        for (int rep = 0; rep < 1000; ++rep) {
            const KappaVector a = random_positive(gen, 3);
            const KappaVector b = random_positive(gen, 3);
            const KappaVector mid = 0.5 * (a + b);
            const double fmid = eval_curvature_function(spec, mid).value;
            const double favg = 0.5 * (eval_curvature_function(spec, a).value +
                                       eval_curvature_function(spec, b).value);
            CHECK(fmid >= favg - 1e-12);
        }
    }
    CHECK_FALSE(CurvatureFunctionSpec::powermean(2.0).is_concave());
}

TEST_CASE("newton-maclaurin margins")
{
    // equal entries: every margin zero, equality flagged
    const NewtonMaclaurinReport eq = newton_maclaurin_check(kv({2.0, 2.0, 2.0}));
    CHECK(eq.equality_case);
    for (const auto& m : eq.margins) CHECK(std::abs(m.value) <= 1e-12);

    const NewtonMaclaurinReport r = newton_maclaurin_check(kv({1.0, 2.0, 3.0}));
    CHECK_FALSE(r.equality_case);
    CHECK(r.max_cone_index == 3);
    bool found = false;
    for (const auto& m : r.margins) {
        if (m.id == "p1*p1-p2*p0") {
            CHECK(m.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
            found = true;
        }
    }
    CHECK(found);

    std::mt19937 gen(53);
    for (int rep = 0; rep < 500; ++rep) {
        const int n = 2 + static_cast<int>(3.999 * 0.5 * (uniform_pm1(gen) + 1.0));
        const NewtonMaclaurinReport rr = newton_maclaurin_check(random_positive(gen, n));
        CHECK(rr.min_margin >= -1e-14);
    }
}

TEST_CASE("curvature spec text form round-trip")
{
    std::vector<std::string> texts = {"ratio(2,1)", "powermean(-1)", "powermean(0.5)",
                                      "product([(ratio(2,1),0.5),(powermean(-1),0.5)])"};
    for (const auto& t : texts) {
        const auto spec = CurvatureFunctionSpec::parse(t);
        CHECK(CurvatureFunctionSpec::parse(spec.to_string()) == spec);
    }
    CHECK_THROWS_AS(CurvatureFunctionSpec::parse("ratio(1,2)"), DomainError);
    CHECK_THROWS_AS(CurvatureFunctionSpec::parse("powermean(0)"), DomainError);
    CHECK_THROWS_AS(CurvatureFunctionSpec::parse("blah(1)"), ConfigError);
}
