#include "starflow/symfun.hpp"

#include <cmath>
#include <sstream>

namespace starflow {

double binomial(int n, int k)
{
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

static void check_k_range(const char* op, int k, int lo, int n)
{
    if (k < lo || k > n) {
        std::ostringstream os;
        os << op << ": index k = " << k << " outside [" << lo << ", " << n << "]";
        throw DomainError(os.str());
    }
}

double sigma_k(const KappaVector& kappa, int k)
{
    const int n = static_cast<int>(kappa.size());
    check_k_range("sigma_k", k, 0, n);
    return sigma_all(kappa)(k);
}

double p_k(const KappaVector& kappa, int k)
{
    const int n = static_cast<int>(kappa.size());
    check_k_range("p_k", k, 0, n);
    return sigma_all(kappa)(k) / binomial(n, k);
}

KappaVector sigma_k_partials(const KappaVector& kappa, int k)
{
    const int n = static_cast<int>(kappa.size());
    check_k_range("sigma_k_partials", k, 1, n);
    KappaVector out(n);
    KappaVector reduced(n - 1);
    for (int i = 0; i < n; ++i) {
        int m = 0;
        for (int j = 0; j < n; ++j)
            if (j != i) reduced(m++) = kappa(j);
        out(i) = (n == 1) ? (k == 1 ? 1.0 : 0.0) : sigma_all(reduced)(k - 1);
    }
    return out;
}

std::string ConeLabel::to_string() const
{
    if (positive) return "positive";
    return "garding(" + std::to_string(k) + ")";
}

bool cone_contains(const KappaVector& kappa, const ConeLabel& cone)
{
    const int n = static_cast<int>(kappa.size());
    if (cone.positive) return (kappa.array() > 0.0).all();
    if (cone.k < 1 || cone.k > n) return false;
    const SigmaVector e = sigma_all(kappa);
    for (int i = 1; i <= cone.k; ++i)
        if (e(i) <= 0.0) return false;
    return true;
}

void require_in_cone(const KappaVector& kappa, const ConeLabel& cone)
{
    const int n = static_cast<int>(kappa.size());
    std::ostringstream os;
    if (cone.positive) {
        for (int i = 0; i < n; ++i) {
            if (!(kappa(i) > 0.0)) {
                os << "kappa_" << (i + 1) << " = " << kappa(i)
                   << " violates the positive cone (kappa_i > 0)";
                throw AdmissibilityError(os.str());
            }
        }
        return;
    }
    const SigmaVector e = sigma_all(kappa);
    for (int i = 1; i <= std::min(cone.k, n); ++i) {
        if (!(e(i) > 0.0)) {
            os << "p_" << i << "(kappa) = " << e(i) / binomial(n, i)
               << " violates " << cone.to_string() << " (p_" << i << " > 0)";
            throw AdmissibilityError(os.str());
        }
    }
    if (cone.k > n) {
        os << "cone index " << cone.k << " exceeds tuple length " << n;
        throw DomainError(os.str());
    }
}

NewtonMaclaurinReport newton_maclaurin_check(const KappaVector& kappa)
{
    const int n = static_cast<int>(kappa.size());
    NewtonMaclaurinReport rep;

    SigmaVector p(n + 1);
    const SigmaVector e = sigma_all(kappa);
    for (int i = 0; i <= n; ++i) p(i) = e(i) / binomial(n, i);

    int m = 0;
    while (m < n && p(m + 1) > 0.0) ++m;
    rep.max_cone_index = m;

    // product inequalities p_{j+1} p_{i-1} <= p_i p_j for 1 <= i <= j <= m
    for (int j = 1; j <= m; ++j) {
        for (int i = 1; i <= j; ++i) {
            if (j + 1 > n) continue;
            const double margin = p(i) * p(j) - p(j + 1) * p(i - 1);
            rep.margins.push_back({"p" + std::to_string(i) + "*p" + std::to_string(j) +
                                       "-p" + std::to_string(j + 1) + "*p" + std::to_string(i - 1),
                                   margin});
        }
    }
    // chain p_1 >= p_2^{1/2} >= ... >= p_m^{1/m}
    for (int i = 1; i < m; ++i) {
        const double a = std::pow(p(i), 1.0 / i);
        const double b = std::pow(p(i + 1), 1.0 / (i + 1));
        rep.margins.push_back({"p" + std::to_string(i) + "^(1/" + std::to_string(i) + ")-p" +
                                   std::to_string(i + 1) + "^(1/" + std::to_string(i + 1) + ")",
                               a - b});
    }

    rep.min_margin = 0.0;
    for (const auto& mg : rep.margins) rep.min_margin = std::min(rep.min_margin, mg.value);
    if (!rep.margins.empty()) {
        rep.min_margin = rep.margins.front().value;
        for (const auto& mg : rep.margins) rep.min_margin = std::min(rep.min_margin, mg.value);
    }

    const double kmax = kappa.maxCoeff(), kmin = kappa.minCoeff();
    const double scale = std::max({std::abs(kmax), std::abs(kmin), 1e-300});
    rep.equality_case = (kmax - kmin) <= 1e-9 * scale;
    return rep;
}

}  // namespace starflow
