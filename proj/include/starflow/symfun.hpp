#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "starflow/errors.hpp"

namespace starflow {

/// Hard cap on the number of principal curvatures handled by the
/// symmetric-function routines.  Keeps the tuples on the stack and the
/// recurrences exact to round-off.
constexpr int kMaxCurvatureDim = 12;

/// Ordered tuple of principal curvatures (stack-allocated up to kMaxCurvatureDim).
using KappaVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxCurvatureDim, 1>;

/// sigma_0..sigma_n of an n-tuple.
using SigmaVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxCurvatureDim + 1, 1>;

/// All elementary symmetric polynomials e_0..e_n of the entries of kappa,
/// by the characteristic-polynomial recurrence
///   e_k(x_1..x_j) = e_k(x_1..x_{j-1}) + x_j e_{k-1}(x_1..x_{j-1}).
template <typename Derived>
SigmaVector sigma_all(const Eigen::MatrixBase<Derived>& kappa)
{
    const int n = static_cast<int>(kappa.size());
    SigmaVector e = SigmaVector::Zero(n + 1);
    e(0) = 1.0;
    for (int j = 0; j < n; ++j) {
        const double x = kappa(j);
        for (int k = j + 1; k >= 1; --k) e(k) += x * e(k - 1);
    }
    return e;
}

double binomial(int n, int k);

/// k-th elementary symmetric polynomial; sigma_0 = 1.
double sigma_k(const KappaVector& kappa, int k);

/// Normalized symmetric function p_k = sigma_k / C(n,k).
double p_k(const KappaVector& kappa, int k);

/// Partial derivatives (d sigma_k / d kappa_i)_i, i.e. sigma_{k-1} evaluated
/// on kappa with entry i removed.  Requires 1 <= k <= n.
KappaVector sigma_k_partials(const KappaVector& kappa, int k);

/// Cone of admissible curvature tuples: either the connected component where
/// p_1..p_k are all positive, or the positive octant.
struct ConeLabel {
    bool positive = false;  // all kappa_i > 0
    int k = 1;              // meaningful when !positive

    static ConeLabel garding(int k) { return ConeLabel{false, k}; }
    static ConeLabel positive_cone() { return ConeLabel{true, 0}; }

    std::string to_string() const;
    bool operator==(const ConeLabel&) const = default;
};

bool cone_contains(const KappaVector& kappa, const ConeLabel& cone);

/// Throws AdmissibilityError naming the violated inequality.
void require_in_cone(const KappaVector& kappa, const ConeLabel& cone);

/// Margins of the classical product and chain inequalities between the p_k,
/// valid on the largest cone the tuple belongs to.
struct NewtonMaclaurinReport {
    int max_cone_index = 0;  ///< largest m with kappa in the p_1..p_m > 0 cone
    struct Margin {
        std::string id;
        double value;
    };
    std::vector<Margin> margins;  ///< all >= 0 when the tuple is admissible
    double min_margin = 0.0;
    bool equality_case = false;  ///< all kappa_i equal within relative spread 1e-9
};

NewtonMaclaurinReport newton_maclaurin_check(const KappaVector& kappa);

}  // namespace starflow
