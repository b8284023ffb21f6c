#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "starflow/symfun.hpp"

namespace starflow {

/// Catalog of admissible curvature functions: positive, symmetric,
/// degree-1-homogeneous functions of the principal curvatures.
///
/// Canonical text forms (used in config files):
///   ratio(l,k)                  (sigma_l / sigma_k)^(1/(l-k)),  0 <= k < l <= n
///   powermean(p)                (sum kappa_i^p)^(1/p),          p != 0
///   product([(spec,w),...])     prod f_i^{w_i},  w_i >= 0,  sum w_i = 1
struct CurvatureFunctionSpec {
    enum class Kind { Ratio, PowerMean, Product };

    Kind kind = Kind::Ratio;
    int l = 1, k = 0;        // Ratio
    double exponent = 1.0;   // PowerMean
    std::vector<std::pair<CurvatureFunctionSpec, double>> factors;  // Product

    static CurvatureFunctionSpec ratio(int l, int k);
    static CurvatureFunctionSpec powermean(double p);
    static CurvatureFunctionSpec product(std::vector<std::pair<CurvatureFunctionSpec, double>> f);

    /// Admissibility cone for curvature tuples of length n.
    ConeLabel cone(int n) const;

    /// True when the function is concave on its cone (ratios and power means
    /// with exponent <= 1; a product of concave factors is concave).
    bool is_concave() const;

    std::string to_string() const;
    static CurvatureFunctionSpec parse(std::string_view text);

    bool operator==(const CurvatureFunctionSpec&) const = default;
};

struct CurvatureEval {
    double value = 0.0;
    KappaVector gradient;  ///< (df/dkappa_i)_i, strictly positive on the cone
};

/// f(kappa) together with its analytic gradient.  Throws AdmissibilityError
/// if kappa lies outside the admissibility cone of the spec.
CurvatureEval eval_curvature_function(const CurvatureFunctionSpec& spec, const KappaVector& kappa);

/// Value only (same admissibility checks, skips the gradient assembly).
double eval_curvature_value(const CurvatureFunctionSpec& spec, const KappaVector& kappa);

/// The speed scale eta = f(1,...,1)^(-beta) that makes the unit sphere
/// stationary under the normalized Euclidean flow.
double eta_of(const CurvatureFunctionSpec& spec, double beta, int n);

}  // namespace starflow
