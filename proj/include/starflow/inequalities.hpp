#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "starflow/quantities.hpp"

namespace starflow {

/// One inequality instance.  `margin` is the signed defect normalized by
/// max(|lhs|, |rhs|); nonnegative means the inequality holds in its stated
/// direction.  Reports whose hypotheses fail (wrong convexity class, ambient,
/// or a domain error while evaluating) come back with applicable = false.
struct InequalityReport {
    std::string id;
    double lhs = 0.0, rhs = 0.0, margin = 0.0;
    bool applicable = false;
    std::string note;
};

/// Convexity classification from strict cone membership with margin 1e-10.
struct BodyClass {
    int k_convex_max = 0;  ///< largest k with p_1..p_k > margin at every node
    bool convex = false;   ///< all kappa_i > margin at every node
};

BodyClass classify_body(const GeometryFields& f);

/// Evaluate the full suite of weighted-curvature-integral inequalities
/// (quermassintegral chain, isoperimetric-type bounds and their Hoelder
/// consequences, and the support-weighted top-order family) over a sweep of
/// exponents.  Euclidean bodies only.
std::vector<InequalityReport> inequality_suite(const GeometryFields& f,
                                               const std::vector<double>& iotas);

/// Default exponent sweep {-1, -0.5, 0, 0.5, 1, 2, 3}.
const std::vector<double>& default_iota_sweep();

void write_inequality_csv(std::ostream& os, const std::vector<InequalityReport>& reports);
void write_inequality_summary(std::ostream& os, const std::vector<InequalityReport>& reports);

}  // namespace starflow
