#pragma once

#include <stdexcept>
#include <string>

namespace starflow {

/// Input violates a documented precondition (bad k index, nonpositive rho, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Curvature tuple lies outside the admissibility cone of a curvature function.
class AdmissibilityError : public DomainError {
public:
    explicit AdmissibilityError(const std::string& what) : DomainError(what) {}
};

/// Geometry became numerically singular at a specific node (loss of
/// star-shapedness or an indefinite metric).
class DegeneracyError : public std::runtime_error {
public:
    DegeneracyError(const std::string& what, int node)
        : std::runtime_error(what), node_index(node) {}
    int node_index;
};

/// Bad configuration (parse failure or range violation), reported before
/// any compute starts.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A runtime monitor tripped during a flow integration.  Carries enough
/// structure for a machine-readable failure record.
class MonitorViolation : public std::runtime_error {
public:
    MonitorViolation(const std::string& reason, double t, long step, int node)
        : std::runtime_error(reason), t(t), step(step), node_index(node) {}
    double t = 0.0;
    long step = 0;
    int node_index = -1;
};

}  // namespace starflow
