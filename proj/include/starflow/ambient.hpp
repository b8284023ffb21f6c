#pragma once

#include <cmath>
#include <string>

#include "starflow/errors.hpp"

namespace starflow {

/// Ambient space profile for radial graphs over the sphere:
/// the warped-product metric d rho^2 + phi(rho)^2 dz^2 with
///   Euclidean:  phi = rho,      phi' = 1,        Phi = rho^2 / 2
///   Hyperbolic: phi = sinh rho, phi' = cosh rho, Phi = cosh rho
/// In both cases phi'' phi + 1 = phi'^2 holds identically.
struct Ambient {
    enum class Kind { Euclidean, Hyperbolic };
    Kind kind = Kind::Euclidean;

    static Ambient euclidean() { return Ambient{Kind::Euclidean}; }
    static Ambient hyperbolic() { return Ambient{Kind::Hyperbolic}; }

    bool is_euclidean() const { return kind == Kind::Euclidean; }

    /// Sectional curvature constant of the ambient space.
    double K() const { return is_euclidean() ? 0.0 : -1.0; }

    double phi(double rho) const { return is_euclidean() ? rho : std::sinh(rho); }
    double phi_prime(double rho) const { return is_euclidean() ? 1.0 : std::cosh(rho); }
    double Phi(double rho) const { return is_euclidean() ? 0.5 * rho * rho : std::cosh(rho); }

    /// Reparameterized radius with d gamma / d rho = 1 / phi(rho).
    double gamma_of_rho(double rho) const
    {
        if (!(rho > 0.0))
            throw DomainError("gamma_of_rho: rho must be positive, got " + std::to_string(rho));
        return is_euclidean() ? std::log(rho) : std::log(std::tanh(0.5 * rho));
    }

    std::string name() const { return is_euclidean() ? "euclidean" : "hyperbolic"; }

    bool operator==(const Ambient&) const = default;
};

}  // namespace starflow
