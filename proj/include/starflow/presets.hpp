#pragma once

#include <string>

#include "starflow/grid.hpp"

namespace starflow {

/// Initial-body presets, given by their radial functions over the sphere:
///   sphere(r)                    constant radius r
///   bumpy(r0, eps, modes, seed)  r0 * (1 + eps * s), s a seeded random
///                                combination of smooth angular modes up to
///                                degree `modes`, normalized so |s| <= 1
///   ellipsoid(a,b[,c])           rho(z) = (sum z_i^2 / a_i^2)^(-1/2)
struct BodyPreset {
    enum class Kind { Sphere, Bumpy, Ellipsoid };
    Kind kind = Kind::Sphere;

    double radius = 1.0;                 // sphere
    double r0 = 1.0, eps = 0.1;          // bumpy
    int modes = 3;
    unsigned seed = 1;
    double a = 1.0, b = 1.0, c = 1.0;    // ellipsoid

    static BodyPreset sphere(double r);
    static BodyPreset bumpy(double r0, double eps, int modes, unsigned seed);
    static BodyPreset ellipsoid(double a, double b, double c);

    std::string to_string() const;
    static BodyPreset parse(const std::string& text);
    bool operator==(const BodyPreset&) const = default;
};

/// Sample the preset's radial function on the grid nodes.
Eigen::ArrayXd build_body(const BodyPreset& preset, const SphereGrid& grid);

}  // namespace starflow
