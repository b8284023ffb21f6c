#include "starflow/presets.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

namespace starflow {

BodyPreset BodyPreset::sphere(double r)
{
    if (!(r > 0.0)) throw ConfigError("sphere(r): radius must be positive");
    BodyPreset p;
    p.kind = Kind::Sphere;
    p.radius = r;
    return p;
}

BodyPreset BodyPreset::bumpy(double r0, double eps, int modes, unsigned seed)
{
    if (!(r0 > 0.0)) throw ConfigError("bumpy: r0 must be positive");
    if (!(eps >= 0.0 && eps <= 0.2))
        throw ConfigError("bumpy: eps must lie in [0, 0.2] to keep cone admissibility");
    if (modes < 1 || modes > 4) throw ConfigError("bumpy: modes must lie in [1, 4]");
    BodyPreset p;
    p.kind = Kind::Bumpy;
    p.r0 = r0;
    p.eps = eps;
    p.modes = modes;
    p.seed = seed;
    return p;
}

BodyPreset BodyPreset::ellipsoid(double a, double b, double c)
{
    if (!(a > 0.0 && b > 0.0 && c > 0.0))
        throw ConfigError("ellipsoid: semi-axes must be positive");
    BodyPreset p;
    p.kind = Kind::Ellipsoid;
    p.a = a;
    p.b = b;
    p.c = c;
    return p;
}

std::string BodyPreset::to_string() const
{
    std::ostringstream os;
    switch (kind) {
        case Kind::Sphere: os << "sphere(" << radius << ")"; break;
        case Kind::Bumpy:
            os << "bumpy(" << r0 << "," << eps << "," << modes << "," << seed << ")";
            break;
        case Kind::Ellipsoid: os << "ellipsoid(" << a << "," << b << "," << c << ")"; break;
    }
    return os.str();
}

BodyPreset BodyPreset::parse(const std::string& text)
{
    const size_t open = text.find('(');
    const size_t close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw ConfigError("bad body preset '" + text + "'");
    const std::string name = text.substr(0, open);
    std::vector<double> args;
    {
        std::string body = text.substr(open + 1, close - open - 1);
        std::istringstream is(body);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            try {
                args.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("bad number '" + tok + "' in preset '" + text + "'");
            }
        }
    }
    if (name == "sphere") {
        if (args.size() != 1) throw ConfigError("sphere(r) takes one argument");
        return sphere(args[0]);
    }
    if (name == "bumpy") {
        if (args.size() != 4) throw ConfigError("bumpy(r0,eps,modes,seed) takes four arguments");
        return bumpy(args[0], args[1], static_cast<int>(args[2]),
                     static_cast<unsigned>(args[3]));
    }
    if (name == "ellipsoid") {
        if (args.size() == 2) return ellipsoid(args[0], args[1], 1.0);
        if (args.size() != 3) throw ConfigError("ellipsoid(a,b[,c]) takes two or three arguments");
        return ellipsoid(args[0], args[1], args[2]);
    }
    throw ConfigError("unknown body preset '" + name + "'");
}

namespace {

// Uniform double in [-1, 1) from the raw mt19937 stream; avoids
// std::uniform_real_distribution, whose output is not pinned by the standard.
double draw(std::mt19937& gen)
{
    return 2.0 * (static_cast<double>(gen()) / 4294967296.0) - 1.0;
}

// Smooth angular modes on S^2 up to degree 4, all bounded by 1 in absolute
// value (each is a polynomial restriction of the ambient direction vector).
double mode_s2(int idx, double st, double ct, double ph)
{
    switch (idx) {
        case 0: return ct;
        case 1: return st * std::cos(ph);
        case 2: return st * std::sin(ph);
        case 3: return st * st * std::cos(2 * ph);
        case 4: return st * st * std::sin(2 * ph);
        case 5: return st * ct * std::cos(ph);
        case 6: return st * ct * std::sin(ph);
        case 7: return 0.5 * (3.0 * ct * ct - 1.0);
        case 8: return st * st * st * std::cos(3 * ph);
        case 9: return st * st * st * std::sin(3 * ph);
        case 10: return st * st * ct * std::cos(2 * ph);
        case 11: return st * st * ct * std::sin(2 * ph);
        case 12: return st * st * st * st * std::cos(4 * ph);
        case 13: return st * st * st * st * std::sin(4 * ph);
        default: return 0.0;
    }
}

int modes_count_s2(int max_degree)
{
    switch (max_degree) {
        case 1: return 3;
        case 2: return 8;
        case 3: return 12;
        default: return 14;
    }
}

}  // namespace

Eigen::ArrayXd build_body(const BodyPreset& preset, const SphereGrid& grid)
{
    const int nn = grid.n_nodes();
    Eigen::ArrayXd rho(nn);

    switch (preset.kind) {
        case BodyPreset::Kind::Sphere:
            rho.setConstant(preset.radius);
            return rho;

        case BodyPreset::Kind::Ellipsoid: {
            if (grid.dim == 1) {
                for (int j = 0; j < grid.n_phi; ++j) {
                    const double cx = std::cos(grid.phi(j)) / preset.a;
                    const double cy = std::sin(grid.phi(j)) / preset.b;
                    rho(j) = 1.0 / std::sqrt(cx * cx + cy * cy);
                }
            } else {
                for (int i = 0; i < grid.n_theta; ++i) {
                    const double st = grid.sin_theta(i), ct = grid.cos_theta(i);
                    for (int j = 0; j < grid.n_phi; ++j) {
                        const double zx = st * std::cos(grid.phi(j));
                        const double zy = st * std::sin(grid.phi(j));
                        const double zz = ct;
                        const double q = zx * zx / (preset.a * preset.a) +
                                         zy * zy / (preset.b * preset.b) +
                                         zz * zz / (preset.c * preset.c);
                        rho(grid.node_index(i, j)) = 1.0 / std::sqrt(q);
                    }
                }
            }
            return rho;
        }

        case BodyPreset::Kind::Bumpy: {
            std::mt19937 gen(preset.seed);
            if (grid.dim == 1) {
                std::vector<double> ca(preset.modes), cb(preset.modes);
                double norm = 0.0;
                for (int m = 0; m < preset.modes; ++m) {
                    ca[m] = draw(gen);
                    cb[m] = draw(gen);
                    norm += std::abs(ca[m]) + std::abs(cb[m]);
                }
                if (norm == 0.0) norm = 1.0;
                for (int j = 0; j < grid.n_phi; ++j) {
                    double s = 0.0;
                    for (int m = 0; m < preset.modes; ++m)
                        s += ca[m] * std::cos((m + 1) * grid.phi(j)) +
                             cb[m] * std::sin((m + 1) * grid.phi(j));
                    rho(j) = preset.r0 * (1.0 + preset.eps * s / norm);
                }
            } else {
                const int nm = modes_count_s2(preset.modes);
                std::vector<double> coef(nm);
                double norm = 0.0;
                for (int m = 0; m < nm; ++m) {
                    coef[m] = draw(gen);
                    norm += std::abs(coef[m]);
                }
                if (norm == 0.0) norm = 1.0;
                for (int i = 0; i < grid.n_theta; ++i) {
                    const double st = grid.sin_theta(i), ct = grid.cos_theta(i);
                    for (int j = 0; j < grid.n_phi; ++j) {
                        double s = 0.0;
                        for (int m = 0; m < nm; ++m) s += coef[m] * mode_s2(m, st, ct, grid.phi(j));
                        rho(grid.node_index(i, j)) = preset.r0 * (1.0 + preset.eps * s / norm);
                    }
                }
            }
            return rho;
        }
    }
    throw ConfigError("unreachable preset kind");
}

}  // namespace starflow
