#include "starflow/quantities.hpp"

#include <cmath>
#include <sstream>

namespace starflow {

namespace {

std::string format_iota(double iota)
{
    std::ostringstream os;
    if (iota == std::floor(iota) && std::abs(iota) < 1e6)
        os << static_cast<long long>(iota);
    else
        os << iota;
    return os.str();
}

// p_k at a node, with k outside [0, n] treated as 0 (sigma vanishes).
inline double p_k_or_zero(const KappaVector& kap, int k)
{
    const int n = static_cast<int>(kap.size());
    if (k < 0 || k > n) return 0.0;
    return p_k(kap, k);
}

}  // namespace

std::string QuantityKey::to_string() const
{
    switch (kind) {
        case Kind::S: return "S(" + format_iota(iota) + "," + std::to_string(k) + ")";
        case Kind::T: return "T(" + format_iota(iota) + "," + std::to_string(k) + ")";
        case Kind::Area: return "area";
        case Kind::Volume: return "volume";
        case Kind::Quermass: return "quermass(" + std::to_string(k) + ")";
    }
    return "?";
}

QuantityKey QuantityKey::parse(const std::string& text)
{
    if (text == "area") return area();
    if (text == "volume") return volume();
    auto parse_pair = [&](size_t open) -> std::pair<double, int> {
        const size_t comma = text.find(',', open);
        const size_t close = text.rfind(')');
        if (comma == std::string::npos || close == std::string::npos || close < comma)
            throw ConfigError("bad quantity key '" + text + "'");
        return {std::stod(text.substr(open + 1, comma - open - 1)),
                std::stoi(text.substr(comma + 1, close - comma - 1))};
    };
    if (text.rfind("S(", 0) == 0) {
        auto [iota, k] = parse_pair(1);
        return S(iota, k);
    }
    if (text.rfind("T(", 0) == 0) {
        auto [iota, k] = parse_pair(1);
        return T(iota, k);
    }
    if (text.rfind("quermass(", 0) == 0) {
        const size_t close = text.rfind(')');
        return quermass(std::stoi(text.substr(9, close - 9)));
    }
    throw ConfigError("unknown quantity key '" + text + "'");
}

double evaluate(const QuantityKey& key, const GeometryFields& f)
{
    const int nn = f.n_nodes();
    const int n = f.n();
    Eigen::ArrayXd density(nn);

    switch (key.kind) {
        case QuantityKey::Kind::Area:
            return surface_area(f);
        case QuantityKey::Kind::Volume:
            return enclosed_volume(f);
        case QuantityKey::Kind::Quermass: {
            if (key.k < 0 || key.k > n)
                throw DomainError("quermass: order outside [0, n]");
            for (int i = 0; i < nn; ++i)
                density(i) = f.u(i) * sigma_k(f.kappa_at(i), key.k);
            return weighted_sum(density, f.measure_weight);
        }
        case QuantityKey::Kind::S: {
            if (key.k < 0 || key.k > n) throw DomainError("S(iota,k): k outside [0, n]");
            for (int i = 0; i < nn; ++i)
                density(i) = std::pow(f.u(i), key.iota) * p_k(f.kappa_at(i), key.k);
            return weighted_sum(density, f.measure_weight);
        }
        case QuantityKey::Kind::T: {
            if (key.k < 0 || key.k > n) throw DomainError("T(iota,k): k outside [0, n]");
            const bool int_iota = key.iota == std::floor(key.iota);
            for (int i = 0; i < nn; ++i) {
                const double pk = p_k(f.kappa_at(i), key.k);
                if (pk <= 0.0 && !int_iota)
                    throw DomainError("T(iota,k): p_" + std::to_string(key.k) + " = " +
                                      std::to_string(pk) + " at node " + std::to_string(i) +
                                      " cannot be raised to iota = " + std::to_string(key.iota));
                if (pk < 0.0 && key.iota < 0.0 && int_iota && pk == 0.0)
                    throw DomainError("T(iota,k): vanishing p_k at node " + std::to_string(i));
                density(i) = std::pow(pk, key.iota);
            }
            return weighted_sum(density, f.measure_weight);
        }
    }
    throw DomainError("unreachable quantity kind");
}

namespace {

// Frame components v(e_a) of a coordinate covector (v_t, v_p) against the
// g-orthonormal principal frame (columns of `frame`), matched to ascending
// kappa.  dim 1 uses the single normalized coordinate direction.
struct FrameProjector {
    const GeometryFields& f;
    explicit FrameProjector(const GeometryFields& f) : f(f) {}

    void project(int node, const Eigen::Matrix2d* frame, double v_t, double v_p,
                 double out[2]) const
    {
        if (f.grid->dim == 1) {
            out[0] = v_p / std::sqrt(f.g_pp(node));
            out[1] = 0.0;
            return;
        }
        out[0] = v_t * (*frame)(0, 0) + v_p * (*frame)(1, 0);
        out[1] = v_t * (*frame)(0, 1) + v_p * (*frame)(1, 1);
    }
};

}  // namespace

double predicted_rate_S(const GeometryFields& f, const Eigen::ArrayXd& speed, double eta,
                        double iota, int k)
{
    const int nn = f.n_nodes();
    const int n = f.n();
    if (k < 0 || k > n) throw DomainError("predicted_rate_S: k outside [0, n]");

    GradField du = grad(*f.grid, f.u);
    GradField drho = grad(*f.grid, f.rho);

    FrameProjector proj(f);
    Eigen::ArrayXd density(nn);
    for (int i = 0; i < nn; ++i) {
        const KappaVector kap = f.kappa_at(i);
        const double pk = p_k_or_zero(kap, k);
        const double pk1 = p_k_or_zero(kap, k + 1);
        const double u = f.u(i);
        const double F = speed(i);

        // <grad u, grad Phi>_g with D_i Phi = phi * D_i rho.
        double udotPhi = 0.0;
        double frame_u[2] = {0.0, 0.0};
        if (f.grid->dim == 1) {
            const double ut = 0.0, up = du.ph(i);
            const double rt = 0.0, rp = drho.ph(i);
            (void)ut;
            (void)rt;
            udotPhi = f.phi(i) * f.ginv_pp(i) * up * rp;
            proj.project(i, nullptr, 0.0, up, frame_u);
        } else {
            const double ut = du.th(i), up = du.ph(i);
            const double rt = drho.th(i), rp = drho.ph(i);
            udotPhi = f.phi(i) * (f.ginv_tt(i) * ut * rt + f.ginv_tp(i) * (ut * rp + up * rt) +
                                  f.ginv_pp(i) * up * rp);
            const Eigen::Matrix2d frame = principal_frame(f, i);
            proj.project(i, &frame, ut, up, frame_u);
        }

        // p_k^{ij} grad_i u grad_j u in the principal frame.
        double newton_uu = 0.0;
        if (k >= 1) {
            const KappaVector dsig = sigma_k_partials(kap, k);
            const double cn = binomial(n, k);
            for (int a = 0; a < n; ++a)
                newton_uu += (dsig(a) / cn) * frame_u[a] * frame_u[a];
        }

        density(i) = iota * (n - k + 1) * std::pow(u, iota - 1.0) * pk * F +
                     (1.0 - iota) * (n - k) * std::pow(u, iota) * pk1 * F +
                     iota * (iota - 1.0) * std::pow(u, iota - 2.0) * F *
                         (udotPhi * pk - newton_uu);
    }
    const double transport = weighted_sum(density, f.measure_weight);
    return transport - eta * (n - k + iota) * evaluate(QuantityKey::S(iota, k), f);
}

double predicted_rate_T(const GeometryFields& f, const Eigen::ArrayXd& speed, double eta,
                        double iota, int k)
{
    const int nn = f.n_nodes();
    const int n = f.n();
    if (k < 0 || k > n) throw DomainError("predicted_rate_T: k outside [0, n]");

    // Sampled p_k field, differentiated covariantly rather than through the
    // kappa chain rule (robust at eigenvalue crossings).
    Eigen::ArrayXd pk_field(nn);
    for (int i = 0; i < nn; ++i) pk_field(i) = p_k_or_zero(f.kappa_at(i), k);
    GradField dpk = grad(*f.grid, pk_field);
    GradField dF = grad(*f.grid, speed);

    FrameProjector proj(f);
    Eigen::ArrayXd density(nn);
    for (int i = 0; i < nn; ++i) {
        const KappaVector kap = f.kappa_at(i);
        const double pk = pk_field(i);
        const double pk1 = p_k_or_zero(kap, k + 1);
        const double F = speed(i);
        const double H = f.mean_H(i);

        double frame_pk[2] = {0.0, 0.0}, frame_F[2] = {0.0, 0.0};
        double newton_pf = 0.0;
        if (k >= 1) {
            Eigen::Matrix2d frame;
            const Eigen::Matrix2d* fp = nullptr;
            if (f.grid->dim == 2) {
                frame = principal_frame(f, i);
                fp = &frame;
            }
            proj.project(i, fp, f.grid->dim == 2 ? dpk.th(i) : 0.0, dpk.ph(i), frame_pk);
            proj.project(i, fp, f.grid->dim == 2 ? dF.th(i) : 0.0, dF.ph(i), frame_F);
            const KappaVector dsig = sigma_k_partials(kap, k);
            const double cn = binomial(n, k);
            for (int a = 0; a < n; ++a)
                newton_pf += (dsig(a) / cn) * frame_pk[a] * frame_F[a];
        }

        density(i) = iota * (iota - 1.0) * std::pow(pk, iota - 2.0) * newton_pf +
                     (1.0 - iota) * std::pow(pk, iota) * F * H +
                     (n - k) * iota * std::pow(pk, iota - 1.0) * pk1 * F;
    }
    const double transport = weighted_sum(density, f.measure_weight);
    return transport - eta * (n - k * iota) * evaluate(QuantityKey::T(iota, k), f);
}

double predicted_rate_S_top(const GeometryFields& f, double iota, int m, double eta)
{
    const int n = f.n();
    if (m < 0 || m > n - 1) throw DomainError("predicted_rate_S_top: m outside [0, n-1]");
    const int nn = f.n_nodes();
    Eigen::ArrayXd density(nn);
    for (int i = 0; i < nn; ++i) {
        const KappaVector kap = f.kappa_at(i);
        const double u = f.u(i);
        density(i) = std::pow(u, iota - 1.0 - m) * p_k(kap, n - m - 1) -
                     std::pow(u, iota) * p_k(kap, n);
    }
    return iota * eta * weighted_sum(density, f.measure_weight);
}

QuermassRelationReport quermass_relations_check(const GeometryFields& f)
{
    QuermassRelationReport rep;
    const int n = f.n();
    for (int k = 0; k < n; ++k) {
        QuermassRelationReport::Entry e;
        e.k = k;
        e.s1_kp1 = evaluate(QuantityKey::S(1.0, k + 1), f);
        e.s0_k = evaluate(QuantityKey::S(0.0, k), f);
        e.t1_k = evaluate(QuantityKey::T(1.0, k), f);
        const double scale =
            std::max({std::abs(e.s1_kp1), std::abs(e.s0_k), std::abs(e.t1_k), 1e-300});
        e.max_rel_diff = std::max({std::abs(e.s1_kp1 - e.s0_k), std::abs(e.s0_k - e.t1_k),
                                   std::abs(e.s1_kp1 - e.t1_k)}) /
                         scale;
        rep.worst = std::max(rep.worst, e.max_rel_diff);
        rep.entries.push_back(e);
    }
    return rep;
}

}  // namespace starflow
