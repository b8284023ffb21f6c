#include "starflow/inequalities.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace starflow {

BodyClass classify_body(const GeometryFields& f)
{
    const int nn = f.n_nodes();
    const int n = f.n();
    BodyClass cls;

    double kappa_scale = 0.0;
    for (int i = 0; i < nn; ++i)
        for (int a = 0; a < n; ++a) kappa_scale = std::max(kappa_scale, std::abs(f.kappa(i, a)));
    const double margin = 1e-10 * std::max(1.0, kappa_scale);

    cls.convex = true;
    for (int i = 0; i < nn && cls.convex; ++i)
        for (int a = 0; a < n; ++a)
            if (!(f.kappa(i, a) > margin)) {
                cls.convex = false;
                break;
            }

    int kmax = n;
    for (int i = 0; i < nn; ++i) {
        const KappaVector kap = f.kappa_at(i);
        const SigmaVector e = sigma_all(kap);
        int km = 0;
        while (km < kmax && e(km + 1) > margin * std::pow(std::max(1.0, kappa_scale), km)) ++km;
        kmax = std::min(kmax, km);
        if (kmax == 0) break;
    }
    cls.k_convex_max = kmax;
    return cls;
}

const std::vector<double>& default_iota_sweep()
{
    static const std::vector<double> sweep = {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0};
    return sweep;
}

namespace {

std::string fmt(double x)
{
    std::ostringstream os;
    if (x == std::floor(x) && std::abs(x) < 1e6)
        os << static_cast<long long>(x);
    else
        os << x;
    return os.str();
}

struct SuiteBuilder {
    const GeometryFields& f;
    std::vector<InequalityReport>& out;

    // direction: +1 checks lhs >= rhs, -1 checks lhs <= rhs
    void add(const std::string& id, int direction, const std::function<double()>& lhs_fn,
             const std::function<double()>& rhs_fn, bool hypothesis, const std::string& why)
    {
        InequalityReport r;
        r.id = id;
        if (!hypothesis) {
            r.applicable = false;
            r.note = why;
            out.push_back(r);
            return;
        }
        try {
            r.lhs = lhs_fn();
            r.rhs = rhs_fn();
            const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-300});
            r.margin = direction * (r.lhs - r.rhs) / scale;
            r.applicable = true;
        } catch (const DomainError& e) {
            r.applicable = false;
            r.note = e.what();
        }
        out.push_back(r);
    }
};

}  // namespace

std::vector<InequalityReport> inequality_suite(const GeometryFields& f,
                                               const std::vector<double>& iotas)
{
    std::vector<InequalityReport> out;
    if (!f.ambient.is_euclidean()) return out;  // suite is Euclidean-only

    const int n = f.n();
    const BodyClass cls = classify_body(f);
    const int kc = cls.k_convex_max;
    SuiteBuilder B{f, out};

    // Like-discretized area of the unit sphere: the grid weights sum to it
    // exactly by construction.
    const double omega_n = f.grid->weight.sum();

    auto S = [&](double iota, int k) { return evaluate(QuantityKey::S(iota, k), f); };
    auto T = [&](double iota, int k) { return evaluate(QuantityKey::T(iota, k), f); };
    auto P = [&](int k) {  // integral p_k dmu, with p_{-1} = u
        if (k == -1) return weighted_sum(f.u, f.measure_weight);
        return evaluate(QuantityKey::S(0.0, k), f);
    };
    auto UPk = [&](double iota, int k) {  // integral u p_k^iota dmu
        const int nn = f.n_nodes();
        const bool int_iota = iota == std::floor(iota);
        Eigen::ArrayXd d(nn);
        for (int i = 0; i < nn; ++i) {
            const double pk = p_k(f.kappa_at(i), k);
            if (pk <= 0.0 && !int_iota)
                throw DomainError("u p_k^iota: negative p_k at node " + std::to_string(i));
            d(i) = f.u(i) * std::pow(pk, iota);
        }
        return weighted_sum(d, f.measure_weight);
    };

    const double area = surface_area(f);
    const double vol = enclosed_volume(f);

    // ---- quermassintegral chain -------------------------------------------
    // (Q_m(body)/Q_m(ball))^{1/(n+1-m)} <= (Q_{m+1}(body)/Q_{m+1}(ball))^{1/(n-m)}
    for (int m = 0; m <= std::min(kc, n - 1); ++m) {
        B.add("quermass_chain(m=" + std::to_string(m) + ")", -1,
              [&, m] {
                  const double q = evaluate(QuantityKey::quermass(m), f);
                  return std::pow(q / (omega_n * binomial(n, m)), 1.0 / (n + 1 - m));
              },
              [&, m] {
                  const double q = evaluate(QuantityKey::quermass(m + 1), f);
                  return std::pow(q / (omega_n * binomial(n, m + 1)), 1.0 / (n - m));
              },
              m <= kc, "requires m-convexity");
    }
    for (int m = std::min(kc, n - 1) + 1; m <= n - 1; ++m)
        B.add("quermass_chain(m=" + std::to_string(m) + ")", -1, [] { return 0.0; },
              [] { return 0.0; }, false, "body is only " + std::to_string(kc) + "-convex");

    // ---- top-order bounds (convex body) ------------------------------------
    for (double iota : iotas) {
        if (iota >= 1.0 || iota < 0.0) {
            if (iota != 0.0)
                B.add("s_n_lower(iota=" + fmt(iota) + ")", +1,
                      [&, iota] { return std::pow(S(iota, n), 1.0 / iota); },
                      [&, iota] { return std::pow(omega_n, 1.0 / iota - 1.0) * P(n - 1); },
                      cls.convex, "requires convexity");
        }
        if (iota > 0.0 && iota <= 1.0) {
            B.add("s_n_upper(iota=" + fmt(iota) + ")", -1,
                  [&, iota] { return std::pow(S(iota, n), 1.0 / iota); },
                  [&, iota] { return std::pow(omega_n, 1.0 / iota - 1.0) * P(n - 1); },
                  cls.convex, "requires convexity");
        }
        // chained lower bound against integral p_k dmu
        if (iota >= 1.0 || iota < 0.0) {
            for (int k = 0; k <= n - 1; ++k) {
                B.add("s_n_chain(iota=" + fmt(iota) + ",k=" + std::to_string(k) + ")", +1,
                      [&, iota] { return std::pow(omega_n, 1.0 / iota - 1.0) * P(n - 1); },
                      [&, iota, k] {
                          return std::pow(omega_n, 1.0 / iota - 1.0 / (n - k)) *
                                 std::pow(P(k), 1.0 / (n - k));
                      },
                      cls.convex, "requires convexity");
            }
        }
    }
    // two-exponent comparison on the top-order weighted integral
    for (double r : iotas) {
        if (!(r >= 1.0 || r < 0.0) || r == 0.0) continue;
        for (double s : iotas) {
            if (!(s > 0.0 && s <= 1.0)) continue;
            B.add("s_n_exponents(r=" + fmt(r) + ",s=" + fmt(s) + ")", +1,
                  [&, r] { return std::pow(S(r, n), 1.0 / r); },
                  [&, r, s] {
                      return std::pow(omega_n, (s - r) / (r * s)) * std::pow(S(s, n), 1.0 / s);
                  },
                  cls.convex, "requires convexity");
        }
    }

    // ---- k-convex families --------------------------------------------------
    for (int k = 1; k <= kc; ++k) {
        // integral p_l <= omega^{(l-k)/(n-k)} (integral p_k)^{(n-l)/(n-k)}
        if (k < n) {
            for (int l = 1; l <= k; ++l) {
                B.add("p_chain(l=" + std::to_string(l) + ",k=" + std::to_string(k) + ")", -1,
                      [&, l] { return P(l); },
                      [&, l, k] {
                          return std::pow(omega_n, double(l - k) / (n - k)) *
                                 std::pow(P(k), double(n - l) / (n - k));
                      },
                      true, "");
            }
        }
        for (double iota : iotas) {
            if (iota <= 0.0) {
                B.add("s_k_lower(iota=" + fmt(iota) + ",k=" + std::to_string(k) + ")", +1,
                      [&, iota, k] { return S(iota, k); },
                      [&, iota, k] {
                          return std::pow(omega_n, (1.0 - iota) / (n - k + 1)) *
                                 std::pow(P(k - 1), (n + iota - k) / (n - k + 1));
                      },
                      true, "");
            }
            if (iota >= 1.0) {
                B.add("t_k_area(iota=" + fmt(iota) + ",k=" + std::to_string(k) + ")", +1,
                      [&, iota, k] { return T(iota, k); },
                      [&, iota, k] {
                          return std::pow(area, (n - k * iota) / n) *
                                 std::pow(omega_n, k * iota / n);
                      },
                      true, "");
            }
        }
    }
    if (cls.convex) {
        for (double iota : iotas) {
            if (iota >= 0.0 && iota < 1.0 && n - n * iota != 0.0) {
                B.add("t_n_upper(iota=" + fmt(iota) + ")", -1,
                      [&, iota] {
                          return std::pow(T(iota, n), 1.0 / (n - n * iota));
                      },
                      [&, iota] {
                          return std::pow(omega_n, (1.0 - n + n * iota) / (n - n * iota)) *
                                 P(n - 1);
                      },
                      true, "");
            }
        }
    }

    // ---- Hoelder consequences (0 <= k <= kc, p_{-1} = u) --------------------
    for (int k = 0; k <= kc; ++k) {
        for (double iota : iotas) {
            const bool outer = (iota >= 1.0 || iota <= 0.0);
            const bool inner = (iota >= 0.0 && iota <= 1.0);
            if (outer) {
                B.add("s_interp_lower(iota=" + fmt(iota) + ",k=" + std::to_string(k) + ")", +1,
                      [&, iota, k] { return S(iota, k); },
                      [&, iota, k] {
                          return std::pow(P(k - 1), iota) * std::pow(P(k), 1.0 - iota);
                      },
                      true, "");
                B.add("t_interp_lower(iota=" + fmt(iota) + ",k=" + std::to_string(k) + ")", +1,
                      [&, iota, k] { return T(iota, k); },
                      [&, iota, k] { return std::pow(P(k), iota) * std::pow(area, 1.0 - iota); },
                      true, "");
            }
            if (inner) {
                B.add("s_interp_upper(iota=" + fmt(iota) + ",k=" + std::to_string(k) + ")", -1,
                      [&, iota, k] { return S(iota, k); },
                      [&, iota, k] {
                          return std::pow(P(k - 1), iota) * std::pow(P(k), 1.0 - iota);
                      },
                      true, "");
                B.add("t_interp_upper(iota=" + fmt(iota) + ",k=" + std::to_string(k) + ")", -1,
                      [&, iota, k] { return T(iota, k); },
                      [&, iota, k] { return std::pow(P(k), iota) * std::pow(area, 1.0 - iota); },
                      true, "");
            }
            if (iota >= 1.0) {
                B.add("u_pk_lower(iota=" + fmt(iota) + ",k=" + std::to_string(k) + ")", +1,
                      [&, iota, k] { return UPk(iota, k); },
                      [&, iota, k] {
                          return std::pow(P(k - 1), iota) * std::pow((n + 1) * vol, 1.0 - iota);
                      },
                      true, "");
            }
            if ((iota >= 0.0 && iota <= 1.0) || iota <= 0.0) {
                B.add("u_pk_upper(iota=" + fmt(iota) + ",k=" + std::to_string(k) + ")", -1,
                      [&, iota, k] { return UPk(iota, k); },
                      [&, iota, k] {
                          return std::pow(P(k - 1), iota) * std::pow((n + 1) * vol, 1.0 - iota);
                      },
                      true, "");
            }
        }
    }

    return out;
}

void write_inequality_csv(std::ostream& os, const std::vector<InequalityReport>& reports)
{
    os << "id,lhs,rhs,margin,applicable,note\n";
    os << std::setprecision(17);
    for (const auto& r : reports) {
        os << r.id << "," << r.lhs << "," << r.rhs << "," << r.margin << ","
           << (r.applicable ? 1 : 0) << "," << r.note << "\n";
    }
}

void write_inequality_summary(std::ostream& os, const std::vector<InequalityReport>& reports)
{
    int applicable = 0, satisfied = 0;
    double worst = 0.0;
    std::string worst_id = "-";
    for (const auto& r : reports) {
        if (!r.applicable) continue;
        ++applicable;
        if (r.margin >= 0.0) ++satisfied;
        if (r.margin < worst) {
            worst = r.margin;
            worst_id = r.id;
        }
    }
    os << "inequalities: " << satisfied << "/" << applicable
       << " applicable reports satisfied; worst margin " << std::setprecision(3) << worst << " ("
       << worst_id << ")\n";
    for (const auto& r : reports) {
        os << "  " << (r.applicable ? (r.margin >= 0 ? "ok   " : "VIOL ") : "skip ") << r.id;
        if (r.applicable)
            os << "  lhs=" << std::setprecision(10) << r.lhs << " rhs=" << r.rhs
               << " margin=" << std::setprecision(3) << r.margin;
        else if (!r.note.empty())
            os << "  (" << r.note << ")";
        os << "\n";
    }
}

}  // namespace starflow
