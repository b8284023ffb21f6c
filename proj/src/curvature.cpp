#include "starflow/curvature.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace starflow {

CurvatureFunctionSpec CurvatureFunctionSpec::ratio(int l, int k)
{
    if (!(0 <= k && k < l))
        throw DomainError("ratio(l,k): need 0 <= k < l, got l=" + std::to_string(l) +
                          " k=" + std::to_string(k));
    CurvatureFunctionSpec s;
    s.kind = Kind::Ratio;
    s.l = l;
    s.k = k;
    return s;
}

CurvatureFunctionSpec CurvatureFunctionSpec::powermean(double p)
{
    if (p == 0.0) throw DomainError("powermean(p): exponent must be nonzero");
    CurvatureFunctionSpec s;
    s.kind = Kind::PowerMean;
    s.exponent = p;
    return s;
}

CurvatureFunctionSpec CurvatureFunctionSpec::product(
    std::vector<std::pair<CurvatureFunctionSpec, double>> f)
{
    if (f.empty()) throw DomainError("product: needs at least one factor");
    double wsum = 0.0;
    for (const auto& [spec, w] : f) {
        (void)spec;
        if (w < 0.0) throw DomainError("product: weights must be nonnegative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw DomainError("product: weights must sum to 1, got " + std::to_string(wsum));
    CurvatureFunctionSpec s;
    s.kind = Kind::Product;
    s.factors = std::move(f);
    return s;
}

static bool is_integer(double x) { return x == std::floor(x); }

ConeLabel CurvatureFunctionSpec::cone(int n) const
{
    switch (kind) {
        case Kind::Ratio:
            if (l > n)
                throw DomainError("ratio(" + std::to_string(l) + "," + std::to_string(k) +
                                  "): l exceeds tuple length " + std::to_string(n));
            return ConeLabel::garding(l);
        case Kind::PowerMean:
            // p = 1 is the mean (first Garding cone); every other exponent
            // needs the positive octant for monotone positive gradients.
            if (exponent == 1.0) return ConeLabel::garding(1);
            return ConeLabel::positive_cone();
        case Kind::Product: {
            bool positive = false;
            int kmax = 1;
            for (const auto& [spec, w] : factors) {
                (void)w;
                const ConeLabel c = spec.cone(n);
                if (c.positive)
                    positive = true;
                else
                    kmax = std::max(kmax, c.k);
            }
            return positive ? ConeLabel::positive_cone() : ConeLabel::garding(kmax);
        }
    }
    throw DomainError("unreachable curvature kind");
}

bool CurvatureFunctionSpec::is_concave() const
{
    switch (kind) {
        case Kind::Ratio: return true;
        case Kind::PowerMean: return exponent <= 1.0;
        case Kind::Product:
            for (const auto& [spec, w] : factors) {
                (void)w;
                if (!spec.is_concave()) return false;
            }
            return true;
    }
    return false;
}

static CurvatureEval eval_impl(const CurvatureFunctionSpec& spec, const KappaVector& kappa)
{
    const int n = static_cast<int>(kappa.size());
    CurvatureEval out;
    out.gradient.resize(n);

    switch (spec.kind) {
        case CurvatureFunctionSpec::Kind::Ratio: {
            const SigmaVector e = sigma_all(kappa);
            const double sl = e(spec.l);
            const double sk = e(spec.k);
            const double inv_deg = 1.0 / static_cast<double>(spec.l - spec.k);
            out.value = std::pow(sl / sk, inv_deg);
            const KappaVector dl = sigma_k_partials(kappa, spec.l);
            if (spec.k == 0) {
                out.gradient = out.value * inv_deg * (dl / sl);
            } else {
                const KappaVector dk = sigma_k_partials(kappa, spec.k);
                out.gradient = out.value * inv_deg * (dl / sl - dk / sk);
            }
            break;
        }
        case CurvatureFunctionSpec::Kind::PowerMean: {
            const double p = spec.exponent;
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += std::pow(kappa(i), p);
            if (!(s > 0.0))
                throw AdmissibilityError("powermean(" + std::to_string(p) +
                                         "): sum of kappa_i^p is not positive");
            out.value = std::pow(s, 1.0 / p);
            for (int i = 0; i < n; ++i)
                out.gradient(i) = std::pow(s, 1.0 / p - 1.0) * std::pow(kappa(i), p - 1.0);
            break;
        }
        case CurvatureFunctionSpec::Kind::Product: {
            out.value = 1.0;
            out.gradient.setZero();
            KappaVector logderiv = KappaVector::Zero(n);
            for (const auto& [fspec, w] : spec.factors) {
                const CurvatureEval fe = eval_impl(fspec, kappa);
                out.value *= std::pow(fe.value, w);
                logderiv += (w / fe.value) * fe.gradient;
            }
            out.gradient = out.value * logderiv;
            break;
        }
    }
    return out;
}

CurvatureEval eval_curvature_function(const CurvatureFunctionSpec& spec, const KappaVector& kappa)
{
    require_in_cone(kappa, spec.cone(static_cast<int>(kappa.size())));
    return eval_impl(spec, kappa);
}

double eval_curvature_value(const CurvatureFunctionSpec& spec, const KappaVector& kappa)
{
    require_in_cone(kappa, spec.cone(static_cast<int>(kappa.size())));
    const int n = static_cast<int>(kappa.size());
    switch (spec.kind) {
        case CurvatureFunctionSpec::Kind::Ratio: {
            const SigmaVector e = sigma_all(kappa);
            return std::pow(e(spec.l) / e(spec.k), 1.0 / (spec.l - spec.k));
        }
        case CurvatureFunctionSpec::Kind::PowerMean: {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += std::pow(kappa(i), spec.exponent);
            if (!(s > 0.0))
                throw AdmissibilityError("powermean: sum of kappa_i^p is not positive");
            return std::pow(s, 1.0 / spec.exponent);
        }
        case CurvatureFunctionSpec::Kind::Product: {
            double v = 1.0;
            for (const auto& [fspec, w] : spec.factors)
                v *= std::pow(eval_curvature_value(fspec, kappa), w);
            return v;
        }
    }
    throw DomainError("unreachable curvature kind");
}

double eta_of(const CurvatureFunctionSpec& spec, double beta, int n)
{
    if (!(beta > 0.0)) throw DomainError("eta_of: beta must be positive");
    const KappaVector ones = KappaVector::Ones(n);
    return std::pow(eval_curvature_value(spec, ones), -beta);
}

// ---------------------------------------------------------------------------
// canonical text form

std::string CurvatureFunctionSpec::to_string() const
{
    std::ostringstream os;
    switch (kind) {
        case Kind::Ratio: os << "ratio(" << l << "," << k << ")"; break;
        case Kind::PowerMean: {
            os << "powermean(";
            if (is_integer(exponent))
                os << static_cast<long long>(exponent);
            else
                os << exponent;
            os << ")";
            break;
        }
        case Kind::Product: {
            os << "product([";
            bool first = true;
            for (const auto& [spec, w] : factors) {
                if (!first) os << ",";
                first = false;
                os << "(" << spec.to_string() << "," << w << ")";
            }
            os << "])";
            break;
        }
    }
    return os.str();
}

namespace {

struct SpecParser {
    std::string_view s;
    size_t pos = 0;

    void skip_ws()
    {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    [[noreturn]] void fail(const std::string& msg)
    {
        throw ConfigError("curvature spec '" + std::string(s) + "': " + msg + " at position " +
                          std::to_string(pos));
    }
    void expect(char c)
    {
        skip_ws();
        if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }
    bool peek(char c)
    {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    std::string ident()
    {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        if (start == pos) fail("expected identifier");
        return std::string(s.substr(start, pos - start));
    }
    double number()
    {
        skip_ws();
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
        while (pos < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
                s[pos] == 'e' || s[pos] == 'E' ||
                ((s[pos] == '+' || s[pos] == '-') && (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
            ++pos;
        if (start == pos) fail("expected number");
        return std::stod(std::string(s.substr(start, pos - start)));
    }

    CurvatureFunctionSpec parse_spec()
    {
        const std::string name = ident();
        if (name == "ratio") {
            expect('(');
            const double l = number();
            expect(',');
            const double k = number();
            expect(')');
            if (!is_integer(l) || !is_integer(k)) fail("ratio indices must be integers");
            return CurvatureFunctionSpec::ratio(static_cast<int>(l), static_cast<int>(k));
        }
        if (name == "powermean") {
            expect('(');
            const double p = number();
            expect(')');
            return CurvatureFunctionSpec::powermean(p);
        }
        if (name == "product") {
            expect('(');
            expect('[');
            std::vector<std::pair<CurvatureFunctionSpec, double>> factors;
            while (true) {
                expect('(');
                CurvatureFunctionSpec inner = parse_spec();
                expect(',');
                const double w = number();
                expect(')');
                factors.emplace_back(std::move(inner), w);
                if (peek(',')) {
                    expect(',');
                    continue;
                }
                break;
            }
            expect(']');
            expect(')');
            return CurvatureFunctionSpec::product(std::move(factors));
        }
        fail("unknown curvature function '" + name + "'");
    }
};

}  // namespace

CurvatureFunctionSpec CurvatureFunctionSpec::parse(std::string_view text)
{
    SpecParser p{text};
    CurvatureFunctionSpec spec = p.parse_spec();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing characters");
    return spec;
}

}  // namespace starflow
